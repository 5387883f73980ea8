use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use coxcert::accept::run_acceptance;
use coxcert::build::{self, CliError, CmdOutput};
use serde_json::{json, Value};

#[derive(Parser)]
#[command(
    name = "coxcert",
    version,
    about = "Exact chain-level certificates for coset complexes of finite Coxeter groups, \
             Iwahori-Hecke algebras, and small matrix groups"
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Certify a contracting homotopy of the exact coset subcomplex
    Sigma {
        /// Coxeter type: A1..A4, B2, B3, D4, I2(3)..I2(12)
        group: String,
        /// Fixed generator subset, comma-separated 1-based indices
        #[arg(long)]
        i0: Option<String>,
        /// Sign order: a permutation of the generators, e.g. 2,1,3
        #[arg(long)]
        order: Option<String>,
        /// Write the certificate to this path
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        json: bool,
    },
    /// Independently re-check a serialized certificate
    Verify {
        cert: PathBuf,
        #[arg(long)]
        json: bool,
    },
    /// Coset complex over all standard subsets: d² = 0 and integral homology
    CoxeterComplex {
        group: String,
        #[arg(long)]
        order: Option<String>,
        #[arg(long)]
        json: bool,
    },
    /// Hecke algebra checks: relations, word products, inverses, bimodule complex
    HeckeX {
        group: String,
        #[arg(long)]
        order: Option<String>,
        /// Seed for the associativity triples
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        json: bool,
    },
    /// Symbolic ξ identities and specialization ranks of the degree-0 boundary
    HeckeRemark18 {
        group: String,
        /// Specialization points: `2;3;5` or `2,3;3,5` for two parameters
        #[arg(long)]
        q: Option<String>,
        #[arg(long)]
        json: bool,
    },
    /// Certify the split equivalence onto the parabolic core of the bimodule complex
    HeckeThm17 {
        group: String,
        #[arg(long)]
        i0: Option<String>,
        #[arg(long)]
        order: Option<String>,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        json: bool,
    },
    /// Homology of X ⊗ X^∨ at specializations: rank |W| in degree 0
    HeckeDuality {
        group: String,
        #[arg(long)]
        q: Option<String>,
        #[arg(long)]
        json: bool,
    },
    /// Steinberg coset complexes of a matrix group: d² = 0 and homology Z^|U|
    BnSt {
        /// Group spec: GL2(2), SL2(3), GL3(2)
        group: String,
        #[arg(long)]
        order: Option<String>,
        #[arg(long)]
        json: bool,
    },
    /// Certify the integral split equivalence onto the fixed-subset core
    BnThm20 {
        group: String,
        #[arg(long)]
        i0: Option<String>,
        #[arg(long)]
        order: Option<String>,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        json: bool,
    },
    /// Certify the rational split equivalence onto the Levi-induced core
    BnThm9 {
        group: String,
        #[arg(long)]
        i0: Option<String>,
        #[arg(long)]
        order: Option<String>,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        json: bool,
    },
    /// Homology of X(G) ⊗ X(G)^∨ over Q: rank |G| in degree 0
    BnDuality {
        group: String,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        json: bool,
    },
    /// Per-degree homology ranks and torsion of a coset complex
    Homology {
        /// A Coxeter type (A3, I2(5), …) or a group spec (GL2(2), …)
        target: String,
        #[arg(long)]
        order: Option<String>,
        #[arg(long)]
        json: bool,
    },
    /// Run the acceptance matrix and print one line per criterion
    Accept {
        /// Include the slow tier (D4 homotopies, rank-2 bimodule equivalences)
        #[arg(long)]
        slow: bool,
        /// Fast tier only (the default)
        #[arg(long, conflicts_with = "slow")]
        fast: bool,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        json: bool,
    },
}

fn main() -> ExitCode {
    ExitCode::from(run(Cli::parse()))
}

fn run(cli: Cli) -> u8 {
    let (result, json_flag, out_path): (Result<CmdOutput, CliError>, bool, Option<PathBuf>) =
        match cli.cmd {
            Cmd::Sigma { group, i0, order, out, json } => {
                (build::cmd_sigma(&group, i0.as_deref(), order.as_deref()), json, out)
            }
            Cmd::Verify { cert, json } => (load_and_verify(&cert), json, None),
            Cmd::CoxeterComplex { group, order, json } => {
                (build::cmd_coxeter_complex(&group, order.as_deref()), json, None)
            }
            Cmd::HeckeX { group, order, seed, json } => {
                (build::cmd_hecke_x(&group, order.as_deref(), seed), json, None)
            }
            Cmd::HeckeRemark18 { group, q, json } => {
                (build::cmd_hecke_remark18(&group, q.as_deref()), json, None)
            }
            Cmd::HeckeThm17 { group, i0, order, out, json } => {
                (build::cmd_hecke_thm17(&group, i0.as_deref(), order.as_deref()), json, out)
            }
            Cmd::HeckeDuality { group, q, json } => {
                (build::cmd_hecke_duality(&group, q.as_deref()), json, None)
            }
            Cmd::BnSt { group, order, json } => {
                (build::cmd_bn_st(&group, order.as_deref()), json, None)
            }
            Cmd::BnThm20 { group, i0, order, out, json } => {
                (build::cmd_bn_thm20(&group, i0.as_deref(), order.as_deref()), json, out)
            }
            Cmd::BnThm9 { group, i0, order, out, json } => {
                (build::cmd_bn_thm9(&group, i0.as_deref(), order.as_deref()), json, out)
            }
            Cmd::BnDuality { group, seed, json } => {
                (build::cmd_bn_duality(&group, seed), json, None)
            }
            Cmd::Homology { target, order, json } => {
                (build::cmd_homology(&target, order.as_deref()), json, None)
            }
            Cmd::Accept { slow, fast: _, seed, json } => return run_accept(slow, seed, json),
        };

    match result {
        Ok(out) => emit(out, json_flag, out_path.as_deref()),
        Err(CliError::Usage(m)) => {
            eprintln!("error: {m}");
            eprintln!("run `coxcert --help` for usage");
            2
        }
        Err(CliError::Check(m)) => {
            eprintln!("FAIL: {m}");
            1
        }
    }
}

fn load_and_verify(path: &Path) -> Result<CmdOutput, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Usage(format!("cannot read {}: {e}", path.display())))?;
    let doc: Value = serde_json::from_str(&text)
        .map_err(|e| CliError::Usage(format!("{} is not valid JSON: {e}", path.display())))?;
    build::cmd_verify_doc(&doc)
}

fn emit(mut out: CmdOutput, json: bool, path: Option<&Path>) -> u8 {
    if let (Some(cert), Some(p)) = (&out.cert, path) {
        let text = format!("{}\n", serde_json::to_string_pretty(cert).expect("serializable"));
        if let Err(e) = std::fs::write(p, text) {
            eprintln!("error: cannot write {}: {e}", p.display());
            return 2;
        }
        out.lines.push(format!("certificate written to {}", p.display()));
    }
    if json {
        let mut report = out.json;
        if let (Value::Object(obj), Some(cert)) = (&mut report, out.cert.take()) {
            obj.insert(String::from("certificate"), cert);
        }
        println!("{}", serde_json::to_string_pretty(&report).expect("serializable"));
    } else {
        for line in &out.lines {
            println!("{line}");
        }
    }
    0
}

fn run_accept(slow: bool, seed: u64, json: bool) -> u8 {
    let results = run_acceptance(slow, seed);
    let all = results.iter().all(|r| r.pass);
    if json {
        let criteria: Vec<Value> = results
            .iter()
            .map(|r| {
                json!({"index": r.index, "name": r.name, "pass": r.pass, "detail": r.detail})
            })
            .collect();
        let report = json!({
            "tier": if slow { "slow" } else { "fast" },
            "seed": seed,
            "criteria": criteria,
            "ok": all,
        });
        println!("{}", serde_json::to_string_pretty(&report).expect("serializable"));
    } else {
        for r in &results {
            println!(
                "criterion {:02}  {:<38} {}  {}",
                r.index,
                r.name,
                if r.pass { "PASS" } else { "FAIL" },
                r.detail
            );
        }
        println!("{}", if all { "all criteria passed" } else { "some criteria FAILED" });
    }
    u8::from(!all)
}
