//! The acceptance matrix: thirteen numbered criteria, each a set of exact
//! checks over a fixed instance list. Criteria run on a worker pool; every
//! instance is pure and results are merged in criterion order.

use std::panic::{catch_unwind, AssertUnwindSafe};

use coxcert_core::bnpair::bimod::group_duality_check;
use coxcert_core::bnpair::thm20::theorem20_certificate;
use coxcert_core::bnpair::thm9::{prop11_iso, theorem9_certificate};
use coxcert_core::bnpair::{prop10_check, st_complex, StVariant};
use coxcert_core::chain::homology::{euler_characteristic, homology_int, homology_ranks_rat};
use coxcert_core::chain::{verify_contraction, verify_equivalence};
use coxcert_core::hecke::{duality_homology, parabolic_model, xi_suite};
use coxcert_core::parabolic::coxeter_complex;
use coxcert_core::ring::Rat;
use coxcert_core::{build_bn, CosetScheme, CoxType, CoxeterGroup, FinGroup, HeckeAlg};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::Value;

use crate::build::{
    self, cmd_bn_thm20, cmd_bn_thm9, cmd_hecke_thm17, cmd_sigma, parse_group_spec, CliError,
};
use crate::fuzz::perturb_random;
use crate::verify::verify_document;

pub struct CriterionResult {
    pub index: usize,
    pub name: &'static str,
    pub pass: bool,
    pub detail: String,
}

const FAST_GROUPS: &[&str] =
    &["A1", "A2", "A3", "A4", "B2", "B3", "I2(3)", "I2(4)", "I2(5)", "I2(6)", "I2(7)", "I2(8)"];

fn sigma_groups(slow: bool) -> Vec<&'static str> {
    let mut v = FAST_GROUPS.to_vec();
    if slow {
        v.push("D4");
    }
    v
}

fn cox(name: &str) -> CoxeterGroup {
    CoxeterGroup::build(CoxType::parse(name).expect("fixed instance list"))
}

fn fin(spec: &str) -> (FinGroup, coxcert_core::BnData) {
    let (kind, n, q, _) = parse_group_spec(spec).expect("fixed instance list");
    let g = FinGroup::build(kind, n, q).expect("fixed instance list");
    let bn = build_bn(&g).expect("fixed instance list");
    (g, bn)
}

fn err_string(e: CliError) -> String {
    match e {
        CliError::Usage(m) | CliError::Check(m) => m,
    }
}

/// Criterion 1: contracting homotopies with triangular, refinement-ordered
/// coefficients, for every group in the tier and every proper fixed subset.
fn c1_sigma(slow: bool) -> Result<String, String> {
    let groups = sigma_groups(slow);
    let mut instances = 0usize;
    let mut coeffs = 0usize;
    for gname in &groups {
        let w = cox(gname);
        for i0 in 0..w.full_mask() {
            let scheme = CosetScheme::new(&w, i0, None).expect("proper subset");
            let sd = scheme.build_sigma();
            verify_contraction(&sd.ca, &sd.sigma)
                .map_err(|e| format!("{gname} i0={i0:b}: {e}"))?;
            for (a, b, m) in &sd.mcoeffs {
                if *m == 0 {
                    continue;
                }
                if scheme.i0_of(a) & !scheme.i0_of(b) != 0 {
                    return Err(format!(
                        "{gname} i0={i0:b}: fixed set shrinks from {} to {}",
                        scheme.coset_label(a),
                        scheme.coset_label(b)
                    ));
                }
                if !w.right_divides(scheme.theta_coset(*b).rep, scheme.theta_coset(*a).rep) {
                    return Err(format!(
                        "{gname} i0={i0:b}: refinement fails from {} to {}",
                        scheme.coset_label(a),
                        scheme.coset_label(b)
                    ));
                }
                coeffs += 1;
            }
            instances += 1;
        }
    }
    Ok(format!(
        "{instances} (group, i0) instances over {} groups; σd + dσ = Id and both support laws on {coeffs} coefficients",
        groups.len()
    ))
}

/// Criterion 2: the near-homotopy squares to zero and its pairing preserves
/// representative length and the fixed set, on the same instance matrix.
fn c2_tau(slow: bool) -> Result<String, String> {
    let mut pairs = 0usize;
    let mut instances = 0usize;
    for gname in sigma_groups(slow) {
        let w = cox(gname);
        for i0 in 0..w.full_mask() {
            let scheme = CosetScheme::new(&w, i0, None).expect("proper subset");
            let sd = scheme.build_sigma();
            scheme
                .check_tau_properties(&sd)
                .map_err(|e| format!("{gname} i0={i0:b}: {e}"))?;
            for (k, mat) in sd.tau.mats.iter().enumerate() {
                for (r, c, _v) in mat.entries() {
                    let b = &sd.b_basis[k][c as usize];
                    let bp = &sd.b_basis[k - 1][r as usize];
                    if w.len(b.rep) != w.len(bp.rep) {
                        return Err(format!(
                            "{gname} i0={i0:b}: pairing changes length from {} to {}",
                            scheme.coset_label(b),
                            scheme.coset_label(bp)
                        ));
                    }
                    if scheme.i0_of(b) != scheme.i0_of(bp) {
                        return Err(format!(
                            "{gname} i0={i0:b}: pairing changes fixed set from {} to {}",
                            scheme.coset_label(b),
                            scheme.coset_label(bp)
                        ));
                    }
                    pairs += 1;
                }
            }
            instances += 1;
        }
    }
    Ok(format!("τ² = 0 on {instances} instances; {pairs} paired cosets preserve length and fixed set"))
}

fn c3_coxeter_complex() -> Result<String, String> {
    for gname in FAST_GROUPS {
        let w = cox(gname);
        let order: Vec<usize> = (0..w.n_gens()).collect();
        let (cx, _) = coxeter_complex(&w, &order);
        cx.verify_d2().map_err(|e| format!("{gname}: {e}"))?;
        let h = homology_int(&cx);
        for (k, hk) in h.iter().enumerate() {
            let want = usize::from(k == 0);
            if hk.free_rank != want || !hk.torsion.is_empty() {
                return Err(format!(
                    "{gname}: H^{k} has free rank {} and torsion {:?}",
                    hk.free_rank, hk.torsion
                ));
            }
        }
    }
    Ok(format!("d² = 0 and integral homology Z concentrated in degree 0 for {} groups", FAST_GROUPS.len()))
}

fn c4_hecke_mult(seed: u64) -> Result<String, String> {
    for gname in ["A3", "B2"] {
        let w = cox(gname);
        let alg = HeckeAlg::new(&w);
        alg.check_relations().map_err(|e| format!("{gname}: {e}"))?;
        alg.check_word_products().map_err(|e| format!("{gname}: {e}"))?;
        alg.check_inverses().map_err(|e| format!("{gname}: {e}"))?;
        let triples = build::seeded_triples(w.order(), 200, seed);
        alg.check_associative(&triples).map_err(|e| format!("{gname}: {e}"))?;
    }
    Ok(String::from(
        "reduced-word products, inverses, and 200 seeded associativity triples agree for A3 and B2",
    ))
}

fn c5_xi_suite() -> Result<String, String> {
    let mut ranks = Vec::new();
    for gname in ["A1", "A2", "A3", "B2"] {
        let w = cox(gname);
        let order: Vec<usize> = (0..w.n_gens()).collect();
        let alg = HeckeAlg::new(&w);
        let points = build::default_points(alg.n_params());
        let rep = xi_suite(&alg, &order, &points).map_err(|e| format!("{gname}: {e}"))?;
        if rep.rank != rep.dim0 - w.order() {
            return Err(format!(
                "{gname}: rank {} but dim0 {} − |W| {} expected",
                rep.rank,
                rep.dim0,
                w.order()
            ));
        }
        ranks.push(format!("{gname} rank {}/{}", rep.rank, rep.dim0));
    }
    Ok(format!("symbolic ξ identities and specialization ranks hold: {}", ranks.join(", ")))
}

fn c6_parabolic_equivalences() -> Result<String, String> {
    let mut count = 0usize;
    for gname in ["A2", "A3", "B2"] {
        let w = cox(gname);
        let alg = HeckeAlg::new(&w);
        for i0 in 0..w.full_mask() {
            let scheme = CosetScheme::new(&w, i0, None).expect("proper subset");
            let sd = scheme.build_sigma();
            let pm = parabolic_model(&alg, &scheme, &sd)
                .map_err(|e| format!("{gname} i0={i0:b}: {e}"))?;
            verify_equivalence(&pm.x, &pm.yp, &pm.cert)
                .map_err(|e| format!("{gname} i0={i0:b}: {e}"))?;
            count += 1;
        }
    }
    Ok(format!("{count} split equivalences verified over the Laurent ring, with equivariance"))
}

fn c7_hecke_duality() -> Result<String, String> {
    let rat = |n: i64| Rat::from_integer(n.into());
    for gname in ["A1", "A2"] {
        let w = cox(gname);
        let order: Vec<usize> = (0..w.n_gens()).collect();
        let alg = HeckeAlg::new(&w);
        for q in [rat(2), rat(5)] {
            let rep = duality_homology(&alg, &order, &[q.clone()])
                .map_err(|e| format!("{gname} q={q}: {e}"))?;
            for (i, &r) in rep.ranks.iter().enumerate() {
                let deg = rep.min_degree + i as i64;
                let want = if deg == 0 { w.order() } else { 0 };
                if r != want {
                    return Err(format!("{gname} q={q}: H^{deg} rank {r}, expected {want}"));
                }
            }
        }
    }
    Ok(String::from("X ⊗ X^∨ homology is |W| in degree 0 and zero elsewhere for A1, A2 at q = 2, 5"))
}

fn c8_steinberg() -> Result<String, String> {
    let mut details = Vec::new();
    for spec in ["GL2(2)", "SL2(3)", "GL3(2)"] {
        let (g, bn) = fin(spec);
        let order: Vec<usize> = (0..bn.w.n_gens()).collect();
        let u = bn.u.len();
        for variant in [StVariant::Plus, StVariant::Minus] {
            let (cx, _) = st_complex(&g, &bn, variant, &order);
            cx.verify_d2().map_err(|e| format!("{spec}: {e}"))?;
            let h = homology_int(&cx);
            for (k, hk) in h.iter().enumerate() {
                let want = usize::from(k == 0) * u;
                if hk.free_rank != want || !hk.torsion.is_empty() {
                    return Err(format!(
                        "{spec}: H^{k} has free rank {} and torsion {:?}, expected Z^{want}",
                        hk.free_rank, hk.torsion
                    ));
                }
            }
            if euler_characteristic(&cx.dims) != u as i64 {
                return Err(format!("{spec}: Euler characteristic differs from |U| = {u}"));
            }
        }
        details.push(format!("{spec} |U|={u}"));
    }
    Ok(format!("both coset models: d² = 0, homology Z^|U| in degree 0, Euler cross-check ({})", details.join(", ")))
}

fn c9_thm20() -> Result<String, String> {
    let mut certs = 0usize;
    let mut inclusions = 0usize;
    for spec in ["GL2(2)", "SL2(3)", "GL3(2)"] {
        let (g, bn) = fin(spec);
        for i0 in 0..bn.w.full_mask() {
            let scheme = CosetScheme::new(&bn.w, i0, None).expect("proper subset");
            let sd = scheme.build_sigma();
            let td = theorem20_certificate(&g, &bn, &scheme, &sd)
                .map_err(|e| format!("{spec} i0={i0:b}: {e}"))?;
            verify_equivalence(&td.y, &td.yp, &td.cert)
                .map_err(|e| format!("{spec} i0={i0:b}: {e}"))?;
            certs += 1;
            inclusions += td.inclusions_checked;
        }
    }
    Ok(format!("{certs} integral split equivalences verified; {inclusions} subgroup inclusions checked"))
}

fn c10_idempotents() -> Result<String, String> {
    let (g, bn) = fin("GL3(2)");
    prop10_check(&g, &bn).map_err(|e| e.to_string())?;
    Ok(String::from(
        "idempotent product identities hold for all subset pairs and distinguished double cosets of GL3(2)",
    ))
}

fn c11_thm9(slow: bool) -> Result<String, String> {
    let mut instances: Vec<(&str, u32)> = vec![("GL2(2)", 0), ("SL2(3)", 0)];
    if slow {
        instances.push(("GL3(2)", 0b01));
        instances.push(("GL3(2)", 0b10));
    }
    let mut blocks = 0usize;
    let mut certs = 0usize;
    for (spec, i0) in instances {
        let (g, bn) = fin(spec);
        for i_mask in 0..=bn.w.full_mask() {
            for d in bn.w.dist_reps(i_mask, i0) {
                prop11_iso(&g, &bn, i0, i_mask, d)
                    .map_err(|e| format!("{spec} i0={i0:b} I={i_mask:b}: {e}"))?;
                blocks += 1;
            }
        }
        let scheme = CosetScheme::new(&bn.w, i0, None).expect("proper subset");
        let sd = scheme.build_sigma();
        let td = theorem9_certificate(&g, &bn, &scheme, &sd)
            .map_err(|e| format!("{spec} i0={i0:b}: {e}"))?;
        verify_equivalence(&td.x, &td.yp, &td.cert)
            .map_err(|e| format!("{spec} i0={i0:b}: {e}"))?;
        // Exactness over Q away from degree 0: the core complex is the
        // homology of the bimodule complex in every degree.
        let hx = homology_ranks_rat(&td.x);
        let hyp = homology_ranks_rat(&td.yp);
        for k in 0..hx.len().max(hyp.len()) {
            let a = hx.get(k).copied().unwrap_or(0);
            let b = hyp.get(k).copied().unwrap_or(0);
            if a != b {
                return Err(format!("{spec} i0={i0:b}: homology rank mismatch in degree {k}"));
            }
        }
        certs += 1;
    }
    Ok(format!(
        "{blocks} double-coset block isomorphisms and {certs} rational split equivalences verified"
    ))
}

fn c12_group_duality(seed: u64) -> Result<String, String> {
    for spec in ["GL2(2)", "SL2(3)"] {
        let (g, bn) = fin(spec);
        let order: Vec<usize> = (0..bn.w.n_gens()).collect();
        let rep = group_duality_check(&g, &bn, &order, seed, 5).map_err(|e| format!("{spec}: {e}"))?;
        for (i, &r) in rep.ranks.iter().enumerate() {
            let deg = rep.min_degree + i as i64;
            let want = if deg == 0 { g.order } else { 0 };
            if r != want {
                return Err(format!("{spec}: H^{deg} rank {r}, expected {want}"));
            }
        }
        if rep.char_checks != 5 {
            return Err(format!("{spec}: only {} character pairs checked", rep.char_checks));
        }
    }
    Ok(String::from(
        "X(G) ⊗ X(G)^∨ homology is |G| in degree 0 and zero elsewhere; degree-0 character matches the group algebra",
    ))
}

fn c13_round_trip(seed: u64) -> Result<String, String> {
    let certs: Vec<(&str, Value)> = vec![
        ("sigma A2", cmd_sigma("A2", Some("2"), None).map_err(err_string)?.cert.unwrap()),
        ("sigma B2", cmd_sigma("B2", Some("1"), None).map_err(err_string)?.cert.unwrap()),
        ("hecke A2", cmd_hecke_thm17("A2", Some("1"), None).map_err(err_string)?.cert.unwrap()),
        ("group GL2(2)", cmd_bn_thm20("GL2(2)", None, None).map_err(err_string)?.cert.unwrap()),
        ("group SL2(3)", cmd_bn_thm9("SL2(3)", None, None).map_err(err_string)?.cert.unwrap()),
    ];
    let mut rejected = 0usize;
    for (idx, (name, doc)) in certs.iter().enumerate() {
        verify_document(doc).map_err(|e| format!("{name} round trip: {e}"))?;
        let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_add(idx as u64));
        for _ in 0..100 {
            let mut mutated = doc.clone();
            let site = perturb_random(&mut mutated, &mut rng);
            if verify_document(&mutated).is_ok() {
                return Err(format!("{name}: perturbation at {site} was accepted"));
            }
            rejected += 1;
        }
    }
    Ok(format!(
        "{} certificates round-trip; all {rejected} seeded single-entry perturbations rejected",
        certs.len()
    ))
}

type Criterion = Box<dyn Fn() -> Result<String, String> + Send + Sync>;

fn panic_text(p: Box<dyn std::any::Any + Send>) -> String {
    if let Some(s) = p.downcast_ref::<&str>() {
        format!("panic: {s}")
    } else if let Some(s) = p.downcast_ref::<String>() {
        format!("panic: {s}")
    } else {
        String::from("panic")
    }
}

pub fn run_acceptance(slow: bool, seed: u64) -> Vec<CriterionResult> {
    let criteria: Vec<(usize, &'static str, Criterion)> = vec![
        (1, "sigma contractions", Box::new(move || c1_sigma(slow))),
        (2, "tau involution properties", Box::new(move || c2_tau(slow))),
        (3, "coxeter complex homology", Box::new(c3_coxeter_complex)),
        (4, "hecke multiplication", Box::new(move || c4_hecke_mult(seed))),
        (5, "hecke xi suite", Box::new(c5_xi_suite)),
        (6, "hecke parabolic equivalences", Box::new(c6_parabolic_equivalences)),
        (7, "hecke duality homology", Box::new(c7_hecke_duality)),
        (8, "steinberg complex homology", Box::new(c8_steinberg)),
        (9, "coset-model equivalences (integral)", Box::new(c9_thm20)),
        (10, "idempotent double-coset identities", Box::new(c10_idempotents)),
        (11, "bimodule equivalences (rational)", Box::new(move || c11_thm9(slow))),
        (12, "group duality homology", Box::new(move || c12_group_duality(seed))),
        (13, "certificate round-trip and fuzz", Box::new(move || c13_round_trip(seed))),
    ];

    use rayon::prelude::*;
    criteria
        .into_par_iter()
        .map(|(index, name, f)| {
            let (pass, detail) = match catch_unwind(AssertUnwindSafe(|| f())) {
                Ok(Ok(d)) => (true, d),
                Ok(Err(m)) => (false, m),
                Err(p) => (false, panic_text(p)),
            };
            CriterionResult { index, name, pass, detail }
        })
        .collect()
}
