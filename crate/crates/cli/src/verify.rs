//! Independent certificate verification.
//!
//! Contraction certificates are checked against a model rebuilt from the
//! Coxeter group data alone: the verifier re-enumerates the coset basis,
//! re-derives the differential from coset unions and the sign rule, compares
//! both entry by entry with the document, reassembles the homotopy from the
//! flat coefficient list, checks the homotopy identity over the integers, and
//! finally checks the two support laws on every nonzero coefficient. Nothing
//! from the generating pipeline is reused except the group arithmetic itself.
//!
//! Equivalence certificates are self-contained: every identity is checked by
//! exact ring arithmetic on the serialized matrices, with no reconstruction.

use coxcert_core::chain::{verify_contraction, verify_equivalence, ChainError, Complex, SparseMat};
use coxcert_core::ring::Ring;
use coxcert_core::{CoxType, CoxeterGroup};
use serde_json::Value;

use crate::cert::{parse_cert, Cert, ContractionCert, EquivalenceCert};

#[derive(Debug)]
pub enum VerifyError {
    /// The document is structurally unusable (exit 2).
    Malformed(String),
    /// A check failed; the message carries the first counterexample (exit 1).
    Failed(String),
}

impl core::fmt::Display for VerifyError {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        match self {
            VerifyError::Malformed(m) => write!(f, "malformed certificate: {m}"),
            VerifyError::Failed(m) => write!(f, "verification failed: {m}"),
        }
    }
}

pub struct VerifyReport {
    pub kind: &'static str,
    pub algebra: String,
    pub group: String,
    pub checks: Vec<String>,
}

pub fn verify_document(v: &Value) -> Result<VerifyReport, VerifyError> {
    match parse_cert(v).map_err(VerifyError::Malformed)? {
        Cert::Contraction(c) => verify_contraction_cert(&c),
        Cert::Hecke(c) => verify_equivalence_cert(&c),
        Cert::Numeric(c) => verify_equivalence_cert(&c),
    }
}

/// The coset model the verifier rebuilds for itself: the group, the fixed
/// subset, and the sign order. Only `CoxeterGroup` arithmetic is used.
struct Model {
    w: CoxeterGroup,
    i0: u32,
    order: Vec<usize>,
    w_s: u32,
    w_i0: u32,
}

impl Model {
    fn build(c: &ContractionCert) -> Result<Model, VerifyError> {
        let t = CoxType::parse(&c.group)
            .map_err(|_| VerifyError::Malformed(format!("unknown group `{}`", c.group)))?;
        let w = CoxeterGroup::build(t);
        let n = w.n_gens();
        if c.i0 & !w.full_mask() != 0 {
            return Err(VerifyError::Malformed(String::from("i0 outside generator range")));
        }
        if c.i0 == w.full_mask() {
            return Err(VerifyError::Malformed(String::from("i0 must be a proper subset")));
        }
        let mut seen = 0u32;
        for &s in &c.order {
            if s >= n || seen & (1 << s) != 0 {
                return Err(VerifyError::Malformed(String::from(
                    "order must be a permutation of the generators",
                )));
            }
            seen |= 1 << s;
        }
        if seen != w.full_mask() {
            return Err(VerifyError::Malformed(String::from(
                "order must be a permutation of the generators",
            )));
        }
        let w_s = w.longest(w.full_mask());
        let w_i0 = w.longest(c.i0);
        Ok(Model { w, i0: c.i0, order: c.order.clone(), w_s, w_i0 })
    }

    /// Per degree `|I|`: the non-trivial distinguished cosets, `(I, rep)`,
    /// masks ascending and representatives ascending within a mask.
    fn basis(&self) -> Vec<Vec<(u32, u32)>> {
        let n = self.w.n_gens();
        let mut out = vec![Vec::new(); n + 1];
        for i_mask in 0..=self.w.full_mask() {
            for rep in self.w.dist_reps(i_mask, self.i0) {
                if rep == 0 && i_mask & !self.i0 == 0 {
                    continue;
                }
                out[i_mask.count_ones() as usize].push((i_mask, rep));
            }
        }
        out
    }

    fn label(&self, i_mask: u32, rep: u32) -> String {
        let gens: Vec<String> =
            (0..self.w.n_gens()).filter(|s| i_mask & (1 << s) != 0).map(|s| (s + 1).to_string()).collect();
        let word = self.w.reduced_word(rep);
        let word_str = if word.is_empty() {
            String::from("e")
        } else {
            word.iter().map(|s| format!("s{}", s + 1)).collect()
        };
        format!("W[{}]{}", gens.join(","), word_str)
    }

    fn sign(&self, i_mask: u32, s: usize) -> i128 {
        let mut n = 0u32;
        for &t in &self.order {
            if t == s {
                break;
            }
            if i_mask & (1 << t) != 0 {
                n += 1;
            }
        }
        if n % 2 == 0 {
            1
        } else {
            -1
        }
    }

    /// Re-derive the differential: push each coset into every one-generator
    /// enlargement, re-canonicalize, and apply the alternating sign.
    fn differential(
        &self,
        basis: &[Vec<(u32, u32)>],
    ) -> Result<Vec<SparseMat<i128>>, VerifyError> {
        let mut d = Vec::new();
        for k in 0..basis.len() - 1 {
            let mut trips = Vec::new();
            for (col, &(i_mask, rep)) in basis[k].iter().enumerate() {
                for s in 0..self.w.n_gens() {
                    if i_mask & (1 << s) != 0 {
                        continue;
                    }
                    let j_mask = i_mask | (1 << s);
                    let (u, _) = self.w.coset_min_rep(j_mask, rep);
                    let row = basis[k + 1]
                        .iter()
                        .position(|&c| c == (j_mask, u))
                        .ok_or_else(|| {
                            VerifyError::Failed(format!(
                                "basis is not closed under unions: {} + s{} leaves it",
                                self.label(i_mask, rep),
                                s + 1
                            ))
                        })?;
                    trips.push((row as u32, col as u32, self.sign(i_mask, s)));
                }
            }
            d.push(SparseMat::from_triplets(basis[k + 1].len(), basis[k].len(), trips));
        }
        Ok(d)
    }

    fn in_subgroup(&self, i_mask: u32, x: u32) -> bool {
        self.w.coset_min_rep(i_mask, x).0 == 0
    }

    /// Generators of `i0` the representative conjugates into `W_I`.
    fn fixed_set(&self, i_mask: u32, rep: u32) -> u32 {
        let mut out = 0;
        for t in 0..self.w.n_gens() {
            if self.i0 & (1 << t) == 0 {
                continue;
            }
            let c = self.w.mult(self.w.mult(rep, self.w.gen_elem(t)), self.w.inv(rep));
            if self.in_subgroup(i_mask, c) {
                out |= 1 << t;
            }
        }
        out
    }

    /// Canonical representative of the twisted coset `w_S (W_I x) w_{I0}`.
    fn twisted_rep(&self, i_mask: u32, rep: u32) -> u32 {
        let j = self.w.conj_mask(i_mask, self.w_s);
        let tx = self.w.mult(self.w.mult(self.w_s, rep), self.w_i0);
        self.w.coset_min_rep(j, tx).0
    }
}

fn first_diff<R: Ring + PartialEq>(a: &SparseMat<R>, b: &SparseMat<R>) -> Option<(u32, u32)> {
    a.sub(b).first_entry().map(|(r, c, _)| (r, c))
}

fn verify_contraction_cert(c: &ContractionCert) -> Result<VerifyReport, VerifyError> {
    let model = Model::build(c)?;
    let mut checks = Vec::new();

    // Basis labels must match the independently rebuilt enumeration.
    let basis = model.basis();
    if basis.len() != c.basis.len() {
        return Err(VerifyError::Failed(format!(
            "basis has {} degrees, expected {}",
            c.basis.len(),
            basis.len()
        )));
    }
    for (k, (ours, theirs)) in basis.iter().zip(&c.basis).enumerate() {
        if ours.len() != theirs.len() {
            return Err(VerifyError::Failed(format!(
                "degree {k} has {} basis elements, expected {}",
                theirs.len(),
                ours.len()
            )));
        }
        for (i, (&(im, rep), label)) in ours.iter().zip(theirs).enumerate() {
            let want = model.label(im, rep);
            if *label != want {
                return Err(VerifyError::Failed(format!(
                    "basis label {i} in degree {k} is `{label}`, expected `{want}`"
                )));
            }
        }
    }
    let total: usize = basis.iter().map(Vec::len).sum();
    checks.push(format!("basis matches the rebuilt enumeration ({total} cosets)"));

    // The serialized differential must equal the re-derived one bit for bit.
    let derived = model.differential(&basis)?;
    for (k, (ours, theirs)) in derived.iter().zip(&c.d).enumerate() {
        if let Some((r, cx)) = first_diff(theirs, ours) {
            return Err(VerifyError::Failed(format!(
                "differential disagrees in degree {k} at ({r},{cx}): source {}, target {}",
                c.basis[k][cx as usize],
                c.basis[k + 1][r as usize]
            )));
        }
    }
    checks.push(format!("differential agrees with independent reconstruction ({} maps)", derived.len()));

    // Index the basis labels for the coefficient list.
    let find = |label: &str| -> Option<(usize, usize)> {
        c.basis
            .iter()
            .enumerate()
            .find_map(|(k, v)| v.iter().position(|l| l == label).map(|i| (k, i)))
    };

    // The homotopy matrix must agree with the flat coefficient list.
    let dims: Vec<usize> = basis.iter().map(Vec::len).collect();
    let mut trips: Vec<Vec<(u32, u32, i128)>> = dims.iter().map(|_| Vec::new()).collect();
    for (a, b, m) in &c.mcoeffs {
        let (ka, ia) = find(a)
            .ok_or_else(|| VerifyError::Failed(format!("coefficient source `{a}` is not a basis element")))?;
        let (kb, ib) = find(b)
            .ok_or_else(|| VerifyError::Failed(format!("coefficient target `{b}` is not a basis element")))?;
        if ka == 0 || kb + 1 != ka {
            return Err(VerifyError::Failed(format!(
                "coefficient (`{a}`, `{b}`) does not drop exactly one degree"
            )));
        }
        trips[ka].push((ib as u32, ia as u32, *m));
    }
    for (k, t) in trips.into_iter().enumerate() {
        let rows = if k == 0 { 0 } else { dims[k - 1] };
        let from_list = SparseMat::from_triplets(rows, dims[k], t);
        if let Some((r, cx)) = first_diff(&c.sigma.mats[k], &from_list) {
            return Err(VerifyError::Failed(format!(
                "homotopy disagrees with the coefficient list for source {}, target {}",
                c.basis[k][cx as usize],
                c.basis[k - 1][r as usize]
            )));
        }
    }
    checks.push(format!("homotopy matches the coefficient list ({} coefficients)", c.mcoeffs.len()));

    // The homotopy identity, over the integers, on the re-derived complex.
    let space = Complex::new(dims.clone(), derived);
    match verify_contraction(&space, &c.sigma) {
        Ok(()) => checks.push(String::from("contraction identity σd + dσ = Id holds exactly")),
        Err(ChainError::Nonzero { check, degree, row, col, value }) => {
            let rdeg = if check.starts_with("d∘d") { degree as i64 + 2 } else { degree as i64 };
            return Err(VerifyError::Failed(format!(
                "{check} fails in degree {degree} at {} (column {}): value {value}",
                resolve(&c.basis, rdeg, row),
                resolve(&c.basis, degree as i64, col)
            )));
        }
        Err(e) => return Err(VerifyError::Malformed(e.to_string())),
    }

    // Support laws, per nonzero coefficient: the fixed set may only grow,
    // and the canonical representative of the twisted target coset must
    // right-divide the twisted source representative.
    let mut nonzero = 0usize;
    for (a, b, m) in &c.mcoeffs {
        if *m == 0 {
            continue;
        }
        nonzero += 1;
        let (ka, ia) = find(a).expect("checked above");
        let (kb, ib) = find(b).expect("checked above");
        let (am, ar) = basis[ka][ia];
        let (bm, br) = basis[kb][ib];
        if model.fixed_set(am, ar) & !model.fixed_set(bm, br) != 0 {
            return Err(VerifyError::Failed(format!(
                "fixed-set law fails for (`{a}`, `{b}`): the fixed set shrinks"
            )));
        }
        if !model.w.right_divides(model.twisted_rep(bm, br), model.twisted_rep(am, ar)) {
            return Err(VerifyError::Failed(format!(
                "refinement law fails for (`{a}`, `{b}`): twisted representative does not right-divide"
            )));
        }
    }
    checks.push(format!("support laws hold for all {nonzero} nonzero coefficients"));

    Ok(VerifyReport { kind: "contraction", algebra: String::from("coxeter"), group: c.group.clone(), checks })
}

fn resolve(labels: &[Vec<String>], deg: i64, idx: u32) -> String {
    labels
        .get(deg.max(0) as usize)
        .and_then(|v| v.get(idx as usize))
        .cloned()
        .unwrap_or_else(|| format!("degree {deg} #{idx}"))
}

fn verify_equivalence_cert<R: Ring + PartialEq>(
    c: &EquivalenceCert<R>,
) -> Result<VerifyReport, VerifyError> {
    let sdims: Vec<usize> = c.basis.iter().map(Vec::len).collect();
    let tdims: Vec<usize> = c.dst_basis.iter().map(Vec::len).collect();
    let src = Complex::new(sdims, c.d_src.clone());
    let dst = Complex::new(tdims, c.d_dst.clone());
    let mut checks = Vec::new();

    let fail = |which: &str, e: ChainError, rows: &[Vec<String>], cols: &[Vec<String>], rdeg: i64| {
        match e {
            ChainError::Nonzero { check, degree, row, col, value } => VerifyError::Failed(format!(
                "{which}{check} fails in degree {degree}: row {}, column {}, value {value}",
                resolve(rows, degree as i64 + rdeg, row),
                resolve(cols, degree as i64, col)
            )),
            e => VerifyError::Malformed(e.to_string()),
        }
    };

    src.verify_d2().map_err(|e| fail("source ", e, &c.basis, &c.basis, 2))?;
    checks.push(format!("source complex satisfies d² = 0 ({} degrees)", src.degrees()));
    dst.verify_d2().map_err(|e| fail("target ", e, &c.dst_basis, &c.dst_basis, 2))?;
    checks.push(format!("target complex satisfies d² = 0 ({} degrees)", dst.degrees()));

    verify_equivalence(&src, &dst, &c.maps).map_err(|e| match &e {
        ChainError::Nonzero { check, .. } => {
            let (rows, cols, rdeg): (&[Vec<String>], &[Vec<String>], i64) =
                if check.starts_with("p is") {
                    (&c.dst_basis, &c.basis, 1)
                } else if check.starts_with("g is") {
                    (&c.basis, &c.dst_basis, 1)
                } else if check.starts_with("pg") {
                    (&c.dst_basis, &c.dst_basis, 0)
                } else {
                    (&c.basis, &c.basis, 0)
                };
            fail("", e.clone(), rows, cols, rdeg)
        }
        _ => VerifyError::Malformed(e.to_string()),
    })?;
    checks.push(String::from("p and g are chain maps"));
    checks.push(String::from("pg = Id on the target"));
    checks.push(String::from("Id − gp = dk + kd on the source"));

    Ok(VerifyReport {
        kind: "equivalence",
        algebra: c.algebra.clone(),
        group: c.group.clone(),
        checks,
    })
}
