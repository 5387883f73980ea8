//! Small split BN-pair groups: GL_n and SL_n over 𝔽₂/𝔽₃ (n ≤ 3), their
//! Borel/parabolic/Levi/unipotent structure, group-algebra idempotents, and
//! the Steinberg-type coset complexes.
//!
//! Everything is enumerated explicitly and every structural identity used
//! downstream (Bruhat partition, Levi decompositions, opposite parabolics)
//! is asserted at build time.

pub mod bimod;
pub mod thm20;
pub mod thm9;

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use crate::chain::complex::{sign_before, submasks, Complex};
use crate::chain::sparse::SparseMat;
use crate::coxeter::{CoxType, CoxeterGroup, Elem, GenMask};
use crate::ring::{rat_int, Field, Rat, Ring};

/// Index of a group element in the enumeration.
pub type GElem = u32;

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum GroupKind {
    Gl,
    Sl,
}

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
pub enum BnError {
    #[error("size guard exceeded: {0}")]
    Guard(String),
    #[error("unsupported group: {0}")]
    Unsupported(String),
    /// Pairs of block labels whose coset maps would be ill-defined: the
    /// source stabilizer is not contained in the target stabilizer.
    #[error("coset-map inclusions fail for {0:?}")]
    Inclusion(Vec<(String, String)>),
}

/// A finite matrix group over a prime field, with a full multiplication
/// table. Elements are enumerated in lexicographic matrix order.
pub struct FinGroup {
    pub kind: GroupKind,
    pub n: usize,
    pub q: u8,
    /// Row-major `n × n` matrices with entries in `0..q`.
    pub mats: Vec<Vec<u8>>,
    pub order: usize,
    pub id: GElem,
    index: BTreeMap<Vec<u8>, GElem>,
    mul_table: Vec<GElem>,
    inv_table: Vec<GElem>,
}

fn det3(m: &[u8], n: usize, q: u8) -> u8 {
    let qi = q as i64;
    let at = |i: usize, j: usize| m[i * n + j] as i64;
    let d = match n {
        1 => at(0, 0),
        2 => at(0, 0) * at(1, 1) - at(0, 1) * at(1, 0),
        3 => {
            at(0, 0) * (at(1, 1) * at(2, 2) - at(1, 2) * at(2, 1))
                - at(0, 1) * (at(1, 0) * at(2, 2) - at(1, 2) * at(2, 0))
                + at(0, 2) * (at(1, 0) * at(2, 1) - at(1, 1) * at(2, 0))
        }
        _ => unreachable!(),
    };
    d.rem_euclid(qi) as u8
}

fn matmul(a: &[u8], b: &[u8], n: usize, q: u8) -> Vec<u8> {
    let mut out = vec![0u8; n * n];
    for i in 0..n {
        for j in 0..n {
            let mut acc = 0u32;
            for k in 0..n {
                acc += a[i * n + k] as u32 * b[k * n + j] as u32;
            }
            out[i * n + j] = (acc % q as u32) as u8;
        }
    }
    out
}

impl FinGroup {
    /// Order of GL_n(𝔽_q) / SL_n(𝔽_q) from the standard product formula.
    pub fn order_formula(kind: GroupKind, n: usize, q: u8) -> u64 {
        let qn = (q as u64).pow(n as u32);
        let mut o = 1u64;
        for i in 0..n {
            o *= qn - (q as u64).pow(i as u32);
        }
        match kind {
            GroupKind::Gl => o,
            GroupKind::Sl => o / (q as u64 - 1),
        }
    }

    pub fn build(kind: GroupKind, n: usize, q: u8) -> Result<FinGroup, BnError> {
        if !(1..=3).contains(&n) || !(q == 2 || q == 3) {
            return Err(BnError::Unsupported(format!("{kind:?} n={n} q={q}")));
        }
        let target = Self::order_formula(kind, n, q);
        if target > 1000 {
            return Err(BnError::Guard(format!("|G| = {target} > 1000")));
        }
        let mut mats = Vec::new();
        let cells = n * n;
        let total = (q as u64).pow(cells as u32);
        for code in 0..total {
            let mut m = vec![0u8; cells];
            let mut c = code;
            for e in m.iter_mut().rev() {
                *e = (c % q as u64) as u8;
                c /= q as u64;
            }
            let d = det3(&m, n, q);
            let keep = match kind {
                GroupKind::Gl => d != 0,
                GroupKind::Sl => d == 1,
            };
            if keep {
                mats.push(m);
            }
        }
        assert_eq!(mats.len() as u64, target, "enumeration must match the order formula");
        let index: BTreeMap<Vec<u8>, GElem> =
            mats.iter().enumerate().map(|(i, m)| (m.clone(), i as GElem)).collect();
        let order = mats.len();
        let mut idm = vec![0u8; cells];
        for i in 0..n {
            idm[i * n + i] = 1;
        }
        let id = index[&idm];
        let mut mul_table = vec![0 as GElem; order * order];
        for a in 0..order {
            for b in 0..order {
                mul_table[a * order + b] = index[&matmul(&mats[a], &mats[b], n, q)];
            }
        }
        let mut inv_table = vec![0 as GElem; order];
        for a in 0..order {
            let b = (0..order)
                .find(|&b| mul_table[a * order + b] == id)
                .expect("every element has an inverse");
            inv_table[a] = b as GElem;
        }
        Ok(FinGroup { kind, n, q, mats, order, id, index, mul_table, inv_table })
    }

    pub fn name(&self) -> String {
        let k = match self.kind {
            GroupKind::Gl => "GL",
            GroupKind::Sl => "SL",
        };
        format!("{}{}({})", k, self.n, self.q)
    }

    /// Parse a group spec string like `GL2(2)` or `SL3(2)`.
    pub fn parse_spec(s: &str) -> Option<(GroupKind, usize, u8)> {
        let (kind, rest) = if let Some(r) = s.strip_prefix("GL") {
            (GroupKind::Gl, r)
        } else if let Some(r) = s.strip_prefix("SL") {
            (GroupKind::Sl, r)
        } else {
            return None;
        };
        let (n_str, q_str) = rest.split_once('(')?;
        let q_str = q_str.strip_suffix(')')?;
        let n: usize = n_str.parse().ok()?;
        let q: u8 = q_str.parse().ok()?;
        Some((kind, n, q))
    }

    #[inline]
    pub fn mul(&self, a: GElem, b: GElem) -> GElem {
        self.mul_table[a as usize * self.order + b as usize]
    }

    #[inline]
    pub fn inv(&self, a: GElem) -> GElem {
        self.inv_table[a as usize]
    }

    pub fn conj(&self, x: GElem, g: GElem) -> GElem {
        self.mul(self.mul(self.inv(g), x), g)
    }

    fn mat(&self, a: GElem) -> &[u8] {
        &self.mats[a as usize]
    }

    fn is_upper(&self, a: GElem) -> bool {
        let m = self.mat(a);
        (0..self.n).all(|i| (0..i).all(|j| m[i * self.n + j] == 0))
    }

    fn is_unitriangular(&self, a: GElem) -> bool {
        let m = self.mat(a);
        self.is_upper(a) && (0..self.n).all(|i| m[i * self.n + i] == 1)
    }

    fn is_diag(&self, a: GElem) -> bool {
        let m = self.mat(a);
        (0..self.n).all(|i| (0..self.n).all(|j| i == j || m[i * self.n + j] == 0))
    }

    fn is_monomial(&self, a: GElem) -> bool {
        let m = self.mat(a);
        (0..self.n).all(|i| (0..self.n).filter(|&j| m[i * self.n + j] != 0).count() == 1)
            && (0..self.n)
                .all(|j| (0..self.n).filter(|&i| m[i * self.n + j] != 0).count() == 1)
    }

    /// The column permutation of a monomial matrix: column `j` has its
    /// nonzero entry in row `perm[j]`.
    fn pattern(&self, a: GElem) -> Vec<usize> {
        let m = self.mat(a);
        (0..self.n)
            .map(|j| (0..self.n).find(|&i| m[i * self.n + j] != 0).unwrap())
            .collect()
    }
}

fn mem(set: &[GElem], x: GElem) -> bool {
    set.binary_search(&x).is_ok()
}

fn sorted(mut v: Vec<GElem>) -> Vec<GElem> {
    v.sort_unstable();
    v.dedup();
    v
}

fn intersect(a: &[GElem], b: &[GElem]) -> Vec<GElem> {
    a.iter().copied().filter(|&x| mem(b, x)).collect()
}

fn conj_set(g: &FinGroup, set: &[GElem], h: GElem) -> Vec<GElem> {
    sorted(set.iter().map(|&x| g.conj(x, h)).collect())
}

/// A small generating set of a subgroup (greedy; the subgroup itself is the
/// closure certificate).
pub fn small_gens(g: &FinGroup, set: &[GElem]) -> Vec<GElem> {
    let mut gens: Vec<GElem> = Vec::new();
    let mut closure: Vec<GElem> = vec![g.id];
    for &x in set {
        if mem(&closure, x) {
            continue;
        }
        gens.push(x);
        // closure of gens ∪ {x} by BFS
        let mut frontier = vec![x];
        while let Some(y) = frontier.pop() {
            for &z in &gens {
                for t in [g.mul(y, z), g.mul(z, y)] {
                    if !mem(&closure, t) {
                        let pos = closure.binary_search(&t).unwrap_err();
                        closure.insert(pos, t);
                        frontier.push(t);
                    }
                }
            }
            if !mem(&closure, y) {
                let pos = closure.binary_search(&y).unwrap_err();
                closure.insert(pos, y);
                frontier.push(y);
            }
        }
        if closure.len() == set.len() {
            break;
        }
    }
    assert_eq!(closure.len(), set.len(), "generators must close to the subgroup");
    gens
}

/// The BN-pair structure of a finite matrix group: B upper triangular,
/// U unitriangular, T diagonal, N monomial, W ≅ S_n, and all the standard
/// parabolic data per generator subset.
pub struct BnData {
    pub w: CoxeterGroup,
    pub b: Vec<GElem>,
    pub u: Vec<GElem>,
    pub t: Vec<GElem>,
    pub nmono: Vec<GElem>,
    /// Representative ẇ ∈ N per Weyl-group element.
    pub w_reps: Vec<GElem>,
    /// Per generator mask: the standard parabolic P_I = B W_I B.
    pub p: Vec<Vec<GElem>>,
    /// Per mask: U_I, the largest normal p-subgroup of P_I.
    pub u_rad: Vec<Vec<GElem>>,
    /// Per mask: the Levi L_I = P_I ∩ P_I⁻.
    pub levi: Vec<Vec<GElem>>,
    /// Per mask: the opposite parabolic P_I⁻ = B⁻ W_I B⁻.
    pub p_minus: Vec<Vec<GElem>>,
    /// Per mask: U_I⁻, the largest normal p-subgroup of P_I⁻.
    pub u_minus: Vec<Vec<GElem>>,
    /// A small generating set of G.
    pub g_gens: Vec<GElem>,
    /// Bruhat cell of each group element, as a Weyl-group element index.
    pub bruhat: Vec<Elem>,
}

pub fn build_bn(g: &FinGroup) -> Result<BnData, BnError> {
    if g.n < 2 {
        return Err(BnError::Unsupported(String::from(
            "BN-pair structure needs n ≥ 2 (nontrivial Weyl group)",
        )));
    }
    let w = CoxeterGroup::build(CoxType::A((g.n - 1) as u8));
    let all: Vec<GElem> = (0..g.order as GElem).collect();
    let b = sorted(all.iter().copied().filter(|&x| g.is_upper(x)).collect());
    let u = sorted(all.iter().copied().filter(|&x| g.is_unitriangular(x)).collect());
    let t = sorted(all.iter().copied().filter(|&x| g.is_diag(x)).collect());
    let nmono = sorted(all.iter().copied().filter(|&x| g.is_monomial(x)).collect());

    // B = U·T with trivial intersection.
    assert_eq!(u.len() * t.len(), b.len());
    assert_eq!(intersect(&u, &t), vec![g.id]);
    assert_eq!(
        sorted(u.iter().flat_map(|&x| t.iter().map(move |&y| g.mul(x, y))).collect()),
        b
    );
    assert_eq!(nmono.len(), t.len() * w.order());

    // ẇ per generator: det-1 signed transposition; extended along reduced
    // words. Patterns must realize the permutation action of W.
    let mut gen_reps = Vec::new();
    for s in 0..w.n_gens() {
        let mut m = vec![0u8; g.n * g.n];
        for i in 0..g.n {
            if i != s && i != s + 1 {
                m[i * g.n + i] = 1;
            }
        }
        m[s * g.n + (s + 1)] = g.q - 1;
        m[(s + 1) * g.n + s] = 1;
        gen_reps.push(g.index[&m]);
    }
    let mut w_reps = vec![g.id; w.order()];
    for e in 0..w.order() as Elem {
        let mut acc = g.id;
        for &s in &w.reduced_word(e) {
            acc = g.mul(acc, gen_reps[s]);
        }
        w_reps[e as usize] = acc;
        assert!(g.is_monomial(acc));
        // the pattern equals the permutation computed in W
        let mut perm: Vec<usize> = (0..g.n).collect();
        for &s in &w.reduced_word(e) {
            // right multiplication composes patterns
            let mut next = perm.clone();
            next[s] = perm[s + 1];
            next[s + 1] = perm[s];
            perm = next;
        }
        assert_eq!(g.pattern(acc), perm, "coset representative realizes the wrong permutation");
    }

    // Bruhat partition: G = ⊔ BẇB with |BẇB| = |B|·q^{l(w)}.
    let mut seen = vec![false; g.order];
    let mut bruhat = vec![0 as Elem; g.order];
    for e in 0..w.order() as Elem {
        let mut cell: Vec<GElem> = Vec::new();
        for &b1 in &b {
            let x = g.mul(b1, w_reps[e as usize]);
            for &b2 in &b {
                cell.push(g.mul(x, b2));
            }
        }
        let cell = sorted(cell);
        assert_eq!(
            cell.len(),
            b.len() * (g.q as usize).pow(w.len(e) as u32),
            "Bruhat cell has the wrong size"
        );
        for &x in &cell {
            assert!(!seen[x as usize], "Bruhat cells must be disjoint");
            seen[x as usize] = true;
            bruhat[x as usize] = e;
        }
    }
    assert!(seen.iter().all(|&s| s), "Bruhat cells must cover the group");

    let full = w.full_mask();
    let ws_rep = w_reps[w.longest(full) as usize];
    let b_minus = conj_set(g, &b, ws_rep);
    let u_minus_full = conj_set(g, &u, ws_rep);

    let n_masks = 1usize << w.n_gens();
    let mut p = vec![Vec::new(); n_masks];
    let mut p_minus_v = vec![Vec::new(); n_masks];
    let mut u_rad = vec![Vec::new(); n_masks];
    let mut u_minus_v = vec![Vec::new(); n_masks];
    let mut levi = vec![Vec::new(); n_masks];
    for mask in 0..n_masks as GenMask {
        let wi = w.subgroup(mask);
        let mut pset: Vec<GElem> = Vec::new();
        let mut pmset: Vec<GElem> = Vec::new();
        for &e in &wi {
            let wr = w_reps[e as usize];
            for &b1 in &b {
                let x = g.mul(b1, wr);
                for &b2 in &b {
                    pset.push(g.mul(x, b2));
                }
            }
            for &b1 in &b_minus {
                let x = g.mul(b1, wr);
                for &b2 in &b_minus {
                    pmset.push(g.mul(x, b2));
                }
            }
        }
        let pset = sorted(pset);
        let pmset = sorted(pmset);

        // U_I = O_p(P_I) = ∩_{g∈P_I} U^g (U is a Sylow p-subgroup of P_I).
        let o_p = |par: &[GElem], syl: &[GElem]| -> Vec<GElem> {
            let mut inter = syl.to_vec();
            for &h in par {
                inter = intersect(&inter, &conj_set(g, syl, h));
                if inter.len() == 1 {
                    break;
                }
            }
            inter
        };
        let ui = o_p(&pset, &u);
        let uim = o_p(&pmset, &u_minus_full);
        let li = intersect(&pset, &pmset);
        // Levi decompositions on both sides.
        assert_eq!(ui.len() * li.len(), pset.len(), "P_I = U_I ⋊ L_I fails");
        assert_eq!(intersect(&ui, &li), vec![g.id]);
        assert_eq!(uim.len() * li.len(), pmset.len(), "P_I⁻ = U_I⁻ ⋊ L_I fails");
        assert_eq!(intersect(&uim, &li), vec![g.id]);
        // U_I⁻ = U^{w_S} ∩ U^{w_S w_I} (conjugation x^g = g⁻¹xg).
        let wswi = w_reps[w.mult(w.longest(full), w.longest(mask)) as usize];
        assert_eq!(
            uim,
            intersect(&u_minus_full, &conj_set(g, &u, wswi)),
            "opposite unipotent radical formula fails"
        );
        p[mask as usize] = pset;
        p_minus_v[mask as usize] = pmset;
        u_rad[mask as usize] = ui;
        u_minus_v[mask as usize] = uim;
        levi[mask as usize] = li;
    }
    assert_eq!(p[full as usize].len(), g.order);
    assert_eq!(u_rad[full as usize], vec![g.id]);
    assert_eq!(u_rad[0], u);

    let g_gens = small_gens(g, &all);
    Ok(BnData {
        w,
        b,
        u,
        t,
        nmono,
        w_reps,
        p,
        u_rad,
        levi,
        p_minus: p_minus_v,
        u_minus: u_minus_v,
        g_gens,
        bruhat,
    })
}

// ---------------------------------------------------------------------------
// Group algebra over ℚ.

/// Sparse rational group-algebra element (no stored zeros).
pub type Ga = BTreeMap<GElem, Rat>;

pub fn ga_add_term(out: &mut Ga, e: GElem, c: Rat) {
    if c.is_zero() {
        return;
    }
    let gone = {
        let v = out.entry(e).or_insert_with(Rat::zero);
        *v = v.add(&c);
        v.is_zero()
    };
    if gone {
        out.remove(&e);
    }
}

pub fn ga_mul(g: &FinGroup, a: &Ga, b: &Ga) -> Ga {
    let mut out = Ga::new();
    for (&x, cx) in a {
        for (&y, cy) in b {
            ga_add_term(&mut out, g.mul(x, y), cx.mul(cy));
        }
    }
    out
}

/// `e_I = |U_I|⁻¹ Σ_{u ∈ U_I} u`.
pub fn idempotent(_g: &FinGroup, bn: &BnData, i_mask: GenMask) -> Ga {
    let ui = &bn.u_rad[i_mask as usize];
    let c = rat_int(1).div(&rat_int(ui.len() as i128));
    ui.iter().map(|&u| (u, c.clone())).collect()
}

/// The double-coset idempotent identities: for every `w ∈ D_{IJ}` with
/// representative `n = ẇ`, the four products
/// `e_I n e_J = e_{I∩ʷJ} n e_J = e_I n e_{Iʷ∩J} = e_{I∩ʷJ} n e_{Iʷ∩J}`
/// agree exactly in ℚG; and `e_I e_J = e_J e_I = e_I` whenever `I ⊆ J`.
pub fn prop10_check(g: &FinGroup, bn: &BnData) -> Result<(), BnError> {
    let w = &bn.w;
    let full = w.full_mask();
    for i_mask in submasks(full) {
        for j_mask in submasks(full) {
            if i_mask & j_mask == i_mask {
                let ei = idempotent(g, bn, i_mask);
                let ej = idempotent(g, bn, j_mask);
                if ga_mul(g, &ei, &ej) != ei || ga_mul(g, &ej, &ei) != ei {
                    return Err(BnError::Unsupported(format!(
                        "e_I e_J = e_I fails for I={i_mask:b} ⊆ J={j_mask:b}"
                    )));
                }
            }
            for &d in &w.dist_reps(i_mask, j_mask) {
                if !prop10_triple(g, bn, i_mask, j_mask, d) {
                    return Err(BnError::Unsupported(format!(
                        "idempotent product identity fails at I={i_mask:b} J={j_mask:b}"
                    )));
                }
            }
        }
    }
    Ok(())
}

/// The four-fold product identity for one `(I, J, w ∈ D_IJ)`.
pub fn prop10_triple(
    g: &FinGroup,
    bn: &BnData,
    i_mask: GenMask,
    j_mask: GenMask,
    d: Elem,
) -> bool {
    let w = &bn.w;
    let n = bn.w_reps[d as usize];
    // I ∩ ʷJ = {s ∈ I : w⁻¹sw ∈ J}; Iʷ ∩ J = {t ∈ J : wtw⁻¹ ∈ I}.
    let mut k1 = 0 as GenMask;
    let mut k2 = 0 as GenMask;
    for s in 0..w.n_gens() {
        if i_mask & (1 << s) != 0 {
            let c = w.conj(w.gen_elem(s), d);
            if w.len(c) == 1 {
                let t = w.elem_gen(c);
                if j_mask & (1 << t) != 0 {
                    k1 |= 1 << s;
                    k2 |= 1 << t;
                }
            }
        }
    }
    let nv: Ga = [(n, rat_int(1))].into_iter().collect();
    let prod = |a: GenMask, b: GenMask| {
        let ea = idempotent(g, bn, a);
        let eb = idempotent(g, bn, b);
        ga_mul(g, &ga_mul(g, &ea, &nv), &eb)
    };
    let p0 = prod(i_mask, j_mask);
    p0 == prod(k1, j_mask) && p0 == prod(i_mask, k2) && p0 == prod(k1, k2)
}

// ---------------------------------------------------------------------------
// Steinberg-type coset complexes.

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum StVariant {
    /// Left cosets `G/P_I`.
    Plus,
    /// Right cosets `P_I⁻\G` (the opposite-parabolic model).
    Minus,
}

/// Coset space of a subgroup: representative-indexed, with an element→coset
/// lookup. `Left` means left cosets gH (grouped by right translation).
pub struct CosetSpace {
    pub reps: Vec<GElem>,
    pub of_elem: Vec<u32>,
}

pub fn left_cosets(g: &FinGroup, h: &[GElem]) -> CosetSpace {
    // g1 H = g2 H iff g2⁻¹g1 ∈ H
    let mut of_elem = vec![u32::MAX; g.order];
    let mut reps = Vec::new();
    for x in 0..g.order as GElem {
        if of_elem[x as usize] != u32::MAX {
            continue;
        }
        let c = reps.len() as u32;
        reps.push(x);
        for &hh in h {
            of_elem[g.mul(x, hh) as usize] = c;
        }
    }
    CosetSpace { reps, of_elem }
}

pub fn right_cosets(g: &FinGroup, h: &[GElem]) -> CosetSpace {
    let mut of_elem = vec![u32::MAX; g.order];
    let mut reps = Vec::new();
    for x in 0..g.order as GElem {
        if of_elem[x as usize] != u32::MAX {
            continue;
        }
        let c = reps.len() as u32;
        reps.push(x);
        for &hh in h {
            of_elem[g.mul(hh, x) as usize] = c;
        }
    }
    CosetSpace { reps, of_elem }
}

/// Double cosets `L\G/R` for subgroups given as element lists.
pub fn double_cosets(g: &FinGroup, left: &[GElem], right: &[GElem]) -> CosetSpace {
    let mut of_elem = vec![u32::MAX; g.order];
    let mut reps = Vec::new();
    for x in 0..g.order as GElem {
        if of_elem[x as usize] != u32::MAX {
            continue;
        }
        let c = reps.len() as u32;
        reps.push(x);
        for &l in left {
            let lx = g.mul(l, x);
            for &r in right {
                of_elem[g.mul(lx, r) as usize] = c;
            }
        }
    }
    CosetSpace { reps, of_elem }
}

/// The coset complex `I ↦ G/P_I` (plus) or `I ↦ P_I⁻\G` (minus), assembled
/// over all generator subsets with the standard sign rule. Returns the
/// complex over ℤ and, per degree, the `(mask, coset representative)` labels.
pub fn st_complex(
    g: &FinGroup,
    bn: &BnData,
    variant: StVariant,
    order: &[usize],
) -> (Complex<i128>, Vec<Vec<(GenMask, GElem)>>) {
    let w = &bn.w;
    let full = w.full_mask();
    let n_deg = w.n_gens() + 1;
    let spaces: BTreeMap<GenMask, CosetSpace> = submasks(full)
        .into_iter()
        .map(|m| {
            let par = match variant {
                StVariant::Plus => &bn.p[m as usize],
                StVariant::Minus => &bn.p_minus[m as usize],
            };
            let cs = match variant {
                StVariant::Plus => left_cosets(g, par),
                StVariant::Minus => right_cosets(g, par),
            };
            (m, cs)
        })
        .collect();
    let mut offsets: BTreeMap<GenMask, usize> = BTreeMap::new();
    let mut dims = vec![0usize; n_deg];
    let mut labels: Vec<Vec<(GenMask, GElem)>> = vec![Vec::new(); n_deg];
    for m in submasks(full) {
        let k = m.count_ones() as usize;
        offsets.insert(m, dims[k]);
        dims[k] += spaces[&m].reps.len();
        for &r in &spaces[&m].reps {
            labels[k].push((m, r));
        }
    }
    let mut d = Vec::new();
    for k in 0..n_deg - 1 {
        let mut trips = Vec::new();
        for m in submasks(full) {
            if m.count_ones() as usize != k {
                continue;
            }
            let off = offsets[&m] as u32;
            for s in 0..w.n_gens() {
                if m & (1 << s) != 0 {
                    continue;
                }
                let big = m | (1 << s);
                let sign = sign_before(order, m, s) as i128;
                let boff = offsets[&big] as u32;
                for (ci, &r) in spaces[&m].reps.iter().enumerate() {
                    let target = spaces[&big].of_elem[r as usize];
                    trips.push((boff + target, off + ci as u32, sign));
                }
            }
        }
        d.push(SparseMat::from_triplets(dims[k + 1], dims[k], trips));
    }
    let cx = Complex::new(dims, d);
    cx.verify_d2().expect("coset complex differential squares to zero");
    (cx, labels)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chain::homology::homology_int;

    #[test]
    fn gl2_f2_structure() {
        let g = FinGroup::build(GroupKind::Gl, 2, 2).unwrap();
        assert_eq!(g.order, 6);
        let bn = build_bn(&g).unwrap();
        assert_eq!(bn.b.len(), 2);
        assert_eq!(g.order / bn.b.len(), 3);
        assert_eq!(bn.u.len(), 2);
        assert_eq!(bn.t.len(), 1);
    }

    #[test]
    fn sl2_f3_structure() {
        let g = FinGroup::build(GroupKind::Sl, 2, 3).unwrap();
        assert_eq!(g.order, 24);
        let bn = build_bn(&g).unwrap();
        assert_eq!(bn.u.len(), 3);
        assert_eq!(bn.b.len(), 6);
    }

    #[test]
    fn gl3_f2_structure() {
        let g = FinGroup::build(GroupKind::Gl, 3, 2).unwrap();
        assert_eq!(g.order, 168);
        let bn = build_bn(&g).unwrap();
        assert_eq!(g.order / bn.b.len(), 21);
        assert_eq!(g.order / bn.p[0b01].len(), 7);
    }

    #[test]
    fn size_guard() {
        assert!(matches!(FinGroup::build(GroupKind::Gl, 3, 3), Err(BnError::Guard(_))));
    }

    #[test]
    fn idempotents_and_prop10_gl2() {
        let g = FinGroup::build(GroupKind::Gl, 2, 2).unwrap();
        let bn = build_bn(&g).unwrap();
        for m in submasks(bn.w.full_mask()) {
            let e = idempotent(&g, &bn, m);
            assert_eq!(ga_mul(&g, &e, &e), e);
        }
        prop10_check(&g, &bn).unwrap();
    }

    #[test]
    fn idempotents_sl2_f3() {
        let g = FinGroup::build(GroupKind::Sl, 2, 3).unwrap();
        let bn = build_bn(&g).unwrap();
        for m in submasks(bn.w.full_mask()) {
            let e = idempotent(&g, &bn, m);
            assert_eq!(ga_mul(&g, &e, &e), e);
        }
        prop10_check(&g, &bn).unwrap();
    }

    #[test]
    fn st_complex_dims_and_homology() {
        for (kind, n, q, dims, u_order) in [
            (GroupKind::Gl, 2, 2, vec![3usize, 1], 2usize),
            (GroupKind::Sl, 2, 3, vec![4, 1], 3),
            (GroupKind::Gl, 3, 2, vec![21, 14, 1], 8),
        ] {
            let g = FinGroup::build(kind, n, q).unwrap();
            let bn = build_bn(&g).unwrap();
            let order: Vec<usize> = (0..bn.w.n_gens()).collect();
            for variant in [StVariant::Plus, StVariant::Minus] {
                let (cx, _) = st_complex(&g, &bn, variant, &order);
                assert_eq!(cx.dims, dims);
                let h = homology_int(&cx);
                assert_eq!(h[0].free_rank, u_order);
                assert!(h[0].torsion.is_empty());
                for hk in &h[1..] {
                    assert_eq!(hk.free_rank, 0);
                    assert!(hk.torsion.is_empty());
                }
            }
        }
    }
}
