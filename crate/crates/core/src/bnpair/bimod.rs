//! Induced bimodules of parabolic idempotent truncations over ℚ.
//!
//! The module `ℚG·e_I ⊗_{P_I} e_I·ℚG` (optionally right-truncated by a
//! second idempotent) is modeled on an explicit basis: a section of `G/P_I`
//! paired with the fiber cosets of `e_I·ℚG`. The model is certified against
//! the definition by checking that the rewrite projection kills every
//! balancing relation `xp⊗y − x⊗py` and that the model rank matches the
//! corank of the balancing-relation matrix computed by exact linear algebra.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use super::{
    double_cosets, left_cosets, right_cosets, small_gens, BnData, BnError, CosetSpace, FinGroup,
    GElem,
};
use crate::chain::complex::{
    compose, submasks, verify_chain_map, ChainError, ChainMap, CoeffSystem, Complex,
};
use crate::chain::homology::{homology_ranks_rat, inverse, kernel_basis, rank};
use crate::chain::sparse::SparseMat;
use crate::coxeter::GenMask;
use crate::ring::{rat_int, Field, Rat, Ring};

/// Basis model of `ℚG·e_I ⊗_{P_I} e_I·ℚG` (fiber `U_I\G`), or of its right
/// truncation `ℚG·e_I ⊗_{P_I} e_I·ℚG·e_{I0}` (fiber `U_I\G/U_{I0}`).
///
/// Basis vectors are the pairs (slot, fiber) with the slot running over a
/// fixed section of `G/P_I` and the fiber over the coset space of `e_I·ℚG`;
/// the vector represented is `ĝ·e_I ⊗ e_I·h`.
pub struct BimodBasis {
    pub i_mask: GenMask,
    /// `Some(i0)`: fiber cosets are double cosets `U_I\G/U_{I0}`.
    pub trunc: Option<GenMask>,
    /// Section of `G/P_I`.
    pub slots: CosetSpace,
    /// Fiber cosets, indexed over all of `G`.
    pub fiber: CosetSpace,
    /// Left pre-tensor factor `G/U_I`.
    pub pre_left: CosetSpace,
    pub dim: usize,
    /// Balancing relations checked against the rewrite projection.
    pub relations_checked: usize,
    /// Whether the corank cross-check used the full relation matrix.
    pub matrix_rank_checked: bool,
}

impl BimodBasis {
    #[inline]
    pub fn n_fiber(&self) -> usize {
        self.fiber.reps.len()
    }

    #[inline]
    pub fn coord(&self, slot: usize, fib: usize) -> usize {
        slot * self.n_fiber() + fib
    }

    /// Rewrite an arbitrary pure pair `(x·U_I, fiber f)` to its basis vector:
    /// `x = ĝ·p` with `p ∈ P_I`, giving `(ĝ, p·f)`. Coefficient is exactly 1.
    pub fn rewrite(&self, g: &FinGroup, x: GElem, fib: usize) -> usize {
        let slot = self.slots.of_elem[x as usize] as usize;
        let p = g.mul(g.inv(self.slots.reps[slot]), x);
        let f2 = self.fiber.of_elem[g.mul(p, self.fiber.reps[fib]) as usize] as usize;
        self.coord(slot, f2)
    }

    /// Left translation by `g0`: a coordinate permutation of the basis.
    pub fn left_act(&self, g: &FinGroup, g0: GElem, slot: usize, fib: usize) -> usize {
        self.rewrite(g, g.mul(g0, self.slots.reps[slot]), fib)
    }

    /// Right translation of the fiber by `g0` (must normalize the truncation
    /// radical when truncated; group elements always qualify for the full
    /// fiber, Levi and parabolic elements of the truncation for the rest).
    pub fn right_act(&self, g: &FinGroup, g0: GElem, slot: usize, fib: usize) -> usize {
        let f2 = self.fiber.of_elem[g.mul(self.fiber.reps[fib], g0) as usize] as usize;
        self.coord(slot, f2)
    }
}

/// Size guard for the pre-tensor space of the full bimodule.
const PRE_GUARD: usize = 2500;
/// Hard stop for the truncated models (the relation matrix is replaced by a
/// component count above `PRE_GUARD`).
const PRE_HARD: usize = 20_000;

fn build_model(
    g: &FinGroup,
    bn: &BnData,
    i_mask: GenMask,
    trunc: Option<GenMask>,
) -> Result<BimodBasis, BnError> {
    let ui = &bn.u_rad[i_mask as usize];
    let slots = left_cosets(g, &bn.p[i_mask as usize]);
    let pre_left = left_cosets(g, ui);
    let fiber = match trunc {
        None => right_cosets(g, ui),
        Some(i0) => double_cosets(g, ui, &bn.u_rad[i0 as usize]),
    };
    let pre_dim = pre_left.reps.len() * fiber.reps.len();
    let hard = if trunc.is_none() { PRE_GUARD } else { PRE_HARD };
    if pre_dim > hard {
        return Err(BnError::Guard(format!(
            "pre-tensor dimension {pre_dim} > {hard} for I = {i_mask:b}"
        )));
    }
    let nf = fiber.reps.len();
    let dim = slots.reps.len() * nf;
    let mut model = BimodBasis {
        i_mask,
        trunc,
        slots,
        fiber,
        pre_left,
        dim,
        relations_checked: 0,
        matrix_rank_checked: false,
    };

    // The rewrite projection must identify exactly the balancing relations.
    // (a) It kills each relation over a generating set of P_I.
    let p_gens = small_gens(g, &bn.p[i_mask as usize]);
    let mut edges: BTreeSet<(u32, u32)> = BTreeSet::new();
    for &p in &p_gens {
        for (ai, &a) in model.pre_left.reps.iter().enumerate() {
            for fi in 0..nf {
                let lhs = model.rewrite(g, g.mul(a, p), fi);
                let f2 = model.fiber.of_elem[g.mul(p, model.fiber.reps[fi]) as usize] as usize;
                let rhs = model.rewrite(g, a, f2);
                assert_eq!(lhs, rhs, "rewrite projection must kill balancing relations");
                model.relations_checked += 1;
                // pre-tensor coordinates of the relation, for the rank check
                let ap = model.pre_left.of_elem[g.mul(a, p) as usize] as usize;
                let c1 = (ap * nf + fi) as u32;
                let c2 = (ai * nf + f2) as u32;
                if c1 != c2 {
                    edges.insert((c1.min(c2), c1.max(c2)));
                }
            }
        }
    }

    // (b) The quotient dimension matches: pre_dim − rank(relations) = dim.
    // Components of the relation graph give the corank; within the guard the
    // rank is recomputed from the relation matrix by exact elimination.
    let mut parent: Vec<u32> = (0..pre_dim as u32).collect();
    fn find(parent: &mut [u32], mut x: u32) -> u32 {
        while parent[x as usize] != x {
            parent[x as usize] = parent[parent[x as usize] as usize];
            x = parent[x as usize];
        }
        x
    }
    for &(a, b) in &edges {
        let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
        if ra != rb {
            parent[ra as usize] = rb;
        }
    }
    let comps = (0..pre_dim as u32).filter(|&x| find(&mut parent, x) == x).count();
    assert_eq!(comps, dim, "balancing quotient dimension mismatch");
    if pre_dim <= PRE_GUARD {
        let trips: Vec<(u32, u32, Rat)> = edges
            .iter()
            .enumerate()
            .flat_map(|(j, &(a, b))| {
                [(a, j as u32, rat_int(1)), (b, j as u32, rat_int(-1))]
            })
            .collect();
        let rel = SparseMat::from_triplets(pre_dim, edges.len(), trips);
        assert_eq!(pre_dim - rank(&rel), dim, "relation matrix corank mismatch");
        model.matrix_rank_checked = true;
    }
    Ok(model)
}

/// The full bimodule `X(G)^I = ℚG·e_I ⊗_{P_I} e_I·ℚG`.
pub fn bimodule_xg(g: &FinGroup, bn: &BnData, i_mask: GenMask) -> Result<BimodBasis, BnError> {
    build_model(g, bn, i_mask, None)
}

/// The right truncation `ℚG·e_I ⊗_{P_I} e_I·ℚG·e_{I0}`.
pub fn bimodule_truncated(
    g: &FinGroup,
    bn: &BnData,
    i_mask: GenMask,
    i0: GenMask,
) -> Result<BimodBasis, BnError> {
    build_model(g, bn, i_mask, Some(i0))
}

/// Left coset representatives of `U_J` inside `U_I` (for `J ⊇ I` as masks,
/// so `U_J ⊆ U_I`).
pub(super) fn unipotent_section(g: &FinGroup, ui: &[GElem], uj: &[GElem]) -> Vec<GElem> {
    let mut seen: BTreeSet<GElem> = BTreeSet::new();
    let mut reps = Vec::new();
    for &u in ui {
        if seen.contains(&u) {
            continue;
        }
        reps.push(u);
        for &v in uj {
            seen.insert(g.mul(u, v));
        }
    }
    assert_eq!(reps.len() * uj.len(), ui.len());
    reps
}

/// The inclusion-induced map to a coarser level: `x ⊗_{P_I} y ↦ x ⊗_{P_J} y`
/// for `I ⊆ J`, in model coordinates. Exact rational entries; computed by
/// expanding `e_I` over a section of `U_I/U_J` in both tensor legs and
/// projecting.
pub fn phi_level(g: &FinGroup, bn: &BnData, src: &BimodBasis, dst: &BimodBasis) -> SparseMat<Rat> {
    assert_eq!(src.i_mask & !dst.i_mask, 0, "phi_level requires nested levels");
    assert_eq!(src.trunc, dst.trunc);
    let sec = unipotent_section(
        g,
        &bn.u_rad[src.i_mask as usize],
        &bn.u_rad[dst.i_mask as usize],
    );
    let r = sec.len() as i64;
    let c = rat_int(1).div(&rat_int((r * r) as i128));
    let mut trips = Vec::new();
    for (slot, &sg) in src.slots.reps.iter().enumerate() {
        for fi in 0..src.n_fiber() {
            let col = (src.coord(slot, fi)) as u32;
            let fr = src.fiber.reps[fi];
            let mut acc: BTreeMap<u32, Rat> = BTreeMap::new();
            for &u in &sec {
                let x = g.mul(sg, u);
                for &u2 in &sec {
                    let row = dst.rewrite(g, x, dst.fiber.of_elem[g.mul(u2, fr) as usize] as usize);
                    let e = acc.entry(row as u32).or_insert_with(Rat::zero);
                    *e = e.add(&c);
                }
            }
            for (row, v) in acc {
                if !v.is_zero() {
                    trips.push((row, col, v));
                }
            }
        }
    }
    SparseMat::from_triplets(dst.dim, src.dim, trips)
}

/// The coefficient system of the bimodule models over the subsets of `full`,
/// with all two-step functoriality squares verified.
pub fn bimod_system(
    g: &FinGroup,
    bn: &BnData,
    full: GenMask,
    trunc: Option<GenMask>,
    order: &[usize],
) -> Result<(CoeffSystem<Rat>, BTreeMap<GenMask, BimodBasis>), BnError> {
    let mut bases: BTreeMap<GenMask, BimodBasis> = BTreeMap::new();
    for m in submasks(full) {
        bases.insert(m, build_model(g, bn, m, trunc)?);
    }
    let mut dims = BTreeMap::new();
    let mut phi = BTreeMap::new();
    for m in submasks(full) {
        dims.insert(m, bases[&m].dim);
        for s in 0..bn.w.n_gens() {
            let big = m | (1 << s);
            if big != m && big & !full == 0 {
                phi.insert((big, m), phi_level(g, bn, &bases[&m], &bases[&big]));
            }
        }
    }
    let cs = CoeffSystem { full, dims, phi, order: order.to_vec() };
    cs.check_functoriality().expect("bimodule transition maps must commute");
    Ok((cs, bases))
}

/// The complex `X(G)`: degree `|I|` is the direct sum of the full bimodules
/// over the `|I|`-subsets, with the signed inclusion-induced differential.
pub struct XgData {
    pub complex: Complex<Rat>,
    pub bases: BTreeMap<GenMask, BimodBasis>,
    /// Per mask: (degree, starting coordinate).
    pub offsets: BTreeMap<GenMask, (usize, usize)>,
    /// Per degree: `(mask, slot representative, fiber representative)`.
    pub labels: Vec<Vec<(GenMask, GElem, GElem)>>,
}

pub fn build_xg(g: &FinGroup, bn: &BnData, order: &[usize]) -> Result<XgData, BnError> {
    let full = bn.w.full_mask();
    let (cs, bases) = bimod_system(g, bn, full, None, order)?;
    let (complex, offsets) = cs.assemble();
    complex.verify_d2().expect("X(G) differential squares to zero");
    let mut labels: Vec<Vec<(GenMask, GElem, GElem)>> =
        vec![Vec::new(); full.count_ones() as usize + 1];
    for m in submasks(full) {
        let (k, _) = offsets[&m];
        let bm = &bases[&m];
        for slot in 0..bm.slots.reps.len() {
            for fi in 0..bm.n_fiber() {
                labels[k].push((m, bm.slots.reps[slot], bm.fiber.reps[fi]));
            }
        }
    }
    Ok(XgData { complex, bases, offsets, labels })
}

fn action_map(g: &FinGroup, xg: &XgData, g0: GElem, left: bool) -> ChainMap<Rat> {
    let mut mats = Vec::new();
    for k in 0..xg.complex.degrees() {
        let n = xg.complex.dims[k];
        let mut trips = Vec::with_capacity(n);
        for m in xg.bases.keys() {
            let (deg, off) = xg.offsets[m];
            if deg != k {
                continue;
            }
            let bm = &xg.bases[m];
            for slot in 0..bm.slots.reps.len() {
                for fi in 0..bm.n_fiber() {
                    let src = off + bm.coord(slot, fi);
                    let dst = off
                        + if left {
                            bm.left_act(g, g0, slot, fi)
                        } else {
                            bm.right_act(g, g0, slot, fi)
                        };
                    trips.push((dst as u32, src as u32, rat_int(1)));
                }
            }
        }
        mats.push(SparseMat::from_triplets(n, n, trips));
    }
    ChainMap::new(0, mats)
}

pub fn xg_left_action(g: &FinGroup, xg: &XgData, g0: GElem) -> ChainMap<Rat> {
    action_map(g, xg, g0, true)
}

pub fn xg_right_action(g: &FinGroup, xg: &XgData, g0: GElem) -> ChainMap<Rat> {
    action_map(g, xg, g0, false)
}

/// Both translation actions are chain maps and commute with each other
/// (checked over a generating set of the group on each side).
pub fn verify_xg_bimodule(g: &FinGroup, bn: &BnData, xg: &XgData) -> Result<(), ChainError> {
    let cx = &xg.complex;
    for &a in &bn.g_gens {
        verify_chain_map("left translation", &xg_left_action(g, xg, a), cx, cx)?;
        verify_chain_map("right translation", &xg_right_action(g, xg, a), cx, cx)?;
    }
    for &a in &bn.g_gens {
        let la = xg_left_action(g, xg, a);
        for &b in &bn.g_gens {
            let rb = xg_right_action(g, xg, b);
            let lr = compose(&la, &rb, cx, cx, cx);
            let rl = compose(&rb, &la, cx, cx, cx);
            for k in 0..cx.degrees() {
                if lr.mats[k] != rl.mats[k] {
                    return Err(ChainError::Shape {
                        check: alloc::string::String::from("bimodule actions commute"),
                        detail: format!("left/right translations fail to commute at degree {k}"),
                    });
                }
            }
        }
    }
    Ok(())
}

// ---------------------------------------------------------------------------
// Duality homology of X(G).

pub struct GroupDualityReport {
    pub t_dims: Vec<usize>,
    pub min_degree: i64,
    pub ranks: Vec<usize>,
    pub char_checks: usize,
}

fn splitmix(state: &mut u64) -> u64 {
    *state = state.wrapping_add(0x9e3779b97f4a7c15);
    let mut z = *state;
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58476d1ce4e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d049bb133111eb);
    z ^ (z >> 31)
}

fn trace(m: &SparseMat<Rat>) -> Rat {
    let mut t = Rat::zero();
    for (r, c, v) in m.entries() {
        if r == c {
            t = t.add(v);
        }
    }
    t
}

/// Pair-orbit model of `X(G) ⊗_{ℚG} X(G)^∨`: the degree-`(n−m)` piece has a
/// basis of diagonal right-translation orbits on (basis of `X^n`) × (basis of
/// `X^m`). Verifies `d² = 0`, that homology is `|G|` in degree 0 and zero
/// elsewhere, and that the degree-0 homology bimodule has the regular
/// bimodule character on `pairs` sampled group pairs.
pub fn group_duality_check(
    g: &FinGroup,
    bn: &BnData,
    order: &[usize],
    seed: u64,
    pairs: usize,
) -> Result<GroupDualityReport, BnError> {
    let xg = build_xg(g, bn, order)?;
    verify_xg_bimodule(g, bn, &xg).expect("X(G) bimodule structure");
    let cx = &xg.complex;
    let n_deg = cx.degrees();
    let mid = n_deg - 1;

    // per degree: (mask, slot, fiber) triples and fast action lookups
    let tri: Vec<Vec<(GenMask, usize, usize)>> = (0..n_deg)
        .map(|k| {
            let mut v = Vec::with_capacity(cx.dims[k]);
            for m in xg.bases.keys() {
                let (deg, _) = xg.offsets[m];
                if deg != k {
                    continue;
                }
                let bm = &xg.bases[m];
                for slot in 0..bm.slots.reps.len() {
                    for fi in 0..bm.n_fiber() {
                        v.push((*m, slot, fi));
                    }
                }
            }
            v
        })
        .collect();
    let act = |k: usize, i: usize, g0: GElem, left: bool| -> usize {
        let (m, slot, fi) = tri[k][i];
        let bm = &xg.bases[&m];
        let (_, off) = xg.offsets[&m];
        off + if left { bm.left_act(g, g0, slot, fi) } else { bm.right_act(g, g0, slot, fi) }
    };

    // orbit spaces per (n, m) block
    let mut orbit_id: BTreeMap<(usize, usize), Vec<u32>> = BTreeMap::new();
    let mut orbit_reps: BTreeMap<(usize, usize), Vec<(usize, usize)>> = BTreeMap::new();
    for n in 0..n_deg {
        for m in 0..n_deg {
            let (dn, dm) = (cx.dims[n], cx.dims[m]);
            let mut ids = vec![u32::MAX; dn * dm];
            let mut reps = Vec::new();
            for i in 0..dn {
                for j in 0..dm {
                    if ids[i * dm + j] != u32::MAX {
                        continue;
                    }
                    let o = reps.len() as u32;
                    reps.push((i, j));
                    for g0 in 0..g.order as GElem {
                        let (i2, j2) = (act(n, i, g0, false), act(m, j, g0, false));
                        ids[i2 * dm + j2] = o;
                    }
                }
            }
            orbit_id.insert((n, m), ids);
            orbit_reps.insert((n, m), reps);
        }
    }

    // T-degrees: tk = n − m + (n_deg − 1) runs over 0..2·n_deg − 1
    let t_deg = 2 * n_deg - 1;
    let mut t_dims = vec![0usize; t_deg];
    let mut base: Vec<BTreeMap<(usize, usize), usize>> = vec![BTreeMap::new(); t_deg];
    for n in 0..n_deg {
        for m in 0..n_deg {
            let tk = n + mid - m;
            base[tk].insert((n, m), t_dims[tk]);
            t_dims[tk] += orbit_reps[&(n, m)].len();
        }
    }

    let dt: Vec<SparseMat<Rat>> = cx.d.iter().map(|m| m.transpose()).collect();
    let mut dmats = Vec::new();
    for tk in 0..t_deg - 1 {
        let mut trips: Vec<(u32, u32, Rat)> = Vec::new();
        for (&(n, m), &off) in &base[tk] {
            let reps = &orbit_reps[&(n, m)];
            for (o, &(i, j)) in reps.iter().enumerate() {
                let col = (off + o) as u32;
                // d_X ⊗ 1
                if n + 1 < n_deg {
                    let tgt = &orbit_id[&(n + 1, m)];
                    let boff = base[tk + 1][&(n + 1, m)];
                    let dmj = cx.dims[m];
                    for &(r, ref v) in cx.d[n].col(i) {
                        let o2 = tgt[r as usize * dmj + j];
                        trips.push((
                            (boff + o2 as usize) as u32,
                            col,
                            v.clone(),
                        ));
                    }
                }
                // (−1)^n ⊗ precomposition with d
                if m >= 1 {
                    let tgt = &orbit_id[&(n, m - 1)];
                    let boff = base[tk + 1][&(n, m - 1)];
                    let dmj = cx.dims[m - 1];
                    let sign = if n % 2 == 0 { rat_int(1) } else { rat_int(-1) };
                    for &(j2, ref v) in dt[m - 1].col(j) {
                        let o2 = tgt[i * dmj + j2 as usize];
                        trips.push((
                            (boff + o2 as usize) as u32,
                            col,
                            sign.mul(v),
                        ));
                    }
                }
            }
        }
        dmats.push(SparseMat::from_triplets(t_dims[tk + 1], t_dims[tk], trips));
    }
    let t_cx = Complex::new(t_dims.clone(), dmats);
    t_cx.verify_d2().expect("duality complex differential squares to zero");

    let ranks = homology_ranks_rat(&t_cx);
    for (tk, &r) in ranks.iter().enumerate() {
        let expect = if tk == mid { g.order } else { 0 };
        assert_eq!(r, expect, "duality homology rank at degree {}", tk as i64 - mid as i64);
    }

    // Degree-0 homology as a bimodule: harmonic model. Both translation
    // actions permute the orbit basis, so they preserve the harmonic space.
    let up = &t_cx.d[mid];
    let down_t = t_cx.d[mid - 1].transpose();
    let mut stack_trips: Vec<(u32, u32, Rat)> = Vec::new();
    for (r, c, v) in up.entries() {
        stack_trips.push((r, c, v.clone()));
    }
    for (r, c, v) in down_t.entries() {
        stack_trips.push((r + up.rows() as u32, c, v.clone()));
    }
    let stacked =
        SparseMat::from_triplets(up.rows() + down_t.rows(), t_dims[mid], stack_trips);
    let h_cols = kernel_basis(&stacked);
    assert_eq!(h_cols.len(), g.order, "harmonic space has the wrong dimension");
    let h = SparseMat::from_triplets(
        t_dims[mid],
        h_cols.len(),
        h_cols
            .iter()
            .enumerate()
            .flat_map(|(j, col)| col.iter().map(move |(r, v)| (*r, j as u32, v.clone())))
            .collect::<Vec<_>>(),
    );
    let gram_inv = inverse(&h.transpose().mul(&h)).expect("harmonic Gram matrix is invertible");

    let mut state = seed;
    let mut checks = 0usize;
    for _ in 0..pairs {
        let g1 = (splitmix(&mut state) % g.order as u64) as GElem;
        let g2 = (splitmix(&mut state) % g.order as u64) as GElem;
        // action (g1, g2): pair (i, j) ↦ (g1·i, g2⁻¹·j), then normalize
        let g2i = g.inv(g2);
        let mut trips = Vec::new();
        for (&(n, m), &off) in &base[mid] {
            let ids = &orbit_id[&(n, m)];
            let dmj = cx.dims[m];
            for (o, &(i, j)) in orbit_reps[&(n, m)].iter().enumerate() {
                let (i2, j2) = (act(n, i, g1, true), act(m, j, g2i, true));
                let o2 = ids[i2 * dmj + j2] as usize;
                trips.push(((off + o2) as u32, (off + o) as u32, rat_int(1)));
            }
        }
        let a = SparseMat::from_triplets(t_dims[mid], t_dims[mid], trips);
        let tr = trace(&gram_inv.mul(&h.transpose().mul(&a.mul(&h))));
        let fixed = (0..g.order as GElem)
            .filter(|&x| g.mul(g.mul(g1, x), g2) == x)
            .count();
        assert_eq!(tr, rat_int(fixed as i128), "bimodule character mismatch");
        checks += 1;
    }

    Ok(GroupDualityReport {
        t_dims,
        min_degree: -(mid as i64),
        ranks,
        char_checks: checks,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bnpair::{build_bn, GroupKind};

    #[test]
    fn bimodule_dims_gl2() {
        let g = FinGroup::build(GroupKind::Gl, 2, 2).unwrap();
        let bn = build_bn(&g).unwrap();
        let b0 = bimodule_xg(&g, &bn, 0).unwrap();
        let b1 = bimodule_xg(&g, &bn, 1).unwrap();
        assert_eq!(b0.dim, 9);
        assert_eq!(b1.dim, 6);
        assert!(b0.matrix_rank_checked && b1.matrix_rank_checked);
    }

    #[test]
    fn xg_complex_and_bimodule_sl2_f3() {
        let g = FinGroup::build(GroupKind::Sl, 2, 3).unwrap();
        let bn = build_bn(&g).unwrap();
        let xg = build_xg(&g, &bn, &[0]).unwrap();
        assert_eq!(xg.complex.dims, vec![32, 24]);
        verify_xg_bimodule(&g, &bn, &xg).unwrap();
    }

    #[test]
    fn xg_full_level_is_regular_bimodule() {
        let g = FinGroup::build(GroupKind::Gl, 2, 2).unwrap();
        let bn = build_bn(&g).unwrap();
        let b = bimodule_xg(&g, &bn, bn.w.full_mask()).unwrap();
        assert_eq!(b.dim, g.order);
    }

    #[test]
    fn duality_gl2_f2() {
        let g = FinGroup::build(GroupKind::Gl, 2, 2).unwrap();
        let bn = build_bn(&g).unwrap();
        let rep = group_duality_check(&g, &bn, &[0], 0, 5).unwrap();
        assert_eq!(rep.t_dims, vec![9, 24, 9]);
        assert_eq!(rep.ranks, vec![0, 6, 0]);
        assert_eq!(rep.char_checks, 5);
    }

    #[test]
    fn guard_rejects_gl3_full_bimodule() {
        let g = FinGroup::build(GroupKind::Gl, 3, 2).unwrap();
        let bn = build_bn(&g).unwrap();
        assert!(matches!(
            bimodule_xg(&g, &bn, bn.w.full_mask()),
            Err(BnError::Guard(_))
        ));
    }
}
