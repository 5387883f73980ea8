//! Restriction of the opposite-parabolic coset complex to a standard
//! parabolic subgroup, certified as a homotopy equivalence of right-module
//! complexes onto the Levi-level coset complex.
//!
//! Degree `|I|` of the source has basis the cosets `P_I⁻\G`, grouped into
//! blocks by the double cosets `P_I⁻\G/P_{I0}`; the projection keeps exactly
//! the identity-blocks with `I ⊆ I0`, sending `[P_I⁻]z ↦ [P_I⁻∩L_{I0}]z` for
//! `z ∈ P_{I0}`. The complementary blocks are contracted by coset maps
//! `[P_I⁻]ẇz ↦ [P_{I'}⁻]ẇ'z` whose well-definedness is an explicit stabilizer
//! inclusion, checked element by element before anything is assembled.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use super::{intersect, mem, right_cosets, small_gens, BnData, BnError, CosetSpace, FinGroup, GElem};
use crate::chain::complex::{
    compose, sign_before, submasks, verify_chain_map, verify_equivalence, ChainMap, Complex,
    EquivCert, SplitSpec,
};
use crate::chain::sparse::SparseMat;
use crate::coxeter::GenMask;
use crate::parabolic::{Coset, CosetScheme, SigmaData};

pub struct Theorem20Data {
    pub y: Complex<i128>,
    pub yp: Complex<i128>,
    pub cert: EquivCert<i128>,
    /// Per degree: each block's coset (in the Weyl indexing) and the sorted
    /// coset ids of `P_I⁻\G` it contains, in basis order.
    pub blocks: Vec<Vec<(Coset, Vec<u32>)>>,
    pub y_labels: Vec<Vec<String>>,
    pub yp_labels: Vec<Vec<String>>,
    pub inclusions_checked: usize,
}

pub fn theorem20_certificate(
    g: &FinGroup,
    bn: &BnData,
    scheme: &CosetScheme<'_>,
    sd: &SigmaData,
) -> Result<Theorem20Data, BnError> {
    assert!(core::ptr::eq(scheme.w, &bn.w), "scheme must be built on the group's Weyl group");
    let w = &bn.w;
    let i0 = scheme.i0;
    let p_i0: &[GElem] = &bn.p[i0 as usize];
    let n_deg = w.n_gens() + 1;

    // coset spaces P_I⁻\G per mask
    let minus: Vec<CosetSpace> = (0..(1usize << w.n_gens()))
        .map(|m| right_cosets(g, &bn.p_minus[m]))
        .collect();

    // blocks: per degree, per family coset, the sorted P_I⁻-coset ids of its
    // double-coset orbit under right P_{I0}-translation
    let family = scheme.a_cosets();
    let mut blocks: Vec<Vec<(Coset, Vec<u32>)>> = Vec::new();
    let mut offsets: BTreeMap<Coset, usize> = BTreeMap::new();
    let mut dims = vec![0usize; n_deg];
    for (k, layer) in family.iter().enumerate() {
        let mut row = Vec::new();
        for &a in layer {
            let wr = bn.w_reps[a.rep as usize];
            let space = &minus[a.i_mask as usize];
            let mut ids: Vec<u32> =
                p_i0.iter().map(|&z| space.of_elem[g.mul(wr, z) as usize]).collect();
            ids.sort_unstable();
            ids.dedup();
            offsets.insert(a, dims[k]);
            dims[k] += ids.len();
            row.push((a, ids));
        }
        // the blocks at fixed I partition the cosets of P_I⁻\G
        let mut by_mask: BTreeMap<GenMask, Vec<u32>> = BTreeMap::new();
        for (a, ids) in &row {
            by_mask.entry(a.i_mask).or_default().extend(ids.iter().copied());
        }
        for (m, mut ids) in by_mask {
            let total = minus[m as usize].reps.len();
            ids.sort_unstable();
            assert_eq!(ids.len(), total, "blocks must cover P_I⁻\\G for I = {m:b}");
            assert!(ids.windows(2).all(|p| p[0] < p[1]), "blocks must be disjoint");
        }
        blocks.push(row);
    }

    // position of a coset id inside its block
    let pos_in = |a: &Coset, id: u32| -> usize {
        let (_, ids) = blocks[a.i_mask.count_ones() as usize]
            .iter()
            .find(|(c, _)| c == a)
            .expect("block present");
        ids.binary_search(&id).expect("coset id inside its block")
    };

    // source differential: coarsen each coset, block structure respected
    let mut dmats = Vec::new();
    for k in 0..n_deg - 1 {
        let mut trips = Vec::new();
        for (a, ids) in &blocks[k] {
            let off = offsets[a];
            for (pos, &cid) in ids.iter().enumerate() {
                let x = minus[a.i_mask as usize].reps[cid as usize];
                for s in 0..w.n_gens() {
                    if a.i_mask & (1 << s) != 0 {
                        continue;
                    }
                    let b = scheme.coset_union(*a, s);
                    let tid = minus[b.i_mask as usize].of_elem[x as usize];
                    let tpos = pos_in(&b, tid);
                    let sign = sign_before(&scheme.order, a.i_mask, s) as i128;
                    trips.push(((offsets[&b] + tpos) as u32, (off + pos) as u32, sign));
                }
            }
        }
        dmats.push(SparseMat::from_triplets(dims[k + 1], dims[k], trips));
    }
    let y = Complex::new(dims.clone(), dmats);
    y.verify_d2().expect("restricted coset complex differential squares to zero");

    // target: Levi-level coset complex, cosets (P_K⁻ ∩ L_{I0})\P_{I0}
    let i0_elems = p_i0;
    let local_cosets = |h: &[GElem]| -> (Vec<GElem>, BTreeMap<GElem, u32>) {
        let mut of: BTreeMap<GElem, u32> = BTreeMap::new();
        let mut reps = Vec::new();
        for &x in i0_elems {
            if of.contains_key(&x) {
                continue;
            }
            let c = reps.len() as u32;
            reps.push(x);
            for &hh in h {
                of.insert(g.mul(hh, x), c);
            }
        }
        (reps, of)
    };
    let mut lv_reps: BTreeMap<GenMask, Vec<GElem>> = BTreeMap::new();
    let mut lv_of: BTreeMap<GenMask, BTreeMap<GElem, u32>> = BTreeMap::new();
    let mut yp_offsets: BTreeMap<GenMask, usize> = BTreeMap::new();
    let yp_degs = i0.count_ones() as usize + 1;
    let mut yp_dims = vec![0usize; yp_degs];
    for m in submasks(i0) {
        let h = intersect(&bn.p_minus[m as usize], &bn.levi[i0 as usize]);
        let (reps, of) = local_cosets(&h);
        let k = m.count_ones() as usize;
        yp_offsets.insert(m, yp_dims[k]);
        yp_dims[k] += reps.len();
        lv_reps.insert(m, reps);
        lv_of.insert(m, of);
    }
    let mut yp_d = Vec::new();
    for k in 0..yp_degs - 1 {
        let mut trips = Vec::new();
        for m in submasks(i0) {
            if m.count_ones() as usize != k {
                continue;
            }
            let off = yp_offsets[&m];
            for (ci, &r) in lv_reps[&m].iter().enumerate() {
                for s in 0..w.n_gens() {
                    if i0 & (1 << s) == 0 || m & (1 << s) != 0 {
                        continue;
                    }
                    let big = m | (1 << s);
                    let tgt = lv_of[&big][&r];
                    let sign = sign_before(&scheme.order, m, s) as i128;
                    trips.push((
                        (yp_offsets[&big] + tgt as usize) as u32,
                        (off + ci) as u32,
                        sign,
                    ));
                }
            }
        }
        yp_d.push(SparseMat::from_triplets(yp_dims[k + 1], yp_dims[k], trips));
    }
    let yp = Complex::new(yp_dims.clone(), yp_d);
    yp.verify_d2().expect("Levi coset complex differential squares to zero");

    // projection p (identity blocks only) and section s; both coefficient 1
    let mut p_mats = Vec::new();
    let mut s_mats = Vec::new();
    for k in 0..n_deg {
        let ypk = if k < yp_degs { yp_dims[k] } else { 0 };
        let mut p_trips = Vec::new();
        let mut s_trips = Vec::new();
        for (a, ids) in &blocks[k] {
            if !scheme.is_trivial(a) {
                continue;
            }
            let off = offsets[a];
            let yoff = yp_offsets[&a.i_mask];
            assert_eq!(ids.len(), lv_reps[&a.i_mask].len(), "projection must be a coset bijection");
            let mut fwd: Vec<Option<u32>> = vec![None; ids.len()];
            for &z in i0_elems {
                let src = minus[a.i_mask as usize].of_elem[z as usize];
                let pos = ids.binary_search(&src).expect("identity block contains P_{I0}");
                let dst = lv_of[&a.i_mask][&z];
                match fwd[pos] {
                    None => fwd[pos] = Some(dst),
                    Some(prev) => assert_eq!(prev, dst, "projection must be well defined"),
                }
            }
            for (pos, dst) in fwd.iter().enumerate() {
                let dst = dst.expect("projection must cover the block");
                p_trips.push(((yoff + dst as usize) as u32, (off + pos) as u32, 1i128));
                s_trips.push(((off + pos) as u32, (yoff + dst as usize) as u32, 1i128));
            }
        }
        p_mats.push(SparseMat::from_triplets(ypk, dims[k], p_trips));
        if k < yp_degs {
            s_mats.push(SparseMat::from_triplets(dims[k], ypk, s_trips));
        } else {
            assert!(s_trips.is_empty(), "no trivial blocks beyond the Levi degrees");
        }
    }
    let p_map = ChainMap::new(0, p_mats);
    let s_map = ChainMap::new(0, s_mats);

    // complementary coordinates, in basis order (ascending per degree)
    let z: Vec<Vec<u32>> = (0..n_deg)
        .map(|k| {
            let mut v = Vec::new();
            for (a, ids) in &blocks[k] {
                if scheme.is_trivial(a) {
                    continue;
                }
                let off = offsets[a] as u32;
                v.extend((0..ids.len() as u32).map(|i| off + i));
            }
            v
        })
        .collect();
    let mut z_off: BTreeMap<Coset, usize> = BTreeMap::new();
    let mut z_dims = vec![0usize; n_deg];
    for (k, layer) in blocks.iter().enumerate() {
        for (a, ids) in layer {
            if !scheme.is_trivial(a) {
                z_off.insert(*a, z_dims[k]);
                z_dims[k] += ids.len();
            }
        }
    }

    // stabilizers H_a = {x ∈ P_{I0} : ẇ_a x ẇ_a⁻¹ ∈ P_{S(a)}⁻}; the coset map
    // of each homotopy coefficient needs H_a ⊆ H_b, which we check literally
    let stab = |a: &Coset| -> Vec<GElem> {
        let wr = bn.w_reps[a.rep as usize];
        let wri = g.inv(wr);
        i0_elems
            .iter()
            .copied()
            .filter(|&x| mem(&bn.p_minus[a.i_mask as usize], g.mul(g.mul(wr, x), wri)))
            .collect()
    };
    let mut stabs: BTreeMap<Coset, Vec<GElem>> = BTreeMap::new();
    let mut failures: Vec<(String, String)> = Vec::new();
    let mut inclusions_checked = 0usize;
    for (a, b, mv) in &sd.mcoeffs {
        if *mv == 0 {
            continue;
        }
        for c in [a, b] {
            if !stabs.contains_key(c) {
                stabs.insert(*c, stab(c));
            }
        }
        let (ha, hb) = (&stabs[a], &stabs[b]);
        if ha.iter().any(|&x| !mem(hb, x)) {
            failures.push((scheme.coset_label(a), scheme.coset_label(b)));
        } else {
            inclusions_checked += 1;
        }
    }
    if !failures.is_empty() {
        return Err(BnError::Inclusion(failures));
    }

    // block-size sanity: each block is P_{I0}/H_a as a right coset space
    for layer in &blocks {
        for (a, ids) in layer {
            let ha = stabs.get(a).map(|v| v.len()).unwrap_or_else(|| stab(a).len());
            assert_eq!(ids.len() * ha, i0_elems.len(), "block size must be the coset count");
        }
    }

    // the contracting homotopy on the complementary blocks: for each
    // coefficient m_{a,b}, the coset map ẇ_a z ↦ ẇ_b z, scaled by m
    let mut sig_mats = Vec::new();
    for k in 0..n_deg {
        let rows = if k == 0 { 0 } else { z_dims[k - 1] };
        let mut trips = Vec::new();
        for (a, b, mv) in &sd.mcoeffs {
            if a.i_mask.count_ones() as usize != k || *mv == 0 {
                continue;
            }
            let (a_block, b_block) = (&blocks[k], &blocks[k - 1]);
            let ids_a = &a_block.iter().find(|(c, _)| c == a).expect("source block").1;
            let ids_b = &b_block.iter().find(|(c, _)| c == b).expect("target block").1;
            let (wa, wb) = (bn.w_reps[a.rep as usize], bn.w_reps[b.rep as usize]);
            let mut fwd: Vec<Option<u32>> = vec![None; ids_a.len()];
            for &zel in i0_elems {
                let src = minus[a.i_mask as usize].of_elem[g.mul(wa, zel) as usize];
                let dst = minus[b.i_mask as usize].of_elem[g.mul(wb, zel) as usize];
                let spos = ids_a.binary_search(&src).expect("source coset in its block");
                match fwd[spos] {
                    None => fwd[spos] = Some(dst),
                    Some(prev) => assert_eq!(prev, dst, "coset map must be well defined"),
                }
            }
            for (spos, dst) in fwd.iter().enumerate() {
                let dst = dst.expect("coset map must cover the block");
                let dpos = ids_b.binary_search(&dst).expect("target coset in its block");
                trips.push((
                    (z_off[b] + dpos) as u32,
                    (z_off[a] + spos) as u32,
                    *mv,
                ));
            }
        }
        sig_mats.push(SparseMat::from_triplets(rows, z_dims[k], trips));
    }
    let sigma_z = ChainMap::new(-1, sig_mats);

    let cert = split_equivalence_i128(&y, &yp, &p_map, &s_map, &z, &sigma_z);
    verify_equivalence(&y, &yp, &cert).expect("restriction equivalence verifies");

    // right P_{I0}-equivariance of the whole equivalence, on generators
    let pg = small_gens(g, i0_elems);
    for &z0 in &pg {
        let act_y = right_translation_y(g, &minus, &blocks, &offsets, &dims, z0);
        verify_chain_map("right translation on source", &act_y, &y, &y)
            .expect("right translation is a chain map");
        let mut act_p_mats = Vec::new();
        for k in 0..yp_degs {
            let n = yp_dims[k];
            let mut trips = Vec::new();
            for m in submasks(i0) {
                if m.count_ones() as usize != k {
                    continue;
                }
                let off = yp_offsets[&m];
                for (ci, &r) in lv_reps[&m].iter().enumerate() {
                    let dst = lv_of[&m][&g.mul(r, z0)];
                    trips.push(((off + dst as usize) as u32, (off + ci) as u32, 1i128));
                }
            }
            act_p_mats.push(SparseMat::from_triplets(n, n, trips));
        }
        let act_yp = ChainMap::new(0, act_p_mats);
        verify_chain_map("right translation on target", &act_yp, &yp, &yp)
            .expect("right translation is a chain map");
        let lhs = compose(&p_map, &act_y, &y, &y, &yp);
        let rhs = compose(&act_yp, &p_map, &y, &yp, &yp);
        assert_eq!(lhs.mats, rhs.mats, "projection must be right-equivariant");
        let lhs = compose(&s_map, &act_yp, &yp, &yp, &y);
        let rhs = compose(&act_y, &s_map, &yp, &y, &y);
        assert_eq!(lhs.mats, rhs.mats, "section must be right-equivariant");
    }

    let y_labels: Vec<Vec<String>> = (0..n_deg)
        .map(|k| {
            let mut v = Vec::new();
            for (a, ids) in &blocks[k] {
                for &cid in ids.iter() {
                    v.push(format!(
                        "{}|g{}",
                        scheme.coset_label(a),
                        minus[a.i_mask as usize].reps[cid as usize]
                    ));
                }
            }
            v
        })
        .collect();
    let yp_labels: Vec<Vec<String>> = (0..yp_degs)
        .map(|k| {
            let mut v = Vec::new();
            for m in submasks(i0) {
                if m.count_ones() as usize != k {
                    continue;
                }
                let c = Coset { i_mask: m, rep: 0 };
                for &r in &lv_reps[&m] {
                    v.push(format!("{}|g{}", scheme.coset_label(&c), r));
                }
            }
            v
        })
        .collect();

    Ok(Theorem20Data {
        y,
        yp,
        cert,
        blocks,
        y_labels,
        yp_labels,
        inclusions_checked,
    })
}

fn right_translation_y(
    g: &FinGroup,
    minus: &[CosetSpace],
    blocks: &[Vec<(Coset, Vec<u32>)>],
    offsets: &BTreeMap<Coset, usize>,
    dims: &[usize],
    z0: GElem,
) -> ChainMap<i128> {
    let mut mats = Vec::new();
    for (k, layer) in blocks.iter().enumerate() {
        let mut trips = Vec::new();
        for (a, ids) in layer {
            let off = offsets[a];
            let space = &minus[a.i_mask as usize];
            for (pos, &cid) in ids.iter().enumerate() {
                let dst = space.of_elem[g.mul(space.reps[cid as usize], z0) as usize];
                let dpos = ids
                    .binary_search(&dst)
                    .expect("right translation preserves each block");
                trips.push(((off + dpos) as u32, (off + pos) as u32, 1i128));
            }
        }
        mats.push(SparseMat::from_triplets(dims[k], dims[k], trips));
    }
    ChainMap::new(0, mats)
}

fn split_equivalence_i128(
    y: &Complex<i128>,
    yp: &Complex<i128>,
    p: &ChainMap<i128>,
    s: &ChainMap<i128>,
    z: &[Vec<u32>],
    sigma_z: &ChainMap<i128>,
) -> EquivCert<i128> {
    crate::chain::complex::split_equivalence(SplitSpec { y, yp, p, s, z, sigma_z })
        .expect("split equivalence hypotheses verify")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bnpair::{build_bn, FinGroup, GroupKind};

    #[test]
    fn gl2_f2_restriction() {
        let g = FinGroup::build(GroupKind::Gl, 2, 2).unwrap();
        let bn = build_bn(&g).unwrap();
        let sc = CosetScheme::new(&bn.w, 0, None).unwrap();
        let sd = sc.build_sigma();
        let data = theorem20_certificate(&g, &bn, &sc, &sd).unwrap();
        assert_eq!(data.y.dims, vec![3, 1]);
        // (B⁻ ∩ T)\B has |U| cosets
        assert_eq!(data.yp.dims, vec![2]);
    }

    #[test]
    fn sl2_f3_restriction() {
        let g = FinGroup::build(GroupKind::Sl, 2, 3).unwrap();
        let bn = build_bn(&g).unwrap();
        let sc = CosetScheme::new(&bn.w, 0, None).unwrap();
        let sd = sc.build_sigma();
        let data = theorem20_certificate(&g, &bn, &sc, &sd).unwrap();
        assert_eq!(data.y.dims, vec![4, 1]);
        assert_eq!(data.yp.dims, vec![3]);
        assert!(data.inclusions_checked > 0);
    }

    #[test]
    fn gl3_f2_restriction_both_singletons() {
        let g = FinGroup::build(GroupKind::Gl, 3, 2).unwrap();
        let bn = build_bn(&g).unwrap();
        for i0 in [0b01u32, 0b10] {
            let sc = CosetScheme::new(&bn.w, i0, None).unwrap();
            let sd = sc.build_sigma();
            let data = theorem20_certificate(&g, &bn, &sc, &sd).unwrap();
            assert_eq!(data.y.dims, vec![21, 14, 1]);
            // cosets of (P_K⁻ ∩ L_{I0})\P_{I0} for K ⊆ I0
            assert_eq!(data.yp.dims, vec![12, 4]);
        }
    }
}
