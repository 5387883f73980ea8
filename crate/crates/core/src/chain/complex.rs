//! Cochain complexes of finitely generated free modules, chain maps,
//! contracting homotopies and split chain equivalences.
//!
//! Grading convention: degrees run upward, `d[k] : C^k -> C^{k+1}`.
//! Every verifier returns the first offending matrix entry on failure;
//! there are no tolerances.

use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec::Vec;

use crate::chain::sparse::SparseMat;
use crate::ring::Ring;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ChainError {
    #[error("{check}: {detail}")]
    Shape { check: String, detail: String },
    #[error("{check} fails at degree {degree}: entry ({row},{col}) = {value}")]
    Nonzero { check: String, degree: usize, row: u32, col: u32, value: String },
}

fn expect_zero<R: Ring>(
    check: &str,
    degree: usize,
    m: &SparseMat<R>,
) -> Result<(), ChainError> {
    match m.first_entry() {
        None => Ok(()),
        Some((r, c, v)) => Err(ChainError::Nonzero {
            check: String::from(check),
            degree,
            row: r,
            col: c,
            value: v.show(),
        }),
    }
}

fn shape_err(check: &str, detail: String) -> ChainError {
    ChainError::Shape { check: String::from(check), detail }
}

/// Cochain complex of free modules; `dims[k]` is the rank in degree `k`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Complex<R> {
    pub dims: Vec<usize>,
    /// `d[k] : C^k -> C^{k+1}`; length `dims.len() - 1` (empty if 0 or 1 degrees).
    pub d: Vec<SparseMat<R>>,
}

impl<R: Ring> Complex<R> {
    pub fn new(dims: Vec<usize>, d: Vec<SparseMat<R>>) -> Self {
        assert_eq!(d.len(), dims.len().saturating_sub(1));
        for (k, m) in d.iter().enumerate() {
            assert_eq!(m.cols(), dims[k], "d[{k}] has wrong source rank");
            assert_eq!(m.rows(), dims[k + 1], "d[{k}] has wrong target rank");
        }
        Complex { dims, d }
    }

    /// Single free module concentrated in degree 0.
    pub fn concentrated(rank: usize) -> Self {
        Complex { dims: alloc::vec![rank], d: Vec::new() }
    }

    pub fn degrees(&self) -> usize {
        self.dims.len()
    }

    /// Rank in degree `k`; 0 outside the stored range (including `k < 0`).
    pub fn dim_i(&self, k: i64) -> usize {
        if k < 0 {
            0
        } else {
            self.dims.get(k as usize).copied().unwrap_or(0)
        }
    }

    /// `d^k` with out-of-range degrees materialized as zero matrices.
    pub fn d_at(&self, k: i64) -> SparseMat<R> {
        if k >= 0 {
            if let Some(m) = self.d.get(k as usize) {
                return m.clone();
            }
        }
        SparseMat::zero(self.dim_i(k + 1), self.dim_i(k))
    }

    pub fn total_dim(&self) -> usize {
        self.dims.iter().sum()
    }

    pub fn verify_d2(&self) -> Result<(), ChainError> {
        for k in 0..self.d.len().saturating_sub(1) {
            expect_zero("d∘d = 0", k, &self.d[k + 1].mul(&self.d[k]))?;
        }
        Ok(())
    }
}

/// Graded map of complexes: `mats[k] : src^k -> dst^{k + dg}`.
///
/// `mats` always covers every source degree, with zero-rank shapes where the
/// target degree falls outside the destination complex.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChainMap<R> {
    pub dg: i32,
    pub mats: Vec<SparseMat<R>>,
}

impl<R: Ring> ChainMap<R> {
    pub fn new(dg: i32, mats: Vec<SparseMat<R>>) -> Self {
        ChainMap { dg, mats }
    }

    pub fn identity(c: &Complex<R>) -> Self {
        ChainMap { dg: 0, mats: c.dims.iter().map(|&n| SparseMat::identity(n)).collect() }
    }

    pub fn zero(src: &Complex<R>, dst: &Complex<R>, dg: i32) -> Self {
        let mats = (0..src.degrees())
            .map(|k| SparseMat::zero(dst.dim_i(k as i64 + dg as i64), src.dims[k]))
            .collect();
        ChainMap { dg, mats }
    }

    /// Component at source degree `k`, materialized as a zero matrix of the
    /// right shape when out of range.
    pub fn mat_at(&self, k: i64, src: &Complex<R>, dst: &Complex<R>) -> SparseMat<R> {
        if k >= 0 {
            if let Some(m) = self.mats.get(k as usize) {
                return m.clone();
            }
        }
        SparseMat::zero(dst.dim_i(k + self.dg as i64), src.dim_i(k))
    }

    pub fn check_shape(
        &self,
        name: &str,
        src: &Complex<R>,
        dst: &Complex<R>,
    ) -> Result<(), ChainError> {
        if self.mats.len() != src.degrees() {
            return Err(shape_err(
                name,
                alloc::format!(
                    "expected {} degree components, got {}",
                    src.degrees(),
                    self.mats.len()
                ),
            ));
        }
        for (k, m) in self.mats.iter().enumerate() {
            let want_rows = dst.dim_i(k as i64 + self.dg as i64);
            if m.cols() != src.dims[k] || m.rows() != want_rows {
                return Err(shape_err(
                    name,
                    alloc::format!(
                        "degree {k}: shape {}x{}, expected {}x{}",
                        m.rows(),
                        m.cols(),
                        want_rows,
                        src.dims[k]
                    ),
                ));
            }
        }
        Ok(())
    }
}

/// `a ∘ b` where `b : b_src -> mid` and `a : mid -> a_dst`.
pub fn compose<R: Ring>(
    a: &ChainMap<R>,
    b: &ChainMap<R>,
    b_src: &Complex<R>,
    mid: &Complex<R>,
    a_dst: &Complex<R>,
) -> ChainMap<R> {
    let dg = a.dg + b.dg;
    let mats = (0..b_src.degrees())
        .map(|k| {
            let bk = b.mat_at(k as i64, b_src, mid);
            let ak = a.mat_at(k as i64 + b.dg as i64, mid, a_dst);
            ak.mul(&bk)
        })
        .collect();
    ChainMap { dg, mats }
}

/// Check `d_dst ∘ f = f ∘ d_src` in every degree.
pub fn verify_chain_map<R: Ring>(
    name: &str,
    f: &ChainMap<R>,
    src: &Complex<R>,
    dst: &Complex<R>,
) -> Result<(), ChainError> {
    f.check_shape(name, src, dst)?;
    for k in 0..src.degrees() {
        let k = k as i64;
        let lhs = dst.d_at(k + f.dg as i64).mul(&f.mat_at(k, src, dst));
        let rhs = f.mat_at(k + 1, src, dst).mul(&src.d_at(k));
        expect_zero(
            &alloc::format!("{name} is a chain map"),
            k as usize,
            &lhs.sub(&rhs),
        )?;
    }
    Ok(())
}

/// Check that a degree-0 endo-map equals the identity in every degree.
pub fn verify_is_identity<R: Ring>(
    name: &str,
    f: &ChainMap<R>,
    space: &Complex<R>,
) -> Result<(), ChainError> {
    f.check_shape(name, space, space)?;
    for k in 0..space.degrees() {
        let id = SparseMat::identity(space.dims[k]);
        expect_zero(name, k, &f.mats[k].sub(&id))?;
    }
    Ok(())
}

/// Check `lhs = d∘h + h∘d` for a degree-0 map `lhs` and degree(-1) map `h`
/// on the same complex.
pub fn verify_homotopy_formula<R: Ring>(
    name: &str,
    space: &Complex<R>,
    lhs: &ChainMap<R>,
    h: &ChainMap<R>,
) -> Result<(), ChainError> {
    lhs.check_shape(name, space, space)?;
    h.check_shape(name, space, space)?;
    if h.dg != -1 {
        return Err(shape_err(name, String::from("homotopy must have degree -1")));
    }
    for k in 0..space.degrees() {
        let ki = k as i64;
        let dh = space.d_at(ki - 1).mul(&h.mat_at(ki, space, space));
        let hd = h.mat_at(ki + 1, space, space).mul(&space.d_at(ki));
        expect_zero(name, k, &lhs.mats[k].sub(&dh).sub(&hd))?;
    }
    Ok(())
}

/// Check that `sigma` is a contracting homotopy: `σd + dσ = Id` everywhere.
/// This forces the complex to be exact with zero homology in all degrees.
pub fn verify_contraction<R: Ring>(
    space: &Complex<R>,
    sigma: &ChainMap<R>,
) -> Result<(), ChainError> {
    space.verify_d2()?;
    let id = ChainMap::identity(space);
    verify_homotopy_formula("σd + dσ = Id", space, &id, sigma)
}

/// A split chain equivalence `p : Y -> Y'`, `g : Y' -> Y`, with
/// `pg = Id` and `Id - gp = dk + kd`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EquivCert<R> {
    pub p: ChainMap<R>,
    pub g: ChainMap<R>,
    pub k: ChainMap<R>,
}

pub fn verify_equivalence<R: Ring>(
    y: &Complex<R>,
    yp: &Complex<R>,
    cert: &EquivCert<R>,
) -> Result<(), ChainError> {
    y.verify_d2()?;
    yp.verify_d2()?;
    verify_chain_map("p", &cert.p, y, yp)?;
    verify_chain_map("g", &cert.g, yp, y)?;
    let pg = compose(&cert.p, &cert.g, yp, y, yp);
    verify_is_identity("pg = Id", &pg, yp)?;
    let gp = compose(&cert.g, &cert.p, y, yp, y);
    let id = ChainMap::identity(y);
    let lhs = ChainMap {
        dg: 0,
        mats: (0..y.degrees()).map(|k| id.mats[k].sub(&gp.mats[k])).collect(),
    };
    verify_homotopy_formula("Id - gp = dk + kd", y, &lhs, &cert.k)
}

/// Input of [`split_equivalence`]: a degreewise-split surjection `p` with
/// section `s`, whose kernel is spanned by the coordinate subsets `z`, plus a
/// contracting homotopy `sigma_z` of that kernel subcomplex (given in kernel
/// coordinates).
pub struct SplitSpec<'a, R> {
    pub y: &'a Complex<R>,
    pub yp: &'a Complex<R>,
    pub p: &'a ChainMap<R>,
    pub s: &'a ChainMap<R>,
    pub z: &'a [Vec<u32>],
    pub sigma_z: &'a ChainMap<R>,
}

/// Upgrade a coordinate-split surjection with contractible kernel to a full
/// chain equivalence. All hypotheses and the resulting identities are
/// verified; nothing is trusted.
pub fn split_equivalence<R: Ring>(spec: SplitSpec<'_, R>) -> Result<EquivCert<R>, ChainError> {
    let SplitSpec { y, yp, p, s, z, sigma_z } = spec;
    let check = "split_equivalence input";
    if z.len() != y.degrees() {
        return Err(shape_err(check, String::from("kernel coordinate list length mismatch")));
    }
    for (k, zk) in z.iter().enumerate() {
        if !zk.windows(2).all(|w| w[0] < w[1]) {
            return Err(shape_err(check, alloc::format!("z[{k}] not strictly sorted")));
        }
        if zk.iter().any(|&i| (i as usize) >= y.dims[k]) {
            return Err(shape_err(check, alloc::format!("z[{k}] index out of range")));
        }
        if y.dims[k] != yp.dim_i(k as i64) + zk.len() {
            return Err(shape_err(
                check,
                alloc::format!(
                    "degree {k}: dim Y = {} but dim Y' + |Z| = {}",
                    y.dims[k],
                    yp.dim_i(k as i64) + zk.len()
                ),
            ));
        }
    }
    y.verify_d2()?;
    yp.verify_d2()?;
    verify_chain_map("p", p, y, yp)?;
    s.check_shape("s", yp, y)?;
    let ps = compose(p, s, yp, y, yp);
    verify_is_identity("ps = Id", &ps, yp)?;
    // p vanishes on the declared kernel coordinates.
    for k in 0..y.degrees() {
        expect_zero("p∘ι = 0", k, &p.mats[k].select_cols(&z[k]))?;
    }

    // The kernel coordinates span a subcomplex; extract its differential.
    let mut dz = Vec::new();
    for k in 0..z.len().saturating_sub(1) {
        let dk = y.d_at(k as i64).select_cols(&z[k]);
        let restricted = dk.select_rows_strict(&z[k + 1]).map_err(|(r, c)| {
            ChainError::Nonzero {
                check: String::from("d(Z) ⊆ Z"),
                degree: k,
                row: r,
                col: z[k][c as usize],
                value: String::from("nonzero outside kernel coordinates"),
            }
        })?;
        dz.push(restricted);
    }
    let z_complex = Complex::new(z.iter().map(|zk| zk.len()).collect(), dz);
    verify_contraction(&z_complex, sigma_z)?;

    // g = s - ι σ_Z D_Z  with  D = d_Y s - s d_{Y'}.
    let mut g_mats = Vec::with_capacity(yp.degrees());
    for k in 0..yp.degrees() {
        let ki = k as i64;
        let d_k = y
            .d_at(ki)
            .mul(&s.mat_at(ki, yp, y))
            .sub(&s.mat_at(ki + 1, yp, y).mul(&yp.d_at(ki)));
        let dz_k = d_k.select_rows_strict(z.get(k + 1).map(|v| &v[..]).unwrap_or(&[])).map_err(
            |(r, c)| ChainError::Nonzero {
                check: String::from("d s - s d' supported on kernel"),
                degree: k,
                row: r,
                col: c,
                value: String::from("nonzero outside kernel coordinates"),
            },
        )?;
        let sz = sigma_z.mat_at(ki + 1, &z_complex, &z_complex);
        let iota = SparseMat::injection(y.dims[k], &z[k]);
        g_mats.push(s.mats[k].sub(&iota.mul(&sz).mul(&dz_k)));
    }
    let g = ChainMap { dg: 0, mats: g_mats };

    // k = ι σ_Z q  where  ι q = Id - g p.
    let gp = compose(&g, p, y, yp, y);
    let mut k_mats = Vec::with_capacity(y.degrees());
    for k in 0..y.degrees() {
        let e = SparseMat::identity(y.dims[k]).sub(&gp.mats[k]);
        let q = e.select_rows_strict(&z[k]).map_err(|(r, c)| ChainError::Nonzero {
            check: String::from("Id - gp supported on kernel"),
            degree: k,
            row: r,
            col: c,
            value: String::from("nonzero outside kernel coordinates"),
        })?;
        let sz = sigma_z.mat_at(k as i64, &z_complex, &z_complex);
        let iota_prev = if k == 0 {
            SparseMat::zero(0, 0)
        } else {
            SparseMat::injection(y.dims[k - 1], &z[k - 1])
        };
        let kk = if k == 0 {
            SparseMat::zero(0, y.dims[0])
        } else {
            iota_prev.mul(&sz).mul(&q)
        };
        k_mats.push(kk);
    }
    let cert = EquivCert { p: p.clone(), g, k: ChainMap { dg: -1, mats: k_mats } };
    verify_equivalence(y, yp, &cert)?;
    Ok(cert)
}

/// Sign `(-1)^{#{t in i_mask : t before s in order}}`.
pub fn sign_before(order: &[usize], i_mask: u32, s: usize) -> i32 {
    let mut n = 0u32;
    for &t in order {
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

/// Coefficient system on the subsets of a fixed generator set: a module for
/// every subset of `full`, with a transition map for each covering pair.
#[derive(Clone, Debug)]
pub struct CoeffSystem<R> {
    /// Bitmask of the generators indexing the cube of subsets.
    pub full: u32,
    /// Module rank per subset mask (every submask of `full` must be present).
    pub dims: BTreeMap<u32, usize>,
    /// `phi[(J, I)] : M^I -> M^J` for `J = I ∪ {s}`, `s ∉ I`.
    pub phi: BTreeMap<(u32, u32), SparseMat<R>>,
    /// Total order on the generators, as a permutation (used by the sign rule).
    pub order: Vec<usize>,
}

/// All submasks of `full`, ascending as integers.
pub fn submasks(full: u32) -> Vec<u32> {
    (0..=full).filter(|m| m & !full == 0).collect()
}

impl<R: Ring> CoeffSystem<R> {
    pub fn phi_at(&self, to: u32, from: u32) -> &SparseMat<R> {
        self.phi.get(&(to, from)).expect("missing transition map")
    }

    /// Composite transition `M^from -> M^to` for `from ⊆ to`, built by adding
    /// the missing generators in ascending order. Well defined independently
    /// of the path once [`check_functoriality`](Self::check_functoriality)
    /// has passed.
    pub fn phi_path(&self, to: u32, from: u32) -> SparseMat<R> {
        assert_eq!(from & !to, 0, "phi_path requires nested subsets");
        let mut m = SparseMat::identity(*self.dims.get(&from).expect("missing module rank"));
        let mut cur = from;
        for s in 0..32 {
            if (to & !cur) & (1 << s) != 0 {
                m = self.phi_at(cur | (1 << s), cur).mul(&m);
                cur |= 1 << s;
            }
        }
        m
    }

    /// Two-step transitions are path independent; together with the sign rule
    /// this is exactly `d∘d = 0` for the assembled complex.
    pub fn check_functoriality(&self) -> Result<(), ChainError> {
        for &i in self.dims.keys() {
            let rest = self.full & !i;
            for s in 0..32 {
                if rest & (1 << s) == 0 {
                    continue;
                }
                for t in (s + 1)..32 {
                    if rest & (1 << t) == 0 {
                        continue;
                    }
                    let via_s = self
                        .phi_at(i | (1 << s) | (1 << t), i | (1 << s))
                        .mul(self.phi_at(i | (1 << s), i));
                    let via_t = self
                        .phi_at(i | (1 << s) | (1 << t), i | (1 << t))
                        .mul(self.phi_at(i | (1 << t), i));
                    expect_zero(
                        "transition maps commute on squares",
                        i.count_ones() as usize,
                        &via_s.sub(&via_t),
                    )?;
                }
            }
        }
        Ok(())
    }

    /// Assemble the cochain complex with degree `k` spanned by the modules of
    /// the `k`-element subsets (ascending mask order) and differential
    /// `Σ_{s ∉ I} ±φ`. Returns the complex and each subset's
    /// `(degree, offset)` in it.
    pub fn assemble(&self) -> (Complex<R>, BTreeMap<u32, (usize, usize)>) {
        let n_deg = self.full.count_ones() as usize + 1;
        let mut offsets: BTreeMap<u32, (usize, usize)> = BTreeMap::new();
        let mut dims = alloc::vec![0usize; n_deg];
        for m in submasks(self.full) {
            let k = m.count_ones() as usize;
            let rank = *self.dims.get(&m).expect("missing module rank");
            offsets.insert(m, (k, dims[k]));
            dims[k] += rank;
        }
        let mut d = Vec::new();
        for k in 0..n_deg - 1 {
            let mut trips: Vec<(u32, u32, R)> = Vec::new();
            for m in submasks(self.full) {
                if m.count_ones() as usize != k {
                    continue;
                }
                let (_, src_off) = offsets[&m];
                for s in 0..32u32 {
                    if self.full & (1 << s) == 0 || m & (1 << s) != 0 {
                        continue;
                    }
                    let big = m | (1 << s);
                    let (_, dst_off) = offsets[&big];
                    let sign = sign_before(&self.order, m, s as usize);
                    let sgn = R::from_int(sign as i64);
                    for (r, c, v) in self.phi_at(big, m).entries() {
                        trips.push((
                            r + dst_off as u32,
                            c + src_off as u32,
                            v.mul(&sgn),
                        ));
                    }
                }
            }
            d.push(SparseMat::from_triplets(dims[k + 1], dims[k], trips));
        }
        (Complex::new(dims, d), offsets)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    type M = SparseMat<i128>;

    /// Constant system on two generators: all modules Z, all maps identity.
    fn constant_system() -> CoeffSystem<i128> {
        let mut dims = BTreeMap::new();
        let mut phi = BTreeMap::new();
        for m in submasks(3) {
            dims.insert(m, 1usize);
        }
        for (to, from) in [(1u32, 0u32), (2, 0), (3, 1), (3, 2)] {
            phi.insert((to, from), M::identity(1));
        }
        CoeffSystem { full: 3, dims, phi, order: alloc::vec![0, 1] }
    }

    #[test]
    fn constant_cube_assembles_to_a_complex() {
        let sys = constant_system();
        sys.check_functoriality().unwrap();
        let (cx, off) = sys.assemble();
        assert_eq!(cx.dims, alloc::vec![1, 2, 1]);
        assert_eq!(off[&2], (1, 1));
        cx.verify_d2().unwrap();
        // d0 = (1, 1)^T, d1 = (-1 1): the sign rule flips the second face.
        assert_eq!(cx.d[1].get(0, 0), -1);
        assert_eq!(cx.d[1].get(0, 1), 1);
    }

    #[test]
    fn sign_rule_respects_order() {
        assert_eq!(sign_before(&[0, 1, 2], 0b001, 1), -1);
        assert_eq!(sign_before(&[1, 0, 2], 0b001, 1), 1);
        assert_eq!(sign_before(&[0, 1, 2], 0b011, 2), 1);
    }

    /// Split the constant cube complex (which is exact except at the bottom)
    /// along an explicit kernel and recover an equivalence onto Z in degree 0.
    #[test]
    fn split_equivalence_on_cube() {
        let (cx, _) = constant_system().assemble();
        // p : Y -> Y' = Z (degree 0), the identity there.
        let yp = Complex::concentrated(1);
        let p = ChainMap::new(
            0,
            alloc::vec![M::identity(1), M::zero(0, 2), M::zero(0, 1)],
        );
        let s = ChainMap::new(0, alloc::vec![M::identity(1)]);
        // Kernel coordinates: all of degrees 1 and 2.
        let z = alloc::vec![Vec::new(), alloc::vec![0u32, 1], alloc::vec![0u32]];
        // Contraction of the kernel complex d = (-1 1): σ1 = 0, σ2 = (0, 1)^T...
        // need σd + dσ = Id on both degrees: take σ2 = (-1, 0)^T? d·σ2 = Id_1 and
        // σ2·d = [[1,-1],[0,0]]; then Id - σ2 d must be hit by σ1 paths: degree 1
        // identity check is σ2∘d1 + d0∘σ1 = Id with σ1 : Z^1 -> 0, impossible...
        // The kernel here is d: Z^2 -> Z with kernel, not contractible? No: the
        // kernel complex is 0 -> Z^2 -> Z with H = Z at degree 1. It is NOT
        // contractible, so split_equivalence must reject it.
        let sigma_z = ChainMap::new(
            -1,
            alloc::vec![
                M::zero(0, 0),
                M::zero(0, 2),
                M::from_triplets(2, 1, [(1u32, 0u32, 1i128)]),
            ],
        );
        let err = split_equivalence(SplitSpec {
            y: &cx,
            yp: &yp,
            p: &p,
            s: &s,
            z: &z,
            sigma_z: &sigma_z,
        });
        assert!(err.is_err());
    }

    /// A genuinely split case: Y = Y' ⊕ (Z --id--> Z).
    #[test]
    fn split_equivalence_accepts_contractible_kernel() {
        // Y: degree 0 = Z^2 (coords: y'0, z0), degree 1 = Z (coord z1), d(z0) = z1.
        let y = Complex::new(
            alloc::vec![2, 1],
            alloc::vec![M::from_triplets(1, 2, [(0u32, 1u32, 1i128)])],
        );
        let yp = Complex::concentrated(1);
        let p = ChainMap::new(
            0,
            alloc::vec![M::from_triplets(1, 2, [(0u32, 0u32, 1i128)]), M::zero(0, 1)],
        );
        let s = ChainMap::new(0, alloc::vec![M::from_triplets(2, 1, [(0u32, 0u32, 1i128)])]);
        let z = alloc::vec![alloc::vec![1u32], alloc::vec![0u32]];
        let sigma_z = ChainMap::new(
            -1,
            alloc::vec![M::zero(0, 1), M::identity(1)],
        );
        let cert = split_equivalence(SplitSpec {
            y: &y,
            yp: &yp,
            p: &p,
            s: &s,
            z: &z,
            sigma_z: &sigma_z,
        })
        .unwrap();
        verify_equivalence(&y, &yp, &cert).unwrap();
        assert_eq!(cert.g.mats[0], s.mats[0]);
    }
}
