//! Exact linear algebra: Smith normal form over the integers, column
//! reduction over a field, ranks modulo a prime, and homology of complexes.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use crate::chain::complex::Complex;
use crate::chain::sparse::{add_scaled_into, SparseMat};
use crate::ring::{iadd, imul, rat_int, Field, Rat};

// ---------------------------------------------------------------------------
// Smith normal form over Z (dense, checked i128 arithmetic).

pub struct Snf {
    /// Diagonal entries `d_1 | d_2 | ...`, all positive, length = rank.
    pub diag: Vec<i128>,
}

impl Snf {
    pub fn rank(&self) -> usize {
        self.diag.len()
    }
}

struct Dense {
    m: usize,
    n: usize,
    a: Vec<i128>, // row-major
}

impl Dense {
    fn from_sparse(s: &SparseMat<i128>) -> Self {
        let (m, n) = (s.rows(), s.cols());
        let mut a = alloc::vec![0i128; m * n];
        for (r, c, v) in s.entries() {
            a[r as usize * n + c as usize] = *v;
        }
        Dense { m, n, a }
    }
    #[inline]
    fn at(&self, i: usize, j: usize) -> i128 {
        self.a[i * self.n + j]
    }
    #[inline]
    fn set(&mut self, i: usize, j: usize, v: i128) {
        self.a[i * self.n + j] = v;
    }
    fn swap_rows(&mut self, i: usize, j: usize) {
        if i != j {
            for c in 0..self.n {
                self.a.swap(i * self.n + c, j * self.n + c);
            }
        }
    }
    fn swap_cols(&mut self, i: usize, j: usize) {
        if i != j {
            for r in 0..self.m {
                self.a.swap(r * self.n + i, r * self.n + j);
            }
        }
    }
    /// row_i += q * row_t
    fn add_row(&mut self, i: usize, t: usize, q: i128) {
        for c in 0..self.n {
            let v = iadd(self.at(i, c), imul(q, self.at(t, c)));
            self.set(i, c, v);
        }
    }
    /// col_j += q * col_t
    fn add_col(&mut self, j: usize, t: usize, q: i128) {
        for r in 0..self.m {
            let v = iadd(self.at(r, j), imul(q, self.at(r, t)));
            self.set(r, j, v);
        }
    }
    fn negate_row(&mut self, i: usize) {
        for c in 0..self.n {
            let v = self.at(i, c).checked_neg().expect("i128 overflow");
            self.set(i, c, v);
        }
    }
    fn mul(&self, rhs: &Dense) -> Dense {
        assert_eq!(self.n, rhs.m);
        let mut out = Dense { m: self.m, n: rhs.n, a: alloc::vec![0i128; self.m * rhs.n] };
        for i in 0..self.m {
            for k in 0..self.n {
                let aik = self.at(i, k);
                if aik == 0 {
                    continue;
                }
                for j in 0..rhs.n {
                    let v = iadd(out.at(i, j), imul(aik, rhs.at(k, j)));
                    out.set(i, j, v);
                }
            }
        }
        out
    }
    fn identity(n: usize) -> Dense {
        let mut d = Dense { m: n, n, a: alloc::vec![0; n * n] };
        for i in 0..n {
            d.set(i, i, 1);
        }
        d
    }
}

/// Smith normal form with full verification: unimodular row/column operations
/// are tracked and the factorization `U * A * V = D` is re-multiplied before
/// returning. Panics on any internal inconsistency.
pub fn smith_normal_form(a_in: &SparseMat<i128>) -> Snf {
    let mut a = Dense::from_sparse(a_in);
    let (m, n) = (a.m, a.n);
    let mut u = Dense::identity(m);
    let mut v = Dense::identity(n);
    let mut t = 0usize;
    while t < m.min(n) {
        // Pick the nonzero entry of smallest absolute value in the trailing block.
        let mut best: Option<(usize, usize)> = None;
        for i in t..m {
            for j in t..n {
                let x = a.at(i, j);
                if x != 0 && best.map_or(true, |(bi, bj)| x.abs() < a.at(bi, bj).abs()) {
                    best = Some((i, j));
                }
            }
        }
        let Some((bi, bj)) = best else { break };
        a.swap_rows(t, bi);
        u.swap_rows(t, bi);
        a.swap_cols(t, bj);
        v.swap_cols(t, bj);
        // Clear row and column t; restart whenever a remainder survives.
        loop {
            let pivot = a.at(t, t);
            debug_assert!(pivot != 0);
            let mut dirty = false;
            for i in (t + 1)..m {
                let x = a.at(i, t);
                if x != 0 {
                    let q = x.div_euclid(pivot);
                    a.add_row(i, t, -q);
                    u.add_row(i, t, -q);
                    if a.at(i, t) != 0 {
                        // Remainder is smaller than |pivot|: promote it.
                        a.swap_rows(t, i);
                        u.swap_rows(t, i);
                        dirty = true;
                    }
                }
            }
            if dirty {
                continue;
            }
            for j in (t + 1)..n {
                let x = a.at(t, j);
                if x != 0 {
                    let q = x.div_euclid(pivot);
                    a.add_col(j, t, -q);
                    v.add_col(j, t, -q);
                    if a.at(t, j) != 0 {
                        a.swap_cols(t, j);
                        v.swap_cols(t, j);
                        dirty = true;
                    }
                }
            }
            if dirty {
                continue;
            }
            // Row and column are clear; enforce divisibility into the rest.
            let pivot = a.at(t, t);
            let mut fixed = true;
            'scan: for i in (t + 1)..m {
                for j in (t + 1)..n {
                    if a.at(i, j) % pivot != 0 {
                        // Fold that row in and keep reducing.
                        a.add_row(t, i, 1);
                        u.add_row(t, i, 1);
                        fixed = false;
                        break 'scan;
                    }
                }
            }
            if fixed {
                break;
            }
        }
        if a.at(t, t) < 0 {
            a.negate_row(t);
            u.negate_row(t);
        }
        t += 1;
    }
    // Verify U * A * V = D exactly.
    let d = u.mul(&Dense::from_sparse(a_in)).mul(&v);
    for i in 0..m {
        for j in 0..n {
            let want = if i == j { a.at(i, j) } else { 0 };
            assert_eq!(d.at(i, j), want, "Smith form verification failed at ({i},{j})");
        }
    }
    let mut diag = Vec::new();
    for i in 0..m.min(n) {
        let x = a.at(i, i);
        if x == 0 {
            break;
        }
        assert!(x > 0);
        if let Some(&prev) = diag.last() {
            assert!(x % prev == 0, "elementary divisors out of order");
        }
        diag.push(x);
    }
    Snf { diag }
}

/// Integral homology of one degree of a cochain complex.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HomologyGroup {
    pub free_rank: usize,
    /// Nontrivial torsion coefficients (each > 1), in divisibility order.
    pub torsion: Vec<i128>,
}

/// `H^k = ker d^k / im d^{k-1}` for every degree, over Z.
pub fn homology_int(c: &Complex<i128>) -> Vec<HomologyGroup> {
    c.verify_d2().expect("homology of a non-complex");
    let snfs: Vec<Snf> = c.d.iter().map(smith_normal_form).collect();
    let rank = |k: i64| -> usize {
        if k < 0 || k as usize >= snfs.len() {
            0
        } else {
            snfs[k as usize].rank()
        }
    };
    (0..c.degrees())
        .map(|k| {
            let free_rank = c.dims[k] - rank(k as i64) - rank(k as i64 - 1);
            let torsion = if k == 0 {
                Vec::new()
            } else {
                snfs[k - 1].diag.iter().copied().filter(|&d| d > 1).collect()
            };
            HomologyGroup { free_rank, torsion }
        })
        .collect()
}

// ---------------------------------------------------------------------------
// Column reduction over a field.

pub struct ColReduce<F> {
    pub reduced: SparseMat<F>,
    /// Tracked column operations: `a * v = reduced` (present iff requested).
    pub v: Option<SparseMat<F>>,
    pub rank: usize,
    /// Pivot row of each reduced column (None for zero columns).
    pub pivot_row: Vec<Option<u32>>,
}

/// Column echelon form: each nonzero reduced column starts at a distinct
/// pivot row.
pub fn col_reduce<F: Field>(a: &SparseMat<F>, track: bool) -> ColReduce<F> {
    let n = a.cols();
    let mut cols: Vec<Vec<(u32, F)>> = (0..n).map(|j| a.col(j).to_vec()).collect();
    let mut v: Vec<Vec<(u32, F)>> = if track {
        (0..n).map(|j| alloc::vec![(j as u32, F::one())]).collect()
    } else {
        Vec::new()
    };
    let mut pivots: BTreeMap<u32, usize> = BTreeMap::new();
    let mut pivot_row = alloc::vec![None; n];
    for j in 0..n {
        loop {
            let Some((r, lead)) = cols[j].first().map(|(r, x)| (*r, x.clone())) else {
                break;
            };
            match pivots.get(&r) {
                Some(&pc) => {
                    let coef = lead.div(&cols[pc][0].1).neg();
                    let pcol = cols[pc].clone();
                    add_scaled_into(&mut cols[j], &pcol, &coef);
                    if track {
                        let vcol = v[pc].clone();
                        add_scaled_into(&mut v[j], &vcol, &coef);
                    }
                }
                None => {
                    pivots.insert(r, j);
                    pivot_row[j] = Some(r);
                    break;
                }
            }
        }
    }
    let rank = pivots.len();
    let to_mat = |rows: usize, cols_data: Vec<Vec<(u32, F)>>| {
        SparseMat::from_triplets(
            rows,
            cols_data.len(),
            cols_data
                .into_iter()
                .enumerate()
                .flat_map(|(j, col)| col.into_iter().map(move |(r, x)| (r, j as u32, x))),
        )
    };
    ColReduce {
        reduced: to_mat(a.rows(), cols),
        v: if track { Some(to_mat(n, v)) } else { None },
        rank,
        pivot_row,
    }
}

pub fn rank<F: Field>(a: &SparseMat<F>) -> usize {
    col_reduce(a, false).rank
}

/// Basis of the right kernel `{x : a x = 0}`, as sparse columns.
pub fn kernel_basis<F: Field>(a: &SparseMat<F>) -> Vec<Vec<(u32, F)>> {
    let red = col_reduce(a, true);
    let v = red.v.unwrap();
    (0..a.cols())
        .filter(|&j| red.pivot_row[j].is_none())
        .map(|j| v.col(j).to_vec())
        .collect()
}

/// Exact inverse of a square matrix over a field, if it is invertible.
/// The product `a * inv = Id` is re-verified before returning.
pub fn inverse<F: Field>(a: &SparseMat<F>) -> Option<SparseMat<F>> {
    let n = a.rows();
    if a.cols() != n {
        return None;
    }
    let red = col_reduce(a, true);
    if red.rank != n {
        return None;
    }
    let v = red.v.unwrap();
    // reduced = a * v has n pivots in n distinct rows; permute columns so the
    // pivot of column i sits at row i, giving a lower-triangular L = a * v * P.
    let mut perm = alloc::vec![0usize; n]; // perm[pivot_row] = column
    for j in 0..n {
        perm[red.pivot_row[j].unwrap() as usize] = j;
    }
    let vp = v.select_cols(&(0..n).map(|r| perm[r] as u32).collect::<Vec<_>>());
    let l = red.reduced.select_cols(&(0..n).map(|r| perm[r] as u32).collect::<Vec<_>>());
    // Solve L * X = Id by forward substitution, column by column.
    let mut x_cols: Vec<Vec<(u32, F)>> = Vec::with_capacity(n);
    for e in 0..n {
        // b = unit vector e; x determined top row down.
        let mut b: Vec<(u32, F)> = alloc::vec![(e as u32, F::one())];
        let mut x: Vec<(u32, F)> = Vec::new();
        while let Some(&(r, ref val)) = b.first() {
            let lcol = l.col(r as usize);
            debug_assert_eq!(lcol.first().map(|e| e.0), Some(r));
            let coef = val.div(&lcol[0].1);
            add_scaled_into(&mut b, lcol, &coef.neg());
            x.push((r, coef));
        }
        x.sort_by_key(|e| e.0);
        x_cols.push(x);
    }
    let x = SparseMat::from_triplets(
        n,
        n,
        x_cols
            .into_iter()
            .enumerate()
            .flat_map(|(j, col)| col.into_iter().map(move |(r, v)| (r, j as u32, v))),
    );
    let inv = vp.mul(&x);
    assert_eq!(a.mul(&inv), SparseMat::identity(n), "inverse verification failed");
    Some(inv)
}

// ---------------------------------------------------------------------------
// Ranks modulo a prime (fast certificates of rank lower bounds).

/// Default prime for modular rank bounds: large, far from every denominator
/// appearing in this crate.
pub const RANK_PRIME: u64 = 2_147_483_647;

fn pow_mod(mut b: u64, mut e: u64, p: u64) -> u64 {
    let mut acc = 1u64;
    b %= p;
    while e > 0 {
        if e & 1 == 1 {
            acc = ((acc as u128 * b as u128) % p as u128) as u64;
        }
        b = ((b as u128 * b as u128) % p as u128) as u64;
        e >>= 1;
    }
    acc
}

fn rat_mod(x: &Rat, p: u64) -> u64 {
    let pb = num_bigint::BigInt::from(p);
    let num = ((x.numer() % &pb) + &pb) % &pb;
    let den = ((x.denom() % &pb) + &pb) % &pb;
    let num: u64 = num.try_into().unwrap();
    let den: u64 = den.try_into().unwrap();
    assert!(den != 0, "denominator divisible by modular-rank prime");
    ((num as u128 * pow_mod(den, p - 2, p) as u128) % p as u128) as u64
}

/// Rank of a rational matrix reduced mod `p`. Always a lower bound for the
/// rational rank; equality holds whenever the bound matches an upper bound
/// obtained by exhibiting kernel vectors.
pub fn rank_mod_p(a: &SparseMat<Rat>, p: u64) -> usize {
    let (m, n) = (a.rows(), a.cols());
    let mut rows: Vec<Vec<u64>> = alloc::vec![alloc::vec![0u64; n]; m];
    for (r, c, v) in a.entries() {
        rows[r as usize][c as usize] = rat_mod(v, p);
    }
    let mut rank = 0usize;
    for col in 0..n {
        let Some(pr) = (rank..m).find(|&r| rows[r][col] != 0) else { continue };
        rows.swap(rank, pr);
        let inv = pow_mod(rows[rank][col], p - 2, p);
        for r in 0..m {
            if r != rank && rows[r][col] != 0 {
                let f = ((rows[r][col] as u128 * inv as u128) % p as u128) as u64;
                for c in col..n {
                    let sub = (f as u128 * rows[rank][c] as u128) % p as u128;
                    rows[r][c] = ((rows[r][c] as u128 + p as u128 - sub) % p as u128) as u64;
                }
            }
        }
        rank += 1;
        if rank == m {
            break;
        }
    }
    rank
}

// ---------------------------------------------------------------------------
// Homology ranks over Q and specialization of Laurent complexes.

/// Exact homology ranks of a rational cochain complex.
pub fn homology_ranks_rat(c: &Complex<Rat>) -> Vec<usize> {
    c.verify_d2().expect("homology of a non-complex");
    let ranks: Vec<usize> = c.d.iter().map(rank).collect();
    let rk = |k: i64| {
        if k < 0 || k as usize >= ranks.len() {
            0
        } else {
            ranks[k as usize]
        }
    };
    (0..c.degrees()).map(|k| c.dims[k] - rk(k as i64) - rk(k as i64 - 1)).collect()
}

/// Upper bounds for the rational homology ranks, from ranks mod `p`
/// (matrix ranks can only drop under reduction). A zero bound certifies
/// vanishing rational homology in that degree.
pub fn homology_rank_bounds_mod_p(c: &Complex<Rat>, p: u64) -> Vec<usize> {
    c.verify_d2().expect("homology of a non-complex");
    let ranks: Vec<usize> = c.d.iter().map(|m| rank_mod_p(m, p)).collect();
    let rk = |k: i64| {
        if k < 0 || k as usize >= ranks.len() {
            0
        } else {
            ranks[k as usize]
        }
    };
    (0..c.degrees()).map(|k| c.dims[k] - rk(k as i64) - rk(k as i64 - 1)).collect()
}

/// Alternating sum of the ranks: equals the alternating sum of homology ranks.
pub fn euler_characteristic(dims: &[usize]) -> i64 {
    dims.iter()
        .enumerate()
        .map(|(k, &d)| if k % 2 == 0 { d as i64 } else { -(d as i64) })
        .sum()
}

/// Evaluate every matrix entry of a Laurent complex at exact rational
/// parameter values.
pub fn specialize(c: &Complex<crate::ring::Laurent>, vals: &[Rat]) -> Complex<Rat> {
    Complex::new(
        c.dims.clone(),
        c.d.iter().map(|m| m.map(|x| x.eval(vals))).collect(),
    )
}

pub fn specialize_map(
    f: &crate::chain::complex::ChainMap<crate::ring::Laurent>,
    vals: &[Rat],
) -> crate::chain::complex::ChainMap<Rat> {
    crate::chain::complex::ChainMap {
        dg: f.dg,
        mats: f.mats.iter().map(|m| m.map(|x| x.eval(vals))).collect(),
    }
}

/// Convert an integer complex to a rational one (e.g. before field ranks).
pub fn to_rat(c: &Complex<i128>) -> Complex<Rat> {
    Complex::new(c.dims.clone(), c.d.iter().map(|m| m.map(|x| rat_int(*x))).collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn smith_form_diag() {
        // [[2,4],[6,8]] has SNF diag (2, 4): det = -8, gcd = 2.
        let a = SparseMat::from_triplets(
            2,
            2,
            [(0u32, 0u32, 2i128), (0, 1, 4), (1, 0, 6), (1, 1, 8)],
        );
        let snf = smith_normal_form(&a);
        assert_eq!(snf.diag, alloc::vec![2, 4]);
    }

    #[test]
    fn homology_of_interval() {
        // 0 -> Z^2 --(1,-1)--> Z -> 0 (cochain degrees 0,1): H^0 = Z, H^1 = 0.
        let d0 = SparseMat::from_triplets(1, 2, [(0u32, 0u32, 1i128), (0, 1, -1)]);
        let c = Complex::new(alloc::vec![2, 1], alloc::vec![d0]);
        let h = homology_int(&c);
        assert_eq!(h[0], HomologyGroup { free_rank: 1, torsion: Vec::new() });
        assert_eq!(h[1], HomologyGroup { free_rank: 0, torsion: Vec::new() });
    }

    #[test]
    fn torsion_detected() {
        // Z --2--> Z: H^1 = Z/2.
        let d0 = SparseMat::from_triplets(1, 1, [(0u32, 0u32, 2i128)]);
        let c = Complex::new(alloc::vec![1, 1], alloc::vec![d0]);
        let h = homology_int(&c);
        assert_eq!(h[1], HomologyGroup { free_rank: 0, torsion: alloc::vec![2] });
    }

    #[test]
    fn field_reduction_rank_kernel_inverse() {
        let a: SparseMat<Rat> = SparseMat::from_triplets(
            2,
            3,
            [
                (0u32, 0u32, rat_int(1)),
                (0, 1, rat_int(2)),
                (0, 2, rat_int(3)),
                (1, 0, rat_int(2)),
                (1, 1, rat_int(4)),
                (1, 2, rat_int(6)),
            ],
        );
        assert_eq!(rank(&a), 1);
        let ker = kernel_basis(&a);
        assert_eq!(ker.len(), 2);
        for k in &ker {
            let km = SparseMat::from_triplets(3, 1, k.iter().map(|(r, v)| (*r, 0, v.clone())));
            assert!(a.mul(&km).is_zero());
        }
        let b: SparseMat<Rat> = SparseMat::from_triplets(
            2,
            2,
            [
                (0u32, 0u32, rat_int(1)),
                (0, 1, rat_int(2)),
                (1, 0, rat_int(3)),
                (1, 1, rat_int(4)),
            ],
        );
        let inv = inverse(&b).unwrap();
        assert_eq!(b.mul(&inv), SparseMat::identity(2));
        assert_eq!(inv.mul(&b), SparseMat::identity(2));
        assert!(inverse(&a.select_cols(&[0, 1])).is_none());
    }

    #[test]
    fn modular_rank_matches() {
        let a: SparseMat<Rat> = SparseMat::from_triplets(
            3,
            3,
            [
                (0u32, 0u32, rat_int(1)),
                (1, 1, Rat::new(num_bigint::BigInt::from(1), num_bigint::BigInt::from(2))),
                (2, 0, rat_int(5)),
            ],
        );
        assert_eq!(rank_mod_p(&a, RANK_PRIME), 2);
        assert_eq!(rank(&a), 2);
    }
}
