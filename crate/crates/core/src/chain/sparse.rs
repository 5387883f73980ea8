//! Column-major sparse matrices over an exact scalar ring.
//!
//! Canonical form: each column is sorted by row index and stores no zero
//! coefficients, so `==` is semantic equality.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use crate::ring::Ring;

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct SparseMat<R> {
    rows: usize,
    cols: usize,
    cols_data: Vec<Vec<(u32, R)>>,
}

impl<R: Ring> SparseMat<R> {
    pub fn zero(rows: usize, cols: usize) -> Self {
        SparseMat { rows, cols, cols_data: alloc::vec![Vec::new(); cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zero(n, n);
        for j in 0..n {
            m.cols_data[j].push((j as u32, R::one()));
        }
        m
    }

    /// 0/1 matrix embedding coordinate `j` of the small space at row
    /// `indices[j]` of the big space.
    pub fn injection(rows: usize, indices: &[u32]) -> Self {
        let mut m = Self::zero(rows, indices.len());
        for (j, &r) in indices.iter().enumerate() {
            assert!((r as usize) < rows, "injection row out of range");
            m.cols_data[j].push((r, R::one()));
        }
        m
    }

    pub fn from_triplets(
        rows: usize,
        cols: usize,
        triplets: impl IntoIterator<Item = (u32, u32, R)>,
    ) -> Self {
        let mut acc: Vec<BTreeMap<u32, R>> = alloc::vec![BTreeMap::new(); cols];
        for (r, c, v) in triplets {
            assert!((r as usize) < rows && (c as usize) < cols, "triplet out of range");
            let col = &mut acc[c as usize];
            match col.remove(&r) {
                None => {
                    if !v.is_zero() {
                        col.insert(r, v);
                    }
                }
                Some(old) => {
                    let s = old.add(&v);
                    if !s.is_zero() {
                        col.insert(r, s);
                    }
                }
            }
        }
        SparseMat {
            rows,
            cols,
            cols_data: acc.into_iter().map(|c| c.into_iter().collect()).collect(),
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn col(&self, c: usize) -> &[(u32, R)] {
        &self.cols_data[c]
    }

    pub fn nnz(&self) -> usize {
        self.cols_data.iter().map(|c| c.len()).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.cols_data.iter().all(|c| c.is_empty())
    }

    pub fn get(&self, r: u32, c: u32) -> R {
        let col = &self.cols_data[c as usize];
        match col.binary_search_by_key(&r, |e| e.0) {
            Ok(i) => col[i].1.clone(),
            Err(_) => R::zero(),
        }
    }

    pub fn set(&mut self, r: u32, c: u32, v: R) {
        assert!((r as usize) < self.rows && (c as usize) < self.cols);
        let col = &mut self.cols_data[c as usize];
        match col.binary_search_by_key(&r, |e| e.0) {
            Ok(i) => {
                if v.is_zero() {
                    col.remove(i);
                } else {
                    col[i].1 = v;
                }
            }
            Err(i) => {
                if !v.is_zero() {
                    col.insert(i, (r, v));
                }
            }
        }
    }

    pub fn entries(&self) -> impl Iterator<Item = (u32, u32, &R)> {
        self.cols_data
            .iter()
            .enumerate()
            .flat_map(|(c, col)| col.iter().map(move |(r, v)| (*r, c as u32, v)))
    }

    pub fn first_entry(&self) -> Option<(u32, u32, &R)> {
        self.entries().next()
    }

    pub fn add(&self, rhs: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols), "shape mismatch in add");
        let cols_data = self
            .cols_data
            .iter()
            .zip(&rhs.cols_data)
            .map(|(a, b)| {
                let mut out = a.clone();
                add_scaled_into(&mut out, b, &R::one());
                out
            })
            .collect();
        SparseMat { rows: self.rows, cols: self.cols, cols_data }
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        self.add(&rhs.neg())
    }

    pub fn neg(&self) -> Self {
        let cols_data = self
            .cols_data
            .iter()
            .map(|c| c.iter().map(|(r, v)| (*r, v.neg())).collect())
            .collect();
        SparseMat { rows: self.rows, cols: self.cols, cols_data }
    }

    pub fn scale(&self, s: &R) -> Self {
        if s.is_zero() {
            return Self::zero(self.rows, self.cols);
        }
        let cols_data = self
            .cols_data
            .iter()
            .map(|c| c.iter().map(|(r, v)| (*r, v.mul(s))).collect())
            .collect();
        SparseMat { rows: self.rows, cols: self.cols, cols_data }
    }

    /// `self * rhs` (scalars assumed commutative).
    pub fn mul(&self, rhs: &Self) -> Self {
        assert_eq!(self.cols, rhs.rows, "shape mismatch in mul");
        let mut cols_data = Vec::with_capacity(rhs.cols);
        for j in 0..rhs.cols {
            let mut acc: Vec<(u32, R)> = Vec::new();
            for (i, b) in &rhs.cols_data[j] {
                add_scaled_into(&mut acc, &self.cols_data[*i as usize], b);
            }
            cols_data.push(acc);
        }
        SparseMat { rows: self.rows, cols: rhs.cols, cols_data }
    }

    pub fn transpose(&self) -> Self {
        let mut cols_data: Vec<Vec<(u32, R)>> = alloc::vec![Vec::new(); self.rows];
        for (r, c, v) in self.entries() {
            cols_data[r as usize].push((c, v.clone()));
        }
        // Row-major traversal of a column-sorted matrix need not emit each new
        // column's entries in order, so sort.
        for col in &mut cols_data {
            col.sort_by_key(|e| e.0);
        }
        SparseMat { rows: self.cols, cols: self.rows, cols_data }
    }

    pub fn map<S: Ring>(&self, f: impl Fn(&R) -> S) -> SparseMat<S> {
        let cols_data = self
            .cols_data
            .iter()
            .map(|c| {
                c.iter()
                    .filter_map(|(r, v)| {
                        let w = f(v);
                        if w.is_zero() {
                            None
                        } else {
                            Some((*r, w))
                        }
                    })
                    .collect()
            })
            .collect();
        SparseMat { rows: self.rows, cols: self.cols, cols_data }
    }

    pub fn select_cols(&self, cols: &[u32]) -> Self {
        let cols_data = cols
            .iter()
            .map(|&c| self.cols_data[c as usize].clone())
            .collect();
        SparseMat { rows: self.rows, cols: cols.len(), cols_data }
    }

    /// Keep only the given rows (renumbered in the given order). Errors with
    /// the offending `(row, col)` if a nonzero entry sits outside them.
    pub fn select_rows_strict(&self, rows: &[u32]) -> Result<Self, (u32, u32)> {
        let mut where_is: BTreeMap<u32, u32> = BTreeMap::new();
        for (new, &old) in rows.iter().enumerate() {
            where_is.insert(old, new as u32);
        }
        let mut cols_data = Vec::with_capacity(self.cols);
        for (c, col) in self.cols_data.iter().enumerate() {
            let mut out = Vec::with_capacity(col.len());
            for (r, v) in col {
                match where_is.get(r) {
                    Some(&new) => out.push((new, v.clone())),
                    None => return Err((*r, c as u32)),
                }
            }
            out.sort_by_key(|e| e.0);
            cols_data.push(out);
        }
        Ok(SparseMat { rows: rows.len(), cols: self.cols, cols_data })
    }
}

/// `dst += c * src` on sorted sparse columns.
pub fn add_scaled_into<R: Ring>(dst: &mut Vec<(u32, R)>, src: &[(u32, R)], c: &R) {
    if c.is_zero() || src.is_empty() {
        return;
    }
    let mut out = Vec::with_capacity(dst.len() + src.len());
    let (mut i, mut j) = (0, 0);
    while i < dst.len() && j < src.len() {
        match dst[i].0.cmp(&src[j].0) {
            core::cmp::Ordering::Less => {
                out.push(dst[i].clone());
                i += 1;
            }
            core::cmp::Ordering::Greater => {
                let v = src[j].1.mul(c);
                if !v.is_zero() {
                    out.push((src[j].0, v));
                }
                j += 1;
            }
            core::cmp::Ordering::Equal => {
                let v = dst[i].1.add(&src[j].1.mul(c));
                if !v.is_zero() {
                    out.push((dst[i].0, v));
                }
                i += 1;
                j += 1;
            }
        }
    }
    out.extend_from_slice(&dst[i..]);
    for (r, v) in &src[j..] {
        let v = v.mul(c);
        if !v.is_zero() {
            out.push((*r, v));
        }
    }
    *dst = out;
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn mul_and_transpose() {
        // [[1,2],[0,3]] * [[1,0],[4,5]] = [[9,10],[12,15]]
        let a = SparseMat::from_triplets(2, 2, [(0, 0, 1i128), (0, 1, 2), (1, 1, 3)]);
        let b = SparseMat::from_triplets(2, 2, [(0, 0, 1i128), (1, 0, 4), (1, 1, 5)]);
        let p = a.mul(&b);
        let expect =
            SparseMat::from_triplets(2, 2, [(0, 0, 9i128), (1, 0, 12), (0, 1, 10), (1, 1, 15)]);
        assert_eq!(p, expect);
        assert_eq!(p.transpose().get(0, 1), 12);
        assert_eq!(a.mul(&SparseMat::identity(2)), a);
    }

    #[test]
    fn triplet_cancellation() {
        let m = SparseMat::from_triplets(2, 1, [(0, 0, 5i128), (0, 0, -5)]);
        assert!(m.is_zero());
        assert_eq!(m.nnz(), 0);
    }

    #[test]
    fn row_restriction() {
        let m = SparseMat::from_triplets(3, 2, [(0, 0, 1i128), (2, 0, 2), (2, 1, 3)]);
        let r = m.select_rows_strict(&[0, 2]).unwrap();
        assert_eq!(r.rows(), 2);
        assert_eq!(r.get(1, 0), 2);
        assert_eq!(m.select_rows_strict(&[0, 1]), Err((2, 0)));
    }
}
