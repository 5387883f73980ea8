//! Scalar rings: checked 128-bit integers, arbitrary-precision rationals and
//! integer Laurent polynomials in finitely many variables.
//!
//! All arithmetic is exact. Integer overflow panics instead of wrapping; the
//! matrix sizes in this crate keep honest values far below `i128::MAX`, so a
//! panic here always indicates a logic error, never expected data.

use alloc::string::String;
use alloc::vec::Vec;
use alloc::{collections::BTreeMap, format};
use core::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed};

/// Exact scalar ring used by matrices and complexes.
pub trait Ring: Clone + Eq + Ord + fmt::Debug {
    fn zero() -> Self;
    fn one() -> Self;
    fn is_zero(&self) -> bool;
    fn is_one(&self) -> bool;
    fn add(&self, rhs: &Self) -> Self;
    fn sub(&self, rhs: &Self) -> Self;
    fn mul(&self, rhs: &Self) -> Self;
    fn neg(&self) -> Self;
    fn from_int(n: i64) -> Self;
    /// Human-readable rendering for error reports.
    fn show(&self) -> String;
}

/// Ring with exact division by nonzero elements.
pub trait Field: Ring {
    fn inv(&self) -> Self;
    fn div(&self, rhs: &Self) -> Self {
        self.mul(&rhs.inv())
    }
}

/// Integer scalar. 128 bits with checked arithmetic.
pub type Int = i128;

#[inline]
pub fn iadd(a: i128, b: i128) -> i128 {
    a.checked_add(b).expect("i128 overflow in exact arithmetic")
}

#[inline]
pub fn imul(a: i128, b: i128) -> i128 {
    a.checked_mul(b).expect("i128 overflow in exact arithmetic")
}

impl Ring for i128 {
    fn zero() -> Self {
        0
    }
    fn one() -> Self {
        1
    }
    fn is_zero(&self) -> bool {
        *self == 0
    }
    fn is_one(&self) -> bool {
        *self == 1
    }
    fn add(&self, rhs: &Self) -> Self {
        iadd(*self, *rhs)
    }
    fn sub(&self, rhs: &Self) -> Self {
        iadd(*self, rhs.checked_neg().expect("i128 overflow"))
    }
    fn mul(&self, rhs: &Self) -> Self {
        imul(*self, *rhs)
    }
    fn neg(&self) -> Self {
        self.checked_neg().expect("i128 overflow")
    }
    fn from_int(n: i64) -> Self {
        n as i128
    }
    fn show(&self) -> String {
        format!("{self}")
    }
}

/// Rational scalar: arbitrary precision, always in lowest terms with a
/// positive denominator (maintained by `num_rational`).
pub type Rat = num_rational::BigRational;

impl Ring for Rat {
    fn zero() -> Self {
        num_traits::Zero::zero()
    }
    fn one() -> Self {
        num_traits::One::one()
    }
    fn is_zero(&self) -> bool {
        num_traits::Zero::is_zero(self)
    }
    fn is_one(&self) -> bool {
        num_traits::One::is_one(self)
    }
    fn add(&self, rhs: &Self) -> Self {
        self + rhs
    }
    fn sub(&self, rhs: &Self) -> Self {
        self - rhs
    }
    fn mul(&self, rhs: &Self) -> Self {
        self * rhs
    }
    fn neg(&self) -> Self {
        -self
    }
    fn from_int(n: i64) -> Self {
        Rat::from_integer(BigInt::from(n))
    }
    fn show(&self) -> String {
        rat_to_string(self)
    }
}

impl Field for Rat {
    fn inv(&self) -> Self {
        assert!(!Ring::is_zero(self), "division by zero");
        self.recip()
    }
}

pub fn rat_int(n: i128) -> Rat {
    Rat::from_integer(BigInt::from(n))
}

/// Exact q^e for rational q (e may be negative; q must then be nonzero).
pub fn rat_pow(base: &Rat, e: i32) -> Rat {
    if e == 0 {
        return Ring::one();
    }
    let p = base.numer().pow(e.unsigned_abs());
    let q = base.denom().pow(e.unsigned_abs());
    if e > 0 {
        Rat::new(p, q)
    } else {
        assert!(!Ring::is_zero(base), "cannot invert 0 in specialization");
        Rat::new(q, p)
    }
}

/// Monomial: sorted list of `(variable index, nonzero exponent)` pairs.
pub type Mono = Vec<(u8, i32)>;

fn mono_mul(a: &Mono, b: &Mono) -> Mono {
    let mut out = Mono::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        match a[i].0.cmp(&b[j].0) {
            core::cmp::Ordering::Less => {
                out.push(a[i]);
                i += 1;
            }
            core::cmp::Ordering::Greater => {
                out.push(b[j]);
                j += 1;
            }
            core::cmp::Ordering::Equal => {
                let e = a[i].1.checked_add(b[j].1).expect("exponent overflow");
                if e != 0 {
                    out.push((a[i].0, e));
                }
                i += 1;
                j += 1;
            }
        }
    }
    out.extend_from_slice(&a[i..]);
    out.extend_from_slice(&b[j..]);
    out
}

/// Integer Laurent polynomial in variables `v0, v1, ...`.
///
/// Zero is the empty term map; every stored coefficient is nonzero.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct Laurent {
    terms: BTreeMap<Mono, i128>,
}

impl Laurent {
    pub fn constant(c: i128) -> Self {
        let mut terms = BTreeMap::new();
        if c != 0 {
            terms.insert(Mono::new(), c);
        }
        Laurent { terms }
    }

    /// The monomial `c * v_{var}^e`.
    pub fn monomial(c: i128, var: u8, e: i32) -> Self {
        let mut terms = BTreeMap::new();
        if c != 0 {
            let m = if e == 0 { Mono::new() } else { alloc::vec![(var, e)] };
            terms.insert(m, c);
        }
        Laurent { terms }
    }

    pub fn var(var: u8) -> Self {
        Self::monomial(1, var, 1)
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Mono, &i128)> {
        self.terms.iter()
    }

    pub fn from_terms(terms: impl IntoIterator<Item = (Mono, i128)>) -> Self {
        let mut out = BTreeMap::new();
        for (m, c) in terms {
            debug_assert!(m.windows(2).all(|w| w[0].0 < w[1].0));
            debug_assert!(m.iter().all(|&(_, e)| e != 0));
            let entry = out.entry(m).or_insert(0i128);
            *entry = iadd(*entry, c);
        }
        out.retain(|_, c| *c != 0);
        Laurent { terms: out }
    }

    /// Substitute exact rational values for the variables.
    ///
    /// `vals[i]` replaces variable `i`; every variable occurring with a
    /// negative exponent must be sent to a nonzero value.
    pub fn eval(&self, vals: &[Rat]) -> Rat {
        let mut acc: Rat = Ring::zero();
        for (m, c) in &self.terms {
            let mut t = rat_int(*c);
            for &(v, e) in m {
                let val = vals
                    .get(v as usize)
                    .expect("specialization missing a parameter value");
                t = Ring::mul(&t, &rat_pow(val, e));
            }
            acc = Ring::add(&acc, &t);
        }
        acc
    }

    /// Render with the given variable names (used by reports and errors).
    pub fn display(&self, names: &[&str]) -> String {
        if self.terms.is_empty() {
            return String::from("0");
        }
        let mut out = String::new();
        for (i, (m, c)) in self.terms.iter().enumerate() {
            let neg = *c < 0;
            let abs = c.unsigned_abs();
            if i == 0 {
                if neg {
                    out.push('-');
                }
            } else {
                out.push_str(if neg { " - " } else { " + " });
            }
            let mono = mono_display(m, names);
            if mono.is_empty() {
                out.push_str(&format!("{abs}"));
            } else if abs == 1 {
                out.push_str(&mono);
            } else {
                out.push_str(&format!("{abs}*{mono}"));
            }
        }
        out
    }
}

pub fn mono_display(m: &Mono, names: &[&str]) -> String {
    let mut parts = Vec::new();
    for &(v, e) in m {
        let name = names.get(v as usize).copied().unwrap_or("v?");
        if e == 1 {
            parts.push(format!("{name}"));
        } else {
            parts.push(format!("{name}^{e}"));
        }
    }
    parts.join("*")
}

impl fmt::Debug for Laurent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.display(&["q1", "q2", "q3", "q4"]))
    }
}

impl Ring for Laurent {
    fn zero() -> Self {
        Laurent { terms: BTreeMap::new() }
    }
    fn one() -> Self {
        Laurent::constant(1)
    }
    fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }
    fn is_one(&self) -> bool {
        self.terms.len() == 1 && self.terms.get(&Mono::new()) == Some(&1)
    }
    fn add(&self, rhs: &Self) -> Self {
        let mut terms = self.terms.clone();
        for (m, c) in &rhs.terms {
            let e = terms.entry(m.clone()).or_insert(0);
            *e = iadd(*e, *c);
            if *e == 0 {
                terms.remove(m);
            }
        }
        Laurent { terms }
    }
    fn sub(&self, rhs: &Self) -> Self {
        self.add(&rhs.neg())
    }
    fn mul(&self, rhs: &Self) -> Self {
        if self.is_zero() || rhs.is_zero() {
            return Ring::zero();
        }
        let mut terms: BTreeMap<Mono, i128> = BTreeMap::new();
        for (ma, ca) in &self.terms {
            for (mb, cb) in &rhs.terms {
                let m = mono_mul(ma, mb);
                let e = terms.entry(m).or_insert(0);
                *e = iadd(*e, imul(*ca, *cb));
            }
        }
        terms.retain(|_, c| *c != 0);
        Laurent { terms }
    }
    fn neg(&self) -> Self {
        Laurent { terms: self.terms.iter().map(|(m, c)| (m.clone(), -*c)).collect() }
    }
    fn from_int(n: i64) -> Self {
        Laurent::constant(n as i128)
    }
    fn show(&self) -> String {
        self.display(&["q1", "q2", "q3", "q4"])
    }
}

/// Canonical string for a rational scalar: `"a"` or `"a/b"`, `b > 0`.
pub fn rat_to_string(r: &Rat) -> String {
    debug_assert!(r.denom().is_positive());
    if r.denom().is_one() {
        format!("{}", r.numer())
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Parse the output of [`rat_to_string`].
pub fn rat_from_string(s: &str) -> Option<Rat> {
    let (n, d) = match s.split_once('/') {
        Some((n, d)) => (n, d),
        None => (s, "1"),
    };
    let n: BigInt = n.parse().ok()?;
    let d: BigInt = d.parse().ok()?;
    if num_traits::Zero::is_zero(&d) {
        return None;
    }
    Some(Rat::new(n, d))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn laurent_arithmetic() {
        let q = Laurent::var(0);
        let qm1 = Laurent::monomial(1, 0, -1);
        assert!(q.mul(&qm1).is_one());
        // (q - 1)(q + 1) = q^2 - 1
        let a = q.sub(&Laurent::one());
        let b = q.add(&Laurent::one());
        let prod = a.mul(&b);
        let expect = Laurent::monomial(1, 0, 2).sub(&Laurent::one());
        assert_eq!(prod, expect);
        assert_eq!(prod.display(&["q"]), "-1 + q^2");
    }

    #[test]
    fn laurent_eval() {
        // 3q^2 - q^{-1} at q = 2 is 12 - 1/2 = 23/2.
        let p = Laurent::monomial(3, 0, 2).add(&Laurent::monomial(-1, 0, -1));
        let v = p.eval(&[rat_int(2)]);
        assert_eq!(v, Rat::new(BigInt::from(23), BigInt::from(2)));
    }

    #[test]
    fn two_variable_product() {
        let a = Laurent::var(0).add(&Laurent::var(1));
        let b = Laurent::var(0).sub(&Laurent::var(1));
        let p = a.mul(&b);
        let expect =
            Laurent::monomial(1, 0, 2).sub(&Laurent::monomial(1, 1, 2));
        assert_eq!(p, expect);
    }

    #[test]
    fn rational_strings() {
        let r = Rat::new(BigInt::from(-6), BigInt::from(4));
        assert_eq!(rat_to_string(&r), "-3/2");
        assert_eq!(rat_from_string("-3/2").unwrap(), r);
        assert_eq!(rat_from_string("7").unwrap(), rat_int(7));
        assert!(rat_from_string("1/0").is_none());
    }
}
