//! Exact chain-level certificates for parabolic coset complexes and their
//! module-theoretic avatars.
//!
//! The crate builds, for a finite Coxeter group `(W, S)` and a proper subset
//! `I0` of `S`, an explicit contracting homotopy of the complex spanned by
//! the parabolic cosets meeting the `I0`-reduced elements, and transports the
//! integer coefficients of that homotopy to
//!
//! * complexes of Iwahori-Hecke bimodules over multi-parameter Laurent rings
//!   ([`hecke`]),
//! * Steinberg-type complexes and induced-module complexes of finite split
//!   BN-pairs over the integers and rationals ([`bnpair`]).
//!
//! Every claimed identity is re-verified by exact arithmetic; nothing is
//! accepted on faith from the construction that produced it. The crate is
//! `no_std` (with `alloc`); IO, serialization and the CLI live in the
//! companion crate.

#![no_std]
#![forbid(unsafe_code)]

extern crate alloc;

#[cfg(test)]
extern crate std;

pub mod bnpair;
pub mod chain;
pub mod coxeter;
pub mod hecke;
pub mod parabolic;
pub mod ring;

pub use bnpair::{build_bn, BnData, FinGroup, GroupKind};
pub use chain::{ChainMap, Complex, EquivCert, SparseMat};
pub use coxeter::{CoxType, CoxeterGroup};
pub use hecke::{HeckeAlg, ParabolicModel, XBasis};
pub use parabolic::{Coset, CosetScheme, SigmaData};
pub use ring::{Field, Int, Laurent, Rat, Ring};
