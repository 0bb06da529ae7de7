//! Empirical tests of joint Chebotarev–Sato–Tate equidistribution for abelian
//! surfaces over Q.
//!
//! The crate generates Frobenius data of abelian surfaces ([`arith`]), computes
//! Artin symbols in abelian extensions ([`galois`]), models the thirteen
//! Sato–Tate groups of surfaces potentially of GL₂-type ([`stgroups`]) with
//! their irreducible representations ([`strep`]), and compares the data with
//! Haar measure through character sums, moments, χ² fits ([`equidist`]) and
//! truncated Euler products ([`lfun`]).

pub mod arith;
pub mod config;
pub mod equidist;
pub mod error;
pub mod finite_group;
pub mod galois;
pub mod lfun;
pub mod linalg;
pub mod quadrature;
pub mod registry;
pub mod stgroups;
pub mod strep;

pub use error::{Error, Result};
