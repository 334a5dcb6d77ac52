//! Arithmetic of CM elliptic directions for imaginary quadratic fields
//! K = Q(sqrt(-p)), p prime, p > 3, p ≡ 3 (mod 4).
//!
//! The crate computes, for such p:
//!
//! * exact ideal arithmetic and the class group of K ([`quadfield`]);
//! * exact cyclotomic arithmetic, Galois actions, and the group-algebra
//!   operator Θ ([`cyclo`]);
//! * arbitrary-precision Dedekind eta, lattice discriminants, j-invariants,
//!   the Gamma function, and AGM period lattices ([`analytic`]);
//! * the finite characters η of (O_K/𝔭)* with η(-1) = -1, the associated
//!   Hecke characters ψ((a)) = a·η(a), and their trace bookkeeping
//!   ([`heckechar`]);
//! * the canonical twelfth-root cocycle δ on ideals, its twists, the
//!   modularity trace and projector, and coboundary solving ([`cocycle`]);
//! * weight-2 level-p² q-expansions built from cocycle data, with
//!   eigenform verification against an independent point-counting oracle
//!   ([`qexp`], [`pointcount`]);
//! * the Weierstrass data of the CM curve of discriminant -p³ and its
//!   Chowla–Selberg period lattice ([`gross`]).
//!
//! All analytic routines carry explicit binary precision and every derived
//! quantity is cross-checked by at least one independent route.

pub mod analytic;
pub mod cocycle;
pub mod cyclo;
pub mod error;
pub mod gross;
pub mod heckechar;
pub mod pointcount;
pub mod qexp;
pub mod quadfield;

pub use error::{Error, Result};
