//! Exact computation of normalizers of congruence groups between `Γ₁(N)` and
//! `Γ₀(N)` inside `SL₂(ℝ)`, and of automorphism groups of the even lattices
//! `L(N, D)` of signature (2,1).

pub mod error;
pub mod gammastar;
pub mod lattice;
pub mod normalizer;
pub mod numtheory;
pub mod oracle;
pub mod subgroups;
pub mod verify;

pub use error::{Error, Result};
pub use gammastar::{GammaStarElem, IntMatrix, Matrix2, SqrtRat};
