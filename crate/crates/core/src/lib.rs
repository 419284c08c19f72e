//! Factorization invariants of quaternion orders over `Z_(p)`.
//!
//! * [`dvr`]: exact arithmetic in `Z_(p)` and `Q`.
//! * [`eichler`]: Eichler orders of level `n`, their atoms and canonical associates.
//! * [`clifford`]: even Clifford algebras of ternary forms, residue radicals, isotropy.
//! * [`factorize`]: rigid factorizations, lengths, distances, catenary degrees.

pub mod clifford;
pub mod dvr;
pub mod eichler;
pub mod factorize;
pub mod mat2;

pub use dvr::{Dvr, DvrError, Valuation};
pub use eichler::{EichlerError, EichlerOrder};
pub use mat2::Mat2;
