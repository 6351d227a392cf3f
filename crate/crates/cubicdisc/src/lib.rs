//! Exact determinantal representations of the resultant of four quaternary
//! quadrics and the discriminant of cubic surfaces.
//!
//! Two routes are implemented and cross-checked against each other:
//!
//! * the Pfaffian route: a 16x16 skew-symmetric matrix with linear entries
//!   in the 210 Plücker coordinates of Gr(4,10), extracted from a Tate
//!   resolution of the rank-2 Ulrich bundle on the 2-uple embedding of P^3
//!   (the twisted null-correlation bundle), evaluated by Plücker
//!   substitution and an exact Pfaffian;
//! * Nanson's route: the 20x20 coefficient matrix of the sixteen products
//!   `x_j * Q_i` and the four partials of the Jacobian determinant, whose
//!   determinant is the resultant.
//!
//! Everything is exact: arbitrary-precision rationals or prime fields,
//! fraction-free elimination, and evaluation/interpolation instead of
//! symbolic expansion. The `strata` module uses the Nanson matrix rank to
//! explore the loci of k-nodal cubic surfaces.

pub mod error;
pub mod field;
pub mod matrix;
pub mod poly;
pub mod unipoly;
pub mod interp;
pub mod exterior;
pub mod chow;
pub mod psi;
pub mod nanson;
pub mod oracle;
pub mod strata;
pub mod verify;

pub use error::Error;
pub use field::{Field, Fp, Rationals};

/// Default prime for modular runs: odd, larger than every degree in play,
/// and coprime to 32 so Euler relations on degree-32 forms stay valid.
pub const DEFAULT_PRIME: u64 = 32003;
