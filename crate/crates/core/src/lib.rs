//! Local zero loci of admissible normal functions of weight −1.

pub mod algebra;
pub mod degeneration;
pub mod error;
pub mod filtration;
pub mod fixtures;
pub mod interior;
pub mod io;
pub mod mhs;
pub mod nilpotent;
pub mod richardson;

pub use algebra::{ExactMatrix, Field, Matrix, NumericMatrix, NumericScalar, Poly, PolyMatrix, Ring, Scalar, Subspace};
pub use error::{Error, Result};
pub mod roots;
pub mod util;
