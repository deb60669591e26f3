//! Character sums, multiplicative-function mean values and zeros of Dirichlet
//! L-functions, with the numerical machinery to cross-check them.

pub mod arith;
pub mod contour;
pub mod dirichlet;
pub mod error;
pub mod harness;
pub mod lfunction;
pub mod multfn;
pub mod plancherel;
pub mod quad;
pub mod sieve;
pub mod special;
pub mod spectral;
pub mod summation;
pub mod zeros;

pub use error::{Error, Result};
pub use num_complex::Complex64;
