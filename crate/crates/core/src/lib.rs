//! High-precision laboratory for the remainders of Stirling's series for
//! `log Γ`, their Laplace kernels, and empirical completely monotonic degree
//! brackets.

pub mod error;
pub mod hpreal;
pub mod kernels;
pub mod lab;
pub mod precision;
pub mod quadrature;
pub mod remainders;
pub mod special;

pub use error::{Error, Result};
pub use hpreal::HPReal;
pub use precision::PrecisionContext;
