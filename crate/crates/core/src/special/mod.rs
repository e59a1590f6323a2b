//! Exact Bernoulli numbers and the gamma-family and Laguerre evaluators.

mod bernoulli;
mod gamma;
mod laguerre;
pub(crate) mod util;
mod zeta;

pub use bernoulli::{bernoulli, ExactRational};
pub use gamma::{log_gamma, polygamma};
pub use laguerre::{laguerre, laguerre_derivative, laguerre_generalized};
pub use zeta::hurwitz_zeta;

pub(crate) use bernoulli::{bernoulli_over_factorial, with_bernoulli, with_scaled_even};
pub(crate) use laguerre::laguerre_pair;
pub(crate) use zeta::hurwitz_zeta_batch;
