//! Exact symmetric hypergeometric and binomial laws, certified Kolmogorov
//! distances to normal approximations, and checkers for the accompanying
//! analytic inequalities.

pub mod bernconv;
pub mod cli;
pub mod error;
pub mod exactnum;
pub mod gauss;
pub mod kolmo;
pub mod laws;
pub mod report;

pub use error::{Error, Result};
