//! Hypergeometric laws as sums of independent Bernoulli variables, the
//! resulting two-sided normal approximation bound, and concentration
//! inequalities for lattice laws.

pub mod concentration;
pub mod factor;
pub mod poly;
pub mod roots;
pub mod sandwich;

pub use concentration::{
    concentration, concentration_lower_bound, concentration_lower_bound_scaled, levy_decompose,
    levy_equality_law, levy_sharp_check, levy_sharp_check_scaled, smoothed_density_check,
    smoothed_density_sup, ConcentrationReport, LevyEqualityLaw, LevyReport, ScaledLaw,
};
pub use factor::{
    bernoulli_convolution, convolve_bernoulli, factorize, factorize_law, BernoulliFactorization, FactorSource,
};
pub use sandwich::{verify_bc_sandwich, SandwichReport};
