//! Kolmogorov distance between lattice laws and normal models, and
//! certification of the distance bounds for symmetric cases.

pub mod distance;
pub mod section4;
pub mod tau;
pub mod theorem;

pub use distance::{
    distance_symmetric_closed, kolmogorov_distance_brute, BoundCheck, BruteSup, DistanceReport, Side,
    SymmetricCase,
};
pub use section4::verify_section4_monotonicity;
pub use tau::TauSpec;
pub use theorem::{
    binomial_sigma_d, exception_applies, solve_exception_constant, solve_exception_constant_to,
    verify_remark_bounds, verify_theorem_main,
};
