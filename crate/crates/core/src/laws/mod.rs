//! Exact hypergeometric, binomial and general finite lattice laws.

pub mod hyper;
pub mod lattice;

pub use hyper::{
    binomial, hyper_cumulants, hypergeometric, identify, is_symmetric, morgenstern_identity_holds,
    usual_approximate_variance, HypergeometricParams, Identified, LawSource, PopulationModel,
    PopulationSize, Symmetry,
};
pub use lattice::{CumulantTriple, LatticeLaw, LawView};
