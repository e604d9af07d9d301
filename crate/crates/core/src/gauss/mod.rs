pub mod inequalities;
pub mod model;
pub mod normal;

pub use inequalities::{InequalityCertificate, Check};
pub use model::{Enclose, Lazy, NormalModel, Scale};
pub use normal::{cdf, central, increment, pdf, sf};
