//! Exact evaluation of the explicit homotopy formulas on realizations of
//! finite stratified simplicial sets.
//!
//! All arithmetic is over [`num_rational::BigRational`]. Statements about
//! continuous maps are checked at rational sample points, where each check
//! is exact.

use num_rational::BigRational;
use thiserror::Error;

pub mod geom;
pub mod mapping;
pub mod path;
pub mod point;
pub mod retraction;
pub mod suite;

pub use geom::{product_point, GeomPoint};
pub use mapping::{
    lift_check, mapping_path_factor, HornRetraction, LiftReport, MPoint, MappingPathSpace, MappingReport, Path,
    RetractionData, Tally,
};
pub use path::{path_contraction, PLPath};
pub use point::{barycentric_grid, pi_realization, q, unit_grid, RationalPoint};
pub use retraction::{retraction_homotopy, Orientation};
pub use suite::{appendix_suite, SuiteConfig, SuiteReport};

pub type Q = BigRational;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RealizationError {
    #[error("expected {expected} coordinates, got {got}")]
    CoordCount { expected: usize, got: usize },
    #[error("coordinate {0} is negative")]
    Negative(usize),
    #[error("coordinates sum to {0}, not 1")]
    Sum(String),
    #[error("point lies over `{stratum}`, outside {sigma}")]
    OutsidePreimage { stratum: String, sigma: String },
    #[error("zero denominator in {0}")]
    ZeroDenominator(String),
    #[error("invalid path: {0}")]
    Path(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("parameter {name} = {value} is outside [0, 1]")]
    Parameter { name: &'static str, value: String },
    #[error(transparent)]
    Poset(#[from] strat_core::poset::PosetError),
}

pub(crate) fn check_unit(name: &'static str, v: &Q) -> Result<(), RealizationError> {
    use num_traits::{One, Zero};
    if *v < Q::zero() || *v > Q::one() {
        return Err(RealizationError::Parameter { name, value: v.to_string() });
    }
    Ok(())
}
