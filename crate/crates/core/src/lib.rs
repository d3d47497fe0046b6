//! Equiaffine differential geometry of locally strongly convex hypersurfaces.
//!
//! The core is generic over a [`Real`] scalar; [`Jet`] arithmetic also
//! works over exact rationals.

pub mod blaschke;
pub mod calabi;
pub mod catalog;
pub mod chart;
pub mod duality;
pub mod error;
pub mod jordan;
pub mod linalg;
pub mod numtensor;
pub mod report;
pub mod scalar;

pub use blaschke::{blaschke_at, BlaschkeInvariants};
pub use chart::{eval_chart_jet, parse_chart, ChartDef};
pub use error::{Error, ParseError, Result};
pub use numtensor::{Jet, JetMatrix, JetSpace, MetricField, Tensor};
pub use report::CheckReport;
pub use scalar::{Real, Scalar};

pub type Jet64 = Jet<f64>;
pub type Jet32 = Jet<f32>;
pub type JetQ = Jet<num_rational::Rational64>;
pub type Matrix64 = linalg::Matrix<f64>;
pub type Tensor64 = Tensor<f64>;
