//! Jet arithmetic and intrinsic Riemannian tensor calculus.

mod curvature;
mod jet;
mod jetmat;
mod space;
mod tensor;

pub use curvature::{
    check_spd, christoffel, christoffel_jets, cov_deriv_sym3, riemann, CurvatureData, MetricField, SPD_RATIO,
};
pub(crate) use curvature::for_each4;
pub use jet::{jet_eval, ElementaryFn, Jet};
pub use jetmat::JetMatrix;
pub use space::{JetSpace, MultiIndex, MAX_ORDER};
pub use tensor::Tensor;
