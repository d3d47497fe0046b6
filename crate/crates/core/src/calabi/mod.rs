//! Calabi compositions of points and hyperbolic affine hyperspheres.

mod closed_form;
mod compose;
mod index;
mod verify;

pub use closed_form::{closed_form, ClosedFormInvariants};
pub use compose::{compose_chart, CompositionSpec, Factor, T_BOX};
pub use index::{Block, CompositionIndex};
pub use verify::{block_sparsity, equivalent_constants, mean_curvature_relations, sample_points, verify_composition};

#[cfg(test)]
mod tests;
