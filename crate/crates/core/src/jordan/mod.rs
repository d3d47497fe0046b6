//! Octonions, the exceptional Jordan algebra and its E6/F4 hypersphere.

mod albert;
mod embedding;
mod octonion;
mod selftest;

pub use albert::{
    bracket_operator, hermitian_defect, mult_operator, random_anti_hermitian, JordanMatrix, LinOp27, OctMatrix,
    ALBERT_DIM,
};
pub use embedding::{stated_constant, unimodular_constant, E6Embedding};
pub use octonion::{multiplication_table, Octonion};
pub use selftest::selftest;
