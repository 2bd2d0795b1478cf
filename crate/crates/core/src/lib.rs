//! Exact classification of centers in planar quadratic systems via affine
//! invariants, with an independent singular-point oracle.

pub mod algebraic;
pub mod classifier;
pub mod comitants;
pub mod families;
pub mod forms;
pub mod identities;
pub mod invariants;
pub mod oracle;
pub mod poly;
pub mod rational;
pub mod scalar;
pub mod system;

pub use classifier::{
    center_at_origin, classify_mf, count_centers, ClassificationReport, SetIndex,
};
pub use comitants::{derived_comitants, ComitantSet};
pub use forms::{transvectant, BinaryForm};
pub use invariants::InvariantTable;
pub use oracle::{oracle_center_count, OracleVerdict};
pub use rational::Rational;
pub use system::QuadSystem;
