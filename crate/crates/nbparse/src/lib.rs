//! Shift-reduce constituent parsing with a non-binary bottom-up transition
//! system, a binary bottom-up baseline, and an optimal dynamic oracle.

pub mod audit;
pub mod dynamic_oracle;
pub mod error;
pub mod evaluator;
pub mod label;
pub mod scorer;
pub mod synth;
pub mod trainer;
pub mod transition;
pub mod treebank;

pub use error::{Error, Result};
pub use label::{Constituent, Label, Span};
