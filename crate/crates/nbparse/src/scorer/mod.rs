//! Configuration scoring: hashed features, a linear model trained as an
//! averaged perceptron, and the model file.

mod features;
mod linear;
mod model;

pub use features::{featurize, FeatureVector, TEMPLATE_SET};
pub use linear::{transition_key, LinearModel, Perceptron, DEFAULT_BUCKETS};
pub use model::{Model, FORMAT_VERSION, MAGIC};

use crate::transition::{Configuration, Transition};

/// Maps a configuration and candidate transitions to scores. Legality is
/// the caller's concern.
pub trait Scorer {
    fn score(&self, c: &Configuration, candidates: &[Transition]) -> Vec<f64>;
}

/// Index of the best score; ties go to the canonically smallest transition.
pub fn argmax(candidates: &[Transition], scores: &[f64]) -> Option<usize> {
    let mut best: Option<usize> = None;
    for i in 0..candidates.len() {
        best = match best {
            Some(b)
                if scores[b] > scores[i]
                    || (scores[b] == scores[i] && candidates[b] <= candidates[i]) =>
            {
                Some(b)
            }
            _ => Some(i),
        };
    }
    best
}
