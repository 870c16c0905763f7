use std::hash::Hasher;

use fnv::{FnvHashMap, FnvHasher};

use crate::scorer::features::{featurize, FeatureVector};
use crate::scorer::Scorer;
use crate::transition::{Configuration, Transition};

pub const DEFAULT_BUCKETS: u64 = 1 << 22;

/// Stable hash of a transition, independent of any inventory order.
pub fn transition_key(t: &Transition) -> u64 {
    let mut h = FnvHasher::default();
    let (tag, label, arity) = match t {
        Transition::Shift => (0u8, "", 0),
        Transition::Reduce { label, arity } => (1, label.as_str(), *arity),
        Transition::ReduceLeft(l) => (2, l.as_str(), 2),
        Transition::ReduceRight(l) => (3, l.as_str(), 2),
        Transition::ReduceUnary(l) => (4, l.as_str(), 1),
        Transition::Finish => (5, "", 0),
    };
    h.write_u8(tag);
    h.write(label.as_bytes());
    h.write_u8(0xff);
    h.write_u64(arity as u64);
    h.finish()
}

fn mix(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Hashed sparse weights over (feature, transition) pairs.
#[derive(Clone, Debug, PartialEq)]
pub struct LinearModel {
    buckets: u64,
    weights: FnvHashMap<u64, f64>,
}

impl Default for LinearModel {
    fn default() -> Self {
        LinearModel::new(DEFAULT_BUCKETS)
    }
}

impl LinearModel {
    pub fn new(buckets: u64) -> Self {
        assert!(buckets > 0, "bucket count must be positive");
        LinearModel {
            buckets,
            weights: FnvHashMap::default(),
        }
    }

    pub fn buckets(&self) -> u64 {
        self.buckets
    }

    pub fn bucket(&self, feature: u64, transition: u64) -> u64 {
        mix(feature ^ transition.wrapping_mul(0x9e37_79b9_7f4a_7c15)) % self.buckets
    }

    /// Nonzero weights, sorted by bucket.
    pub fn weights(&self) -> Vec<(u64, f64)> {
        let mut w: Vec<(u64, f64)> = self
            .weights
            .iter()
            .filter(|(_, v)| **v != 0.0)
            .map(|(k, v)| (*k, *v))
            .collect();
        w.sort_unstable_by_key(|(k, _)| *k);
        w
    }

    pub fn nonzero(&self) -> usize {
        self.weights.values().filter(|v| **v != 0.0).count()
    }

    pub fn weight(&self, bucket: u64) -> f64 {
        self.weights.get(&bucket).copied().unwrap_or(0.0)
    }

    /// Sets one weight; zero removes it.
    pub fn set(&mut self, bucket: u64, value: f64) {
        assert!(bucket < self.buckets, "bucket out of range");
        if value == 0.0 {
            self.weights.remove(&bucket);
        } else {
            self.weights.insert(bucket, value);
        }
    }

    pub fn score(&self, features: &FeatureVector, t: &Transition) -> f64 {
        let key = transition_key(t);
        features
            .ids()
            .iter()
            .map(|&f| self.weight(self.bucket(f, key)))
            .sum()
    }

    pub fn score_features(&self, features: &FeatureVector, candidates: &[Transition]) -> Vec<f64> {
        candidates.iter().map(|t| self.score(features, t)).collect()
    }
}

impl Scorer for LinearModel {
    fn score(&self, c: &Configuration, candidates: &[Transition]) -> Vec<f64> {
        self.score_features(&featurize(c), candidates)
    }
}

#[derive(Clone, Copy, Debug, Default)]
struct Accumulator {
    total: f64,
    since: u64,
}

/// Multiclass perceptron with lazily averaged weights.
#[derive(Clone, Debug)]
pub struct Perceptron {
    current: LinearModel,
    acc: FnvHashMap<u64, Accumulator>,
    clock: u64,
    updates: u64,
}

impl Perceptron {
    pub fn new(buckets: u64) -> Self {
        Perceptron {
            current: LinearModel::new(buckets),
            acc: FnvHashMap::default(),
            clock: 0,
            updates: 0,
        }
    }

    /// Weights as of now, unaveraged.
    pub fn current(&self) -> &LinearModel {
        &self.current
    }

    pub fn updates(&self) -> u64 {
        self.updates
    }

    /// Marks the end of one training decision.
    pub fn tick(&mut self) {
        self.clock += 1;
    }

    fn bump(&mut self, bucket: u64, delta: f64) {
        let w = self.current.weight(bucket);
        let acc = self.acc.entry(bucket).or_default();
        acc.total += w * (self.clock - acc.since) as f64;
        acc.since = self.clock;
        self.current.weights.insert(bucket, w + delta);
    }

    /// Rewards `correct` and penalizes `predicted` on every active feature.
    pub fn update(
        &mut self,
        features: &FeatureVector,
        correct: &Transition,
        predicted: &Transition,
    ) {
        if correct == predicted {
            return;
        }
        let good = transition_key(correct);
        let bad = transition_key(predicted);
        for &f in features.ids() {
            let b = self.current.bucket(f, good);
            self.bump(b, 1.0);
            let b = self.current.bucket(f, bad);
            self.bump(b, -1.0);
        }
        self.updates += 1;
    }

    /// Weights averaged over all ticks so far. With no ticks this is the
    /// current model.
    pub fn averaged(&self) -> LinearModel {
        if self.clock == 0 {
            return self.current.clone();
        }
        let mut out = LinearModel::new(self.current.buckets);
        for (&b, &w) in &self.current.weights {
            let acc = self.acc.get(&b).copied().unwrap_or_default();
            let total = acc.total + w * (self.clock - acc.since) as f64;
            let avg = total / self.clock as f64;
            if avg != 0.0 {
                out.weights.insert(b, avg);
            }
        }
        out
    }
}
