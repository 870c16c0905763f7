//! Greedy perceptron training from static or dynamic oracles, and greedy
//! decoding.

mod decode;
mod report;

pub use decode::{decode_bound, parse, parse_all, parse_with_trace, Parser};
pub use report::{EpochReport, Skipped, TrainReport};

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;
use std::sync::Arc;
use std::time::Instant;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::dynamic_oracle::{choose, DynamicOracle, ExplorationPolicy, GoldSet};
use crate::error::{Error, Result};
use crate::label::Label;
use crate::scorer::{argmax, featurize, Model, Perceptron, DEFAULT_BUCKETS};
use crate::transition::{
    static_oracle_bin, static_oracle_nb, Configuration, Inventory, NonBinarySystem, ReduceSet,
    SystemKind, Transition, TransitionSystem,
};
use crate::treebank::{binarize, HeadRules, Token, Tree, DEFAULT_UNARY_CAP};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum OracleMode {
    #[default]
    Static,
    Dynamic,
}

impl fmt::Display for OracleMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            OracleMode::Static => "static",
            OracleMode::Dynamic => "dynamic",
        })
    }
}

impl FromStr for OracleMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "static" => Ok(OracleMode::Static),
            "dynamic" => Ok(OracleMode::Dynamic),
            _ => Err(Error::Config(format!(
                "unknown oracle {s:?} (expected static or dynamic)"
            ))),
        }
    }
}

#[derive(Clone, Debug)]
pub struct TrainConfig {
    pub system: SystemKind,
    pub oracle: OracleMode,
    pub policy: ExplorationPolicy,
    pub epochs: usize,
    pub seed: u64,
    pub unary_cap: usize,
    pub buckets: u64,
    /// Used by the binary system only.
    pub head_rules: HeadRules,
}

impl Default for TrainConfig {
    fn default() -> Self {
        TrainConfig {
            system: SystemKind::NonBinary,
            oracle: OracleMode::Static,
            policy: ExplorationPolicy::NONE,
            epochs: 10,
            seed: 0,
            unary_cap: DEFAULT_UNARY_CAP,
            buckets: DEFAULT_BUCKETS,
            head_rules: HeadRules::english(),
        }
    }
}

impl TrainConfig {
    pub fn validate(&self) -> Result<()> {
        if self.oracle == OracleMode::Dynamic && self.system == SystemKind::Binary {
            return Err(Error::Config(
                "the dynamic oracle is only available for the non-binary system".into(),
            ));
        }
        if self.buckets == 0 {
            return Err(Error::Config("bucket count must be positive".into()));
        }
        if self.oracle == OracleMode::Static && !self.policy.is_none() {
            return Err(Error::Config("exploration needs the dynamic oracle".into()));
        }
        Ok(())
    }
}

/// A training tree after validation.
struct Example {
    index: usize,
    tokens: Arc<[Token]>,
    /// Static oracle sequence for the configured system.
    gold_seq: Vec<Transition>,
    gold: GoldSet,
}

struct Prepared {
    examples: Vec<Example>,
    skipped: Vec<Skipped>,
    inventory: Inventory,
    fallback: Label,
}

fn prepare(corpus: &[Tree], config: &TrainConfig) -> Result<Prepared> {
    let mut examples = Vec::new();
    let mut skipped = Vec::new();
    let mut inventory = Inventory::default();
    let mut roots: HashMap<Label, usize> = HashMap::new();
    for (index, tree) in corpus.iter().enumerate() {
        if let Err(reason) = tree.validate(config.unary_cap) {
            skipped.push(Skipped { index, reason });
            continue;
        }
        let gold_seq = match config.system {
            SystemKind::NonBinary => {
                inventory.observe_nonbinary(tree);
                static_oracle_nb(tree)
            }
            SystemKind::Binary => {
                let bin = binarize(tree, &config.head_rules);
                match static_oracle_bin(&bin) {
                    Ok(seq) => {
                        inventory.observe_binary(&bin)?;
                        seq
                    }
                    Err(e) => {
                        skipped.push(Skipped {
                            index,
                            reason: e.to_string(),
                        });
                        continue;
                    }
                }
            }
        };
        *roots.entry(tree.label.clone()).or_insert(0) += 1;
        examples.push(Example {
            index,
            tokens: tree.tokens().into(),
            gold_seq,
            gold: GoldSet::from_tree(tree),
        });
    }
    if examples.is_empty() {
        return Err(Error::Config("no usable training trees".into()));
    }
    let fallback = roots
        .into_iter()
        .max_by(|a, b| a.1.cmp(&b.1).then_with(|| b.0.cmp(&a.0)))
        .map(|(l, _)| l)
        .expect("at least one example");
    Ok(Prepared {
        examples,
        skipped,
        inventory,
        fallback,
    })
}

/// Trains with the oracle the configuration names.
pub fn train(corpus: &[Tree], config: &TrainConfig) -> Result<(Model, TrainReport)> {
    match config.oracle {
        OracleMode::Static => train_static(corpus, config),
        OracleMode::Dynamic => train_dynamic(corpus, config),
    }
}

/// Imitation of the static oracle: the parser only visits gold
/// configurations and is updated whenever its best legal choice differs
/// from the gold transition.
pub fn train_static(corpus: &[Tree], config: &TrainConfig) -> Result<(Model, TrainReport)> {
    config.validate()?;
    let prep = prepare(corpus, config)?;
    let mut model = Model {
        kind: config.system,
        unary_cap: config.unary_cap,
        inventory: prep.inventory,
        fallback: prep.fallback,
        weights: Default::default(),
    };
    let system = model.system();
    let mut learner = Perceptron::new(config.buckets);
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let mut order: Vec<usize> = (0..prep.examples.len()).collect();
    let mut report = TrainReport::new(prep.skipped);

    for epoch in 1..=config.epochs {
        let start = Instant::now();
        let mut stats = EpochReport::new(epoch);
        order.shuffle(&mut rng);
        for &i in &order {
            let ex = &prep.examples[i];
            let mut c = Configuration::initial(ex.tokens.clone())?;
            for gold in &ex.gold_seq {
                let legal = system.legal_transitions(&c);
                let features = featurize(&c);
                let scores = learner.current().score_features(&features, &legal);
                let predicted = argmax(&legal, &scores).map(|k| &legal[k]);
                match predicted {
                    Some(p) if p == gold => stats.correct += 1,
                    Some(p) => {
                        learner.update(&features, gold, p);
                        stats.updates += 1;
                    }
                    None => return Err(Error::NoLegalTransition),
                }
                learner.tick();
                stats.decisions += 1;
                system.apply_mut(&mut c, gold)?;
            }
            stats.sentences += 1;
        }
        stats.seconds = start.elapsed().as_secs_f64();
        report.epochs.push(stats);
    }
    model.weights = learner.averaged();
    Ok((model, report))
}

/// Training with the dynamic oracle: the update target is the best-scored
/// zero-cost transition and the next configuration is chosen by the
/// exploration policy, so the parser also learns from its own mistakes.
pub fn train_dynamic(corpus: &[Tree], config: &TrainConfig) -> Result<(Model, TrainReport)> {
    config.validate()?;
    if config.system != SystemKind::NonBinary {
        return Err(Error::Config(
            "the dynamic oracle is only available for the non-binary system".into(),
        ));
    }
    let prep = prepare(corpus, config)?;
    let mut inventory = prep.inventory;
    let oracle_system =
        NonBinarySystem::new(ReduceSet::AnyArity(inventory.labels()), config.unary_cap);
    let oracle = DynamicOracle::new(config.unary_cap);
    let mut learner = Perceptron::new(config.buckets);
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let mut order: Vec<usize> = (0..prep.examples.len()).collect();
    let mut report = TrainReport::new(prep.skipped);

    let known = |inventory: &Inventory, t: &Transition| match t {
        Transition::Reduce { label, arity } => inventory.reduces.contains(&(label.clone(), *arity)),
        _ => true,
    };

    for epoch in 1..=config.epochs {
        let start = Instant::now();
        let mut stats = EpochReport::new(epoch);
        order.shuffle(&mut rng);
        for &i in &order {
            let ex = &prep.examples[i];
            let mut c = Configuration::initial(ex.tokens.clone())?;
            let mut step = 0;
            while !c.is_finished() {
                let zero = oracle.zero_cost_transitions(&oracle_system, &c, &ex.gold);
                if zero.is_empty() {
                    return Err(Error::EmptyZeroCost {
                        sentence: ex.index,
                        step,
                    });
                }
                let candidates: Vec<Transition> = oracle_system
                    .legal_transitions(&c)
                    .into_iter()
                    .filter(|t| known(&inventory, t) || zero.contains(t))
                    .collect();
                let features = featurize(&c);
                let scores = learner.current().score_features(&features, &candidates);
                let predicted = &candidates[argmax(&candidates, &scores).expect("candidates")];
                let zero_scores: Vec<f64> = zero
                    .iter()
                    .map(|z| {
                        scores[candidates
                            .iter()
                            .position(|t| t == z)
                            .expect("zero-cost is a candidate")]
                    })
                    .collect();
                let target = &zero[argmax(&zero, &zero_scores).expect("nonempty")];
                if zero.contains(predicted) {
                    stats.correct += 1;
                } else {
                    learner.update(&features, target, predicted);
                    stats.updates += 1;
                }
                learner.tick();
                stats.decisions += 1;

                let scored: Vec<(Transition, f64)> = candidates
                    .iter()
                    .cloned()
                    .zip(scores.iter().copied())
                    .collect();
                let next = choose(&scored, &zero, &config.policy, &mut rng)?;
                for t in [target, &next] {
                    if let Transition::Reduce { label, arity } = t {
                        inventory.reduces.insert((label.clone(), *arity));
                    }
                }
                oracle_system.apply_mut(&mut c, &next)?;
                step += 1;
            }
            stats.sentences += 1;
        }
        stats.seconds = start.elapsed().as_secs_f64();
        report.epochs.push(stats);
    }
    let model = Model {
        kind: SystemKind::NonBinary,
        unary_cap: config.unary_cap,
        inventory,
        fallback: prep.fallback,
        weights: learner.averaged(),
    };
    Ok((model, report))
}
