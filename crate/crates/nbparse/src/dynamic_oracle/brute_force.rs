//! Exhaustive search for the best reachable loss. This is the reference the
//! closed-form loss is audited against, so it shares nothing with it beyond
//! the transition system itself.

use std::fmt;

use fnv::FnvHashMap;

use crate::dynamic_oracle::{hamming_loss, GoldSet};
use crate::label::{Constituent, Label, Span};
use crate::transition::{Configuration, Transition, TransitionSystem};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct LimitExceeded {
    /// Length of the longest completion found.
    pub longest: usize,
}

impl fmt::Display for LimitExceeded {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "search depth limit exceeded (longest completion {})",
            self.longest
        )
    }
}

impl std::error::Error for LimitExceeded {}

/// The part of a configuration that determines the cost of every
/// completion. Anything a later reduce creates ends at the current buffer
/// position or beyond, so only built constituents ending at `j` can be
/// duplicated, and of those only gold ones matter (up to their gold count).
/// Unary runs below the top can never grow again.
#[derive(Clone, PartialEq, Eq, Hash)]
struct Key {
    spans: Vec<(usize, usize)>,
    top_run: usize,
    j: usize,
    finished: bool,
    ending: Vec<(Label, usize, usize)>,
}

impl Key {
    fn of(c: &Configuration, gold: &GoldSet) -> Self {
        let j = c.buffer_index();
        let mut counts: FnvHashMap<Constituent, usize> = FnvHashMap::default();
        for n in c.built().iter().filter(|n| n.span.r == j) {
            let k = n.constituent();
            if gold.count(&k) > 0 {
                *counts.entry(k).or_insert(0) += 1;
            }
        }
        let mut ending: Vec<(Label, usize, usize)> = counts
            .into_iter()
            .map(|(k, n)| {
                let cap = gold.count(&k);
                (k.label, k.span.l, n.min(cap))
            })
            .collect();
        ending.sort();
        Key {
            spans: c.stack().iter().map(|s| (s.span.l, s.span.r)).collect(),
            top_run: c.stack().last().map_or(0, |s| s.unary_run),
            j,
            finished: c.is_finished(),
            ending,
        }
    }
}

#[derive(Clone, Copy)]
struct Outcome {
    /// Best change in loss over all completions; `None` if every path
    /// dead-ends before a terminal configuration.
    best: Option<i64>,
    longest: usize,
}

/// Memoized exhaustive search over all legal completions for one gold set
/// and transition system. Reusing a solver across configurations of the
/// same sentence shares the memo table.
pub struct BruteForce<'a> {
    system: &'a dyn TransitionSystem,
    gold: &'a GoldSet,
    memo: FnvHashMap<Key, Outcome>,
}

impl<'a> BruteForce<'a> {
    pub fn new(system: &'a dyn TransitionSystem, gold: &'a GoldSet) -> Self {
        BruteForce {
            system,
            gold,
            memo: FnvHashMap::default(),
        }
    }

    /// States memoized so far.
    pub fn states(&self) -> usize {
        self.memo.len()
    }

    /// Minimum symmetric difference between gold and the constituents of
    /// any terminal configuration reachable from `c`.
    pub fn min_loss(
        &mut self,
        c: &Configuration,
        depth_limit: usize,
    ) -> Result<usize, LimitExceeded> {
        let mut built: FnvHashMap<Constituent, usize> = FnvHashMap::default();
        for node in c.built() {
            *built.entry(node.constituent()).or_insert(0) += 1;
        }
        let current = hamming_loss(&built, self.gold) as i64;
        let outcome = self.solve(c);
        if outcome.longest > depth_limit {
            return Err(LimitExceeded {
                longest: outcome.longest,
            });
        }
        let best = outcome.best.expect("every configuration can be completed");
        Ok((current + best) as usize)
    }

    fn solve(&mut self, c: &Configuration) -> Outcome {
        if c.is_finished() {
            return Outcome {
                best: Some(0),
                longest: 0,
            };
        }
        let key = Key::of(c, self.gold);
        if let Some(&hit) = self.memo.get(&key) {
            return hit;
        }
        let mut outcome = Outcome {
            best: None,
            longest: 0,
        };
        for t in self.system.legal_transitions(c) {
            let delta = self.delta(c, &t);
            let next = self
                .system
                .apply(c, &t)
                .expect("legal transitions apply cleanly");
            let sub = self.solve(&next);
            outcome.longest = outcome.longest.max(sub.longest + 1);
            if let Some(b) = sub.best {
                let total = b + delta;
                outcome.best = Some(outcome.best.map_or(total, |cur| cur.min(total)));
            }
        }
        self.memo.insert(key, outcome);
        outcome
    }

    /// Change in symmetric difference caused by the constituent `t` adds.
    fn delta(&self, c: &Configuration, t: &Transition) -> i64 {
        let Some(label) = t.label() else {
            return 0;
        };
        let stack = c.stack();
        let l = stack[stack.len() - t.pops()].span.l;
        let added = Constituent {
            label: label.clone(),
            span: Span::new(l, c.buffer_index()),
        };
        let have = c
            .built()
            .iter()
            .filter(|n| n.constituent() == added)
            .count();
        if have >= self.gold.count(&added) {
            1
        } else {
            -1
        }
    }
}

/// One-shot exhaustive search; see [`BruteForce`].
pub fn brute_force_min_loss(
    system: &dyn TransitionSystem,
    c: &Configuration,
    gold: &GoldSet,
    depth_limit: usize,
) -> Result<usize, LimitExceeded> {
    BruteForce::new(system, gold).min_loss(c, depth_limit)
}
