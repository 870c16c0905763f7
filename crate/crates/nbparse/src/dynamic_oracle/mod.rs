//! Constituent reachability, the configuration loss and zero-cost
//! transitions for the non-binary system.
//!
//! A gold constituent `(X, l, r)` is reachable from a configuration with
//! buffer index `j` when it is already built, lies entirely in the buffer
//! (`j <= l`), or starts at the left edge of some stack item and does not
//! end before `j`. Constituents are counted as a multiset so that unary
//! chains repeating a label over one span (`X -> X -> a`) stay distinct.
//!
//! The unary cap adds one constraint: gold copies spanning exactly the top
//! stack item can only be built by unary reduces on top of it, so at most
//! `cap - unary_run` of them remain reachable.

mod brute_force;
mod explore;

use std::collections::HashMap;
use std::hash::BuildHasher;

use fnv::FnvHashMap;

pub use brute_force::{brute_force_min_loss, BruteForce, LimitExceeded};
pub use explore::{choose, ExplorationPolicy};

use crate::error::{Error, Result};
use crate::label::{Constituent, Span};
use crate::transition::{Configuration, Transition, TransitionSystem};
use crate::treebank::{constituent_counts, Tree};

/// Gold constituents of one sentence, as a multiset.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GoldSet {
    counts: FnvHashMap<Constituent, usize>,
    /// Sorted keys, for deterministic iteration.
    keys: Vec<Constituent>,
    n: usize,
}

impl GoldSet {
    pub fn from_tree(tree: &Tree) -> Self {
        let counts: FnvHashMap<Constituent, usize> = constituent_counts(tree).into_iter().collect();
        let mut keys: Vec<_> = counts.keys().cloned().collect();
        keys.sort();
        GoldSet {
            counts,
            keys,
            n: tree.len(),
        }
    }

    /// Builds a gold set from loose constituents, checking bounds and
    /// proper nesting.
    pub fn from_constituents(
        items: impl IntoIterator<Item = Constituent>,
        n: usize,
    ) -> Result<Self> {
        let mut counts = FnvHashMap::default();
        for c in items {
            if c.span.l >= c.span.r || c.span.r > n {
                return Err(Error::MalformedTree(format!(
                    "{c} is outside a sentence of {n} words"
                )));
            }
            *counts.entry(c).or_insert(0) += 1;
        }
        let mut keys: Vec<Constituent> = counts.keys().cloned().collect();
        keys.sort();
        for (i, a) in keys.iter().enumerate() {
            for b in &keys[i + 1..] {
                let (x, y) = (a.span, b.span);
                let crossing =
                    (x.l < y.l && y.l < x.r && x.r < y.r) || (y.l < x.l && x.l < y.r && y.r < x.r);
                if crossing {
                    return Err(Error::MalformedTree(format!("{a} crosses {b}")));
                }
            }
        }
        Ok(GoldSet { counts, keys, n })
    }

    pub fn count(&self, c: &Constituent) -> usize {
        self.counts.get(c).copied().unwrap_or(0)
    }

    pub fn sentence_len(&self) -> usize {
        self.n
    }

    /// Total number of gold constituents, copies included.
    pub fn len(&self) -> usize {
        self.counts.values().sum()
    }

    pub fn is_empty(&self) -> bool {
        self.counts.is_empty()
    }

    /// Distinct constituents with their multiplicities, sorted.
    pub fn iter(&self) -> impl Iterator<Item = (&Constituent, usize)> {
        self.keys.iter().map(|k| (k, self.counts[k]))
    }
}

/// Which reachability conditions are in force. All are on by default;
/// switching one off yields a deliberately wrong oracle for audits.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Conditions {
    pub built: bool,
    pub in_buffer: bool,
    pub stack_anchored: bool,
}

impl Default for Conditions {
    fn default() -> Self {
        Conditions {
            built: true,
            in_buffer: true,
            stack_anchored: true,
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ReachabilityReport {
    pub reachable: Vec<Constituent>,
    pub unreachable: Vec<Constituent>,
    pub false_positives: Vec<Constituent>,
    pub loss: usize,
}

/// The inputs the loss depends on, possibly one transition ahead of the
/// configuration they were taken from.
struct View<'a> {
    built: &'a FnvHashMap<Constituent, usize>,
    added: Option<Constituent>,
    /// Left endpoints of the stack items, bottom to top.
    lefts: &'a [usize],
    extra_left: Option<usize>,
    j: usize,
    top: Option<(Span, usize)>,
    finished: bool,
}

impl View<'_> {
    fn built_count(&self, c: &Constituent) -> usize {
        self.built.get(c).copied().unwrap_or(0) + usize::from(self.added.as_ref() == Some(c))
    }

    fn is_left_endpoint(&self, l: usize) -> bool {
        self.extra_left == Some(l) || self.lefts.binary_search(&l).is_ok()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Status {
    Reachable,
    /// Needs a unary reduce over the top stack item.
    NeedsTopUnary,
    Unreachable,
}

#[derive(Clone, Debug)]
pub struct DynamicOracle {
    unary_cap: usize,
    conditions: Conditions,
}

impl DynamicOracle {
    pub fn new(unary_cap: usize) -> Self {
        DynamicOracle {
            unary_cap,
            conditions: Conditions::default(),
        }
    }

    pub fn with_conditions(mut self, conditions: Conditions) -> Self {
        self.conditions = conditions;
        self
    }

    pub fn unary_cap(&self) -> usize {
        self.unary_cap
    }

    fn status(&self, view: &View<'_>, g: &Constituent) -> Status {
        let Span { l, r } = g.span;
        if view.finished {
            return Status::Unreachable;
        }
        if self.conditions.in_buffer && view.j <= l {
            return Status::Reachable;
        }
        if self.conditions.stack_anchored && view.j <= r && view.is_left_endpoint(l) {
            if view.top.is_some_and(|(span, _)| span == g.span) {
                return Status::NeedsTopUnary;
            }
            return Status::Reachable;
        }
        Status::Unreachable
    }

    /// Walks the gold multiset, reporting how many copies of each
    /// constituent are matched, reachable and unreachable.
    fn classify(
        &self,
        view: &View<'_>,
        gold: &GoldSet,
        mut visit: impl FnMut(&Constituent, usize, usize),
    ) {
        let mut budget = view
            .top
            .map(|(_, run)| self.unary_cap.saturating_sub(run))
            .unwrap_or(0);
        for (g, count) in gold.iter() {
            let matched = if self.conditions.built {
                count.min(view.built_count(g))
            } else {
                0
            };
            let missing = count - matched;
            let reachable = match self.status(view, g) {
                _ if missing == 0 => 0,
                Status::Reachable => missing,
                Status::Unreachable => 0,
                Status::NeedsTopUnary => {
                    let k = missing.min(budget);
                    budget -= k;
                    k
                }
            };
            visit(g, matched + reachable, missing - reachable);
        }
    }

    fn false_positive_count(&self, view: &View<'_>, gold: &GoldSet, base_fp: usize) -> usize {
        match &view.added {
            Some(c) if view.built.get(c).copied().unwrap_or(0) >= gold.count(c) => base_fp + 1,
            _ => base_fp,
        }
    }

    fn loss_of_view(&self, view: &View<'_>, gold: &GoldSet, base_fp: usize) -> usize {
        let mut unreachable = 0;
        self.classify(view, gold, |_, _, u| unreachable += u);
        unreachable + self.false_positive_count(view, gold, base_fp)
    }

    /// Individual reachability of one gold constituent.
    pub fn is_reachable(&self, c: &Configuration, g: &Constituent) -> bool {
        let state = State::of(c);
        let view = state.view();
        if self.conditions.built && view.built_count(g) > 0 {
            return true;
        }
        match self.status(&view, g) {
            Status::Reachable => true,
            Status::Unreachable => false,
            Status::NeedsTopUnary => view.top.is_some_and(|(_, run)| run < self.unary_cap),
        }
    }

    /// Minimum achievable symmetric-difference loss from `c`:
    /// unreachable gold constituents plus built false positives. Word
    /// constituents never count.
    pub fn loss(&self, c: &Configuration, gold: &GoldSet) -> usize {
        let state = State::of(c);
        let base_fp = state.false_positives(gold);
        self.loss_of_view(&state.view(), gold, base_fp)
    }

    pub fn report(&self, c: &Configuration, gold: &GoldSet) -> ReachabilityReport {
        let state = State::of(c);
        let view = state.view();
        let mut report = ReachabilityReport::default();
        self.classify(&view, gold, |g, reach, unreach| {
            report
                .reachable
                .extend(std::iter::repeat_n(g.clone(), reach));
            report
                .unreachable
                .extend(std::iter::repeat_n(g.clone(), unreach));
        });
        let mut fps: Vec<_> = state
            .built
            .iter()
            .filter(|(k, &v)| v > gold.count(k))
            .flat_map(|(k, &v)| std::iter::repeat_n(k.clone(), v - gold.count(k)))
            .collect();
        fps.sort();
        report.false_positives = fps;
        report.loss = report.unreachable.len() + report.false_positives.len();
        report
    }

    /// `loss(apply(c, t))` computed without building the successor.
    /// `t` must be legal in `c`.
    pub fn loss_after(&self, c: &Configuration, gold: &GoldSet, t: &Transition) -> usize {
        let state = State::of(c);
        let base_fp = state.false_positives(gold);
        self.loss_after_state(&state, gold, base_fp, t)
    }

    fn loss_after_state(
        &self,
        state: &State,
        gold: &GoldSet,
        base_fp: usize,
        t: &Transition,
    ) -> usize {
        let j = state.j;
        let view = match t {
            Transition::Shift => View {
                built: &state.built,
                added: None,
                lefts: &state.lefts,
                extra_left: Some(j),
                j: j + 1,
                top: Some((Span::new(j, j + 1), 0)),
                finished: false,
            },
            Transition::Finish => View {
                finished: true,
                ..state.view()
            },
            _ => {
                let k = t.pops();
                let keep = state.lefts.len() - k + 1;
                let l = state.lefts[keep - 1];
                let span = Span::new(l, j);
                let run = if k == 1 {
                    state.top.map_or(0, |(_, run)| run) + 1
                } else {
                    0
                };
                View {
                    built: &state.built,
                    added: Some(Constituent {
                        label: t.label().expect("reduce has a label").clone(),
                        span,
                    }),
                    lefts: &state.lefts[..keep],
                    extra_left: None,
                    j,
                    top: Some((span, run)),
                    finished: false,
                }
            }
        };
        self.loss_of_view(&view, gold, base_fp)
    }

    /// Legal transitions that keep the loss unchanged, in canonical order.
    pub fn zero_cost_transitions(
        &self,
        system: &dyn TransitionSystem,
        c: &Configuration,
        gold: &GoldSet,
    ) -> Vec<Transition> {
        let state = State::of(c);
        let base_fp = state.false_positives(gold);
        let current = self.loss_of_view(&state.view(), gold, base_fp);
        system
            .legal_transitions(c)
            .into_iter()
            .filter(|t| self.loss_after_state(&state, gold, base_fp, t) == current)
            .collect()
    }

    /// Picks the next transition during exploration training.
    pub fn explore<R: rand::Rng + ?Sized>(
        &self,
        system: &dyn TransitionSystem,
        c: &Configuration,
        gold: &GoldSet,
        scores: &[(Transition, f64)],
        policy: &ExplorationPolicy,
        rng: &mut R,
    ) -> Result<Transition> {
        let zero = self.zero_cost_transitions(system, c, gold);
        choose(scores, &zero, policy, rng)
    }
}

/// Loss inputs extracted from a configuration.
struct State {
    built: FnvHashMap<Constituent, usize>,
    lefts: Vec<usize>,
    j: usize,
    top: Option<(Span, usize)>,
    finished: bool,
}

impl State {
    fn of(c: &Configuration) -> Self {
        let mut built = FnvHashMap::with_capacity_and_hasher(c.built().len(), Default::default());
        for node in c.built() {
            *built.entry(node.constituent()).or_insert(0) += 1;
        }
        State {
            built,
            lefts: c.stack().iter().map(|s| s.span.l).collect(),
            j: c.buffer_index(),
            top: c.top().map(|t| (t.span, t.unary_run)),
            finished: c.is_finished(),
        }
    }

    fn view(&self) -> View<'_> {
        View {
            built: &self.built,
            added: None,
            lefts: &self.lefts,
            extra_left: None,
            j: self.j,
            top: self.top,
            finished: self.finished,
        }
    }

    fn false_positives(&self, gold: &GoldSet) -> usize {
        self.built
            .iter()
            .map(|(k, &v)| v.saturating_sub(gold.count(k)))
            .sum()
    }
}

/// Symmetric difference between two constituent multisets.
pub fn hamming_loss<S: BuildHasher>(
    predicted: &HashMap<Constituent, usize, S>,
    gold: &GoldSet,
) -> usize {
    let mut total = 0;
    for (k, &v) in predicted {
        total += v.abs_diff(gold.count(k));
    }
    for (k, g) in gold.iter() {
        if !predicted.contains_key(k) {
            total += g;
        }
    }
    total
}

#[cfg(test)]
mod tests;
