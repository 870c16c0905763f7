//! Checks the closed-form loss and zero-cost sets against exhaustive
//! search.

use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::dynamic_oracle::{BruteForce, Conditions, DynamicOracle, GoldSet};
use crate::label::{Label, Span};
use crate::synth::{random_tree, Shape};
use crate::transition::{Configuration, NonBinarySystem, ReduceSet, Transition, TransitionSystem};
use crate::treebank::{write_ptb, Leaf, Node, Token, Tree, DEFAULT_UNARY_CAP};

/// Search depth handed to the brute force; far above any completion length
/// at audit sizes.
const SEARCH_LIMIT: usize = 10_000;

#[derive(Clone, Debug)]
pub struct AuditConfig {
    /// Longest sentence of the exhaustive part.
    pub exhaustive_len: usize,
    pub exhaustive_labels: usize,
    /// Configurations are those reachable in at most this many steps.
    pub depth: usize,
    /// Longest unary chain in the exhaustive gold trees.
    pub gold_unary: usize,
    /// Most unary nodes in one exhaustive gold tree.
    pub gold_unary_nodes: usize,
    pub samples: usize,
    pub sample_len: usize,
    pub sample_labels: usize,
    pub seed: u64,
    pub unary_cap: usize,
    /// Reachability conditions of the oracle under test.
    pub conditions: Conditions,
    /// Counterexamples kept in the report.
    pub keep: usize,
}

impl Default for AuditConfig {
    fn default() -> Self {
        AuditConfig {
            exhaustive_len: 4,
            exhaustive_labels: 2,
            depth: 8,
            gold_unary: 1,
            gold_unary_nodes: 1,
            samples: 1000,
            sample_len: 6,
            sample_labels: 3,
            seed: 0,
            unary_cap: DEFAULT_UNARY_CAP,
            conditions: Conditions::default(),
            keep: 5,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Counterexample {
    pub gold: String,
    /// Transitions from the initial configuration.
    pub trace: Vec<Transition>,
    pub oracle_loss: usize,
    pub search_loss: usize,
    /// Zero-cost set of the oracle, and the set implied by the search.
    pub oracle_zero: Vec<Transition>,
    pub search_zero: Vec<Transition>,
}

impl fmt::Display for Counterexample {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let join = |ts: &[Transition]| {
            ts.iter()
                .map(|t| t.to_string())
                .collect::<Vec<_>>()
                .join(" ")
        };
        writeln!(f, "gold:   {}", self.gold)?;
        writeln!(f, "trace:  {}", join(&self.trace))?;
        writeln!(
            f,
            "loss:   oracle {} vs search {}",
            self.oracle_loss, self.search_loss
        )?;
        writeln!(f, "zero:   oracle [{}]", join(&self.oracle_zero))?;
        write!(f, "        search [{}]", join(&self.search_zero))
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct AuditReport {
    pub trees: usize,
    /// (gold tree, configuration) pairs checked.
    pub checks: usize,
    pub mismatches: usize,
    pub counterexamples: Vec<Counterexample>,
}

impl AuditReport {
    pub fn passed(&self) -> bool {
        self.mismatches == 0
    }

    /// Summary `key=value` lines, then one tab-separated line per kept
    /// counterexample.
    pub fn records(&self) -> Vec<String> {
        let join = |ts: &[Transition]| {
            ts.iter()
                .map(|t| t.to_string())
                .collect::<Vec<_>>()
                .join(",")
        };
        let mut out = vec![
            format!("trees={}", self.trees),
            format!("checks={}", self.checks),
            format!("mismatches={}", self.mismatches),
        ];
        for (i, c) in self.counterexamples.iter().enumerate() {
            out.push(format!(
                "counterexample={}\tgold={}\ttrace={}\toracle_loss={}\tsearch_loss={}\toracle_zero={}\tsearch_zero={}",
                i + 1,
                c.gold,
                join(&c.trace),
                c.oracle_loss,
                c.search_loss,
                join(&c.oracle_zero),
                join(&c.search_zero)
            ));
        }
        out
    }

    fn merge(&mut self, other: AuditReport, keep: usize) {
        self.trees += other.trees;
        self.checks += other.checks;
        self.mismatches += other.mismatches;
        for c in other.counterexamples {
            if self.counterexamples.len() < keep {
                self.counterexamples.push(c);
            }
        }
    }
}

impl fmt::Display for AuditReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(
            f,
            "{} gold trees, {} configurations checked, {} mismatches",
            self.trees, self.checks, self.mismatches
        )?;
        for (i, c) in self.counterexamples.iter().enumerate() {
            writeln!(f, "counterexample {}:", i + 1)?;
            writeln!(f, "{c}")?;
        }
        Ok(())
    }
}

fn label_set(count: usize) -> Vec<Label> {
    (0..count)
        .map(|i| {
            Label::new(
                &((b'A' + (i % 26) as u8) as char)
                    .to_string()
                    .repeat(1 + i / 26),
            )
        })
        .collect()
}

fn tokens(n: usize) -> Arc<[Token]> {
    (0..n)
        .map(|i| Token::new(format!("w{i}"), "P"))
        .collect::<Vec<_>>()
        .into()
}

/// Limits on unary nodes in generated gold trees.
#[derive(Clone, Copy)]
struct UnaryLimits {
    /// Longest chain above any node or word.
    chain: usize,
    /// Unary nodes in the whole tree.
    total: usize,
}

/// Every way of putting a chain of unary nodes above `node`, which already
/// holds `used` unary nodes.
fn with_chains(
    node: Node,
    used: usize,
    labels: &[Label],
    lim: UnaryLimits,
    out: &mut Vec<(Node, usize)>,
) {
    let mut layer = vec![node];
    for used in (used..=lim.total).take(lim.chain + 1) {
        let mut next = Vec::new();
        for n in &layer {
            for l in labels {
                next.push(Node::Tree(Tree::new(l.clone(), vec![n.clone()])));
            }
        }
        out.extend(layer.drain(..).map(|n| (n, used)));
        layer = next;
    }
}

/// All nodes over `[l, r)` with their unary node counts: every bracketing
/// with inner nodes of arity at least two, any labels, and unary nodes
/// within `lim`.
fn all_nodes(
    l: usize,
    r: usize,
    toks: &[Token],
    labels: &[Label],
    lim: UnaryLimits,
    memo: &mut HashMap<(usize, usize), Vec<(Node, usize)>>,
) -> Vec<(Node, usize)> {
    if let Some(v) = memo.get(&(l, r)) {
        return v.clone();
    }
    let mut out = Vec::new();
    if r - l == 1 {
        let leaf = Node::Leaf(Leaf {
            token: toks[l].clone(),
            index: l,
        });
        with_chains(leaf, 0, labels, lim, &mut out);
    } else {
        for parts in compositions(l, r) {
            let choices: Vec<Vec<(Node, usize)>> = parts
                .windows(2)
                .map(|w| all_nodes(w[0], w[1], toks, labels, lim, memo))
                .collect();
            for (children, used) in cartesian(&choices, lim.total) {
                for lab in labels {
                    let node = Node::Tree(Tree::new(lab.clone(), children.clone()));
                    with_chains(node, used, labels, lim, &mut out);
                }
            }
        }
    }
    memo.insert((l, r), out.clone());
    out
}

/// Boundaries of every split of `[l, r)` into at least two pieces.
fn compositions(l: usize, r: usize) -> Vec<Vec<usize>> {
    let inner: Vec<usize> = (l + 1..r).collect();
    let mut out = Vec::new();
    for mask in 1u32..(1 << inner.len()) {
        let mut b = vec![l];
        b.extend(
            inner
                .iter()
                .enumerate()
                .filter(|(i, _)| mask & (1 << i) != 0)
                .map(|(_, p)| *p),
        );
        b.push(r);
        out.push(b);
    }
    out
}

/// Child sequences whose unary counts sum to at most `total`.
fn cartesian(choices: &[Vec<(Node, usize)>], total: usize) -> Vec<(Vec<Node>, usize)> {
    let mut out = vec![(Vec::new(), 0)];
    for c in choices {
        let mut next = Vec::new();
        for (prefix, used) in &out {
            for (n, u) in c {
                if used + u <= total {
                    let mut v = prefix.clone();
                    v.push(n.clone());
                    next.push((v, used + u));
                }
            }
        }
        out = next;
    }
    out
}

/// Every gold tree over `n` words: any bracketing, any labels, unary
/// chains of at most `max_chain` nodes above any node or word, and at most
/// `max_total` unary nodes overall.
pub fn all_trees(n: usize, labels: &[Label], max_chain: usize, max_total: usize) -> Vec<Tree> {
    let toks = tokens(n);
    let lim = UnaryLimits {
        chain: max_chain,
        total: max_total,
    };
    let mut memo = HashMap::new();
    all_nodes(0, n, &toks, labels, lim, &mut memo)
        .into_iter()
        .filter_map(|(node, _)| match node {
            Node::Tree(t) => Some(t),
            Node::Leaf(_) => None,
        })
        .collect()
}

/// What decides every future of a configuration: its constituent
/// multiset, the stack spans, the unary run of the top item, the buffer
/// position and the finished flag.
type Signature = (Vec<(Label, usize, usize)>, Vec<Span>, usize, usize, bool);

fn signature(c: &Configuration) -> Signature {
    let mut built: Vec<(Label, usize, usize)> = c
        .built()
        .iter()
        .map(|n| (n.label.clone(), n.span.l, n.span.r))
        .collect();
    built.sort();
    (
        built,
        c.stack().iter().map(|s| s.span).collect(),
        c.top().map_or(0, |t| t.unary_run),
        c.buffer_index(),
        c.is_finished(),
    )
}

/// Distinct configurations reachable within `depth` steps, each with the
/// first trace that reached it.
pub fn reachable_configurations(
    system: &dyn TransitionSystem,
    n: usize,
    depth: usize,
) -> Vec<(Configuration, Vec<Transition>)> {
    let g = Graph::build(system, n, depth);
    g.nodes.into_iter().take(g.checked).collect()
}

/// Reachable configurations one layer past the depth limit, with the
/// successor index of every legal transition for nodes inside the limit.
/// The step count of a configuration is fixed by its buffer position, its
/// constituents and the finished flag, so successors always come later.
struct Graph {
    nodes: Vec<(Configuration, Vec<Transition>)>,
    succ: Vec<Vec<(Transition, usize)>>,
    /// Nodes `0..checked` lie within the depth limit.
    checked: usize,
}

impl Graph {
    fn build(system: &dyn TransitionSystem, n: usize, depth: usize) -> Graph {
        let start = Configuration::initial(tokens(n)).expect("n is positive");
        let mut index: HashMap<Signature, usize> = HashMap::new();
        index.insert(signature(&start), 0);
        let mut nodes = vec![(start, Vec::new())];
        let mut succ = Vec::new();
        let mut layer = 0..1;
        for _ in 0..depth {
            let from = nodes.len();
            for i in layer.clone() {
                let mut out = Vec::new();
                for t in system.legal_transitions(&nodes[i].0) {
                    let d = system.apply(&nodes[i].0, &t).expect("legal");
                    let k = *index.entry(signature(&d)).or_insert_with(|| {
                        let mut tr = nodes[i].1.clone();
                        tr.push(t.clone());
                        nodes.push((d, tr));
                        nodes.len() - 1
                    });
                    out.push((t, k));
                }
                succ.push(out);
            }
            layer = from..nodes.len();
        }
        let checked = nodes.len();
        for i in layer {
            let mut out = Vec::new();
            for t in system.legal_transitions(&nodes[i].0) {
                let d = system.apply(&nodes[i].0, &t).expect("legal");
                let k = *index.entry(signature(&d)).or_insert_with(|| {
                    nodes.push((d, Vec::new()));
                    nodes.len() - 1
                });
                out.push((t, k));
            }
            succ.push(out);
        }
        Graph {
            nodes,
            succ,
            checked,
        }
    }
}

struct Checker<'a> {
    system: &'a NonBinarySystem,
    oracle: DynamicOracle,
    keep: usize,
}

impl Checker<'_> {
    fn record(
        &self,
        report: &mut AuditReport,
        gold_tree: &Tree,
        gold: &GoldSet,
        (c, trace): (&Configuration, &[Transition]),
        best: usize,
        search_zero: Vec<Transition>,
    ) {
        report.checks += 1;
        let loss = self.oracle.loss(c, gold);
        let zero = if c.is_finished() {
            Vec::new()
        } else {
            self.oracle.zero_cost_transitions(self.system, c, gold)
        };
        if loss != best || zero != search_zero {
            report.mismatches += 1;
            if report.counterexamples.len() < self.keep {
                report.counterexamples.push(Counterexample {
                    gold: write_ptb(gold_tree),
                    trace: trace.to_vec(),
                    oracle_loss: loss,
                    search_loss: best,
                    oracle_zero: zero,
                    search_zero,
                });
            }
        }
    }

    /// Every node of `graph` within the depth limit against `gold_tree`.
    fn check_graph(&self, gold_tree: &Tree, graph: &Graph) -> AuditReport {
        let gold = GoldSet::from_tree(gold_tree);
        let mut brute = BruteForce::new(self.system, &gold);
        let mut best = vec![0; graph.nodes.len()];
        for i in (0..graph.nodes.len()).rev() {
            best[i] = if i < graph.checked && !graph.nodes[i].0.is_finished() {
                graph.succ[i]
                    .iter()
                    .map(|(_, k)| best[*k])
                    .min()
                    .expect("never stuck")
            } else {
                brute
                    .min_loss(&graph.nodes[i].0, SEARCH_LIMIT)
                    .expect("search limit")
            };
        }
        let mut report = AuditReport {
            trees: 1,
            ..Default::default()
        };
        for i in 0..graph.checked {
            let (c, trace) = &graph.nodes[i];
            let search_zero = if c.is_finished() {
                Vec::new()
            } else {
                graph.succ[i]
                    .iter()
                    .filter(|(_, k)| best[*k] == best[i])
                    .map(|(t, _)| t.clone())
                    .collect()
            };
            self.record(
                &mut report,
                gold_tree,
                &gold,
                (c, trace),
                best[i],
                search_zero,
            );
        }
        report
    }

    /// One configuration, searched directly.
    fn check_one(&self, gold_tree: &Tree, c: &Configuration, trace: &[Transition]) -> AuditReport {
        let gold = GoldSet::from_tree(gold_tree);
        let mut brute = BruteForce::new(self.system, &gold);
        let best = brute.min_loss(c, SEARCH_LIMIT).expect("search limit");
        let search_zero = if c.is_finished() {
            Vec::new()
        } else {
            self.system
                .legal_transitions(c)
                .into_iter()
                .filter(|t| {
                    let d = self.system.apply(c, t).expect("legal");
                    brute.min_loss(&d, SEARCH_LIMIT).expect("search limit") == best
                })
                .collect()
        };
        let mut report = AuditReport {
            trees: 1,
            ..Default::default()
        };
        self.record(&mut report, gold_tree, &gold, (c, trace), best, search_zero);
        report
    }
}

/// Every gold tree of the configured family against every configuration
/// reachable within the depth limit.
pub fn exhaustive_audit(config: &AuditConfig) -> AuditReport {
    let labels = label_set(config.exhaustive_labels);
    let system = NonBinarySystem::new(
        ReduceSet::AnyArity(labels.iter().cloned().collect()),
        config.unary_cap,
    );
    let checker = Checker {
        system: &system,
        oracle: DynamicOracle::new(config.unary_cap).with_conditions(config.conditions),
        keep: config.keep,
    };
    let mut report = AuditReport::default();
    for n in 1..=config.exhaustive_len {
        let graph = Graph::build(&system, n, config.depth);
        for t in all_trees(
            n,
            &labels,
            config.gold_unary.min(config.unary_cap),
            config.gold_unary_nodes,
        ) {
            let r = checker.check_graph(&t, &graph);
            report.merge(r, config.keep);
        }
    }
    report
}

/// Random gold trees, each checked at one configuration reached by a
/// uniformly random walk of random length.
pub fn sampled_audit(config: &AuditConfig) -> AuditReport {
    let labels = label_set(config.sample_labels);
    let system = NonBinarySystem::new(
        ReduceSet::AnyArity(labels.iter().cloned().collect()),
        config.unary_cap,
    );
    let checker = Checker {
        system: &system,
        oracle: DynamicOracle::new(config.unary_cap).with_conditions(config.conditions),
        keep: config.keep,
    };
    let mut shape = Shape::new(config.sample_len, &[]);
    shape.labels = labels.clone();
    shape.unary_cap = config.unary_cap;
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let mut report = AuditReport::default();
    for _ in 0..config.samples {
        let gold = random_tree(&mut rng, &shape);
        let n = gold.len();
        let steps = rng.gen_range(0..=2 * n + config.unary_cap * n);
        let mut c = Configuration::initial(gold.tokens()).expect("nonempty");
        let mut trace = Vec::new();
        while trace.len() < steps && !c.is_finished() {
            let t = system
                .legal_transitions(&c)
                .choose(&mut rng)
                .expect("never stuck")
                .clone();
            system.apply_mut(&mut c, &t).expect("legal");
            trace.push(t);
        }
        let r = checker.check_one(&gold, &c, &trace);
        report.merge(r, config.keep);
    }
    report
}

/// Exhaustive part followed by the sampled part.
pub fn audit(config: &AuditConfig) -> AuditReport {
    let mut report = exhaustive_audit(config);
    report.merge(sampled_audit(config), config.keep);
    report
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tree_family_sizes() {
        let labels = label_set(2);
        assert_eq!(all_trees(1, &labels, 0, 0).len(), 0);
        assert_eq!(all_trees(1, &labels, 1, 1).len(), 2);
        // One flat node, two labels.
        assert_eq!(all_trees(2, &labels, 0, 0).len(), 2);
        // Three bracketings: (a b c), ((a b) c), (a (b c)).
        assert_eq!(all_trees(3, &labels, 0, 0).len(), 2 + 4 + 4);
        assert_eq!(all_trees(2, &labels, 1, 9).len(), 2 * 3 * 3 * 3);
        // One unary node above the root or either word.
        assert_eq!(all_trees(2, &labels, 1, 1).len(), 2 * (1 + 2 + 2 + 2));
        for t in all_trees(3, &labels, 2, 9) {
            t.validate(3).unwrap();
        }
    }

    #[test]
    fn one_word_audit_is_clean() {
        let cfg = AuditConfig {
            exhaustive_len: 1,
            samples: 0,
            ..Default::default()
        };
        let r = audit(&cfg);
        assert!(r.passed(), "{r}");
        assert_eq!(r.trees, 2);
        assert!(r.checks > 0);
    }

    #[test]
    fn small_audit_is_clean() {
        let cfg = AuditConfig {
            exhaustive_len: 3,
            depth: 6,
            samples: 100,
            sample_len: 5,
            ..Default::default()
        };
        let r = audit(&cfg);
        assert!(r.passed(), "{r}");
    }

    #[test]
    fn disabled_condition_produces_counterexample() {
        let cfg = AuditConfig {
            exhaustive_len: 3,
            depth: 6,
            samples: 0,
            conditions: Conditions {
                stack_anchored: false,
                ..Conditions::default()
            },
            ..Default::default()
        };
        let r = audit(&cfg);
        assert!(!r.passed());
        assert!(!r.counterexamples.is_empty());
        let text = r.to_string();
        assert!(text.contains("counterexample 1:"));
        assert!(text.contains("trace:"));
    }
}
