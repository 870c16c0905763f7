use std::collections::BTreeSet;

use crate::error::{Error, Result};
use crate::label::Label;
use crate::transition::action::Transition;
use crate::transition::config::{Configuration, ItemRef};
use crate::treebank::{Tree, DEFAULT_UNARY_CAP};

/// Legality rules and rewrite application for one transition set.
pub trait TransitionSystem {
    /// `Ok(())` when `t` is legal in `c`, otherwise the violated
    /// precondition.
    fn check(&self, c: &Configuration, t: &Transition) -> std::result::Result<(), String>;

    /// Every legal transition, in canonical order.
    fn legal_transitions(&self, c: &Configuration) -> Vec<Transition>;

    fn unary_cap(&self) -> usize;

    fn legal(&self, c: &Configuration, t: &Transition) -> bool {
        self.check(c, t).is_ok()
    }

    fn apply_mut(&self, c: &mut Configuration, t: &Transition) -> Result<()> {
        self.check(c, t)
            .map_err(|reason| Error::IllegalTransition {
                transition: t.to_string(),
                reason,
            })?;
        c.apply_unchecked(t)
    }

    fn apply(&self, c: &Configuration, t: &Transition) -> Result<Configuration> {
        let mut next = c.clone();
        self.apply_mut(&mut next, t)?;
        Ok(next)
    }
}

fn common_checks(c: &Configuration, t: &Transition, cap: usize) -> std::result::Result<(), String> {
    if c.is_finished() {
        return Err("configuration is finished".into());
    }
    match t {
        Transition::Shift => {
            if c.buffer_index() >= c.len() {
                return Err("buffer is empty".into());
            }
        }
        Transition::Finish => {
            if c.buffer_index() != c.len() {
                return Err("buffer is not empty".into());
            }
            match c.stack() {
                [item] if matches!(item.item, ItemRef::Node(_)) => {}
                [_] => return Err("the only stack item is a bare word".into()),
                s => return Err(format!("stack holds {} items, expected 1", s.len())),
            }
        }
        _ => {
            let k = t.pops();
            if k == 0 {
                return Err("arity must be positive".into());
            }
            if c.stack().len() < k {
                return Err(format!("needs {k} stack items, found {}", c.stack().len()));
            }
            if t.is_unary() && c.top().is_some_and(|top| top.unary_run >= cap) {
                return Err(format!("unary chain already has {cap} reduces"));
            }
        }
    }
    Ok(())
}

/// The labels a non-binary parser may reduce with.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ReduceSet {
    /// Only `(label, arity)` pairs seen in training.
    Observed(BTreeSet<(Label, usize)>),
    /// Any of these labels with any arity the stack allows.
    AnyArity(BTreeSet<Label>),
}

impl ReduceSet {
    pub fn contains(&self, label: &Label, arity: usize) -> bool {
        match self {
            ReduceSet::Observed(pairs) => pairs.contains(&(label.clone(), arity)),
            ReduceSet::AnyArity(labels) => labels.contains(label),
        }
    }
}

/// The non-binary bottom-up system: `Shift`, `Reduce-X#k`, `Finish`.
#[derive(Clone, Debug)]
pub struct NonBinarySystem {
    pub reduces: ReduceSet,
    pub unary_cap: usize,
}

impl NonBinarySystem {
    pub fn new(reduces: ReduceSet, unary_cap: usize) -> Self {
        NonBinarySystem { reduces, unary_cap }
    }

    /// Any of `labels` at any arity, default unary cap.
    pub fn with_labels<I, L>(labels: I) -> Self
    where
        I: IntoIterator<Item = L>,
        L: Into<Label>,
    {
        NonBinarySystem::new(
            ReduceSet::AnyArity(labels.into_iter().map(Into::into).collect()),
            DEFAULT_UNARY_CAP,
        )
    }
}

impl TransitionSystem for NonBinarySystem {
    fn check(&self, c: &Configuration, t: &Transition) -> std::result::Result<(), String> {
        if t.is_binary_system() {
            return Err("binary-system transition".into());
        }
        common_checks(c, t, self.unary_cap)?;
        if let Transition::Reduce { label, arity } = t {
            if !self.reduces.contains(label, *arity) {
                return Err(format!("{label}#{arity} is not in the inventory"));
            }
        }
        Ok(())
    }

    fn legal_transitions(&self, c: &Configuration) -> Vec<Transition> {
        let mut out = Vec::new();
        if c.is_finished() {
            return out;
        }
        if c.buffer_index() < c.len() {
            out.push(Transition::Shift);
        }
        let depth = c.stack().len();
        let unary_ok = c.top().is_some_and(|top| top.unary_run < self.unary_cap);
        let ok = |arity: usize| arity <= depth && (arity > 1 || unary_ok);
        match &self.reduces {
            ReduceSet::Observed(pairs) => {
                for (label, arity) in pairs {
                    if ok(*arity) {
                        out.push(Transition::reduce(label.clone(), *arity));
                    }
                }
            }
            ReduceSet::AnyArity(labels) => {
                for label in labels {
                    for arity in 1..=depth {
                        if ok(arity) {
                            out.push(Transition::reduce(label.clone(), arity));
                        }
                    }
                }
            }
        }
        if self.legal(c, &Transition::Finish) {
            out.push(Transition::Finish);
        }
        out
    }

    fn unary_cap(&self) -> usize {
        self.unary_cap
    }
}

/// The binary bottom-up baseline: `Shift`, `Reduce-Left/Right-X`,
/// `Reduce-Unary-X`, `Finish`.
#[derive(Clone, Debug)]
pub struct BinarySystem {
    pub left: BTreeSet<Label>,
    pub right: BTreeSet<Label>,
    pub unary: BTreeSet<Label>,
    pub unary_cap: usize,
}

impl TransitionSystem for BinarySystem {
    fn check(&self, c: &Configuration, t: &Transition) -> std::result::Result<(), String> {
        let known = match t {
            Transition::Reduce { .. } => return Err("non-binary transition".into()),
            Transition::ReduceLeft(l) => self.left.contains(l),
            Transition::ReduceRight(l) => self.right.contains(l),
            Transition::ReduceUnary(l) => self.unary.contains(l),
            Transition::Shift | Transition::Finish => true,
        };
        if !known {
            return Err(format!("{t} is not in the inventory"));
        }
        common_checks(c, t, self.unary_cap)
    }

    fn legal_transitions(&self, c: &Configuration) -> Vec<Transition> {
        let candidates = std::iter::once(Transition::Shift)
            .chain(self.left.iter().cloned().map(Transition::ReduceLeft))
            .chain(self.right.iter().cloned().map(Transition::ReduceRight))
            .chain(self.unary.iter().cloned().map(Transition::ReduceUnary))
            .chain(std::iter::once(Transition::Finish));
        candidates.filter(|t| self.legal(c, t)).collect()
    }

    fn unary_cap(&self) -> usize {
        self.unary_cap
    }
}

/// Transition labels observed in a set of trees.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Inventory {
    /// `(label, arity)` pairs of the non-binary system.
    pub reduces: BTreeSet<(Label, usize)>,
    pub left: BTreeSet<Label>,
    pub right: BTreeSet<Label>,
    pub unary: BTreeSet<Label>,
}

impl Inventory {
    /// Collects reduce pairs from unbinarized trees.
    pub fn observe_nonbinary(&mut self, tree: &Tree) {
        for node in tree.nodes() {
            self.reduces
                .insert((node.label.clone(), node.children.len()));
        }
    }

    /// Collects binary-system labels from binarized trees.
    pub fn observe_binary(&mut self, tree: &Tree) -> Result<()> {
        for t in crate::transition::oracle::static_oracle_bin(tree)? {
            match t {
                Transition::ReduceLeft(l) => self.left.insert(l),
                Transition::ReduceRight(l) => self.right.insert(l),
                Transition::ReduceUnary(l) => self.unary.insert(l),
                _ => false,
            };
        }
        Ok(())
    }

    pub fn labels(&self) -> BTreeSet<Label> {
        self.reduces
            .iter()
            .map(|(l, _)| l.clone())
            .chain(self.left.iter().cloned())
            .chain(self.right.iter().cloned())
            .chain(self.unary.iter().cloned())
            .collect()
    }

    pub fn nonbinary(&self, unary_cap: usize) -> NonBinarySystem {
        NonBinarySystem::new(ReduceSet::Observed(self.reduces.clone()), unary_cap)
    }

    pub fn binary(&self, unary_cap: usize) -> BinarySystem {
        BinarySystem {
            left: self.left.clone(),
            right: self.right.clone(),
            unary: self.unary.clone(),
            unary_cap,
        }
    }
}

/// Labels of all internal nodes.
pub fn tree_labels(tree: &Tree) -> BTreeSet<Label> {
    tree.nodes().map(|n| n.label.clone()).collect()
}

/// Arity of every internal node, leaves included as children.
pub fn arities(tree: &Tree) -> Vec<usize> {
    tree.nodes().map(|n| n.children.len()).collect()
}

/// True when some node has at least three children.
pub fn has_wide_node(tree: &Tree) -> bool {
    tree.nodes().any(|n| n.children.len() >= 3)
}

/// Which transition system a model or run uses.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub enum SystemKind {
    #[default]
    NonBinary,
    Binary,
}

impl std::fmt::Display for SystemKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            SystemKind::NonBinary => "nonbinary",
            SystemKind::Binary => "binary",
        })
    }
}

impl std::str::FromStr for SystemKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "nonbinary" | "non-binary" => Ok(SystemKind::NonBinary),
            "binary" => Ok(SystemKind::Binary),
            _ => Err(Error::Config(format!(
                "unknown transition system {s:?} (expected nonbinary or binary)"
            ))),
        }
    }
}
