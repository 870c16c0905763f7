use std::sync::Arc;

use crate::error::{Error, Result};
use crate::transition::action::Transition;
use crate::transition::config::Configuration;
use crate::transition::system::TransitionSystem;
use crate::treebank::{HeadSide, Node, Token, Tree};

/// Gold transition sequence of the non-binary system: a post-order walk
/// emitting `Shift` per word and `Reduce-X#k` per node, then `Finish`.
pub fn static_oracle_nb(tree: &Tree) -> Vec<Transition> {
    fn walk(t: &Tree, out: &mut Vec<Transition>) {
        for child in &t.children {
            match child {
                Node::Leaf(_) => out.push(Transition::Shift),
                Node::Tree(c) => walk(c, out),
            }
        }
        out.push(Transition::reduce(t.label.clone(), t.children.len()));
    }
    let mut out = Vec::with_capacity(count_transitions(tree));
    walk(tree, &mut out);
    out.push(Transition::Finish);
    out
}

/// Gold transition sequence of the binary system for a binarized tree.
pub fn static_oracle_bin(tree: &Tree) -> Result<Vec<Transition>> {
    fn walk(t: &Tree, out: &mut Vec<Transition>) -> Result<()> {
        for child in &t.children {
            match child {
                Node::Leaf(_) => out.push(Transition::Shift),
                Node::Tree(c) => walk(c, out)?,
            }
        }
        let label = t.label.clone();
        let t = match (t.children.len(), t.head) {
            (1, _) => Transition::ReduceUnary(label),
            (2, Some(HeadSide::Right)) => Transition::ReduceLeft(label),
            (2, Some(HeadSide::Left)) => Transition::ReduceRight(label),
            (2, None) => {
                return Err(Error::MalformedTree(format!(
                    "binary node {label} has no head annotation"
                )))
            }
            (k, _) => {
                return Err(Error::MalformedTree(format!(
                    "node {label} has {k} children; binarize first"
                )))
            }
        };
        out.push(t);
        Ok(())
    }
    let mut out = Vec::new();
    walk(tree, &mut out)?;
    out.push(Transition::Finish);
    Ok(out)
}

/// `n + |N| + 1`.
pub fn count_transitions(tree: &Tree) -> usize {
    tree.len() + tree.node_count() + 1
}

/// Applies `transitions` from the initial configuration of `sentence`.
pub fn replay(
    system: &dyn TransitionSystem,
    sentence: impl Into<Arc<[Token]>>,
    transitions: &[Transition],
) -> Result<Configuration> {
    let mut c = Configuration::initial(sentence)?;
    for t in transitions {
        system.apply_mut(&mut c, t)?;
    }
    Ok(c)
}
