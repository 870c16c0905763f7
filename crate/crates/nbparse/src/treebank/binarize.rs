use crate::error::{Error, Result};
use crate::treebank::headrules::HeadRules;
use crate::treebank::tree::{HeadSide, Node, Tree};

/// Head-outward binarization.
///
/// Starting from the head child, right siblings are attached first (nearest
/// first), then left siblings. Intermediate nodes carry the parent label
/// with a `*` suffix; the outermost node keeps the original label. Every
/// binary node records which side its head is on.
pub fn binarize(tree: &Tree, rules: &HeadRules) -> Tree {
    let categories: Vec<&str> = tree.children.iter().map(Node::category).collect();
    let children: Vec<Node> = tree
        .children
        .iter()
        .map(|c| match c {
            Node::Leaf(_) => c.clone(),
            Node::Tree(t) => Node::Tree(binarize(t, rules)),
        })
        .collect();
    if children.len() == 1 {
        return Tree::new(tree.label.clone(), children);
    }

    let head = rules.head_index(tree.label.as_str(), &categories);
    let temp = tree.label.temporary();
    let m = children.len();
    let mut slots: Vec<Option<Node>> = children.into_iter().map(Some).collect();
    let mut current = slots[head].take().unwrap();
    let mut remaining = m - 1;
    let attach = |current: Node, sibling: Node, side: HeadSide, remaining: usize| {
        let label = if remaining == 0 {
            tree.label.clone()
        } else {
            temp.clone()
        };
        let pair = match side {
            HeadSide::Left => vec![current, sibling],
            HeadSide::Right => vec![sibling, current],
        };
        Node::Tree(Tree::new(label, pair).with_head(Some(side)))
    };
    for slot in slots.iter_mut().skip(head + 1) {
        remaining -= 1;
        current = attach(current, slot.take().unwrap(), HeadSide::Left, remaining);
    }
    for slot in slots[..head].iter_mut().rev() {
        remaining -= 1;
        current = attach(current, slot.take().unwrap(), HeadSide::Right, remaining);
    }
    match current {
        Node::Tree(t) => t,
        Node::Leaf(_) => unreachable!("at least one attachment happened"),
    }
}

/// Dissolves every `*` node, splicing its children into its parent, and
/// drops head annotations.
pub fn unbinarize(tree: &Tree) -> Result<Tree> {
    if tree.label.is_temporary() {
        return Err(Error::MalformedTree(format!(
            "temporary node {} at the root",
            tree.label
        )));
    }
    let children = tree.children.iter().flat_map(expand).collect();
    Ok(Tree {
        label: tree.label.clone(),
        children,
        span: tree.span,
        head: None,
    })
}

fn expand(node: &Node) -> Vec<Node> {
    match node {
        Node::Leaf(_) => vec![node.clone()],
        Node::Tree(t) => {
            let children: Vec<Node> = t.children.iter().flat_map(expand).collect();
            if t.label.is_temporary() {
                children
            } else {
                vec![Node::Tree(Tree {
                    label: t.label.clone(),
                    children,
                    span: t.span,
                    head: None,
                })]
            }
        }
    }
}
