use std::collections::HashMap;

use crate::label::{Constituent, Label, Span};

/// A word together with its preterminal (POS) tag.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Token {
    pub form: String,
    pub pos: String,
}

impl Token {
    pub fn new(form: impl Into<String>, pos: impl Into<String>) -> Self {
        Token {
            form: form.into(),
            pos: pos.into(),
        }
    }
}

/// Which child of a binary node is its head.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum HeadSide {
    Left,
    Right,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Leaf {
    pub token: Token,
    pub index: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Node {
    Leaf(Leaf),
    Tree(Tree),
}

impl Node {
    pub fn span(&self) -> Span {
        match self {
            Node::Leaf(leaf) => Span::new(leaf.index, leaf.index + 1),
            Node::Tree(t) => t.span,
        }
    }

    /// The label used when matching head rules: POS for leaves.
    pub fn category(&self) -> &str {
        match self {
            Node::Leaf(leaf) => &leaf.token.pos,
            Node::Tree(t) => t.label.as_str(),
        }
    }
}

/// An internal (non-preterminal) node of a constituent tree.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Tree {
    pub label: Label,
    pub children: Vec<Node>,
    pub span: Span,
    /// Only set on binary nodes of binarized trees.
    pub head: Option<HeadSide>,
}

impl Tree {
    /// Builds a node over children whose spans are already correct.
    ///
    /// Panics if `children` is empty or not contiguous.
    pub fn new(label: impl Into<Label>, children: Vec<Node>) -> Self {
        assert!(!children.is_empty(), "internal node without children");
        let l = children[0].span().l;
        let mut r = l;
        for child in &children {
            let span = child.span();
            assert_eq!(span.l, r, "children spans are not adjacent");
            r = span.r;
        }
        Tree {
            label: label.into(),
            children,
            span: Span::new(l, r),
            head: None,
        }
    }

    pub fn with_head(mut self, head: Option<HeadSide>) -> Self {
        self.head = head;
        self
    }

    /// Recomputes leaf indices and spans starting at word `start`.
    /// Returns the right boundary.
    pub fn renumber(&mut self, start: usize) -> usize {
        let mut pos = start;
        for child in &mut self.children {
            match child {
                Node::Leaf(leaf) => {
                    leaf.index = pos;
                    pos += 1;
                }
                Node::Tree(t) => pos = t.renumber(pos),
            }
        }
        self.span = Span::new(start, pos);
        pos
    }

    pub fn len(&self) -> usize {
        self.span.width()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn tokens(&self) -> Vec<Token> {
        let mut out = Vec::with_capacity(self.len());
        self.collect_tokens(&mut out);
        out
    }

    fn collect_tokens(&self, out: &mut Vec<Token>) {
        for child in &self.children {
            match child {
                Node::Leaf(leaf) => out.push(leaf.token.clone()),
                Node::Tree(t) => t.collect_tokens(out),
            }
        }
    }

    /// Pre-order iterator over internal nodes.
    pub fn nodes(&self) -> Nodes<'_> {
        Nodes { stack: vec![self] }
    }

    /// Number of internal (non-preterminal) nodes.
    pub fn node_count(&self) -> usize {
        self.nodes().count()
    }

    pub fn constituent(&self) -> Constituent {
        Constituent {
            label: self.label.clone(),
            span: self.span,
        }
    }

    /// Longest chain of nested single-child nodes. A node whose only
    /// child is a leaf counts as a chain of length one.
    pub fn max_unary_chain(&self) -> usize {
        fn walk(t: &Tree, best: &mut usize) -> usize {
            let mut below = 0;
            for child in &t.children {
                if let Node::Tree(c) = child {
                    let run = walk(c, best);
                    if t.children.len() == 1 {
                        below = run;
                    }
                }
            }
            let run = if t.children.len() == 1 { below + 1 } else { 0 };
            *best = (*best).max(run);
            run
        }
        let mut best = 0;
        walk(self, &mut best);
        best
    }

    /// Checks the structural invariants and the unary-chain bound.
    pub fn validate(&self, unary_cap: usize) -> Result<(), String> {
        fn check(t: &Tree) -> Result<(), String> {
            if t.children.is_empty() {
                return Err(format!("node {} has no children", t.label));
            }
            if t.label.as_str().is_empty() {
                return Err("empty label".into());
            }
            let mut r = t.span.l;
            for child in &t.children {
                let s = child.span();
                if s.l != r {
                    return Err(format!("non-adjacent children under {}", t.label));
                }
                r = s.r;
                if let Node::Tree(c) = child {
                    check(c)?;
                }
            }
            if r != t.span.r {
                return Err(format!("span of {} does not match its children", t.label));
            }
            Ok(())
        }
        check(self)?;
        let chain = self.max_unary_chain();
        if chain > unary_cap {
            return Err(format!(
                "unary chain of length {chain} exceeds the bound {unary_cap}"
            ));
        }
        Ok(())
    }

    /// Removes every head annotation.
    pub fn strip_heads(&mut self) {
        self.head = None;
        for child in &mut self.children {
            if let Node::Tree(t) = child {
                t.strip_heads();
            }
        }
    }
}

pub struct Nodes<'a> {
    stack: Vec<&'a Tree>,
}

impl<'a> Iterator for Nodes<'a> {
    type Item = &'a Tree;

    fn next(&mut self) -> Option<&'a Tree> {
        let t = self.stack.pop()?;
        for child in t.children.iter().rev() {
            if let Node::Tree(c) = child {
                self.stack.push(c);
            }
        }
        Some(t)
    }
}

/// Decomposes a tree into its constituents, one per internal node, in
/// pre-order. Repeated `(label, span)` pairs from unary chains are kept as
/// separate entries.
pub fn decompose(tree: &Tree) -> Vec<Constituent> {
    tree.nodes().map(Tree::constituent).collect()
}

/// Multiset view of [`decompose`].
pub fn constituent_counts(tree: &Tree) -> HashMap<Constituent, usize> {
    let mut counts = HashMap::new();
    for c in decompose(tree) {
        *counts.entry(c).or_insert(0) += 1;
    }
    counts
}
