//! Synthetic trees for tests, audits and timing runs.

use rand::seq::SliceRandom;
use rand::Rng;

use crate::label::Label;
use crate::treebank::{Leaf, Node, Token, Tree, DEFAULT_UNARY_CAP};

/// Parameters of [`random_tree`].
#[derive(Clone, Debug)]
pub struct Shape {
    pub min_len: usize,
    pub max_len: usize,
    pub labels: Vec<Label>,
    pub tags: Vec<String>,
    /// Widest node, at least 2.
    pub max_arity: usize,
    pub unary_cap: usize,
    /// Chance of a unary chain above any node or word.
    pub unary_prob: f64,
}

impl Shape {
    pub fn new(max_len: usize, labels: &[&str]) -> Self {
        Shape {
            min_len: 1,
            max_len,
            labels: labels.iter().map(|l| Label::new(l)).collect(),
            tags: vec!["P".into(), "Q".into()],
            max_arity: 5,
            unary_cap: DEFAULT_UNARY_CAP,
            unary_prob: 0.2,
        }
    }
}

fn chain<R: Rng + ?Sized>(rng: &mut R, shape: &Shape, mut node: Node, at_least: usize) -> Node {
    let len = if at_least > 0 || rng.gen_bool(shape.unary_prob) {
        rng.gen_range(at_least.max(1)..=shape.unary_cap.max(1))
    } else {
        0
    };
    for _ in 0..len {
        let label = shape
            .labels
            .choose(rng)
            .expect("at least one label")
            .clone();
        node = Node::Tree(Tree::new(label, vec![node]));
    }
    node
}

fn build<R: Rng + ?Sized>(
    rng: &mut R,
    shape: &Shape,
    l: usize,
    r: usize,
    tokens: &[Token],
) -> Node {
    if r - l == 1 {
        let leaf = Node::Leaf(Leaf {
            token: tokens[l].clone(),
            index: l,
        });
        return chain(rng, shape, leaf, 0);
    }
    let k = rng.gen_range(2..=shape.max_arity.max(2).min(r - l));
    let mut cuts: Vec<usize> = (l + 1..r).collect::<Vec<_>>();
    cuts.shuffle(rng);
    cuts.truncate(k - 1);
    cuts.sort_unstable();
    let mut bounds = vec![l];
    bounds.extend(cuts);
    bounds.push(r);
    let children = bounds
        .windows(2)
        .map(|w| build(rng, shape, w[0], w[1], tokens))
        .collect();
    let label = shape
        .labels
        .choose(rng)
        .expect("at least one label")
        .clone();
    chain(rng, shape, Node::Tree(Tree::new(label, children)), 0)
}

/// A random tree over words `w0 w1 ...` with random tags. Every node and
/// word may carry a unary chain up to the cap.
pub fn random_tree<R: Rng + ?Sized>(rng: &mut R, shape: &Shape) -> Tree {
    let n = rng.gen_range(shape.min_len.max(1)..=shape.max_len.max(shape.min_len.max(1)));
    let tokens: Vec<Token> = (0..n)
        .map(|i| {
            Token::new(
                format!("w{i}"),
                shape.tags.choose(rng).expect("at least one tag").clone(),
            )
        })
        .collect();
    match build(rng, shape, 0, n, &tokens) {
        Node::Tree(t) => t,
        leaf => match chain(rng, shape, leaf, 1) {
            Node::Tree(t) => t,
            Node::Leaf(_) => unreachable!("chain of length at least one"),
        },
    }
}

/// `(S (DT w0) (S (NN w1) ... (S (NN wn-2) (NN wn-1))))`.
pub fn right_branching(n: usize) -> Tree {
    assert!(n >= 1);
    let leaf = |i: usize| {
        Node::Leaf(Leaf {
            token: Token::new(
                format!("w{}", i % 17),
                if i.is_multiple_of(3) { "DT" } else { "NN" },
            ),
            index: i,
        })
    };
    let mut node = if n == 1 {
        Node::Tree(Tree::new("S", vec![leaf(0)]))
    } else {
        Node::Tree(Tree::new("S", vec![leaf(n - 2), leaf(n - 1)]))
    };
    for i in (0..n.saturating_sub(2)).rev() {
        node = Node::Tree(Tree::new("S", vec![leaf(i), node]));
    }
    match node {
        Node::Tree(t) => t,
        Node::Leaf(_) => unreachable!(),
    }
}

const VOCAB: &[(&str, &[&str])] = &[
    ("DT", &["the", "a", "every", "this", "that", "some"]),
    (
        "NN",
        &[
            "dog", "cat", "market", "report", "bank", "plan", "city", "idea", "price", "board",
            "rate", "deal",
        ],
    ),
    ("NNP", &["Smith", "Acme", "Paris", "Jones", "Texas", "Ford"]),
    (
        "JJ",
        &[
            "old", "new", "quiet", "cautious", "big", "small", "early", "strong",
        ],
    ),
    ("VBZ", &["sees", "likes", "buys", "is", "wants", "makes"]),
    ("VBD", &["saw", "liked", "bought", "was", "wanted", "made"]),
    ("IN", &["in", "on", "with", "near", "after"]),
    ("RB", &["still", "very", "quite", "not"]),
    ("CC", &["and", "or"]),
    (".", &["."]),
];

struct Grammar<'r, R: Rng + ?Sized> {
    rng: &'r mut R,
    words: Vec<Token>,
}

impl<'r, R: Rng + ?Sized> Grammar<'r, R> {
    fn word(&mut self, tag: &str) -> Node {
        let forms = VOCAB.iter().find(|(t, _)| *t == tag).expect("known tag").1;
        let form = *forms.choose(self.rng).unwrap();
        let index = self.words.len();
        let token = Token::new(form, tag);
        self.words.push(token.clone());
        Node::Leaf(Leaf { token, index })
    }

    fn node(label: &str, children: Vec<Node>) -> Node {
        Node::Tree(Tree::new(label, children))
    }

    fn np(&mut self, depth: usize) -> Node {
        let roll = self.rng.gen_range(0..10);
        match roll {
            0..=3 => {
                let c = vec![self.word("DT"), self.word("NN")];
                Self::node("NP", c)
            }
            4..=5 => {
                let c = vec![self.word("DT"), self.word("JJ"), self.word("NN")];
                Self::node("NP", c)
            }
            6..=7 => {
                let c = vec![self.word("NNP")];
                Self::node("NP", c)
            }
            8 if depth > 0 => {
                let c = vec![self.np(depth - 1), self.pp(depth - 1)];
                Self::node("NP", c)
            }
            _ if depth > 0 => {
                let c = vec![self.np(depth - 1), self.word("CC"), self.np(depth - 1)];
                Self::node("NP", c)
            }
            _ => {
                let c = vec![self.word("DT"), self.word("NN")];
                Self::node("NP", c)
            }
        }
    }

    fn pp(&mut self, depth: usize) -> Node {
        let c = vec![self.word("IN"), self.np(depth)];
        Self::node("PP", c)
    }

    fn adjp(&mut self) -> Node {
        let mut c = Vec::new();
        if self.rng.gen_bool(0.3) {
            let adv = self.word("RB");
            c.push(adv);
        }
        c.push(self.word("JJ"));
        Self::node("ADJP", c)
    }

    fn vp(&mut self, depth: usize) -> Node {
        let verb = if self.rng.gen_bool(0.5) { "VBZ" } else { "VBD" };
        let roll = self.rng.gen_range(0..6);
        let mut c = vec![self.word(verb)];
        match roll {
            0 | 1 => c.push(self.np(depth)),
            2 => {
                c.push(self.np(depth));
                c.push(self.pp(depth));
            }
            3 => c.push(self.adjp()),
            4 => {
                let adv = self.word("RB");
                c.push(Self::node("ADVP", vec![adv]));
                c.push(self.adjp());
            }
            _ if depth > 0 => {
                let s = self.clause(depth - 1, false);
                c.push(Self::node("SBAR", vec![s]));
            }
            _ => c.push(self.np(depth)),
        }
        Self::node("VP", c)
    }

    fn clause(&mut self, depth: usize, top: bool) -> Node {
        let mut c = vec![self.np(depth), self.vp(depth)];
        if top {
            c.push(self.word("."));
        }
        Self::node("S", c)
    }
}

/// A sentence from a small English-like grammar with flat NPs, a
/// three-child S and occasional coordination and unary chains.
pub fn toy_sentence<R: Rng + ?Sized>(rng: &mut R) -> Tree {
    let mut g = Grammar {
        rng,
        words: Vec::new(),
    };
    match g.clause(2, true) {
        Node::Tree(t) => t,
        Node::Leaf(_) => unreachable!(),
    }
}

pub fn toy_corpus<R: Rng + ?Sized>(rng: &mut R, count: usize) -> Vec<Tree> {
    (0..count).map(|_| toy_sentence(rng)).collect()
}

#[cfg(test)]
mod tests {
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    use super::*;
    use crate::treebank::write_ptb;

    #[test]
    fn random_trees_are_valid() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let shape = Shape::new(12, &["A", "B", "C"]);
        for _ in 0..300 {
            let t = random_tree(&mut rng, &shape);
            assert!(!t.is_empty() && t.len() <= 12);
            t.validate(3).unwrap();
            assert!(t.nodes().all(|n| n.children.len() <= 5));
        }
    }

    #[test]
    fn single_word_trees_get_a_root() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let mut shape = Shape::new(1, &["A"]);
        shape.unary_prob = 0.0;
        let t = random_tree(&mut rng, &shape);
        assert_eq!(t.len(), 1);
        assert!(write_ptb(&t).starts_with("(A ("));
    }

    #[test]
    fn right_branching_shape() {
        assert_eq!(
            write_ptb(&right_branching(3)),
            "(S (DT w0) (S (NN w1) (NN w2)))"
        );
        assert_eq!(right_branching(40).node_count(), 39);
    }

    #[test]
    fn toy_sentences_are_valid() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for t in toy_corpus(&mut rng, 100) {
            t.validate(3).unwrap();
            assert_eq!(t.label.as_str(), "S");
        }
    }
}
