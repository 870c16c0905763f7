use std::sync::Arc;

use crate::error::Result;
use crate::scorer::{argmax, featurize, Model};
use crate::transition::{Configuration, SystemKind, Transition, TransitionSystem};
use crate::treebank::{unbinarize, Token, Tree};

/// A decoded tree with the transitions that built it.
type Parsed = Result<(Tree, Vec<Transition>)>;

/// Upper bound on greedy decode length for `n` words.
pub fn decode_bound(n: usize, unary_cap: usize) -> usize {
    2 * (n + unary_cap * n + 1)
}

/// Greedy decoder over a fixed model.
pub struct Parser<'m> {
    model: &'m Model,
    system: Box<dyn TransitionSystem + Send + Sync>,
}

impl<'m> Parser<'m> {
    pub fn new(model: &'m Model) -> Self {
        Parser {
            model,
            system: model.system(),
        }
    }

    pub fn parse(&self, tokens: &[Token]) -> Result<Tree> {
        self.parse_with_trace(tokens).map(|(t, _)| t)
    }

    /// Decodes `tokens` and returns the tree with the transitions taken.
    ///
    /// When nothing is legal (the buffer is empty but the stack is not a
    /// single constituent and no inventory reduce applies), the whole stack
    /// is reduced with the model's fallback label.
    pub fn parse_with_trace(&self, tokens: &[Token]) -> Result<(Tree, Vec<Transition>)> {
        let sentence: Arc<[Token]> = tokens.into();
        let mut c = Configuration::initial(sentence)?;
        let mut trace = Vec::new();
        while !c.is_finished() {
            let legal = self.system.legal_transitions(&c);
            let t = match argmax(
                &legal,
                &self.model.weights.score_features(&featurize(&c), &legal),
            ) {
                Some(k) => {
                    let t = legal[k].clone();
                    self.system.apply_mut(&mut c, &t)?;
                    t
                }
                None => {
                    let t = Transition::reduce(self.model.fallback.clone(), c.stack().len());
                    c.apply_unchecked(&t)?;
                    t
                }
            };
            trace.push(t);
        }
        debug_assert!(trace.len() <= decode_bound(tokens.len(), self.model.unary_cap));
        let mut tree = c.extract_tree()?;
        if self.model.kind == SystemKind::Binary {
            if tree.label.is_temporary() {
                tree.label = tree.label.base();
            }
            tree = unbinarize(&tree)?;
        }
        tree.strip_heads();
        Ok((tree, trace))
    }
}

pub fn parse(model: &Model, tokens: &[Token]) -> Result<Tree> {
    Parser::new(model).parse(tokens)
}

pub fn parse_with_trace(model: &Model, tokens: &[Token]) -> Result<(Tree, Vec<Transition>)> {
    Parser::new(model).parse_with_trace(tokens)
}

/// Parses every sentence on up to `threads` workers. Results come back in
/// input order.
pub fn parse_all(
    model: &Model,
    sentences: &[Vec<Token>],
    threads: usize,
) -> Vec<Result<(Tree, Vec<Transition>)>> {
    let threads = threads.clamp(1, sentences.len().max(1));
    let parser = Parser::new(model);
    if threads == 1 {
        return sentences
            .iter()
            .map(|s| parser.parse_with_trace(s))
            .collect();
    }
    let parser = &parser;
    let mut slots: Vec<Option<Parsed>> = (0..sentences.len()).map(|_| None).collect();
    std::thread::scope(|scope| {
        let workers: Vec<_> = (0..threads)
            .map(|w| {
                scope.spawn(move || {
                    sentences
                        .iter()
                        .enumerate()
                        .skip(w)
                        .step_by(threads)
                        .map(|(i, s)| (i, parser.parse_with_trace(s)))
                        .collect::<Vec<_>>()
                })
            })
            .collect();
        for w in workers {
            for (i, r) in w.join().expect("parser worker panicked") {
                slots[i] = Some(r);
            }
        }
    });
    slots
        .into_iter()
        .map(|r| r.expect("every sentence parsed"))
        .collect()
}
