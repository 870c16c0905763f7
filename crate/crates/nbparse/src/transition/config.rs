use std::sync::Arc;

use crate::error::{Error, Result};
use crate::label::{Constituent, Label, Span};
use crate::transition::action::Transition;
use crate::treebank::{HeadSide, Leaf, Node, Token, Tree};

/// What a stack element refers to.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ItemRef {
    /// The word at this sentence position.
    Token(usize),
    /// An entry of [`Configuration::built`].
    Node(usize),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StackItem {
    pub span: Span,
    pub item: ItemRef,
    /// Consecutive unary reduces that produced this item over its span.
    pub unary_run: usize,
}

/// A constituent created by a reduce, with the structure below it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BuiltNode {
    pub label: Label,
    pub span: Span,
    pub children: Vec<ItemRef>,
    pub head: Option<HeadSide>,
    /// Sentence position of the lexical head.
    pub head_word: usize,
}

impl BuiltNode {
    pub fn constituent(&self) -> Constituent {
        Constituent {
            label: self.label.clone(),
            span: self.span,
        }
    }
}

/// Parser state: stack, buffer position, finished flag and the built
/// constituents. Word constituents are implicit in the buffer position.
#[derive(Clone, Debug)]
pub struct Configuration {
    sentence: Arc<[Token]>,
    stack: Vec<StackItem>,
    buffer: usize,
    finished: bool,
    built: Vec<BuiltNode>,
    recent: [Option<Transition>; 2],
    steps: usize,
}

impl PartialEq for Configuration {
    fn eq(&self, other: &Self) -> bool {
        self.stack == other.stack
            && self.buffer == other.buffer
            && self.finished == other.finished
            && self.built == other.built
            && self.sentence == other.sentence
    }
}

impl Configuration {
    pub fn initial(sentence: impl Into<Arc<[Token]>>) -> Result<Self> {
        let sentence = sentence.into();
        if sentence.is_empty() {
            return Err(Error::EmptySentence);
        }
        Ok(Configuration {
            sentence,
            stack: Vec::new(),
            buffer: 0,
            finished: false,
            built: Vec::new(),
            recent: [None, None],
            steps: 0,
        })
    }

    pub fn sentence(&self) -> &[Token] {
        &self.sentence
    }

    pub fn shared_sentence(&self) -> Arc<[Token]> {
        self.sentence.clone()
    }

    pub fn len(&self) -> usize {
        self.sentence.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sentence.is_empty()
    }

    /// Bottom to top.
    pub fn stack(&self) -> &[StackItem] {
        &self.stack
    }

    pub fn top(&self) -> Option<&StackItem> {
        self.stack.last()
    }

    /// Index of the first word still in the buffer.
    pub fn buffer_index(&self) -> usize {
        self.buffer
    }

    pub fn is_finished(&self) -> bool {
        self.finished
    }

    /// Built nonterminal constituents in creation order.
    pub fn built(&self) -> &[BuiltNode] {
        &self.built
    }

    pub fn built_constituents(&self) -> impl Iterator<Item = Constituent> + '_ {
        self.built.iter().map(BuiltNode::constituent)
    }

    /// The last two transitions, most recent first.
    pub fn recent(&self) -> &[Option<Transition>; 2] {
        &self.recent
    }

    pub fn steps(&self) -> usize {
        self.steps
    }

    pub fn item_label(&self, item: &StackItem) -> &str {
        match item.item {
            ItemRef::Token(i) => &self.sentence[i].pos,
            ItemRef::Node(i) => self.built[i].label.as_str(),
        }
    }

    pub fn node(&self, item: &StackItem) -> Option<&BuiltNode> {
        match item.item {
            ItemRef::Token(_) => None,
            ItemRef::Node(i) => Some(&self.built[i]),
        }
    }

    /// Lexical head of an item: binary nodes follow their head side, other
    /// nodes use their rightmost word.
    pub fn head_token(&self, item: ItemRef) -> usize {
        match item {
            ItemRef::Token(i) => i,
            ItemRef::Node(i) => self.built[i].head_word,
        }
    }

    /// Stack-adjacency invariant: consecutive items are contiguous, the
    /// bottom starts at 0 and the top ends at the buffer index.
    pub fn is_consistent(&self) -> bool {
        let mut pos = 0;
        for item in &self.stack {
            if item.span.l != pos {
                return false;
            }
            pos = item.span.r;
        }
        pos == self.buffer && (!self.finished || self.buffer == self.len())
    }

    /// Applies `t` checking only the structural preconditions of the
    /// rewrite rules (stack depth, buffer, finished flag). Inventory and
    /// unary-cap constraints belong to the transition system.
    pub fn apply_unchecked(&mut self, t: &Transition) -> Result<()> {
        let illegal = |reason: &str| Error::IllegalTransition {
            transition: t.to_string(),
            reason: reason.to_string(),
        };
        if self.finished {
            return Err(illegal("configuration is finished"));
        }
        match t {
            Transition::Shift => {
                if self.buffer >= self.len() {
                    return Err(illegal("buffer is empty"));
                }
                let i = self.buffer;
                self.stack.push(StackItem {
                    span: Span::new(i, i + 1),
                    item: ItemRef::Token(i),
                    unary_run: 0,
                });
                self.buffer += 1;
            }
            Transition::Finish => {
                if self.buffer != self.len() {
                    return Err(illegal("buffer is not empty"));
                }
                self.finished = true;
            }
            Transition::Reduce { arity: 0, .. } => return Err(illegal("arity must be positive")),
            _ => {
                let k = t.pops();
                if self.stack.len() < k {
                    return Err(illegal("not enough items on the stack"));
                }
                let label = t.label().expect("reduce has a label").clone();
                let popped = self.stack.split_off(self.stack.len() - k);
                let span = Span::new(popped[0].span.l, popped[k - 1].span.r);
                let unary_run = if k == 1 { popped[0].unary_run + 1 } else { 0 };
                let head = match t {
                    Transition::ReduceLeft(_) => Some(HeadSide::Right),
                    Transition::ReduceRight(_) => Some(HeadSide::Left),
                    _ => None,
                };
                let head_item = match head {
                    Some(HeadSide::Left) => popped[0].item,
                    _ => popped[k - 1].item,
                };
                let head_word = self.head_token(head_item);
                self.built.push(BuiltNode {
                    label,
                    span,
                    children: popped.iter().map(|p| p.item).collect(),
                    head,
                    head_word,
                });
                self.stack.push(StackItem {
                    span,
                    item: ItemRef::Node(self.built.len() - 1),
                    unary_run,
                });
            }
        }
        self.recent = [Some(t.clone()), self.recent[0].take()];
        self.steps += 1;
        Ok(())
    }

    /// The tree built by a terminal configuration with a single
    /// constituent on the stack.
    pub fn extract_tree(&self) -> Result<Tree> {
        if !self.finished {
            return Err(Error::NotTerminal("parsing has not finished".into()));
        }
        match self.stack.as_slice() {
            [StackItem {
                item: ItemRef::Node(i),
                ..
            }] => Ok(self.subtree(*i)),
            [_] => Err(Error::NotTerminal("stack holds a bare word".into())),
            _ => Err(Error::NotTerminal(format!(
                "stack holds {} items",
                self.stack.len()
            ))),
        }
    }

    fn subtree(&self, index: usize) -> Tree {
        let node = &self.built[index];
        let children = node
            .children
            .iter()
            .map(|c| match *c {
                ItemRef::Token(i) => Node::Leaf(Leaf {
                    token: self.sentence[i].clone(),
                    index: i,
                }),
                ItemRef::Node(j) => Node::Tree(self.subtree(j)),
            })
            .collect();
        Tree {
            label: node.label.clone(),
            children,
            span: node.span,
            head: node.head,
        }
    }
}
