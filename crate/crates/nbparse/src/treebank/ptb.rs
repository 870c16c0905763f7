//! PTB bracketed-format reading and writing.

use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::label::Label;
use crate::treebank::tree::{Leaf, Node, Token, Tree};

/// Brackets nested deeper than this are rejected.
pub const MAX_DEPTH: usize = 512;

#[derive(Clone, Copy, Debug)]
pub struct ReadOptions {
    /// Cut functional tags and indices (`NP-SBJ-1`, `NP=2`) from
    /// nonterminal labels.
    pub strip_function_tags: bool,
    /// Drop `-NONE-` preterminals and any constituent left empty.
    pub strip_traces: bool,
}

impl Default for ReadOptions {
    fn default() -> Self {
        ReadOptions {
            strip_function_tags: true,
            strip_traces: true,
        }
    }
}

#[derive(Clone, Copy, Debug)]
struct Pos {
    line: usize,
    column: usize,
}

fn err(pos: Pos, message: impl Into<String>) -> Error {
    Error::Parse {
        line: pos.line,
        column: pos.column,
        message: message.into(),
    }
}

#[derive(Debug)]
enum Lexeme {
    Open,
    Close,
    Atom(String),
}

struct Lexer<'a> {
    chars: std::iter::Peekable<std::str::Chars<'a>>,
    line: usize,
    column: usize,
}

impl<'a> Lexer<'a> {
    fn new(text: &'a str) -> Self {
        Lexer {
            chars: text.chars().peekable(),
            line: 1,
            column: 1,
        }
    }

    fn bump(&mut self) -> Option<char> {
        let c = self.chars.next()?;
        if c == '\n' {
            self.line += 1;
            self.column = 1;
        } else {
            self.column += 1;
        }
        Some(c)
    }

    fn next_lexeme(&mut self) -> Option<(Lexeme, Pos)> {
        while self.chars.peek().is_some_and(|c| c.is_whitespace()) {
            self.bump();
        }
        let pos = Pos {
            line: self.line,
            column: self.column,
        };
        match *self.chars.peek()? {
            '(' => {
                self.bump();
                Some((Lexeme::Open, pos))
            }
            ')' => {
                self.bump();
                Some((Lexeme::Close, pos))
            }
            _ => {
                let mut atom = String::new();
                while let Some(&c) = self.chars.peek() {
                    if c.is_whitespace() || c == '(' || c == ')' {
                        break;
                    }
                    atom.push(c);
                    self.bump();
                }
                Some((Lexeme::Atom(atom), pos))
            }
        }
    }
}

enum Raw {
    Atom(String, Pos),
    Bracket {
        label: Option<String>,
        children: Vec<Raw>,
        pos: Pos,
    },
}

struct OpenBracket {
    label: Option<String>,
    children: Vec<Raw>,
    pos: Pos,
    /// Whether the label slot may still be filled.
    expecting_label: bool,
}

fn read_raw(text: &str) -> Result<Vec<Raw>> {
    let mut lexer = Lexer::new(text);
    let mut top = Vec::new();
    let mut open: Vec<OpenBracket> = Vec::new();
    while let Some((lexeme, pos)) = lexer.next_lexeme() {
        match lexeme {
            Lexeme::Open => {
                if let Some(b) = open.last_mut() {
                    b.expecting_label = false;
                }
                if open.len() >= MAX_DEPTH {
                    return Err(err(pos, "brackets nested too deeply"));
                }
                open.push(OpenBracket {
                    label: None,
                    children: Vec::new(),
                    pos,
                    expecting_label: true,
                });
            }
            Lexeme::Close => {
                let b = open
                    .pop()
                    .ok_or_else(|| err(pos, "unbalanced closing bracket"))?;
                let raw = Raw::Bracket {
                    label: b.label,
                    children: b.children,
                    pos: b.pos,
                };
                match open.last_mut() {
                    Some(parent) => parent.children.push(raw),
                    None => top.push(raw),
                }
            }
            Lexeme::Atom(atom) => match open.last_mut() {
                None => return Err(err(pos, format!("token {atom:?} outside brackets"))),
                Some(b) if b.expecting_label => {
                    b.label = Some(atom);
                    b.expecting_label = false;
                }
                Some(b) => b.children.push(Raw::Atom(atom, pos)),
            },
        }
    }
    if let Some(b) = open.first() {
        return Err(err(
            b.pos,
            "unbalanced bracket: missing closing parenthesis",
        ));
    }
    Ok(top)
}

fn strip_function_tag(label: &str) -> &str {
    if label.starts_with('-') {
        return label;
    }
    let first = label.chars().next().map_or(0, char::len_utf8);
    match label[first..].find(['-', '=']) {
        Some(i) => &label[..i + first],
        None => label,
    }
}

/// Converts a raw bracket into a node. `Ok(None)` means the subtree
/// vanished after trace removal.
fn convert(raw: Raw, opts: &ReadOptions, depth: usize) -> Result<Option<Node>> {
    let (label, children, pos) = match raw {
        Raw::Atom(atom, pos) => {
            return Err(err(
                pos,
                format!("word {atom:?} is not inside a preterminal"),
            ))
        }
        Raw::Bracket {
            label,
            children,
            pos,
        } => (label, children, pos),
    };
    let label = match label {
        Some(l) => l,
        None if depth == 0 => {
            // Outer wrapper with empty label.
            let mut children = children;
            if children.len() != 1 || matches!(children[0], Raw::Atom(..)) {
                return Err(err(pos, "empty nonterminal label"));
            }
            return convert(children.pop().unwrap(), opts, depth + 1);
        }
        None => return Err(err(pos, "empty nonterminal label")),
    };
    if children.is_empty() {
        return Err(err(pos, format!("constituent {label:?} has no children")));
    }
    if children.len() == 1 {
        if let Raw::Atom(..) = children[0] {
            let Some(Raw::Atom(form, _)) = children.into_iter().next() else {
                unreachable!()
            };
            if opts.strip_traces && label == "-NONE-" {
                return Ok(None);
            }
            return Ok(Some(Node::Leaf(Leaf {
                token: Token::new(form, label),
                index: 0,
            })));
        }
    }
    let mut nodes = Vec::with_capacity(children.len());
    for child in children {
        if let Raw::Atom(atom, p) = child {
            return Err(err(p, format!("word {atom:?} is not inside a preterminal")));
        }
        if let Some(node) = convert(child, opts, depth + 1)? {
            nodes.push(node);
        }
    }
    if nodes.is_empty() {
        return Ok(None);
    }
    let label = if opts.strip_function_tags {
        strip_function_tag(&label)
    } else {
        &label
    };
    if label.ends_with('*') {
        return Err(err(
            pos,
            format!("label {label:?} ends in the reserved '*' suffix"),
        ));
    }
    Ok(Some(Node::Tree(Tree {
        label: Label::new(label),
        children: nodes,
        span: crate::label::Span { l: 0, r: 1 },
        head: None,
    })))
}

/// Reads every tree in `text` with the default options.
pub fn read_ptb(text: &str) -> Result<Vec<Tree>> {
    read_ptb_with(text, &ReadOptions::default())
}

pub fn read_ptb_with(text: &str, opts: &ReadOptions) -> Result<Vec<Tree>> {
    let mut trees = Vec::new();
    for raw in read_raw(text)? {
        let pos = match &raw {
            Raw::Bracket { pos, .. } | Raw::Atom(_, pos) => *pos,
        };
        match convert(raw, opts, 0)? {
            Some(Node::Tree(mut t)) => {
                t.renumber(0);
                trees.push(t);
            }
            Some(Node::Leaf(_)) => {
                return Err(err(pos, "tree consists of a single preterminal"));
            }
            None => {}
        }
    }
    Ok(trees)
}

/// Single-line bracketed rendering.
pub fn write_ptb(tree: &Tree) -> String {
    let mut out = String::new();
    write_into(tree, &mut out);
    out
}

fn write_into(tree: &Tree, out: &mut String) {
    out.push('(');
    out.push_str(tree.label.as_str());
    for child in &tree.children {
        out.push(' ');
        match child {
            Node::Leaf(leaf) => {
                let _ = write!(out, "({} {})", leaf.token.pos, leaf.token.form);
            }
            Node::Tree(t) => write_into(t, out),
        }
    }
    out.push(')');
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::label::Span;

    pub const PUBLIC: &str =
        "(S (NP (DT The) (NN public)) (VP (VBZ is) (ADVP (RB still)) (ADJP (JJ cautious))) (. .))";

    #[test]
    fn reads_running_example() {
        let trees = read_ptb(PUBLIC).unwrap();
        assert_eq!(trees.len(), 1);
        let t = &trees[0];
        assert_eq!(t.label.as_str(), "S");
        assert_eq!(t.span, Span::new(0, 6));
        let forms: Vec<_> = t.tokens().into_iter().map(|t| t.form).collect();
        assert_eq!(forms, ["The", "public", "is", "still", "cautious", "."]);
        assert_eq!(t.children.len(), 3);
    }

    #[test]
    fn minimal_tree() {
        let t = &read_ptb("(X (A a))").unwrap()[0];
        assert_eq!(t.span, Span::new(0, 1));
        assert_eq!(t.tokens(), vec![Token::new("a", "A")]);
        assert_eq!(write_ptb(t), "(X (A a))");
    }

    #[test]
    fn temporary_suffix_is_reserved() {
        assert!(read_ptb("(A* (P w))").is_err());
        assert!(read_ptb("(A (B* (P w) (P x)))").is_err());
        assert!(read_ptb("(A (P* w))").is_ok());
    }

    #[test]
    fn function_tags_after_multibyte_characters() {
        let t = read_ptb("(Ƹ-SBJ (Ж-1 (P w)) (Q x))").unwrap();
        assert_eq!(write_ptb(&t[0]), "(Ƹ (Ж (P w)) (Q x))");
    }

    #[test]
    fn unbalanced_reports_position() {
        match read_ptb("(S (NP") {
            Err(Error::Parse { line, column, .. }) => assert_eq!((line, column), (1, 1)),
            other => panic!("expected parse error, got {other:?}"),
        }
        match read_ptb("(S (A a)))\n") {
            Err(Error::Parse { line, column, .. }) => assert_eq!((line, column), (1, 10)),
            other => panic!("expected parse error, got {other:?}"),
        }
    }

    #[test]
    fn wrapper_is_tolerated() {
        let a = read_ptb("( (S (A a) (B b)) )").unwrap();
        let b = read_ptb("(S (A a) (B b))").unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn empty_label_inside_tree_is_an_error() {
        assert!(matches!(read_ptb("(S ((A a)))"), Err(Error::Parse { .. })));
        assert!(matches!(
            read_ptb("( (S (A a)) (S (B b)) )"),
            Err(Error::Parse { .. })
        ));
    }

    #[test]
    fn escaped_tokens_preserved() {
        let text = "(NP (-LRB- -LRB-) (NN x) (-RRB- -RRB-))";
        let t = &read_ptb(text).unwrap()[0];
        assert_eq!(t.tokens()[0], Token::new("-LRB-", "-LRB-"));
        assert_eq!(write_ptb(t), text);
    }

    #[test]
    fn strips_function_tags_and_traces() {
        let text = "(S (NP-SBJ-1 (-NONE- *T*)) (VP=2 (VBD ran)) (. .))";
        let t = &read_ptb(text).unwrap()[0];
        assert_eq!(write_ptb(t), "(S (VP (VBD ran)) (. .))");
        assert_eq!(t.span, Span::new(0, 2));

        let keep = ReadOptions {
            strip_function_tags: false,
            strip_traces: false,
        };
        let t = &read_ptb_with(text, &keep).unwrap()[0];
        assert_eq!(write_ptb(t), text);
    }

    #[test]
    fn multiple_trees_across_lines() {
        let text = format!("{PUBLIC}\n\n(X (A a))\n");
        let trees = read_ptb(&text).unwrap();
        assert_eq!(trees.len(), 2);
        assert_eq!(trees[1].span, Span::new(0, 1));
    }

    #[test]
    fn rejects_bare_words_and_lone_preterminals() {
        assert!(read_ptb("(S a (B b))").is_err());
        assert!(read_ptb("(NN dog)").is_err());
        assert!(read_ptb("word").is_err());
        assert!(read_ptb("(S)").is_err());
    }

    #[test]
    fn deep_nesting_is_rejected_not_overflowed() {
        let text = "(".repeat(100_000);
        assert!(read_ptb(&text).is_err());
    }
}
