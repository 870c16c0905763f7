use std::borrow::Borrow;
use std::fmt;
use std::sync::Arc;

/// Interned-by-sharing nonterminal label.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Label(Arc<str>);

impl Label {
    pub fn new(s: &str) -> Self {
        Label(Arc::from(s))
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }

    /// Labels introduced by binarization end in `*`.
    pub fn is_temporary(&self) -> bool {
        self.0.ends_with('*')
    }

    pub fn temporary(&self) -> Label {
        if self.is_temporary() {
            self.clone()
        } else {
            Label::new(&format!("{}*", self.0))
        }
    }

    pub fn base(&self) -> Label {
        match self.0.strip_suffix('*') {
            Some(b) => Label::new(b),
            None => self.clone(),
        }
    }
}

impl From<&str> for Label {
    fn from(s: &str) -> Self {
        Label::new(s)
    }
}

impl Borrow<str> for Label {
    fn borrow(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl fmt::Debug for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", &*self.0)
    }
}

/// Half-open word span `[l, r)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Span {
    pub l: usize,
    pub r: usize,
}

impl Span {
    pub fn new(l: usize, r: usize) -> Self {
        debug_assert!(l < r, "empty span ({l}, {r})");
        Span { l, r }
    }

    pub fn width(&self) -> usize {
        self.r - self.l
    }
}

/// A labeled span `(X, l, r)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Constituent {
    pub label: Label,
    pub span: Span,
}

impl Constituent {
    pub fn new(label: impl Into<Label>, l: usize, r: usize) -> Self {
        Constituent {
            label: label.into(),
            span: Span::new(l, r),
        }
    }
}

impl fmt::Display for Constituent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {}, {})", self.label, self.span.l, self.span.r)
    }
}
