use std::hash::Hasher;

use fnv::FnvHasher;

use crate::transition::{Configuration, ItemRef, StackItem, Transition};

/// Identifier of the template set below. Stored in model files; bump it
/// whenever a template changes.
pub const TEMPLATE_SET: &str = "nb-basic-1";

const NONE: &str = "<none>";

/// Hashed binary features of one configuration, sorted and deduplicated.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct FeatureVector {
    ids: Vec<u64>,
}

impl FeatureVector {
    pub fn ids(&self) -> &[u64] {
        &self.ids
    }

    pub fn len(&self) -> usize {
        self.ids.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ids.is_empty()
    }

    /// Adds one feature built from a template number and its atoms.
    pub fn push(&mut self, template: u8, atoms: &[&str]) {
        let mut h = FnvHasher::default();
        h.write_u8(template);
        for a in atoms {
            h.write(a.as_bytes());
            h.write_u8(0xff);
        }
        self.ids.push(h.finish());
    }

    fn seal(mut self) -> Self {
        self.ids.sort_unstable();
        self.ids.dedup();
        self
    }
}

fn width_bucket(w: usize) -> &'static str {
    match w {
        0 => "0",
        1 => "1",
        2 => "2",
        3 => "3",
        4 => "4",
        5..=7 => "5-7",
        8..=15 => "8-15",
        _ => "16+",
    }
}

fn small(n: usize) -> &'static str {
    ["0", "1", "2", "3", "4", "5"][n.min(5)]
}

/// Atoms describing one stack position.
struct Slot<'a> {
    label: &'a str,
    word: &'a str,
    pos: &'a str,
    width: &'static str,
    first: &'a str,
    last: &'a str,
}

impl<'a> Slot<'a> {
    const EMPTY: Slot<'static> = Slot {
        label: NONE,
        word: NONE,
        pos: NONE,
        width: "0",
        first: NONE,
        last: NONE,
    };

    fn of(c: &'a Configuration, item: &StackItem) -> Self {
        let s = c.sentence();
        let head = &s[c.head_token(item.item)];
        let label = match item.item {
            ItemRef::Token(_) => "<word>",
            ItemRef::Node(_) => c.item_label(item),
        };
        Slot {
            label,
            word: &head.form,
            pos: &head.pos,
            width: width_bucket(item.span.width()),
            first: &s[item.span.l].form,
            last: &s[item.span.r - 1].form,
        }
    }
}

fn action_name(t: &Option<Transition>) -> String {
    match t {
        None => NONE.to_string(),
        Some(t) => t.to_string(),
    }
}

/// Instantiates the feature templates against `c`.
pub fn featurize(c: &Configuration) -> FeatureVector {
    let mut f = FeatureVector::default();
    let stack = c.stack();
    let slot = |d: usize| {
        if d < stack.len() {
            Slot::of(c, &stack[stack.len() - 1 - d])
        } else {
            Slot::EMPTY
        }
    };
    let (s0, s1, s2) = (slot(0), slot(1), slot(2));

    let j = c.buffer_index();
    let buf = |d: usize| match c.sentence().get(j + d) {
        Some(t) => (t.form.as_str(), t.pos.as_str()),
        None => ("<end>", "<end>"),
    };
    let (b0, b1, b2) = (buf(0), buf(1), buf(2));

    let arity = c
        .top()
        .and_then(|t| c.node(t))
        .map_or(0, |n| n.children.len());
    let arity = small(arity);
    let run = small(c.top().map_or(0, |t| t.unary_run));
    let a1 = action_name(&c.recent()[0]);
    let a2 = action_name(&c.recent()[1]);
    let depth = small(stack.len());
    let left = small(c.len() - j);

    f.push(0, &[]);
    for (i, s) in [&s0, &s1, &s2].into_iter().enumerate() {
        let base = 1 + 4 * i as u8;
        f.push(base, &[s.label]);
        f.push(base + 1, &[s.label, s.word]);
        f.push(base + 2, &[s.label, s.pos]);
        f.push(base + 3, &[s.label, s.width]);
    }
    f.push(13, &[s0.first]);
    f.push(14, &[s0.last]);
    f.push(15, &[s0.label, s0.first, s0.last]);

    for (i, b) in [b0, b1, b2].into_iter().enumerate() {
        let base = 16 + 2 * i as u8;
        f.push(base, &[b.0]);
        f.push(base + 1, &[b.1]);
    }

    f.push(22, &[&a1]);
    f.push(23, &[&a1, &a2]);
    f.push(24, &[s0.label, arity]);
    f.push(25, &[s0.label, run]);
    f.push(26, &[depth, left]);

    f.push(30, &[s0.label, s1.label]);
    f.push(31, &[s0.label, s1.label, s2.label]);
    f.push(32, &[s0.label, b0.1]);
    f.push(33, &[s0.label, b0.0]);
    f.push(34, &[s1.label, b0.1]);
    f.push(35, &[s0.word, b0.0]);
    f.push(36, &[s0.pos, b0.1]);
    f.push(37, &[s0.pos, s1.pos]);
    f.push(38, &[s0.word, s1.word]);
    f.push(39, &[b0.1, b1.1]);
    f.push(40, &[b0.1, b1.1, b2.1]);
    f.push(41, &[s0.label, &a1]);
    f.push(42, &[s0.label, s1.label, b0.1]);
    f.push(43, &[s0.label, s0.width, s1.label, s1.width]);
    f.push(44, &[s0.label, depth, left]);
    f.push(45, &[s1.first, s0.last]);
    f.push(46, &[s2.label, s1.label, s0.label, b0.1]);
    f.push(47, &[s0.label, arity, b0.1]);
    f.push(48, &[b0.1, left]);
    f.seal()
}
