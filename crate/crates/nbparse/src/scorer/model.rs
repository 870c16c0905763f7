use std::fmt::Write as _;
use std::io::{BufRead, Write};
use std::path::Path;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::label::Label;
use crate::scorer::features::{featurize, TEMPLATE_SET};
use crate::scorer::linear::LinearModel;
use crate::scorer::Scorer;
use crate::transition::{Configuration, Inventory, SystemKind, Transition, TransitionSystem};

pub const MAGIC: &str = "nbparse-model";
pub const FORMAT_VERSION: u32 = 1;

/// Everything a parser needs at decode time: system, inventory, fallback
/// root label and weights.
#[derive(Clone, Debug, PartialEq)]
pub struct Model {
    pub kind: SystemKind,
    pub unary_cap: usize,
    pub inventory: Inventory,
    /// Label forced over the whole stack when nothing else is legal.
    pub fallback: Label,
    pub weights: LinearModel,
}

impl Model {
    pub fn system(&self) -> Box<dyn TransitionSystem + Send + Sync> {
        match self.kind {
            SystemKind::NonBinary => Box::new(self.inventory.nonbinary(self.unary_cap)),
            SystemKind::Binary => Box::new(self.inventory.binary(self.unary_cap)),
        }
    }

    /// The transition inventory in canonical order.
    pub fn transitions(&self) -> Vec<Transition> {
        let mut out = vec![Transition::Shift];
        match self.kind {
            SystemKind::NonBinary => out.extend(
                self.inventory
                    .reduces
                    .iter()
                    .map(|(l, k)| Transition::reduce(l.clone(), *k)),
            ),
            SystemKind::Binary => {
                out.extend(
                    self.inventory
                        .left
                        .iter()
                        .cloned()
                        .map(Transition::ReduceLeft),
                );
                out.extend(
                    self.inventory
                        .right
                        .iter()
                        .cloned()
                        .map(Transition::ReduceRight),
                );
                out.extend(
                    self.inventory
                        .unary
                        .iter()
                        .cloned()
                        .map(Transition::ReduceUnary),
                );
            }
        }
        out.push(Transition::Finish);
        out
    }

    /// Score of every inventory transition in `c`, legal or not.
    pub fn score_all(&self, c: &Configuration) -> Vec<(Transition, f64)> {
        let ts = self.transitions();
        let scores = self.weights.score_features(&featurize(c), &ts);
        ts.into_iter().zip(scores).collect()
    }

    pub fn to_text(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "{MAGIC} {FORMAT_VERSION}");
        let _ = writeln!(s, "templates {TEMPLATE_SET}");
        let _ = writeln!(s, "system {}", self.kind);
        let _ = writeln!(s, "buckets {}", self.weights.buckets());
        let _ = writeln!(s, "unary-cap {}", self.unary_cap);
        let _ = writeln!(s, "fallback {}", self.fallback);
        for (l, k) in &self.inventory.reduces {
            let _ = writeln!(s, "reduce {l} {k}");
        }
        for l in &self.inventory.left {
            let _ = writeln!(s, "left {l}");
        }
        for l in &self.inventory.right {
            let _ = writeln!(s, "right {l}");
        }
        for l in &self.inventory.unary {
            let _ = writeln!(s, "unary {l}");
        }
        let weights = self.weights.weights();
        let _ = writeln!(s, "weights {}", weights.len());
        for (b, w) in weights {
            let _ = writeln!(s, "{b} {w:?}");
        }
        s
    }

    pub fn write_to(&self, mut w: impl Write) -> Result<()> {
        w.write_all(self.to_text().as_bytes())?;
        w.flush()?;
        Ok(())
    }

    pub fn read_from(mut r: impl BufRead) -> Result<Model> {
        let mut text = String::new();
        r.read_to_string(&mut text)?;
        text.parse()
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<()> {
        let file = std::fs::File::create(path)?;
        self.write_to(std::io::BufWriter::new(file))
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Model> {
        let file = std::fs::File::open(path)?;
        Model::read_from(std::io::BufReader::new(file))
    }
}

impl Scorer for Model {
    fn score(&self, c: &Configuration, candidates: &[Transition]) -> Vec<f64> {
        Scorer::score(&self.weights, c, candidates)
    }
}

struct Lines<'a> {
    inner: std::iter::Peekable<std::iter::Enumerate<std::str::Lines<'a>>>,
    last: usize,
}

impl<'a> Lines<'a> {
    fn err(&self, line: usize, message: impl Into<String>) -> Error {
        Error::Model {
            line,
            message: message.into(),
        }
    }

    fn next(&mut self, what: &str) -> Result<(usize, &'a str)> {
        match self.inner.next() {
            Some((i, l)) => {
                self.last = i + 1;
                Ok((i + 1, l))
            }
            None => Err(self.err(
                self.last + 1,
                format!("unexpected end of file, expected {what}"),
            )),
        }
    }

    /// Reads `key value` and returns the value.
    fn field(&mut self, key: &str) -> Result<(usize, &'a str)> {
        let (n, line) = self.next(key)?;
        match line.split_once(' ') {
            Some((k, v)) if k == key && !v.is_empty() => Ok((n, v)),
            _ => Err(self.err(n, format!("expected `{key} <value>`"))),
        }
    }

    fn number<T: FromStr>(&mut self, key: &str) -> Result<T> {
        let (n, v) = self.field(key)?;
        v.parse()
            .map_err(|_| self.err(n, format!("{key}: not a number: {v:?}")))
    }

    fn peek_key(&mut self) -> Option<&'a str> {
        self.inner
            .peek()
            .map(|(_, l)| l.split_once(' ').map_or(*l, |(k, _)| k))
    }
}

fn label_token(v: &str) -> Option<Label> {
    if v.is_empty() || v.contains(char::is_whitespace) {
        None
    } else {
        Some(Label::new(v))
    }
}

impl FromStr for Model {
    type Err = Error;

    fn from_str(text: &str) -> Result<Model> {
        let mut lines = Lines {
            inner: text.lines().enumerate().peekable(),
            last: 0,
        };
        let (n, head) = lines.next("header")?;
        let version = match head.split_once(' ') {
            Some((m, v)) if m == MAGIC => v,
            _ => return Err(lines.err(n, "not a model file")),
        };
        if version != FORMAT_VERSION.to_string() {
            return Err(lines.err(
                n,
                format!(
                    "unsupported format version {version:?}, this build reads {FORMAT_VERSION}"
                ),
            ));
        }
        let (n, templates) = lines.field("templates")?;
        if templates != TEMPLATE_SET {
            return Err(lines.err(
                n,
                format!("feature templates {templates:?} do not match this build ({TEMPLATE_SET})"),
            ));
        }
        let (n, system) = lines.field("system")?;
        let kind: SystemKind = system
            .parse()
            .map_err(|_| lines.err(n, format!("unknown system {system:?}")))?;
        let buckets: u64 = lines.number("buckets")?;
        if buckets == 0 {
            return Err(lines.err(lines.last, "bucket count must be positive"));
        }
        let unary_cap: usize = lines.number("unary-cap")?;
        let (n, fallback) = lines.field("fallback")?;
        let fallback = label_token(fallback).ok_or_else(|| lines.err(n, "bad fallback label"))?;

        let mut inventory = Inventory::default();
        while let Some(key) = lines.peek_key() {
            if key == "weights" {
                break;
            }
            let (n, v) = lines.next("inventory entry")?;
            let v = v.split_once(' ').map_or("", |(_, v)| v);
            let bad = |lines: &Lines, what: &str| lines.err(n, format!("bad {what} entry"));
            match key {
                "reduce" => {
                    let (l, k) = v.split_once(' ').ok_or_else(|| bad(&lines, key))?;
                    let label = label_token(l).ok_or_else(|| bad(&lines, key))?;
                    let k: usize = k.parse().map_err(|_| bad(&lines, key))?;
                    if k == 0 {
                        return Err(bad(&lines, key));
                    }
                    inventory.reduces.insert((label, k));
                }
                "left" | "right" | "unary" => {
                    let label = label_token(v).ok_or_else(|| bad(&lines, key))?;
                    let set = match key {
                        "left" => &mut inventory.left,
                        "right" => &mut inventory.right,
                        _ => &mut inventory.unary,
                    };
                    set.insert(label);
                }
                _ => return Err(lines.err(n, format!("unknown field {key:?}"))),
            }
        }

        let count: usize = lines.number("weights")?;
        let mut weights = LinearModel::new(buckets);
        let mut previous: Option<u64> = None;
        for _ in 0..count {
            let (n, line) = lines.next("weight")?;
            let (b, w) = line
                .split_once(' ')
                .ok_or_else(|| lines.err(n, "expected `<bucket> <weight>`"))?;
            let b: u64 = b.parse().map_err(|_| lines.err(n, "bad bucket"))?;
            let w: f64 = w.parse().map_err(|_| lines.err(n, "bad weight"))?;
            if b >= buckets {
                return Err(lines.err(n, "bucket out of range"));
            }
            if previous.is_some_and(|p| p >= b) {
                return Err(lines.err(n, "buckets must be strictly increasing"));
            }
            if !w.is_finite() || w == 0.0 {
                return Err(lines.err(n, "weights must be finite and nonzero"));
            }
            previous = Some(b);
            weights.set(b, w);
        }
        if let Some((i, _)) = lines.inner.find(|(_, l)| !l.trim().is_empty()) {
            return Err(lines.err(i + 1, "trailing content"));
        }
        Ok(Model {
            kind,
            unary_cap,
            inventory,
            fallback,
            weights,
        })
    }
}
