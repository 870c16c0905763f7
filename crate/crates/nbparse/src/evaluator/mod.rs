//! Labeled bracketing scores, arity buckets, transition counts and timing.

mod timing;

pub use timing::{
    linear_fit, timing_profile, timing_profile_with, LinearFit, TimingProfile, TimingRecord,
};

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::hash::Hash;

use crate::error::{Error, Result};
use crate::label::Constituent;
use crate::transition::{static_oracle_bin, static_oracle_nb};
use crate::treebank::{binarize, HeadRules, Tree};

/// Widest arity bucket; it also holds every wider node.
pub const MAX_ARITY_BUCKET: usize = 5;

pub fn arity_bucket(arity: usize) -> usize {
    arity.clamp(1, MAX_ARITY_BUCKET)
}

/// Bracket counts for one comparison.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct Scores {
    pub matched: usize,
    pub gold: usize,
    pub predicted: usize,
}

fn percent(num: usize, den: usize) -> f64 {
    if den == 0 {
        0.0
    } else {
        100.0 * num as f64 / den as f64
    }
}

impl Scores {
    pub fn precision(&self) -> f64 {
        percent(self.matched, self.predicted)
    }

    pub fn recall(&self) -> f64 {
        percent(self.matched, self.gold)
    }

    pub fn f1(&self) -> f64 {
        let (p, r) = (self.precision(), self.recall());
        if p + r == 0.0 {
            0.0
        } else {
            2.0 * p * r / (p + r)
        }
    }

    fn add(&mut self, other: Scores) {
        self.matched += other.matched;
        self.gold += other.gold;
        self.predicted += other.predicted;
    }
}

fn compare<K: Eq + Hash>(gold: impl Iterator<Item = K>, pred: impl Iterator<Item = K>) -> Scores {
    let mut counts: HashMap<K, (usize, usize)> = HashMap::new();
    for k in gold {
        counts.entry(k).or_default().0 += 1;
    }
    for k in pred {
        counts.entry(k).or_default().1 += 1;
    }
    let mut s = Scores::default();
    for (g, p) in counts.into_values() {
        s.gold += g;
        s.predicted += p;
        s.matched += g.min(p);
    }
    s
}

fn check_aligned(gold: &[Tree], pred: &[Tree]) -> Result<()> {
    if gold.len() != pred.len() {
        return Err(Error::Mismatch {
            index: gold.len().min(pred.len()),
            message: format!("{} gold trees but {} predicted", gold.len(), pred.len()),
        });
    }
    for (i, (g, p)) in gold.iter().zip(pred).enumerate() {
        if g.len() != p.len() {
            return Err(Error::Mismatch {
                index: i,
                message: format!("gold has {} tokens, predicted has {}", g.len(), p.len()),
            });
        }
    }
    Ok(())
}

/// Brackets with the arity of their node.
fn arity_brackets(t: &Tree) -> impl Iterator<Item = (usize, Constituent)> + '_ {
    t.nodes()
        .map(|n| (arity_bucket(n.children.len()), n.constituent()))
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct EvalResult {
    pub sentences: usize,
    /// Sentences whose bracket multisets are identical.
    pub exact: usize,
    pub brackets: Scores,
    pub by_arity: BTreeMap<usize, Scores>,
}

impl EvalResult {
    pub fn precision(&self) -> f64 {
        self.brackets.precision()
    }

    pub fn recall(&self) -> f64 {
        self.brackets.recall()
    }

    pub fn f1(&self) -> f64 {
        self.brackets.f1()
    }

    /// `key=value` records, one per metric and one per arity bucket.
    pub fn records(&self) -> Vec<String> {
        let mut out = vec![
            format!("sentences={}", self.sentences),
            format!("exact={}", self.exact),
            format!("matched={}", self.brackets.matched),
            format!("gold={}", self.brackets.gold),
            format!("predicted={}", self.brackets.predicted),
            format!("precision={:.4}", self.precision()),
            format!("recall={:.4}", self.recall()),
            format!("f1={:.4}", self.f1()),
        ];
        for (k, s) in &self.by_arity {
            out.push(format!(
                "arity={}{} matched={} gold={} predicted={} precision={:.4} recall={:.4} f1={:.4}",
                k,
                if *k == MAX_ARITY_BUCKET { "+" } else { "" },
                s.matched,
                s.gold,
                s.predicted,
                s.precision(),
                s.recall(),
                s.f1()
            ));
        }
        out
    }
}

impl fmt::Display for EvalResult {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "sentences        {}", self.sentences)?;
        writeln!(f, "exact match      {}", self.exact)?;
        writeln!(
            f,
            "brackets         {} matched / {} gold / {} predicted",
            self.brackets.matched, self.brackets.gold, self.brackets.predicted
        )?;
        writeln!(f, "precision        {:.2}", self.precision())?;
        writeln!(f, "recall           {:.2}", self.recall())?;
        writeln!(f, "F1               {:.2}", self.f1())?;
        if !self.by_arity.is_empty() {
            writeln!(f, "arity   gold   pred  match      P      R     F1")?;
            for (k, s) in &self.by_arity {
                let name = if *k == MAX_ARITY_BUCKET {
                    format!("{k}+")
                } else {
                    k.to_string()
                };
                writeln!(
                    f,
                    "{:<5} {:>6} {:>6} {:>6} {:>6.2} {:>6.2} {:>6.2}",
                    name,
                    s.gold,
                    s.predicted,
                    s.matched,
                    s.precision(),
                    s.recall(),
                    s.f1()
                )?;
            }
        }
        Ok(())
    }
}

/// Labeled bracket precision, recall and F1 over aligned tree lists. All
/// internal nodes count, root included; preterminals do not.
pub fn evaluate(gold: &[Tree], pred: &[Tree]) -> Result<EvalResult> {
    check_aligned(gold, pred)?;
    let mut result = EvalResult {
        sentences: gold.len(),
        ..Default::default()
    };
    for (g, p) in gold.iter().zip(pred) {
        let s = compare(
            g.nodes().map(Tree::constituent),
            p.nodes().map(Tree::constituent),
        );
        if s.matched == s.gold && s.matched == s.predicted {
            result.exact += 1;
        }
        result.brackets.add(s);
    }
    Ok(result)
}

/// [`evaluate`] plus per-arity buckets.
pub fn evaluate_by_arity(gold: &[Tree], pred: &[Tree]) -> Result<EvalResult> {
    let mut result = evaluate(gold, pred)?;
    result.by_arity = arity_f1(gold, pred)?;
    Ok(result)
}

/// Scores per arity bucket. A bracket belongs to the bucket of its own
/// node's child count (words included), and a predicted bracket only
/// matches a gold one with the same label, span and bucket.
pub fn arity_f1(gold: &[Tree], pred: &[Tree]) -> Result<BTreeMap<usize, Scores>> {
    check_aligned(gold, pred)?;
    let mut out: BTreeMap<usize, Scores> = BTreeMap::new();
    for (g, p) in gold.iter().zip(pred) {
        let mut gold_by: BTreeMap<usize, Vec<Constituent>> = BTreeMap::new();
        let mut pred_by: BTreeMap<usize, Vec<Constituent>> = BTreeMap::new();
        for (k, c) in arity_brackets(g) {
            gold_by.entry(k).or_default().push(c);
        }
        for (k, c) in arity_brackets(p) {
            pred_by.entry(k).or_default().push(c);
        }
        for k in 1..=MAX_ARITY_BUCKET {
            let gs = gold_by.remove(&k).unwrap_or_default();
            let ps = pred_by.remove(&k).unwrap_or_default();
            if gs.is_empty() && ps.is_empty() {
                continue;
            }
            out.entry(k)
                .or_default()
                .add(compare(gs.into_iter(), ps.into_iter()));
        }
    }
    Ok(out)
}

/// Static-oracle sequence lengths of both systems over a corpus.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct TransitionStats {
    /// `(non-binary, binary)` length per sentence.
    pub per_sentence: Vec<(usize, usize)>,
}

impl TransitionStats {
    pub fn sentences(&self) -> usize {
        self.per_sentence.len()
    }

    fn mean(&self, pick: impl Fn(&(usize, usize)) -> usize) -> f64 {
        if self.per_sentence.is_empty() {
            return 0.0;
        }
        self.per_sentence.iter().map(pick).sum::<usize>() as f64 / self.per_sentence.len() as f64
    }

    pub fn nonbinary_mean(&self) -> f64 {
        self.mean(|p| p.0)
    }

    pub fn binary_mean(&self) -> f64 {
        self.mean(|p| p.1)
    }

    pub fn records(&self) -> Vec<String> {
        vec![
            format!("sentences={}", self.sentences()),
            format!("nonbinary_mean={:.4}", self.nonbinary_mean()),
            format!("binary_mean={:.4}", self.binary_mean()),
        ]
    }
}

impl fmt::Display for TransitionStats {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "sentences               {}", self.sentences())?;
        writeln!(f, "non-binary tran./sent.  {:.2}", self.nonbinary_mean())?;
        writeln!(f, "binary tran./sent.      {:.2}", self.binary_mean())
    }
}

pub fn stats(corpus: &[Tree], rules: &HeadRules) -> Result<TransitionStats> {
    let mut out = TransitionStats::default();
    for t in corpus {
        let bin = static_oracle_bin(&binarize(t, rules))?.len();
        out.per_sentence.push((static_oracle_nb(t).len(), bin));
    }
    Ok(out)
}

#[cfg(test)]
mod tests;
