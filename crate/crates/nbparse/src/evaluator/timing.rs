use std::time::Instant;

use crate::error::Result;
use crate::scorer::Model;
use crate::trainer::Parser;
use crate::treebank::Token;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TimingRecord {
    pub length: usize,
    pub seconds: f64,
    pub transitions: usize,
}

/// Least-squares line `y = slope * x + intercept`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LinearFit {
    pub slope: f64,
    pub intercept: f64,
    pub r_squared: f64,
}

/// `None` with fewer than two distinct `x` values.
pub fn linear_fit(points: &[(f64, f64)]) -> Option<LinearFit> {
    let n = points.len() as f64;
    if points.len() < 2 {
        return None;
    }
    let mx = points.iter().map(|p| p.0).sum::<f64>() / n;
    let my = points.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = points.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let sxy: f64 = points.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let syy: f64 = points.iter().map(|p| (p.1 - my).powi(2)).sum();
    if sxx == 0.0 {
        return None;
    }
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let r_squared = if syy == 0.0 {
        1.0
    } else {
        sxy * sxy / (sxx * syy)
    };
    Some(LinearFit {
        slope,
        intercept,
        r_squared,
    })
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct TimingProfile {
    pub records: Vec<TimingRecord>,
    /// Wall time against sentence length.
    pub fit: Option<LinearFit>,
}

impl TimingProfile {
    pub fn sentences_per_second(&self) -> f64 {
        let total: f64 = self.records.iter().map(|r| r.seconds).sum();
        if total == 0.0 {
            0.0
        } else {
            self.records.len() as f64 / total
        }
    }

    pub fn transitions_per_sentence(&self) -> f64 {
        if self.records.is_empty() {
            return 0.0;
        }
        self.records.iter().map(|r| r.transitions).sum::<usize>() as f64 / self.records.len() as f64
    }

    /// One `length=.. seconds=.. transitions=..` record per sentence, then
    /// the fit.
    pub fn records(&self) -> Vec<String> {
        let mut out: Vec<String> = self
            .records
            .iter()
            .map(|r| {
                format!(
                    "length={} seconds={:.9} transitions={}",
                    r.length, r.seconds, r.transitions
                )
            })
            .collect();
        if let Some(f) = self.fit {
            out.push(format!(
                "fit slope={:.9} intercept={:.9} r2={:.6}",
                f.slope, f.intercept, f.r_squared
            ));
        }
        out
    }
}

pub fn timing_profile(model: &Model, sentences: &[Vec<Token>]) -> Result<TimingProfile> {
    timing_profile_with(model, sentences, 1)
}

/// Times each sentence `repeats` times and keeps the fastest run, which
/// filters out scheduler noise.
pub fn timing_profile_with(
    model: &Model,
    sentences: &[Vec<Token>],
    repeats: usize,
) -> Result<TimingProfile> {
    let parser = Parser::new(model);
    let mut records = Vec::with_capacity(sentences.len());
    for s in sentences {
        let mut best = f64::INFINITY;
        let mut transitions = 0;
        for _ in 0..repeats.max(1) {
            let start = Instant::now();
            let (_, trace) = parser.parse_with_trace(s)?;
            best = best.min(start.elapsed().as_secs_f64());
            transitions = trace.len();
        }
        records.push(TimingRecord {
            length: s.len(),
            seconds: best,
            transitions,
        });
    }
    let points: Vec<(f64, f64)> = records
        .iter()
        .map(|r| (r.length as f64, r.seconds))
        .collect();
    Ok(TimingProfile {
        fit: linear_fit(&points),
        records,
    })
}
