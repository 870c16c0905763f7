use std::fmt;

/// A training tree left out, with the reason.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Skipped {
    pub index: usize,
    pub reason: String,
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct EpochReport {
    pub epoch: usize,
    pub sentences: usize,
    pub decisions: usize,
    /// Decisions where the model's choice was (or cost nothing against)
    /// the oracle's.
    pub correct: usize,
    pub updates: usize,
    pub seconds: f64,
}

impl EpochReport {
    pub fn new(epoch: usize) -> Self {
        EpochReport {
            epoch,
            ..Default::default()
        }
    }

    /// Transition accuracy in percent.
    pub fn accuracy(&self) -> f64 {
        if self.decisions == 0 {
            0.0
        } else {
            100.0 * self.correct as f64 / self.decisions as f64
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct TrainReport {
    pub epochs: Vec<EpochReport>,
    pub skipped: Vec<Skipped>,
}

impl TrainReport {
    pub fn new(skipped: Vec<Skipped>) -> Self {
        TrainReport {
            epochs: Vec::new(),
            skipped,
        }
    }

    /// One `key=value` record per epoch, then one per skipped tree.
    pub fn records(&self) -> Vec<String> {
        let mut out: Vec<String> = self
            .epochs
            .iter()
            .map(|e| {
                format!(
                    "epoch={} sentences={} decisions={} accuracy={:.4} updates={} skipped={} seconds={:.3}",
                    e.epoch,
                    e.sentences,
                    e.decisions,
                    e.accuracy(),
                    e.updates,
                    self.skipped.len(),
                    e.seconds
                )
            })
            .collect();
        out.extend(
            self.skipped
                .iter()
                .map(|s| format!("skipped={} reason={:?}", s.index, s.reason)),
        );
        out
    }
}

impl fmt::Display for TrainReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(
            f,
            "{:>5} {:>9} {:>10} {:>9} {:>8} {:>8}",
            "epoch", "sentences", "decisions", "accuracy", "updates", "seconds"
        )?;
        for e in &self.epochs {
            writeln!(
                f,
                "{:>5} {:>9} {:>10} {:>8.2}% {:>8} {:>8.2}",
                e.epoch,
                e.sentences,
                e.decisions,
                e.accuracy(),
                e.updates,
                e.seconds
            )?;
        }
        if !self.skipped.is_empty() {
            writeln!(f, "skipped {} tree(s):", self.skipped.len())?;
            for s in &self.skipped {
                writeln!(f, "  #{}: {}", s.index, s.reason)?;
            }
        }
        Ok(())
    }
}
