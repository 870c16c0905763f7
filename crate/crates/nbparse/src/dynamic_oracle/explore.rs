use std::fmt;
use std::str::FromStr;

use rand::Rng;

use crate::error::{Error, Result};
use crate::transition::Transition;

/// Error-exploration policy: an aggressive margin and/or a regular
/// exploration probability.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct ExplorationPolicy {
    /// Follow the best non-optimal transition when its score is within
    /// this margin of the best optimal one.
    pub margin: Option<f64>,
    /// Follow the best non-optimal transition with this probability when
    /// it outscores the best optimal one.
    pub probability: Option<f64>,
}

impl ExplorationPolicy {
    pub const NONE: ExplorationPolicy = ExplorationPolicy {
        margin: None,
        probability: None,
    };

    pub fn is_none(&self) -> bool {
        self.margin.is_none() && self.probability.is_none()
    }
}

impl fmt::Display for ExplorationPolicy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.margin, self.probability) {
            (None, None) => f.write_str("none"),
            (Some(a), None) => write!(f, "aggr={a}"),
            (None, Some(b)) => write!(f, "reg={b}"),
            (Some(a), Some(b)) => write!(f, "aggr={a},reg={b}"),
        }
    }
}

/// Accepts `none`, or comma-separated `aggr=<margin>` / `reg=<probability>`
/// (a `-` may stand in for `=`).
impl FromStr for ExplorationPolicy {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = |why: &str| Error::Config(format!("exploration policy {s:?}: {why}"));
        let s = s.trim();
        let mut policy = ExplorationPolicy::NONE;
        if s.is_empty() || s == "none" {
            return Ok(policy);
        }
        for part in s.split(',') {
            let part = part.trim();
            let (key, value) = part
                .split_once('=')
                .or_else(|| part.split_once('-'))
                .ok_or_else(|| bad("expected key=value"))?;
            let value: f64 = value.parse().map_err(|_| bad("value is not a number"))?;
            if !value.is_finite() || value < 0.0 {
                return Err(bad("value must be a non-negative number"));
            }
            match key {
                "aggr" => policy.margin = Some(value),
                "reg" if value <= 1.0 => policy.probability = Some(value),
                "reg" => return Err(bad("probability above 1")),
                _ => return Err(bad("unknown key")),
            }
        }
        Ok(policy)
    }
}

fn best<'a>(items: impl Iterator<Item = &'a (Transition, f64)>) -> Option<&'a (Transition, f64)> {
    items.fold(None, |acc: Option<&(Transition, f64)>, item| match acc {
        Some(cur) if cur.1 > item.1 || (cur.1 == item.1 && cur.0 <= item.0) => Some(cur),
        _ => Some(item),
    })
}

/// Chooses between the best zero-cost transition `z` and the best other
/// transition `w`: `w` is followed when `score(w) >= score(z) - margin`, or
/// when `score(w) > score(z)` and a uniform draw falls below the
/// probability. Ties are broken by canonical transition order. The draw
/// is only made when it can matter, so a zero probability leaves `rng`
/// untouched.
pub fn choose<R: Rng + ?Sized>(
    scores: &[(Transition, f64)],
    zero_cost: &[Transition],
    policy: &ExplorationPolicy,
    rng: &mut R,
) -> Result<Transition> {
    let z = best(scores.iter().filter(|(t, _)| zero_cost.contains(t)));
    let w = best(scores.iter().filter(|(t, _)| !zero_cost.contains(t)));
    let (z, w) = match (z, w) {
        (Some(z), Some(w)) => (z, w),
        (Some(z), None) => return Ok(z.0.clone()),
        (None, _) => return Err(Error::NoLegalTransition),
    };
    if let Some(margin) = policy.margin {
        if w.1 >= z.1 - margin {
            return Ok(w.0.clone());
        }
    }
    if let Some(p) = policy.probability {
        if p > 0.0 && w.1 > z.1 && rng.gen::<f64>() < p {
            return Ok(w.0.clone());
        }
    }
    Ok(z.0.clone())
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn scored(z: f64, w: f64) -> (Vec<(Transition, f64)>, Vec<Transition>) {
        (
            vec![(Transition::Shift, z), (Transition::reduce("X", 1), w)],
            vec![Transition::Shift],
        )
    }

    #[test]
    fn aggressive_margin() {
        let policy: ExplorationPolicy = "aggr=1.0,reg=0.1".parse().unwrap();
        let (scores, zero) = scored(2.0, 1.5);
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        assert_eq!(
            choose(&scores, &zero, &policy, &mut rng).unwrap(),
            Transition::reduce("X", 1)
        );
        let (scores, zero) = scored(2.0, 0.9);
        assert_eq!(
            choose(&scores, &zero, &policy, &mut rng).unwrap(),
            Transition::Shift
        );
    }

    #[test]
    fn regular_only_never_follows_lower_score() {
        let policy: ExplorationPolicy = "reg=1.0".parse().unwrap();
        let (scores, zero) = scored(2.0, 1.9);
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..100 {
            assert_eq!(
                choose(&scores, &zero, &policy, &mut rng).unwrap(),
                Transition::Shift
            );
        }
    }

    #[test]
    fn regular_probability_one_always_explores() {
        let policy = ExplorationPolicy {
            margin: None,
            probability: Some(1.0),
        };
        let (scores, zero) = scored(1.0, 1.5);
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        for _ in 0..100 {
            assert_eq!(
                choose(&scores, &zero, &policy, &mut rng).unwrap(),
                Transition::reduce("X", 1)
            );
        }
    }

    #[test]
    fn regular_probability_is_a_coin() {
        let policy: ExplorationPolicy = "reg=0.25".parse().unwrap();
        let (scores, zero) = scored(1.0, 1.5);
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let explored = (0..4000)
            .filter(|_| choose(&scores, &zero, &policy, &mut rng).unwrap() != Transition::Shift)
            .count();
        assert!((850..1150).contains(&explored), "{explored}");
    }

    #[test]
    fn no_policy_follows_best_zero_cost() {
        let scores = vec![
            (Transition::Shift, 0.0),
            (Transition::reduce("A", 1), 3.0),
            (Transition::reduce("B", 1), 3.0),
            (Transition::reduce("C", 1), 9.0),
        ];
        let zero = vec![
            Transition::Shift,
            Transition::reduce("A", 1),
            Transition::reduce("B", 1),
        ];
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        assert_eq!(
            choose(&scores, &zero, &ExplorationPolicy::NONE, &mut rng).unwrap(),
            Transition::reduce("A", 1)
        );
    }

    #[test]
    fn all_zero_cost_or_none() {
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        let scores = vec![(Transition::Shift, 0.0)];
        let policy: ExplorationPolicy = "aggr=5".parse().unwrap();
        assert_eq!(
            choose(&scores, &[Transition::Shift], &policy, &mut rng).unwrap(),
            Transition::Shift
        );
        assert!(choose(&scores, &[], &policy, &mut rng).is_err());
    }

    #[test]
    fn policy_syntax() {
        let p: ExplorationPolicy = "aggr-1.0,reg-0.1".parse().unwrap();
        assert_eq!(
            p,
            ExplorationPolicy {
                margin: Some(1.0),
                probability: Some(0.1)
            }
        );
        assert_eq!(p.to_string().parse::<ExplorationPolicy>().unwrap(), p);
        assert!("none".parse::<ExplorationPolicy>().unwrap().is_none());
        for bad in ["reg=2", "aggr=-1", "foo=1", "aggr", "reg=nan"] {
            assert!(bad.parse::<ExplorationPolicy>().is_err(), "{bad}");
        }
    }
}
