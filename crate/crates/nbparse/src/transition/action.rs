use std::fmt;
use std::str::FromStr;

use crate::error::Error;
use crate::label::Label;

/// A parser action of either transition system.
///
/// The derived ordering is the canonical tie-breaking order:
/// `Shift < Reduce (by label, then arity) < ReduceLeft < ReduceRight <
/// ReduceUnary < Finish`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Transition {
    Shift,
    /// Non-binary `Reduce-X#k`: pops `arity` items, pushes `label` over them.
    Reduce {
        label: Label,
        arity: usize,
    },
    /// Binary reduce whose head is the right child.
    ReduceLeft(Label),
    /// Binary reduce whose head is the left child.
    ReduceRight(Label),
    ReduceUnary(Label),
    Finish,
}

impl Transition {
    pub fn reduce(label: impl Into<Label>, arity: usize) -> Self {
        Transition::Reduce {
            label: label.into(),
            arity,
        }
    }

    pub fn label(&self) -> Option<&Label> {
        match self {
            Transition::Reduce { label, .. }
            | Transition::ReduceLeft(label)
            | Transition::ReduceRight(label)
            | Transition::ReduceUnary(label) => Some(label),
            Transition::Shift | Transition::Finish => None,
        }
    }

    /// Number of stack items popped.
    pub fn pops(&self) -> usize {
        match self {
            Transition::Shift | Transition::Finish => 0,
            Transition::Reduce { arity, .. } => *arity,
            Transition::ReduceLeft(_) | Transition::ReduceRight(_) => 2,
            Transition::ReduceUnary(_) => 1,
        }
    }

    pub fn is_unary(&self) -> bool {
        matches!(
            self,
            Transition::Reduce { arity: 1, .. } | Transition::ReduceUnary(_)
        )
    }

    pub fn is_binary_system(&self) -> bool {
        matches!(
            self,
            Transition::ReduceLeft(_) | Transition::ReduceRight(_) | Transition::ReduceUnary(_)
        )
    }
}

impl fmt::Display for Transition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Transition::Shift => f.write_str("SHIFT"),
            Transition::Reduce { label, arity } => write!(f, "REDUCE-{label}#{arity}"),
            Transition::ReduceLeft(label) => write!(f, "REDUCE-LEFT-{label}"),
            Transition::ReduceRight(label) => write!(f, "REDUCE-RIGHT-{label}"),
            Transition::ReduceUnary(label) => write!(f, "REDUCE-UNARY-{label}"),
            Transition::Finish => f.write_str("FINISH"),
        }
    }
}

impl FromStr for Transition {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        let bad = || Error::TransitionSyntax(s.to_string());
        let label = |l: &str| {
            if l.is_empty() || l.chars().any(|c| c.is_whitespace() || c == '(' || c == ')') {
                Err(bad())
            } else {
                Ok(Label::new(l))
            }
        };
        match s {
            "SHIFT" => return Ok(Transition::Shift),
            "FINISH" => return Ok(Transition::Finish),
            _ => {}
        }
        let rest = s.strip_prefix("REDUCE-").ok_or_else(bad)?;
        if let Some((l, k)) = rest.rsplit_once('#') {
            if !k.is_empty() && k.bytes().all(|b| b.is_ascii_digit()) {
                let arity: usize = k.parse().map_err(|_| bad())?;
                if arity == 0 {
                    return Err(bad());
                }
                return Ok(Transition::Reduce {
                    label: label(l)?,
                    arity,
                });
            }
        }
        if let Some(l) = rest.strip_prefix("LEFT-") {
            Ok(Transition::ReduceLeft(label(l)?))
        } else if let Some(l) = rest.strip_prefix("RIGHT-") {
            Ok(Transition::ReduceRight(label(l)?))
        } else if let Some(l) = rest.strip_prefix("UNARY-") {
            Ok(Transition::ReduceUnary(label(l)?))
        } else {
            Err(bad())
        }
    }
}

/// Parses whitespace-separated transitions (one per line works too).
pub fn parse_transitions(text: &str) -> Result<Vec<Transition>, Error> {
    text.split_whitespace().map(str::parse).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn serialization_forms() {
        let cases = [
            (Transition::Shift, "SHIFT"),
            (Transition::reduce("VP", 3), "REDUCE-VP#3"),
            (Transition::Finish, "FINISH"),
            (Transition::ReduceLeft("NP".into()), "REDUCE-LEFT-NP"),
            (Transition::ReduceRight("S*".into()), "REDUCE-RIGHT-S*"),
            (Transition::ReduceUnary("ADVP".into()), "REDUCE-UNARY-ADVP"),
        ];
        for (t, s) in cases {
            assert_eq!(t.to_string(), s);
            assert_eq!(s.parse::<Transition>().unwrap(), t);
        }
    }

    #[test]
    fn awkward_labels() {
        assert_eq!(
            "REDUCE-LEFT#2".parse::<Transition>().unwrap(),
            Transition::reduce("LEFT", 2)
        );
        assert_eq!(
            "REDUCE-A#B#2".parse::<Transition>().unwrap(),
            Transition::reduce("A#B", 2)
        );
    }

    #[test]
    fn rejects_garbage() {
        for s in [
            "",
            "SHIFT ",
            "REDUCE-",
            "REDUCE-X#0",
            "REDUCE-#2",
            "REDUCE-X",
            "REDUCE-LEFT-",
            "reduce-x#1",
        ] {
            assert!(s.parse::<Transition>().is_err(), "{s:?}");
        }
    }

    #[test]
    fn canonical_order() {
        let mut ts = vec![
            Transition::Finish,
            Transition::reduce("B", 1),
            Transition::reduce("A", 2),
            Transition::Shift,
            Transition::reduce("A", 1),
        ];
        ts.sort();
        assert_eq!(
            ts,
            vec![
                Transition::Shift,
                Transition::reduce("A", 1),
                Transition::reduce("A", 2),
                Transition::reduce("B", 1),
                Transition::Finish,
            ]
        );
    }
}
