use std::collections::HashMap;
use std::str::FromStr;

use crate::error::{Error, Result};

const ENGLISH: &str = include_str!("../../data/english.headrules");

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Direction {
    /// Scan children left to right.
    Left,
    /// Scan children right to left.
    Right,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HeadRule {
    pub direction: Direction,
    pub priorities: Vec<String>,
}

/// Percolation table selecting the head child of a node.
///
/// Parents without a rule fall back to the leftmost child.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct HeadRules {
    rules: HashMap<String, HeadRule>,
}

impl HeadRules {
    /// The table shipped with the crate.
    pub fn english() -> Self {
        ENGLISH.parse().expect("bundled head rules are well-formed")
    }

    pub fn insert(&mut self, parent: impl Into<String>, rule: HeadRule) {
        self.rules.insert(parent.into(), rule);
    }

    pub fn rule(&self, parent: &str) -> Option<&HeadRule> {
        self.rules.get(parent)
    }

    /// Index of the head among `children`. `children` must be non-empty.
    pub fn head_index<S: AsRef<str>>(&self, parent: &str, children: &[S]) -> usize {
        assert!(!children.is_empty());
        let Some(rule) = self.rules.get(parent) else {
            return 0;
        };
        let order: Vec<usize> = match rule.direction {
            Direction::Left => (0..children.len()).collect(),
            Direction::Right => (0..children.len()).rev().collect(),
        };
        for wanted in &rule.priorities {
            if let Some(&i) = order.iter().find(|&&i| children[i].as_ref() == wanted) {
                return i;
            }
        }
        order[0]
    }
}

impl FromStr for HeadRules {
    type Err = Error;

    fn from_str(text: &str) -> Result<Self> {
        let mut rules = HeadRules::default();
        for (i, line) in text.lines().enumerate() {
            let line = match line.find('#') {
                Some(pos) => &line[..pos],
                None => line,
            };
            let mut fields = line.split_whitespace();
            let Some(parent) = fields.next() else {
                continue;
            };
            let direction = match fields.next() {
                Some("left") => Direction::Left,
                Some("right") => Direction::Right,
                Some(other) => {
                    return Err(Error::HeadRules {
                        line: i + 1,
                        message: format!("direction must be left or right, got {other:?}"),
                    })
                }
                None => {
                    return Err(Error::HeadRules {
                        line: i + 1,
                        message: "missing direction".into(),
                    })
                }
            };
            rules.insert(
                parent,
                HeadRule {
                    direction,
                    priorities: fields.map(str::to_string).collect(),
                },
            );
        }
        Ok(rules)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn english_heads_of_running_example() {
        let rules = HeadRules::english();
        assert_eq!(rules.head_index("NP", &["DT", "NN"]), 1);
        assert_eq!(rules.head_index("VP", &["VBZ", "ADVP", "ADJP"]), 0);
        assert_eq!(rules.head_index("S", &["NP", "VP", "."]), 1);
    }

    #[test]
    fn fallbacks() {
        let rules: HeadRules = "R right Z\nL left Z".parse().unwrap();
        assert_eq!(rules.head_index("R", &["a", "b", "c"]), 2);
        assert_eq!(rules.head_index("L", &["a", "b", "c"]), 0);
        // Unknown parent: leftmost.
        assert_eq!(rules.head_index("Q", &["a", "b"]), 0);
    }

    #[test]
    fn priority_order_beats_position() {
        let rules: HeadRules = "P left B A # comment".parse().unwrap();
        assert_eq!(rules.head_index("P", &["A", "B", "A"]), 1);
        let rules: HeadRules = "P right A".parse().unwrap();
        assert_eq!(rules.head_index("P", &["A", "B", "A"]), 2);
    }

    #[test]
    fn malformed_lines() {
        assert!(matches!(
            "NP up NN".parse::<HeadRules>(),
            Err(Error::HeadRules { line: 1, .. })
        ));
        assert!("\n\nNP".parse::<HeadRules>().is_err());
        assert!("# only comments\n\n"
            .parse::<HeadRules>()
            .unwrap()
            .rule("NP")
            .is_none());
    }
}
