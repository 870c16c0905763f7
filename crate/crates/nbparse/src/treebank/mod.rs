//! Constituent trees: PTB I/O, head rules, binarization.

mod binarize;
mod headrules;
mod ptb;
mod tagged;
mod tree;

pub use binarize::{binarize, unbinarize};
pub use headrules::{Direction, HeadRule, HeadRules};
pub use ptb::{read_ptb, read_ptb_with, write_ptb, ReadOptions, MAX_DEPTH};
pub use tagged::{read_tagged, read_tagged_line, write_tagged};
pub use tree::{constituent_counts, decompose, HeadSide, Leaf, Node, Nodes, Token, Tree};

/// Default bound on unary-chain length.
pub const DEFAULT_UNARY_CAP: usize = 3;
