//! Parser configurations and the two bottom-up transition systems.

mod action;
mod config;
mod oracle;
mod system;

pub use action::{parse_transitions, Transition};
pub use config::{BuiltNode, Configuration, ItemRef, StackItem};
pub use oracle::{count_transitions, replay, static_oracle_bin, static_oracle_nb};
pub use system::{
    arities, has_wide_node, tree_labels, BinarySystem, Inventory, NonBinarySystem, ReduceSet,
    SystemKind, TransitionSystem,
};
