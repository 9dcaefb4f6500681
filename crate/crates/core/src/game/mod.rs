//! Extensive-form game representation and the poker benchmark games.

mod poker;
mod profile;
mod tree;

pub use poker::{build_game, build_kuhn, build_leduc, GAME_IDS};
pub use profile::{compute_reach, Profile, ReachWeights};
pub use tree::{GameTree, InfoSet, Node, NodeId, NodeKind, Player, TreeBuilder};
