//! Partition refinement, the strategy table `(I, T)` and the game itself.

mod engine;
mod partition;
mod referee;
mod refine;
mod strategy;

pub use engine::engine_move;
pub use partition::{f_alpha_step, Partition};
pub use referee::{advance, GameState, Move, Phase, Player};
pub use refine::{refine, Analysis, StrategyTable, Witness};
pub use strategy::{duplicator_pick, duplicator_predicate, spoiler_move, spoiler_pick, validate_step2};
