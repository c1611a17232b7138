//! Behavioural equivalence of finite coalgebras through the
//! spoiler/duplicator bisimulation game.
//!
//! The crate covers labelled transition systems and probabilistic systems
//! with termination. [`game::refine`] computes the bisimilarity partition
//! together with a winning strategy for the spoiler, [`logic`] turns that
//! strategy into distinguishing modal formulas, and [`play`] lets a human
//! play either side against the engine.

pub mod error;
pub mod functor;
pub mod game;
pub mod io;
pub mod logic;
pub mod play;
pub mod predicate;
pub mod rational;

pub use error::{Error, Result};
pub use functor::{Coalgebra, Kind, Label, Observation};
pub use game::{refine, Analysis, Partition, StrategyTable};
pub use logic::{Formula, Modality, Named};
pub use play::Analyzed;
pub use predicate::{Predicate, StateId};
