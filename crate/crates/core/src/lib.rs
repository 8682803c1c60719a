//! Regret minimization in discounted-sum games with exact rational arithmetic.

pub mod arena;
pub mod automaton;
pub mod error;
pub mod game;
pub mod payoff;
pub mod pwl;
pub mod rational;
pub mod regret_all;
pub mod regret_positional;
pub mod regret_word;
pub mod reductions;
pub mod report;
pub mod safety;
mod text;
pub mod values;

pub use arena::{parse_arena, format_arena, Player, PlayPrefix, WeightedArena};
pub use automaton::{parse_automaton, format_automaton, WeightedAutomaton};
pub use error::Error;
pub use rational::{DiscountFactor, Rational};
pub use report::{Config, RegretReport, ReportValue};
