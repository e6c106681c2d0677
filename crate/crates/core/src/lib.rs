//! Big-O decision procedures for non-negative weighted automata and
//! labelled Markov chains.

pub mod algebraic;
pub mod automaton;
pub mod bounded;
pub mod error;
pub mod graph;
pub mod interval;
pub mod io;
pub mod nfa;
pub mod poly;
pub mod rational;
pub mod reductions;
pub mod spectral;
pub mod unambiguous;
pub mod unary;
pub mod verdict;

pub use automaton::{Query, Ratio, RatioProfile, WeightedAutomaton};
pub use error::{Error, Result};
pub use rational::Rational;
pub use verdict::{Verdict, Witness};
