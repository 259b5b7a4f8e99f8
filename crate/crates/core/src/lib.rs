//! Game values for N-player normal-play Clobber.
//!
//! * [`board`]: positions, move generation and turn rotation with skipping.
//! * [`value`]: value trees, canonical form, bracket and `a_i` notation.
//! * [`rewrite`]: the syntactic rewrites and normalization profiles.
//! * [`preference`]: selfish, prudent and indifferent preference relations.
//! * [`solver`]: memoized evaluation under a preference mode.
//! * [`enumeration`]: exhaustive 1×n board enumeration and unique-value counts.

pub mod board;
pub mod enumeration;
pub mod error;
pub mod preference;
pub mod rewrite;
pub mod solver;
pub mod value;

pub use board::{parse_board, BoardGraph, Clobber, Move, Occupancy, Player, Position, Shape};
pub use error::{Error, Result};
pub use preference::{
    chain_coordinate, merge_incomparable_simples, outcome_class, simple_compare, Base,
    ChainCoordinate, Comparison, OutcomeClass, PruneMode, Relations,
};
pub use rewrite::{normalize, Normalizer, Profile};
pub use solver::{evaluate, evaluate_all_starts, evaluate_value, EvalResult, PreferenceMode, Solver};
pub use value::{expand_simple, match_simple, parse_value, GameValue, RenderStyle, SimpleValue};
