//! Exact values and constructive strategies for identifying every ball's
//! color in a red/green coloring using only "same color?" comparisons, when
//! the number of green balls is known exactly (`=`) or bounded (`<=`).
//!
//! * [`pattern`]: box Types, canonical patterns, merge rule, coloring counts.
//! * [`bounds`]: problem instances and closed-form bounds.
//! * [`solver`]: exact minimax search with a persistent memo.
//! * [`oracle`]: independent brute force over explicit coloring sets.
//! * [`strategies`]: Maker procedures (majority, chain, pivot recursion,
//!   podium, towers) and exhaustive Breaker evaluation.
//! * [`towers_opt`]: unicity sets, exact LP and towers coefficients.
//! * [`cli`]: the `majid` front end and report tables.

pub mod bounds;
pub mod cli;
pub mod oracle;
pub mod pattern;
pub mod solver;
pub mod strategies;
pub mod towers_opt;

pub use bounds::{bounds_eq, bounds_le, BoundsReport, Problem, ProblemError};
pub use pattern::{binary_ones, count_colorings, BoxShape, Count, Mode, Pattern, PatternError};
pub use solver::{solve_exact, MemoStore, SearchLimits, SolveReport};
