//! Constructive Maker procedures played against a [`Breaker`].
//!
//! Procedures work on unit lists: monocolored boxes of one common size,
//! treated as the balls of a smaller instance. The top level uses the `n`
//! singletons as units.

pub mod board;
pub mod breaker;
pub mod explore;
pub mod podium;
pub mod towers;

use std::collections::VecDeque;
use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::bounds::{Problem, ProblemError};
use crate::pattern::{binary_ones, Mode};

pub use board::{Answer, AnswerRequest, Board, BoxId, GameBox, Session, Step, Transcript};
pub use breaker::{Breaker, HiddenColoring, MajorityBreaker, RandomBreaker, ScriptedBreaker};
pub use explore::{explore, worst_case_of_strategy, StrategyWorstCase};
pub use podium::{podium_green_steps, podium_identify_eq, LabState};
pub use towers::{towers_identify_eq, TowersOutcome, TowersPlan};

#[derive(Debug, Error)]
pub enum StrategyError {
    #[error("no live box with id {0}")]
    UnknownBox(BoxId),
    #[error("breaker gave an infeasible answer at step {step}")]
    InconsistentAnswer { step: usize },
    #[error("precondition failed: {0}")]
    Precondition(String),
    #[error("ran out of units in {0}")]
    Exhausted(&'static str),
    #[error("not identified: {count} colorings remain for {pattern}")]
    Unsound { count: u128, pattern: String },
    #[error("used {used} comparisons, more than {limit}")]
    TooManyComparisons { used: usize, limit: usize },
    #[error(transparent)]
    Problem(#[from] ProblemError),
    #[error(transparent)]
    Towers(#[from] crate::towers_opt::TowersError),
}

/// Unit counts on the two sides of a box made of units of `w` balls.
pub(crate) fn unit_shape(session: &Session<'_>, id: BoxId, w: usize) -> Result<(u32, u32), StrategyError> {
    let s = session.shape(id)?;
    Ok((s.small() as u32 / w as u32, s.big() as u32 / w as u32))
}

pub(crate) fn unit_weight(session: &Session<'_>, units: &[BoxId]) -> Result<usize, StrategyError> {
    match units.first() {
        None => Ok(1),
        Some(&id) => Ok(session.shape(id)?.size() as usize),
    }
}

/// Compares the first unit with every other one.
pub fn chain_units(session: &mut Session<'_>, units: &[BoxId]) -> Result<Option<BoxId>, StrategyError> {
    let Some((&first, rest)) = units.split_first() else {
        return Ok(None);
    };
    let mut cur = first;
    for &u in rest {
        cur = session.compare(cur, u)?.1;
    }
    Ok(Some(cur))
}

pub fn chain_identify(session: &mut Session<'_>) -> Result<(), StrategyError> {
    let ids = session.board().live_ids();
    chain_units(session, &ids)?;
    Ok(())
}

/// Pivot recursion for at most `q` green units among `units`.
///
/// A fresh pivot absorbs single units until one side leads by `q+1`; that
/// side is red, the other holds `x` green units and the recursion continues
/// with `q-x`. Small remainders fall back to the chain. Returns the boxes
/// covering all units, each with a determined coloring.
pub fn theorem1_units(
    session: &mut Session<'_>,
    units: &[BoxId],
    q: u32,
) -> Result<Vec<BoxId>, StrategyError> {
    let w = unit_weight(session, units)?;
    let mut fresh: VecDeque<BoxId> = units.iter().copied().collect();
    let mut done = Vec::new();
    let mut q = q;
    while q > 0 && fresh.len() >= 3 * q as usize + 2 {
        let mut cur = fresh.pop_front().expect("non-empty");
        loop {
            let (s, b) = unit_shape(session, cur, w)?;
            if b - s == q + 1 {
                done.push(cur);
                q -= s;
                break;
            }
            let next = fresh.pop_front().ok_or(StrategyError::Exhausted("pivot"))?;
            cur = session.compare(cur, next)?.1;
        }
    }
    if q > 0 {
        let rest: Vec<BoxId> = fresh.drain(..).collect();
        done.extend(chain_units(session, &rest)?);
    } else {
        done.extend(fresh);
    }
    Ok(done)
}

pub fn theorem1_identify(session: &mut Session<'_>) -> Result<(), StrategyError> {
    let ids = session.board().live_ids();
    let p = session.problem().p;
    theorem1_units(session, &ids, p)?;
    Ok(())
}

/// Finds a ball of the majority color with at most `n - b(n)` comparisons.
///
/// Equal-sized monocolored boxes are merged on `same` and set aside on
/// `diff`; the remaining sizes are distinct powers of two, so the largest
/// outweighs the others and carries the majority color.
pub fn majority_find_red(session: &mut Session<'_>) -> Result<BoxId, StrategyError> {
    let mut stack: Vec<BoxId> = Vec::new();
    for id in session.board().live_ids() {
        stack.push(id);
        while stack.len() >= 2 {
            let top = stack[stack.len() - 1];
            let below = stack[stack.len() - 2];
            if session.shape(top)?.size() != session.shape(below)?.size() {
                break;
            }
            stack.truncate(stack.len() - 2);
            let (ans, merged) = session.compare(below, top)?;
            if ans == Answer::Same {
                stack.push(merged);
            }
        }
    }
    stack.first().copied().ok_or(StrategyError::Exhausted("majority"))
}

/// Comparison bound of [`majority_find_red`].
pub fn majority_bound(n: u32) -> u32 {
    n - binary_ones(n as u64)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Strategy {
    /// Find one red ball only.
    Majority,
    Chain,
    Theorem1,
    /// `None` picks the optimal podium height.
    Podium { nu: Option<u32> },
    Towers(TowersPlan),
}

impl Strategy {
    pub fn name(&self) -> &'static str {
        match self {
            Strategy::Majority => "majority",
            Strategy::Chain => "chain",
            Strategy::Theorem1 => "theorem1",
            Strategy::Podium { .. } => "podium",
            Strategy::Towers(_) => "towers",
        }
    }

    /// Whether a run must end with a single compatible coloring.
    pub fn identifies(&self) -> bool {
        !matches!(self, Strategy::Majority)
    }

    pub fn check_applicable(&self, problem: &Problem) -> Result<(), StrategyError> {
        let need_eq = matches!(self, Strategy::Podium { .. } | Strategy::Towers(_));
        if need_eq && problem.mode != Mode::ExactlyP {
            return Err(StrategyError::Precondition(format!(
                "{} needs the exactly-p mode",
                self.name()
            )));
        }
        Ok(())
    }

    /// Plays the strategy to completion. Returns the found box for
    /// [`Strategy::Majority`].
    pub fn run(&self, session: &mut Session<'_>) -> Result<Option<BoxId>, StrategyError> {
        self.check_applicable(&session.problem())?;
        match self {
            Strategy::Majority => return majority_find_red(session).map(Some),
            Strategy::Chain => chain_identify(session)?,
            Strategy::Theorem1 => theorem1_identify(session)?,
            Strategy::Podium { nu } => {
                podium_identify_eq(session, *nu)?;
            }
            Strategy::Towers(plan) => {
                towers_identify_eq(session, plan)?;
            }
        }
        Ok(None)
    }
}

impl fmt::Display for Strategy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Strategy {
    type Err = String;

    /// Names only; towers gets the plan for `p = 3`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "majority" => Ok(Strategy::Majority),
            "chain" => Ok(Strategy::Chain),
            "theorem1" | "pivot" => Ok(Strategy::Theorem1),
            "podium" => Ok(Strategy::Podium { nu: None }),
            "towers" => Ok(Strategy::Towers(TowersPlan::default_p3())),
            _ => Err(format!("unknown strategy {s:?}")),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bounds::q_plus_le;

    fn run_hidden(strategy: &Strategy, problem: Problem, mask: u64) -> (usize, u128) {
        let mut hc = HiddenColoring::from_mask(problem.n, mask);
        let mut s = Session::new(problem, &mut hc);
        strategy.run(&mut s).unwrap();
        (s.comparisons(), s.count())
    }

    #[test]
    fn theorem1_identifies_every_coloring() {
        let problem = Problem::le(9, 2).unwrap();
        for mask in 0u64..1 << 9 {
            if mask.count_ones() > 2 {
                continue;
            }
            let (c, left) = run_hidden(&Strategy::Theorem1, problem, mask);
            assert_eq!(left, 1, "mask {mask:b}");
            assert!(c as u32 <= q_plus_le(9, 2));
        }
    }

    #[test]
    fn chain_uses_n_minus_one() {
        let (c, left) = run_hidden(&Strategy::Chain, Problem::eq(6, 2).unwrap(), 0b100100);
        assert_eq!((c, left), (5, 1));
    }

    #[test]
    fn majority_returns_red_box() {
        for mask in [0u64, 0b1011, 0b110_0100] {
            let problem = Problem::le(7, 3).unwrap();
            let mut hc = HiddenColoring::from_mask(7, mask);
            let mut s = Session::new(problem, &mut hc);
            let id = majority_find_red(&mut s).unwrap();
            assert!(s.comparisons() as u32 <= majority_bound(7));
            let ball = s.board().get(id).unwrap().big()[0];
            assert!(!HiddenColoring::from_mask(7, mask).is_green(ball));
        }
    }

    #[test]
    fn names_parse() {
        for name in ["majority", "chain", "theorem1", "podium", "towers"] {
            assert_eq!(name.parse::<Strategy>().unwrap().name(), name);
        }
        assert!("nope".parse::<Strategy>().is_err());
        let le = Problem::le(9, 3).unwrap();
        assert!(Strategy::Podium { nu: None }.check_applicable(&le).is_err());
    }
}
