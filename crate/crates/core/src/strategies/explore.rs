//! Exhaustive evaluation of a deterministic Maker against every Breaker.
//!
//! Each leaf of the answer tree is reached by replaying the strategy from
//! scratch with a scripted answer prefix.

use serde::{Deserialize, Serialize};

use crate::bounds::Problem;
use crate::pattern::count_colorings;

use super::board::{Answer, Session};
use super::breaker::ScriptedBreaker;
use super::{Strategy, StrategyError};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExploreStats {
    /// Most comparisons used on any branch.
    pub worst: usize,
    pub leaves: usize,
}

/// Plays `run` against every answer sequence and applies `check` at each leaf.
pub fn explore<T>(
    problem: Problem,
    mut run: impl FnMut(&mut Session<'_>) -> Result<T, StrategyError>,
    mut check: impl FnMut(&Session<'_>, &T) -> Result<(), StrategyError>,
) -> Result<ExploreStats, StrategyError> {
    let limit = problem.n as usize - 1;
    let mut stats = ExploreStats { worst: 0, leaves: 0 };
    let mut pending: Vec<Vec<Answer>> = vec![Vec::new()];
    while let Some(prefix) = pending.pop() {
        let mut breaker = ScriptedBreaker::new(prefix.clone());
        let used = {
            let mut session = Session::new(problem, &mut breaker);
            let out = run(&mut session)?;
            check(&session, &out)?;
            session.comparisons()
        };
        if used > limit {
            return Err(StrategyError::TooManyComparisons { used, limit });
        }
        stats.leaves += 1;
        stats.worst = stats.worst.max(used);
        let answers: Vec<Answer> = breaker.log.iter().map(|&(_, a, _)| a).collect();
        for (i, &(_, ans, both)) in breaker.log.iter().enumerate().skip(prefix.len()) {
            if both && ans == Answer::Same {
                let mut next = answers[..i].to_vec();
                next.push(Answer::Diff);
                pending.push(next);
            }
        }
    }
    Ok(stats)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct StrategyWorstCase {
    pub strategy: String,
    pub problem: Problem,
    pub worst: usize,
    pub leaves: usize,
}

/// Worst-case comparisons of `strategy`, checking every leaf is solved.
///
/// Identification strategies must leave one coloring; the majority
/// procedure must return a box that is red in every remaining coloring.
pub fn worst_case_of_strategy(strategy: &Strategy, problem: Problem) -> Result<StrategyWorstCase, StrategyError> {
    strategy.check_applicable(&problem)?;
    let stats = explore(
        problem,
        |s| strategy.run(s),
        |s, found| {
            let board = s.board();
            match found {
                None => {
                    let count = s.count();
                    if count != 1 {
                        return Err(StrategyError::Unsound {
                            count,
                            pattern: board.pattern().to_string(),
                        });
                    }
                }
                Some(id) => {
                    let bx = board.get(*id).ok_or(StrategyError::UnknownBox(*id))?;
                    let need = bx.big().len() as u32;
                    let green_possible = problem.p >= need
                        && count_colorings(
                            board.live().filter(|(i, _)| i != id).map(|(_, b)| b.shape()),
                            problem.p - need,
                            problem.mode,
                        ) > 0;
                    if green_possible || !bx.is_monocolored() {
                        return Err(StrategyError::Unsound {
                            count: s.count(),
                            pattern: board.pattern().to_string(),
                        });
                    }
                }
            }
            Ok(())
        },
    )?;
    Ok(StrategyWorstCase {
        strategy: strategy.name().to_string(),
        problem,
        worst: stats.worst,
        leaves: stats.leaves,
    })
}
