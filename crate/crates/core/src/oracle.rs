//! Brute-force game values over explicit sets of colorings.
//!
//! A state is the set of green-ball masks still consistent with every
//! answer so far. Comparing balls `a` and `b` splits it into the masks that
//! agree on the two bits and those that do not. Nothing here knows about
//! boxes or patterns.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::bounds::{Problem, ProblemError};
use crate::pattern::Mode;
use crate::solver::{solve_exact, MemoStore, SearchLimits, SolveError};

/// Default largest instance the oracle accepts.
pub const DEFAULT_CAP: u32 = 8;
/// Hard limit: masks are indexed in a `2^n` bitset.
pub const HARD_CAP: u32 = 10;

#[derive(Debug, Error)]
pub enum OracleError {
    #[error("oracle limited to n <= {cap}, got {n}")]
    TooLarge { n: u32, cap: u32 },
    #[error(transparent)]
    Problem(#[from] ProblemError),
    #[error(transparent)]
    Solve(#[from] SolveError),
}

/// Colorings still possible, as sorted green masks plus a membership bitset.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ColoringSet {
    n: u32,
    masks: Vec<u16>,
}

impl ColoringSet {
    pub fn initial(problem: &Problem) -> Self {
        let masks = (0u32..1 << problem.n)
            .filter(|m| match problem.mode {
                Mode::ExactlyP => m.count_ones() == problem.p,
                Mode::AtMostP => m.count_ones() <= problem.p,
            })
            .map(|m| m as u16)
            .collect();
        ColoringSet { n: problem.n, masks }
    }

    pub fn len(&self) -> usize {
        self.masks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.masks.is_empty()
    }

    pub fn masks(&self) -> &[u16] {
        &self.masks
    }

    /// Restricts to colorings where balls `a` and `b` agree (`same`) or not.
    pub fn answer(&self, a: u32, b: u32, same: bool) -> ColoringSet {
        let masks = self
            .masks
            .iter()
            .copied()
            .filter(|m| ((m >> a) & 1 == (m >> b) & 1) == same)
            .collect();
        ColoringSet { n: self.n, masks }
    }

    fn contains(&self, mask: u16) -> bool {
        self.masks.binary_search(&mask).is_ok()
    }

    /// Swapping balls `a` and `b` maps the set onto itself.
    fn swap_invariant(&self, a: u32, b: u32) -> bool {
        self.masks.iter().all(|&m| {
            let (x, y) = ((m >> a) & 1, (m >> b) & 1);
            x == y || self.contains(m ^ (1 << a) ^ (1 << b))
        })
    }

    /// Classes of mutually interchangeable balls.
    fn ball_classes(&self) -> Vec<u32> {
        let mut class: Vec<u32> = (0..self.n).collect();
        for a in 0..self.n {
            if class[a as usize] != a {
                continue;
            }
            for b in a + 1..self.n {
                if class[b as usize] == b && self.swap_invariant(a, b) {
                    class[b as usize] = a;
                }
            }
        }
        class
    }
}

struct BruteForce {
    memo: HashMap<Vec<u16>, u32>,
}

impl BruteForce {
    fn value(&mut self, set: &ColoringSet) -> u32 {
        if set.len() <= 1 {
            return 0;
        }
        if let Some(&v) = self.memo.get(&set.masks) {
            return v;
        }
        let class = set.ball_classes();
        let mut seen = Vec::new();
        let mut best = u32::MAX;
        for a in 0..set.n {
            for b in a + 1..set.n {
                let (ca, cb) = (class[a as usize], class[b as usize]);
                let key = (ca.min(cb), ca.max(cb));
                if seen.contains(&key) {
                    continue;
                }
                seen.push(key);
                let same = set.answer(a, b, true);
                if same.is_empty() || same.len() == set.len() {
                    // the answer is already known
                    continue;
                }
                let diff = set.answer(a, b, false);
                let v = 1 + self.value(&same).max(self.value(&diff));
                best = best.min(v);
            }
        }
        self.memo.insert(set.masks.clone(), best);
        best
    }
}

pub fn solve_by_colorings(problem: Problem) -> Result<u32, OracleError> {
    solve_by_colorings_capped(problem, DEFAULT_CAP)
}

pub fn solve_by_colorings_capped(problem: Problem, cap: u32) -> Result<u32, OracleError> {
    let cap = cap.min(HARD_CAP);
    if problem.n > cap {
        return Err(OracleError::TooLarge { n: problem.n, cap });
    }
    let set = ColoringSet::initial(&problem);
    let mut bf = BruteForce { memo: HashMap::new() };
    Ok(bf.value(&set))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Mismatch {
    pub problem: Problem,
    pub oracle: u32,
    pub solver: u32,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct CrossCheckReport {
    pub instances: usize,
    pub mismatches: Vec<Mismatch>,
}

impl CrossCheckReport {
    pub fn all_agree(&self) -> bool {
        self.mismatches.is_empty()
    }
}

/// Compares the oracle with the pattern solver on every instance up to `max_n`.
pub fn cross_check(max_n: u32) -> Result<CrossCheckReport, OracleError> {
    if max_n > HARD_CAP {
        return Err(OracleError::TooLarge { n: max_n, cap: HARD_CAP });
    }
    let mut report = CrossCheckReport::default();
    for mode in Mode::ALL {
        for n in 1..=max_n {
            for p in 0..n.div_ceil(2) {
                let problem = Problem::new(n, p, mode)?;
                let oracle = solve_by_colorings_capped(problem, max_n)?;
                let memo = MemoStore::new(p, mode);
                let solver = solve_exact(problem, SearchLimits::default(), &memo)?.q;
                report.instances += 1;
                if oracle != solver {
                    report.mismatches.push(Mismatch { problem, oracle, solver });
                }
            }
        }
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn known_values() {
        assert_eq!(solve_by_colorings(Problem::eq(3, 1).unwrap()).unwrap(), 2);
        assert_eq!(solve_by_colorings(Problem::eq(4, 1).unwrap()).unwrap(), 2);
        assert_eq!(solve_by_colorings(Problem::le(5, 2).unwrap()).unwrap(), 4);
        assert_eq!(solve_by_colorings(Problem::le(5, 0).unwrap()).unwrap(), 0);
        assert_eq!(solve_by_colorings(Problem::eq(5, 0).unwrap()).unwrap(), 0);
    }

    #[test]
    fn cap_enforced() {
        assert!(matches!(
            solve_by_colorings(Problem::eq(9, 1).unwrap()),
            Err(OracleError::TooLarge { n: 9, cap: 8 })
        ));
        assert!(solve_by_colorings_capped(Problem::eq(9, 1).unwrap(), 9).is_ok());
        assert!(cross_check(11).is_err());
    }

    #[test]
    fn small_cross_check() {
        let r = cross_check(3).unwrap();
        assert!(r.all_agree(), "{:?}", r.mismatches);
        assert_eq!(r.instances, 2 * (1 + 1 + 2));
    }

    #[test]
    fn answers_partition_the_set() {
        let set = ColoringSet::initial(&Problem::le(6, 2).unwrap());
        let same = set.answer(0, 3, true);
        let diff = set.answer(0, 3, false);
        assert_eq!(same.len() + diff.len(), set.len());
        assert!(set.swap_invariant(1, 4));
        assert!(!same.swap_invariant(0, 1));
    }
}
