//! Exact game values by memoized branch-and-bound minimax over patterns.
//!
//! Maker picks two boxes, Breaker picks which merge outcome happens (only
//! outcomes with a positive coloring count). The value of a pattern is 0
//! once a single coloring remains, and otherwise the min over moves of the
//! max over outcomes of `1 + value(outcome)`.
//!
//! Before lookup every pattern is *reduced*: boxes whose big side cannot be
//! green (it alone would exceed the green budget left after the other
//! determined boxes) are fully known, and all of them are folded into one
//! reference box `(g, p+1)` carrying their `g` green balls. The reduced
//! pattern has the same coloring count and the same value.

pub mod memo;

use std::sync::atomic::{AtomicBool, AtomicU32, AtomicU64, Ordering};
use std::time::{Duration, Instant};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::bounds::{ceil_log2, BoundsReport, Problem, ProblemError};
use crate::pattern::{count_colorings, BoxShape, Count, Mode, Pattern};

pub use memo::{MemoError, MemoStore};
pub use crate::strategies::explore::worst_case_of_strategy;

#[derive(Debug, Error)]
pub enum SolveError {
    #[error(transparent)]
    Problem(#[from] ProblemError),
    #[error(transparent)]
    Memo(#[from] MemoError),
    #[error("no coloring is compatible with the initial pattern")]
    Infeasible,
    #[error("pattern {0} admits no compatible coloring")]
    DeadPattern(Pattern),
    #[error(transparent)]
    Pattern(#[from] crate::pattern::PatternError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SearchLimits {
    pub node_cap: Option<u64>,
    pub time_cap: Option<Duration>,
    pub thread_count: usize,
}

impl Default for SearchLimits {
    fn default() -> Self {
        SearchLimits {
            node_cap: None,
            time_cap: None,
            thread_count: 1,
        }
    }
}

impl SearchLimits {
    pub fn threads(thread_count: usize) -> Self {
        SearchLimits {
            thread_count: thread_count.max(1),
            ..Default::default()
        }
    }
}

/// Search switches that do not change the computed values.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SolverOptions {
    /// Drop moves with an impossible outcome (Breaker's answer is forced).
    pub skip_forced_moves: bool,
    /// Fold determined boxes into one reference box before lookup.
    pub reduce_patterns: bool,
}

impl Default for SolverOptions {
    fn default() -> Self {
        SolverOptions {
            skip_forced_moves: false,
            reduce_patterns: true,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct BoundCheck {
    pub bounds: BoundsReport,
    pub lower_ok: bool,
    pub upper_ok: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SolveReport {
    pub problem: Problem,
    /// Exact value, or the best proven upper bound when `exact` is false.
    pub q: u32,
    pub exact: bool,
    pub nodes: u64,
    pub memo_hits: u64,
    pub prunes: u64,
    pub elapsed: Duration,
    pub bound_check: BoundCheck,
}

impl SolveReport {
    /// The exact value falls outside the proven bounds.
    pub fn contradicts_bounds(&self) -> bool {
        self.exact && !(self.bound_check.lower_ok && self.bound_check.upper_ok)
    }
}

pub fn solve_exact(
    problem: Problem,
    limits: SearchLimits,
    memo: &MemoStore,
) -> Result<SolveReport, SolveError> {
    solve_with(problem, limits, SolverOptions::default(), memo)
}

pub fn solve_with(
    problem: Problem,
    limits: SearchLimits,
    options: SolverOptions,
    memo: &MemoStore,
) -> Result<SolveReport, SolveError> {
    let problem = Problem::new(problem.n, problem.p, problem.mode)?;
    memo.bind(problem.p, problem.mode)?;
    let root = Pattern::initial(problem.n)?;
    if root.count_colorings(problem.p, problem.mode) == 0 {
        return Err(SolveError::Infeasible);
    }
    let bounds = problem.bounds();
    let search = Search {
        p: problem.p,
        mode: problem.mode,
        memo,
        options,
        limits,
        started: Instant::now(),
        nodes: AtomicU64::new(0),
        hits: AtomicU64::new(0),
        prunes: AtomicU64::new(0),
        aborted: AtomicBool::new(false),
    };
    let root = search.reduce(&root).expect("initial pattern is feasible");
    let seeded_cap = bounds.upper.min(problem.n - 1) + 1;
    let outcome = search.root(&root, seeded_cap).and_then(|v| {
        if v < seeded_cap {
            Ok(v)
        } else {
            // the seeded bound was wrong; resolve without it so the report can flag it
            search.root(&root, problem.n)
        }
    });
    let (q, exact) = match outcome {
        Ok(v) => (v, true),
        Err(Aborted) => (bounds.upper, false),
    };
    Ok(SolveReport {
        problem,
        q,
        exact,
        nodes: search.nodes.load(Ordering::Relaxed),
        memo_hits: search.hits.load(Ordering::Relaxed),
        prunes: search.prunes.load(Ordering::Relaxed),
        elapsed: search.started.elapsed(),
        bound_check: BoundCheck {
            bounds,
            lower_ok: !exact || bounds.lower <= q,
            upper_ok: !exact || q <= bounds.upper,
        },
    })
}

/// Exact value of an arbitrary pattern under `(p, mode)`.
pub fn pattern_value(pattern: &Pattern, p: u32, mode: Mode, memo: &MemoStore) -> Result<u32, SolveError> {
    memo.bind(p, mode)?;
    let search = Search {
        p,
        mode,
        memo,
        options: SolverOptions::default(),
        limits: SearchLimits::default(),
        started: Instant::now(),
        nodes: AtomicU64::new(0),
        hits: AtomicU64::new(0),
        prunes: AtomicU64::new(0),
        aborted: AtomicBool::new(false),
    };
    let reduced = search
        .reduce(pattern)
        .ok_or_else(|| SolveError::DeadPattern(pattern.clone()))?;
    if reduced.count_colorings(p, mode) == 0 {
        return Err(SolveError::DeadPattern(pattern.clone()));
    }
    search
        .root(&reduced, pattern.len() as u32)
        .map_err(|_| unreachable!("no caps set"))
}

/// Breaker's majority rule: the outcome with more colorings, aligned on ties.
pub fn breaker_majority_outcome(
    pattern: &Pattern,
    i: usize,
    j: usize,
    p: u32,
    mode: Mode,
) -> Result<Pattern, SolveError> {
    if pattern.count_colorings(p, mode) == 0 {
        return Err(SolveError::DeadPattern(pattern.clone()));
    }
    let m = pattern.merge_outcomes(i, j)?;
    let a = m.aligned.count_colorings(p, mode);
    let c = m.crossed.count_colorings(p, mode);
    Ok(if a >= c { m.aligned } else { m.crossed })
}

/// Folds determined boxes into a single `(g, p+1)` reference box.
///
/// Returns `None` when the determined green balls already exceed `p`.
pub fn reduce_pattern(pattern: &Pattern, p: u32) -> Option<Pattern> {
    let mut free: Vec<BoxShape> = pattern.shapes().to_vec();
    let mut green = 0u32;
    let mut has_reference = false;
    loop {
        let budget = p - green;
        let before = free.len();
        free.retain(|s| {
            if s.big() as u32 > budget {
                green += s.small() as u32;
                has_reference = true;
                false
            } else {
                true
            }
        });
        if green > p {
            return None;
        }
        if free.len() == before {
            break;
        }
    }
    if has_reference {
        free.push(BoxShape::new(green as u16, p as u16 + 1).expect("g <= p"));
    }
    Some(Pattern::from_shapes_unchecked(free))
}

#[derive(Debug, Clone, Copy)]
struct Aborted;

struct Child {
    pattern: Pattern,
    count: Count,
}

struct Move {
    children: Vec<Child>,
    worst: Count,
}

struct Search<'a> {
    p: u32,
    mode: Mode,
    memo: &'a MemoStore,
    options: SolverOptions,
    limits: SearchLimits,
    started: Instant,
    nodes: AtomicU64,
    hits: AtomicU64,
    prunes: AtomicU64,
    aborted: AtomicBool,
}

impl Search<'_> {
    fn reduce(&self, pattern: &Pattern) -> Option<Pattern> {
        if self.options.reduce_patterns {
            reduce_pattern(pattern, self.p)
        } else {
            Some(pattern.clone())
        }
    }

    fn count(&self, pattern: &Pattern) -> Count {
        count_colorings(pattern.shapes().iter().copied(), self.p, self.mode)
    }

    fn tick(&self) -> Result<(), Aborted> {
        let n = self.nodes.fetch_add(1, Ordering::Relaxed) + 1;
        if self.aborted.load(Ordering::Relaxed) {
            return Err(Aborted);
        }
        let over_nodes = self.limits.node_cap.is_some_and(|cap| n > cap);
        let over_time = n % 1024 == 0
            && self
                .limits
                .time_cap
                .is_some_and(|cap| self.started.elapsed() > cap);
        if over_nodes || over_time {
            self.aborted.store(true, Ordering::Relaxed);
            return Err(Aborted);
        }
        Ok(())
    }

    /// Moves in search order: smallest majority-Breaker count first.
    fn moves(&self, pattern: &Pattern) -> Vec<Move> {
        let shapes = pattern.shapes();
        let mut starts = Vec::new();
        for (k, s) in shapes.iter().enumerate() {
            if k == 0 || shapes[k - 1] != *s {
                starts.push(k);
            }
        }
        let mut moves = Vec::new();
        for (a, &i) in starts.iter().enumerate() {
            if i + 1 < shapes.len() && shapes[i + 1] == shapes[i] {
                moves.extend(self.make_move(pattern, i, i + 1));
            }
            for &j in &starts[a + 1..] {
                moves.extend(self.make_move(pattern, i, j));
            }
        }
        moves.sort_by_key(|m| m.worst);
        moves
    }

    fn make_move(&self, pattern: &Pattern, i: usize, j: usize) -> Option<Move> {
        let (a, b) = (pattern.shapes()[i], pattern.shapes()[j]);
        let mut children: Vec<Child> = Vec::with_capacity(2);
        let mut impossible = false;
        for merged in [a.aligned(b), a.crossed(b)] {
            let Some(child) = self.reduce(&pattern.replace_pair(i, j, merged)) else {
                impossible = true;
                continue;
            };
            let count = self.count(&child);
            if count == 0 {
                impossible = true;
                continue;
            }
            if children.iter().any(|c| c.pattern == child) {
                continue;
            }
            children.push(Child { pattern: child, count });
        }
        if children.is_empty() || (impossible && self.options.skip_forced_moves) {
            return None;
        }
        children.sort_by(|x, y| y.count.cmp(&x.count));
        let worst = children[0].count;
        Some(Move { children, worst })
    }

    /// Value of one move if it is below `bound`, else a lower bound `>= bound`.
    fn eval_move(&self, mv: &Move, bound: u32) -> Result<u32, Aborted> {
        let child_cap = bound.saturating_sub(1);
        let mut worst = 0;
        for child in &mv.children {
            let v = self.value(&child.pattern, child.count, child_cap)?;
            if v >= child_cap {
                return Ok(v + 1);
            }
            worst = worst.max(v);
        }
        Ok(worst + 1)
    }

    fn root(&self, pattern: &Pattern, cap: u32) -> Result<u32, Aborted> {
        let count = self.count(pattern);
        if self.limits.thread_count <= 1 {
            return self.value(pattern, count, cap);
        }
        if count == 1 {
            return Ok(0);
        }
        if let Some(v) = self.memo.get(pattern) {
            self.hits.fetch_add(1, Ordering::Relaxed);
            return Ok(v);
        }
        let lb = ceil_log2(count);
        let limit = cap.min(pattern.len() as u32);
        let best = AtomicU32::new(limit);
        let fail = AtomicU32::new(u32::MAX);
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(self.limits.thread_count)
            .build()
            .expect("thread pool");
        let moves = self.moves(pattern);
        pool.install(|| {
            moves.par_iter().try_for_each(|mv| -> Result<(), Aborted> {
                let bound = best.load(Ordering::SeqCst);
                if bound <= lb {
                    return Ok(());
                }
                let v = self.eval_move(mv, bound)?;
                if v < bound {
                    best.fetch_min(v, Ordering::SeqCst);
                } else {
                    fail.fetch_min(v, Ordering::SeqCst);
                }
                Ok(())
            })
        })?;
        let best = best.load(Ordering::SeqCst);
        if best < limit {
            self.memo.insert(pattern.clone(), best).expect("memo values are exact");
            Ok(best)
        } else {
            Ok(fail.load(Ordering::SeqCst).max(lb))
        }
    }

    /// Exact value when it is below `cap`; otherwise some lower bound `>= cap`.
    fn value(&self, pattern: &Pattern, count: Count, cap: u32) -> Result<u32, Aborted> {
        self.tick()?;
        if count == 1 {
            return Ok(0);
        }
        if let Some(v) = self.memo.get(pattern) {
            self.hits.fetch_add(1, Ordering::Relaxed);
            return Ok(v);
        }
        let lb = ceil_log2(count).max(self.memo.lower_bound(pattern)).max(1);
        if lb >= cap {
            self.prunes.fetch_add(1, Ordering::Relaxed);
            return Ok(lb);
        }
        // merging everything into one box always settles the pattern
        let chain = pattern.len() as u32 - 1;
        let limit = cap.min(chain + 1);
        let mut best = limit;
        let mut fail = u32::MAX;
        for mv in self.moves(pattern) {
            if best <= lb {
                break;
            }
            let v = self.eval_move(&mv, best)?;
            if v < best {
                best = v;
            } else {
                fail = fail.min(v);
            }
        }
        if best < limit {
            self.memo.insert(pattern.clone(), best).expect("memo values are exact");
            Ok(best)
        } else {
            debug_assert_eq!(limit, cap, "chain bound must be reachable");
            let bound = fail.max(lb);
            self.memo.raise_lower_bound(pattern, bound);
            Ok(bound)
        }
    }
}
