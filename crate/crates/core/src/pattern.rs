//! Box shapes, canonical patterns and compatible-coloring counts.
//!
//! A pattern is the full state of the abstract identification game: the
//! multiset of box Types `(small, big)` left after some comparisons. Ball
//! identities are not tracked here.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Coloring counts. Patterns are limited to [`MAX_BALLS`] balls so that
/// `2^boxes` always fits.
pub type Count = u128;

/// Largest ball total a pattern may carry.
pub const MAX_BALLS: u32 = 127;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PatternError {
    #[error("a pattern needs at least one box")]
    Empty,
    #[error("box ({0},{1}) is empty")]
    EmptyBox(u16, u16),
    #[error("box ({0},{1}) has its small side larger than its big side")]
    Unordered(u16, u16),
    #[error("pattern holds {0} balls, more than the supported {MAX_BALLS}")]
    TooManyBalls(u32),
    #[error("shape index {index} out of range for a pattern of {len} boxes")]
    IndexOutOfRange { index: usize, len: usize },
    #[error("cannot merge box {0} with itself")]
    SameIndex(usize),
    #[error("malformed pattern string: {0}")]
    Parse(String),
}

/// Which colorings are admissible: exactly `p` green balls or at most `p`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Mode {
    #[serde(rename = "eq")]
    ExactlyP,
    #[serde(rename = "le")]
    AtMostP,
}

impl Mode {
    pub const ALL: [Mode; 2] = [Mode::ExactlyP, Mode::AtMostP];

    pub fn symbol(self) -> &'static str {
        match self {
            Mode::ExactlyP => "eq",
            Mode::AtMostP => "le",
        }
    }
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.symbol())
    }
}

impl FromStr for Mode {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "eq" | "=" => Ok(Mode::ExactlyP),
            "le" | "<=" => Ok(Mode::AtMostP),
            other => Err(format!("unknown mode '{other}', expected 'eq' or 'le'")),
        }
    }
}

/// Type `(small, big)` of one two-sided box.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BoxShape {
    small: u16,
    big: u16,
}

impl BoxShape {
    pub const SINGLETON: BoxShape = BoxShape { small: 0, big: 1 };

    pub fn new(small: u16, big: u16) -> Result<Self, PatternError> {
        if small > big {
            return Err(PatternError::Unordered(small, big));
        }
        if big == 0 {
            return Err(PatternError::EmptyBox(small, big));
        }
        Ok(BoxShape { small, big })
    }

    /// Builds a shape from two side sizes given in either order.
    pub fn from_sides(a: u16, b: u16) -> Result<Self, PatternError> {
        BoxShape::new(a.min(b), a.max(b))
    }

    pub fn small(self) -> u16 {
        self.small
    }

    pub fn big(self) -> u16 {
        self.big
    }

    pub fn size(self) -> u32 {
        self.small as u32 + self.big as u32
    }

    pub fn is_monocolored(self) -> bool {
        self.small == 0
    }

    pub fn is_balanced(self) -> bool {
        self.small == self.big
    }

    /// Outcome when the big sides hold the same color.
    pub fn aligned(self, other: BoxShape) -> BoxShape {
        BoxShape {
            small: self.small + other.small,
            big: self.big + other.big,
        }
    }

    /// Outcome when the big sides hold different colors.
    pub fn crossed(self, other: BoxShape) -> BoxShape {
        let a = self.small + other.big;
        let b = other.small + self.big;
        BoxShape {
            small: a.min(b),
            big: a.max(b),
        }
    }
}

impl fmt::Display for BoxShape {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.small, self.big)
    }
}

/// Canonical multiset of box shapes, sorted by `(small, big)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Pattern {
    shapes: Vec<BoxShape>,
    total: u32,
}

/// The two children of a merge.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MergeOutcomes {
    pub aligned: Pattern,
    pub crossed: Pattern,
}

impl MergeOutcomes {
    /// Both answers lead to the same pattern.
    pub fn is_single(&self) -> bool {
        self.aligned == self.crossed
    }
}

impl Pattern {
    pub fn canonicalize(shapes: impl IntoIterator<Item = BoxShape>) -> Result<Self, PatternError> {
        let mut shapes: Vec<BoxShape> = shapes.into_iter().collect();
        if shapes.is_empty() {
            return Err(PatternError::Empty);
        }
        let total: u32 = shapes.iter().map(|s| s.size()).sum();
        if total > MAX_BALLS {
            return Err(PatternError::TooManyBalls(total));
        }
        shapes.sort_unstable();
        Ok(Pattern { shapes, total })
    }

    /// Validates raw `(small, big)` pairs and canonicalizes them.
    pub fn from_pairs(pairs: &[(u16, u16)]) -> Result<Self, PatternError> {
        let shapes = pairs
            .iter()
            .map(|&(s, b)| BoxShape::new(s, b))
            .collect::<Result<Vec<_>, _>>()?;
        Pattern::canonicalize(shapes)
    }

    /// `n` untouched balls.
    pub fn initial(n: u32) -> Result<Self, PatternError> {
        if n == 0 {
            return Err(PatternError::Empty);
        }
        if n > MAX_BALLS {
            return Err(PatternError::TooManyBalls(n));
        }
        Ok(Pattern {
            shapes: vec![BoxShape::SINGLETON; n as usize],
            total: n,
        })
    }

    /// Trusted constructor for shapes that are already valid; sorts them.
    pub(crate) fn from_shapes_unchecked(mut shapes: Vec<BoxShape>) -> Self {
        shapes.sort_unstable();
        let total = shapes.iter().map(|s| s.size()).sum();
        Pattern { shapes, total }
    }

    pub fn shapes(&self) -> &[BoxShape] {
        &self.shapes
    }

    pub fn total(&self) -> u32 {
        self.total
    }

    pub fn len(&self) -> usize {
        self.shapes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.shapes.is_empty()
    }

    /// Run-length view: distinct shapes with their multiplicities.
    pub fn runs(&self) -> Vec<(BoxShape, usize)> {
        let mut out: Vec<(BoxShape, usize)> = Vec::new();
        for &s in &self.shapes {
            match out.last_mut() {
                Some((last, n)) if *last == s => *n += 1,
                _ => out.push((s, 1)),
            }
        }
        out
    }

    pub fn merge_outcomes(&self, i: usize, j: usize) -> Result<MergeOutcomes, PatternError> {
        let len = self.shapes.len();
        for index in [i, j] {
            if index >= len {
                return Err(PatternError::IndexOutOfRange { index, len });
            }
        }
        if i == j {
            return Err(PatternError::SameIndex(i));
        }
        let (a, b) = (self.shapes[i], self.shapes[j]);
        Ok(MergeOutcomes {
            aligned: self.replace_pair(i, j, a.aligned(b)),
            crossed: self.replace_pair(i, j, a.crossed(b)),
        })
    }

    pub(crate) fn replace_pair(&self, i: usize, j: usize, merged: BoxShape) -> Pattern {
        let mut shapes = Vec::with_capacity(self.shapes.len() - 1);
        for (k, &s) in self.shapes.iter().enumerate() {
            if k != i && k != j {
                shapes.push(s);
            }
        }
        let pos = shapes.partition_point(|s| *s < merged);
        shapes.insert(pos, merged);
        Pattern {
            shapes,
            total: self.total,
        }
    }

    pub fn count_colorings(&self, p: u32, mode: Mode) -> Count {
        count_colorings(self.shapes.iter().copied(), p, mode)
    }
}

/// Number of ball-level colorings compatible with `shapes`.
///
/// Every box independently chooses which of its two sides is green, so a
/// balanced box `(x,x)` contributes two distinct choices of weight `x`. The
/// count is a subset-sum convolution over green totals truncated at `p`.
pub fn count_colorings(shapes: impl IntoIterator<Item = BoxShape>, p: u32, mode: Mode) -> Count {
    let p = p as usize;
    let mut dp: Vec<Count> = vec![0; p + 1];
    dp[0] = 1;
    let mut reach = 0usize;
    for s in shapes {
        let (lo, hi) = (s.small as usize, s.big as usize);
        let top = (reach + hi).min(p);
        for g in (0..=top).rev() {
            let mut v: Count = 0;
            if g >= lo {
                v = dp[g - lo];
            }
            if g >= hi {
                v = v
                    .checked_add(dp[g - hi])
                    .expect("coloring count exceeds 128 bits");
            }
            dp[g] = v;
        }
        reach = top;
    }
    match mode {
        Mode::ExactlyP => dp[p],
        Mode::AtMostP => dp
            .iter()
            .try_fold(0 as Count, |acc, &v| acc.checked_add(v))
            .expect("coloring count exceeds 128 bits"),
    }
}

/// Multiplicative notation, bicolored boxes first: `"(1,5)^1(0,4)^2"`.
impl fmt::Display for Pattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut runs = self.runs();
        runs.sort_by(|(a, _), (b, _)| b.small.cmp(&a.small).then(a.big.cmp(&b.big)));
        for (s, n) in runs {
            write!(f, "{s}^{n}")?;
        }
        Ok(())
    }
}

impl FromStr for Pattern {
    type Err = PatternError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || PatternError::Parse(s.to_string());
        let mut shapes = Vec::new();
        let mut rest = s.trim();
        while !rest.is_empty() {
            rest = rest.strip_prefix('(').ok_or_else(bad)?;
            let close = rest.find(')').ok_or_else(bad)?;
            let (pair, tail) = rest.split_at(close);
            let (a, b) = pair.split_once(',').ok_or_else(bad)?;
            let a: u16 = a.trim().parse().map_err(|_| bad())?;
            let b: u16 = b.trim().parse().map_err(|_| bad())?;
            let mut tail = &tail[1..];
            let mut times = 1usize;
            if let Some(t) = tail.strip_prefix('^') {
                let end = t.find(|c: char| !c.is_ascii_digit()).unwrap_or(t.len());
                times = t[..end].parse().map_err(|_| bad())?;
                tail = &t[end..];
            }
            let shape = BoxShape::new(a, b)?;
            shapes.extend(std::iter::repeat(shape).take(times));
            rest = tail.trim_start();
        }
        Pattern::canonicalize(shapes)
    }
}

/// Population count of `n`.
pub fn binary_ones(n: u64) -> u32 {
    n.count_ones()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pat(pairs: &[(u16, u16)]) -> Pattern {
        Pattern::from_pairs(pairs).unwrap()
    }

    #[test]
    fn canonical_order() {
        assert_eq!(pat(&[(1, 3), (0, 1), (0, 1)]).shapes(), pat(&[(0, 1), (0, 1), (1, 3)]).shapes());
        assert_eq!(pat(&[(0, 1)]).shapes(), &[BoxShape::SINGLETON]);
        let p = pat(&[(2, 2), (0, 4), (2, 2)]);
        assert_eq!(p.to_string(), "(2,2)^2(0,4)^1");
        assert_eq!(p.shapes()[0], BoxShape::new(0, 4).unwrap());
        assert_eq!(p.total(), 12);
    }

    #[test]
    fn rejects_bad_input() {
        assert_eq!(Pattern::canonicalize(Vec::new()), Err(PatternError::Empty));
        assert_eq!(Pattern::from_pairs(&[(0, 0)]), Err(PatternError::EmptyBox(0, 0)));
        assert_eq!(Pattern::from_pairs(&[(3, 1)]), Err(PatternError::Unordered(3, 1)));
        assert_eq!(Pattern::initial(0), Err(PatternError::Empty));
        assert!(Pattern::initial(128).is_err());
    }

    #[test]
    fn initial_patterns() {
        assert_eq!(Pattern::initial(3).unwrap().to_string(), "(0,1)^3");
        assert_eq!(Pattern::initial(1).unwrap().len(), 1);
        let p = Pattern::initial(17).unwrap();
        assert_eq!((p.len(), p.total()), (17, 17));
    }

    #[test]
    fn merge_formulas() {
        let m = pat(&[(0, 1), (0, 1)]).merge_outcomes(0, 1).unwrap();
        assert_eq!(m.aligned, pat(&[(0, 2)]));
        assert_eq!(m.crossed, pat(&[(1, 1)]));

        let p = pat(&[(1, 3), (0, 2)]);
        let m = p.merge_outcomes(1, 0).unwrap();
        assert_eq!(m.aligned, pat(&[(1, 5)]));
        assert_eq!(m.crossed, pat(&[(3, 3)]));

        let m = pat(&[(1, 1), (1, 1)]).merge_outcomes(0, 1).unwrap();
        assert!(m.is_single());
        assert_eq!(m.aligned, pat(&[(2, 2)]));
    }

    #[test]
    fn merge_errors() {
        let p = pat(&[(0, 1), (0, 1)]);
        assert_eq!(p.merge_outcomes(0, 0), Err(PatternError::SameIndex(0)));
        assert_eq!(
            p.merge_outcomes(0, 2),
            Err(PatternError::IndexOutOfRange { index: 2, len: 2 })
        );
    }

    #[test]
    fn coloring_counts() {
        assert_eq!(Pattern::initial(3).unwrap().count_colorings(1, Mode::ExactlyP), 3);
        assert_eq!(pat(&[(1, 1)]).count_colorings(1, Mode::ExactlyP), 2);
        assert_eq!(pat(&[(1, 2), (0, 1), (0, 1)]).count_colorings(2, Mode::ExactlyP), 3);
        assert_eq!(Pattern::initial(4).unwrap().count_colorings(1, Mode::AtMostP), 5);
        assert_eq!(Pattern::initial(20).unwrap().count_colorings(7, Mode::ExactlyP), 77520);
        // property used in the p=3 lower-bound argument: (1,1)(2,2)(0,4)^k has 4 colorings
        assert_eq!(pat(&[(1, 1), (2, 2), (0, 4), (0, 4)]).count_colorings(3, Mode::AtMostP), 4);
    }

    #[test]
    fn large_counts_do_not_overflow() {
        let p = Pattern::initial(MAX_BALLS).unwrap();
        assert_eq!(p.count_colorings(63, Mode::AtMostP), 1u128 << 126);
    }

    #[test]
    fn popcount() {
        assert_eq!(binary_ones(1), 1);
        assert_eq!(binary_ones(5), 2);
        assert_eq!(binary_ones(16), 1);
    }

    #[test]
    fn notation_round_trip() {
        let p: Pattern = "(1,5)^1(0,4)^2".parse().unwrap();
        assert_eq!(p.to_string(), "(1,5)^1(0,4)^2");
        assert_eq!(p.total(), 14);
        let q: Pattern = "(0,1)(0,1)(2,3)".parse().unwrap();
        assert_eq!(q.to_string(), "(2,3)^1(0,1)^2");
        assert!("(1,0)".parse::<Pattern>().is_err());
        assert!("(1,2".parse::<Pattern>().is_err());
    }
}
