//! Problem instances and the closed-form bounds on their values.

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::pattern::{Count, Mode, MAX_BALLS};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ProblemError {
    #[error("need 2p < n, got n={n}, p={p}")]
    NotMajority { n: u32, p: u32 },
    #[error("n={0} is outside 1..={MAX_BALLS}")]
    BallCount(u32),
}

/// An identification instance `(N, p, mode)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Problem {
    pub n: u32,
    pub p: u32,
    pub mode: Mode,
}

impl Problem {
    pub fn new(n: u32, p: u32, mode: Mode) -> Result<Self, ProblemError> {
        if n == 0 || n > MAX_BALLS {
            return Err(ProblemError::BallCount(n));
        }
        if 2 * p >= n {
            return Err(ProblemError::NotMajority { n, p });
        }
        Ok(Problem { n, p, mode })
    }

    pub fn eq(n: u32, p: u32) -> Result<Self, ProblemError> {
        Problem::new(n, p, Mode::ExactlyP)
    }

    pub fn le(n: u32, p: u32) -> Result<Self, ProblemError> {
        Problem::new(n, p, Mode::AtMostP)
    }

    pub fn bounds(&self) -> BoundsReport {
        match self.mode {
            Mode::AtMostP => bounds_le(self.n, self.p),
            Mode::ExactlyP => bounds_eq(self.n, self.p),
        }
        .expect("problem invariants already checked")
    }
}

impl fmt::Display for Problem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let op = match self.mode {
            Mode::ExactlyP => "=",
            Mode::AtMostP => "<=",
        };
        write!(f, "Q({},{},{})", self.n, self.p, op)
    }
}

/// Lower and upper bounds on an instance value, plus the `Q+`/`Q-` pair.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct BoundsReport {
    pub lower: u32,
    pub upper: u32,
    pub q_plus: u32,
    pub q_minus: i64,
}

impl BoundsReport {
    pub fn gap(&self) -> u32 {
        self.upper - self.lower
    }

    pub fn contains(&self, q: u32) -> bool {
        self.lower <= q && q <= self.upper
    }
}

/// `N + 1 - floor((N+1)/(p+1))`, the value reached by the pivot recursion.
pub fn q_plus_le(n: u32, p: u32) -> u32 {
    n + 1 - (n + 1) / (p + 1)
}

/// Whether the residue of `n` modulo `p+1` forces the value to `Q+`.
pub fn residue_forces_upper(n: u32, p: u32) -> bool {
    let r = n % (p + 1);
    r == p || r <= p / 2
}

pub fn bounds_le(n: u32, p: u32) -> Result<BoundsReport, ProblemError> {
    Problem::new(n, p, Mode::AtMostP)?;
    let q_plus = q_plus_le(n, p);
    let mut lower = n - n / (p + 1);
    if residue_forces_upper(n, p) {
        lower = q_plus;
    }
    Ok(BoundsReport {
        lower,
        upper: q_plus,
        q_plus,
        q_minus: q_plus as i64 - 1,
    })
}

/// Largest `m` with `2^m <= min(n - 2p, 2p)`; the optimal podium height.
pub fn podium_height(n: u32, p: u32) -> u32 {
    let cap = (n - 2 * p).min(2 * p).max(1);
    31 - cap.leading_zeros()
}

/// Upper bound for the exactly-`p` problem obtained with podium height `nu`.
pub fn podium_bound(n: u32, p: u32, nu: u32) -> u32 {
    n + 1 - nu - (n + 2 - (1 << nu)) / (p + 1)
}

pub fn bounds_eq(n: u32, p: u32) -> Result<BoundsReport, ProblemError> {
    Problem::new(n, p, Mode::ExactlyP)?;
    if p == 0 {
        return Ok(BoundsReport {
            lower: 0,
            upper: 0,
            q_plus: 0,
            q_minus: -1,
        });
    }
    let q_plus = podium_bound(n, p, podium_height(n, p));
    Ok(BoundsReport {
        lower: lower_eq(n, p),
        upper: q_plus,
        q_plus,
        q_minus: q_plus as i64 - 1,
    })
}

/// Information bound combined with the two-ball peeling recursion.
fn lower_eq(n: u32, p: u32) -> u32 {
    if p == 0 {
        return 0;
    }
    ceil_log2(binomial(n, p)).max(2 + lower_eq(n - 2, p - 1))
}

pub fn ceil_log2(x: Count) -> u32 {
    if x <= 1 {
        0
    } else {
        128 - (x - 1).leading_zeros()
    }
}

pub fn binomial(n: u32, k: u32) -> Count {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: Count = 1;
    for i in 0..k {
        // exact at every step: acc * (n - i) is divisible by (i + 1)
        acc = acc * (n - i) as Count / (i + 1) as Count;
    }
    acc
}
