//! Unicity sets, the exact rational LP over tower weights, and the towers
//! coefficients `C^T(p)`.
//!
//! Everything here is exact; values are [`BigRational`].

mod lp;

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};
use thiserror::Error;

pub use lp::{solve_lp_simplex, solve_lp_vertices, LpSolution};

/// Largest `p` accepted by [`enumerate_unicity_sets`] unless overridden.
pub const ENUMERATION_CAP: u32 = 23;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TowersError {
    #[error("invalid set {elements:?} for p={p}: {reason}")]
    InvalidSet { elements: Vec<u32>, p: u32, reason: String },
    #[error("{l} has two representations over {elements:?}")]
    NotUnicity { elements: Vec<u32>, l: u32 },
    #[error("precondition failed: {0}")]
    Precondition(String),
    #[error("enumeration for p={p} exceeds the cap {cap}")]
    CapExceeded { p: u32, cap: u32 },
    #[error("linear program: {0}")]
    Lp(String),
    #[error("no coefficient for q={0}")]
    MissingCoefficient(u32),
    #[error("bad record: {0}")]
    Parse(String),
}

pub fn ratio(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

/// Checks that every `l <= p` has at most one representation as a
/// non-negative combination of `elements`. Returns the smallest
/// counterexample on failure.
pub fn is_unicity_set(elements: &[u32], p: u32) -> Result<(), u32> {
    let mut ways = vec![0u8; p as usize + 1];
    ways[0] = 1;
    for &u in elements {
        for l in u as usize..=p as usize {
            ways[l] = (ways[l] + ways[l - u as usize]).min(2);
        }
    }
    match ways.iter().position(|&w| w > 1) {
        Some(l) => Err(l as u32),
        None => Ok(()),
    }
}

/// A unicity set together with its representable values and their tuples.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UnicitySet {
    p: u32,
    elements: Vec<u32>,
    reps: BTreeMap<u32, Vec<u32>>,
}

impl UnicitySet {
    pub fn new(elements: Vec<u32>, p: u32) -> Result<Self, TowersError> {
        let invalid = |reason: &str| TowersError::InvalidSet {
            elements: elements.clone(),
            p,
            reason: reason.to_string(),
        };
        if elements.is_empty() {
            return Err(invalid("empty"));
        }
        if elements.windows(2).any(|w| w[0] >= w[1]) {
            return Err(invalid("not strictly increasing"));
        }
        if elements[0] < 2 || *elements.last().unwrap() > p {
            return Err(invalid("elements must lie in 2..=p"));
        }
        is_unicity_set(&elements, p).map_err(|l| TowersError::NotUnicity {
            elements: elements.clone(),
            l,
        })?;
        let mut reps = BTreeMap::new();
        let mut tuple = vec![0u32; elements.len()];
        collect_reps(&elements, p, 0, 0, &mut tuple, &mut reps);
        Ok(UnicitySet { p, elements, reps })
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn elements(&self) -> &[u32] {
        &self.elements
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    /// Representable values `L_E`.
    pub fn l_set(&self) -> Vec<u32> {
        self.reps.keys().copied().collect()
    }

    /// The unique tuple `(q_1..q_k)` for `l`, if representable.
    pub fn rep(&self, l: u32) -> Option<&[u32]> {
        self.reps.get(&l).map(|v| v.as_slice())
    }
}

fn collect_reps(
    elements: &[u32],
    p: u32,
    idx: usize,
    sum: u32,
    tuple: &mut Vec<u32>,
    reps: &mut BTreeMap<u32, Vec<u32>>,
) {
    if idx == elements.len() {
        reps.insert(sum, tuple.clone());
        return;
    }
    let mut q = 0;
    while sum + q * elements[idx] <= p {
        tuple[idx] = q;
        collect_reps(elements, p, idx + 1, sum + q * elements[idx], tuple, reps);
        q += 1;
    }
    tuple[idx] = 0;
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EnumerationOptions {
    pub maximal_only: bool,
    pub cap: u32,
}

impl Default for EnumerationOptions {
    fn default() -> Self {
        EnumerationOptions {
            maximal_only: true,
            cap: ENUMERATION_CAP,
        }
    }
}

/// Maximal unicity subsets of `{2..p}`, in lexicographic order.
pub fn enumerate_unicity_sets(p: u32) -> Result<Vec<UnicitySet>, TowersError> {
    enumerate_unicity_sets_with(p, EnumerationOptions::default())
}

pub fn enumerate_unicity_sets_with(p: u32, opts: EnumerationOptions) -> Result<Vec<UnicitySet>, TowersError> {
    if p < 2 {
        return Err(TowersError::Precondition(format!("need p >= 2, got {p}")));
    }
    if p > opts.cap {
        return Err(TowersError::CapExceeded { p, cap: opts.cap });
    }
    let mut found = Vec::new();
    let mut cur = Vec::new();
    extend_sets(p, 2, &mut cur, &mut found);
    if opts.maximal_only {
        found.retain(|set: &Vec<u32>| {
            (2..=p).filter(|v| !set.contains(v)).all(|v| {
                let mut bigger = set.clone();
                bigger.push(v);
                bigger.sort_unstable();
                is_unicity_set(&bigger, p).is_err()
            })
        });
    }
    found.into_iter().map(|e| UnicitySet::new(e, p)).collect()
}

// Unicity is inherited by subsets, so extending only passing sets is complete.
fn extend_sets(p: u32, from: u32, cur: &mut Vec<u32>, found: &mut Vec<Vec<u32>>) {
    for v in from..=p {
        cur.push(v);
        if is_unicity_set(cur, p).is_ok() {
            found.push(cur.clone());
            extend_sets(p, v + 1, cur, found);
        }
        cur.pop();
    }
}

/// The set `{floor(p/q) + q^(i-1) : i = 1..q-1}`.
pub fn power_offset_set(q: u32, p: u32) -> Result<UnicitySet, TowersError> {
    if q < 2 {
        return Err(TowersError::Precondition(format!("need q >= 2, got {q}")));
    }
    let qq = (q as u64).checked_pow(q).unwrap_or(u64::MAX);
    if (p as u64) < qq {
        return Err(TowersError::Precondition(format!("need p >= q^q = {qq}, got {p}")));
    }
    let k = p / q;
    let elements = (1..q).map(|i| k + q.pow(i - 1)).collect();
    UnicitySet::new(elements, p)
}

/// Constraint rows: for each `l` in `L_E`, the coefficients `C(q_i(l))/u_i`.
pub fn lp_rows(set: &UnicitySet, coefficients: &BTreeMap<u32, BigRational>) -> Result<Vec<Vec<BigRational>>, TowersError> {
    set.reps
        .values()
        .map(|tuple| {
            tuple
                .iter()
                .zip(&set.elements)
                .map(|(&q, &u)| {
                    let c = coefficients.get(&q).ok_or(TowersError::MissingCoefficient(q))?;
                    Ok(c / BigRational::from_integer(BigInt::from(u)))
                })
                .collect()
        })
        .collect()
}

/// Maximizes `y` subject to `sum x = 1`, `x >= 0` and `y <= row . x` for
/// every row of [`lp_rows`].
pub fn solve_lp_exact(set: &UnicitySet, coefficients: &BTreeMap<u32, BigRational>) -> Result<LpSolution, TowersError> {
    let rows = lp_rows(set, coefficients)?;
    if set.len() <= 4 {
        solve_lp_vertices(&rows)
    } else {
        solve_lp_simplex(&rows)
    }
}

/// Base values for `p <= 2`.
pub fn base_coefficient(p: u32) -> Option<BigRational> {
    match p {
        0 => Some(ratio(1, 1)),
        1 => Some(ratio(1, 2)),
        2 => Some(ratio(1, 3)),
        _ => None,
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TowersCoefficient {
    pub p: u32,
    pub value: BigRational,
    /// `None` for the base cases.
    pub best_e: Option<UnicitySet>,
    pub x: Vec<BigRational>,
    pub heights: Vec<u64>,
}

impl TowersCoefficient {
    /// Whether `x_r = h_r u_r / sum h_i u_i` for every `r`.
    pub fn heights_reproduce_x(&self) -> bool {
        let Some(set) = &self.best_e else {
            return self.heights.is_empty();
        };
        let weights: Vec<BigRational> = self
            .heights
            .iter()
            .zip(set.elements())
            .map(|(&h, &u)| BigRational::from_integer(BigInt::from(h * u as u64)))
            .collect();
        let total: BigRational = weights.iter().cloned().sum();
        !total.is_zero() && weights.iter().zip(&self.x).all(|(w, x)| &(w / &total) == x)
    }
}

/// Smallest positive integers proportional to `x_r / u_r`.
pub fn integer_heights(x: &[BigRational], elements: &[u32]) -> Vec<u64> {
    let scaled: Vec<BigRational> = x
        .iter()
        .zip(elements)
        .map(|(x, &u)| x / BigRational::from_integer(BigInt::from(u)))
        .collect();
    let lcm = scaled
        .iter()
        .fold(BigInt::one(), |acc, r| acc.lcm(r.denom()));
    let ints: Vec<BigInt> = scaled.iter().map(|r| r.numer() * (&lcm / r.denom())).collect();
    let g = ints.iter().fold(BigInt::zero(), |acc, v| acc.gcd(v));
    ints.iter()
        .map(|v| {
            let h = if g.is_zero() { BigInt::zero() } else { v / &g };
            u64::try_from(h).expect("height fits in u64")
        })
        .collect()
}

/// `C^T(p)`, maximized over the maximal unicity sets of `{2..p}`.
pub fn compute_ct(p: u32) -> Result<TowersCoefficient, TowersError> {
    let mut table = Vec::new();
    compute_ct_table(p, &mut table)?;
    Ok(table.pop().expect("table holds p"))
}

/// Fills `table[q]` for every `q <= p`.
pub fn compute_ct_table(p: u32, table: &mut Vec<TowersCoefficient>) -> Result<(), TowersError> {
    if p > ENUMERATION_CAP {
        return Err(TowersError::CapExceeded { p, cap: ENUMERATION_CAP });
    }
    while table.len() as u32 <= p {
        let q = table.len() as u32;
        if let Some(value) = base_coefficient(q) {
            table.push(TowersCoefficient {
                p: q,
                value,
                best_e: None,
                x: Vec::new(),
                heights: Vec::new(),
            });
            continue;
        }
        let coefficients: BTreeMap<u32, BigRational> =
            table.iter().map(|c| (c.p, c.value.clone())).collect();
        let mut best: Option<(UnicitySet, LpSolution)> = None;
        for set in enumerate_unicity_sets(q)? {
            let sol = solve_lp_exact(&set, &coefficients)?;
            if best.as_ref().map_or(true, |(_, b)| sol.y > b.y) {
                best = Some((set, sol));
            }
        }
        let (set, sol) = best.ok_or_else(|| TowersError::Lp(format!("no unicity set for p={q}")))?;
        let heights = integer_heights(&sol.x, set.elements());
        table.push(TowersCoefficient {
            p: q,
            value: sol.y,
            best_e: Some(set),
            x: sol.x,
            heights,
        });
    }
    Ok(())
}

fn join<T: fmt::Display>(items: &[T]) -> String {
    if items.is_empty() {
        return "-".to_string();
    }
    items.iter().map(|i| i.to_string()).collect::<Vec<_>>().join(",")
}

impl fmt::Display for TowersCoefficient {
    /// `p=4 ct=5/18 E=2,3 heights=1,1 x=1/3,2/3`; base cases use `-`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let elements = self.best_e.as_ref().map(|e| e.elements().to_vec()).unwrap_or_default();
        write!(
            f,
            "p={} ct={} E={} heights={} x={}",
            self.p,
            self.value,
            join(&elements),
            join(&self.heights),
            join(&self.x)
        )
    }
}

impl FromStr for TowersCoefficient {
    type Err = TowersError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = |m: &str| TowersError::Parse(format!("{m} in {s:?}"));
        let mut fields = BTreeMap::new();
        for part in s.split_whitespace() {
            let (k, v) = part.split_once('=').ok_or_else(|| bad("missing '='"))?;
            fields.insert(k, v);
        }
        let get = |k: &str| fields.get(k).copied().ok_or_else(|| bad(&format!("missing {k}")));
        fn list<T: FromStr>(v: &str) -> Result<Vec<T>, ()> {
            if v == "-" {
                return Ok(Vec::new());
            }
            v.split(',').map(|x| x.parse().map_err(|_| ())).collect()
        }
        let p: u32 = get("p")?.parse().map_err(|_| bad("bad p"))?;
        let value: BigRational = get("ct")?.parse().map_err(|_| bad("bad ct"))?;
        let elements: Vec<u32> = list(get("E")?).map_err(|_| bad("bad E"))?;
        let heights: Vec<u64> = list(get("heights")?).map_err(|_| bad("bad heights"))?;
        let x: Vec<BigRational> = list(get("x")?).map_err(|_| bad("bad x"))?;
        let best_e = if elements.is_empty() {
            None
        } else {
            Some(UnicitySet::new(elements, p)?)
        };
        Ok(TowersCoefficient {
            p,
            value,
            best_e,
            x,
            heights,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn coeffs(upto: u32) -> BTreeMap<u32, BigRational> {
        (0..=upto).filter_map(|q| base_coefficient(q).map(|c| (q, c))).collect()
    }

    #[test]
    fn unicity_examples() {
        assert_eq!(is_unicity_set(&[2, 3], 3), Ok(()));
        assert_eq!(UnicitySet::new(vec![2, 3], 3).unwrap().l_set(), vec![0, 2, 3]);
        assert_eq!(is_unicity_set(&[2, 4], 4), Err(4));
        for p in 3..20 {
            assert_eq!(is_unicity_set(&[3], p), Ok(()));
        }
        let s = UnicitySet::new(vec![2, 3], 4).unwrap();
        assert_eq!(s.rep(4), Some(&[2, 0][..]));
        assert_eq!(s.rep(1), None);
        assert!(UnicitySet::new(vec![3, 2], 4).is_err());
        assert!(UnicitySet::new(vec![1, 3], 4).is_err());
    }

    #[test]
    fn enumeration_examples() {
        let els = |p| {
            enumerate_unicity_sets(p)
                .unwrap()
                .into_iter()
                .map(|s| s.elements().to_vec())
                .collect::<Vec<_>>()
        };
        assert_eq!(els(2), vec![vec![2]]);
        assert_eq!(els(3), vec![vec![2, 3]]);
        assert_eq!(els(4), vec![vec![2, 3], vec![3, 4]]);
        assert!(matches!(enumerate_unicity_sets(24), Err(TowersError::CapExceeded { .. })));
        let all = enumerate_unicity_sets_with(4, EnumerationOptions { maximal_only: false, cap: 23 }).unwrap();
        assert_eq!(all.len(), 5);
    }

    #[test]
    fn power_offset_sets() {
        assert_eq!(power_offset_set(2, 4).unwrap().elements(), &[3]);
        assert_eq!(power_offset_set(3, 27).unwrap().elements(), &[10, 12]);
        assert_eq!(power_offset_set(3, 30).unwrap().elements(), &[11, 13]);
        assert!(power_offset_set(3, 26).is_err());
        for q in 2..=3u32 {
            for p in q.pow(q)..=40 {
                assert!(power_offset_set(q, p).is_ok(), "q={q} p={p}");
            }
        }
    }

    #[test]
    fn lp_examples() {
        let s = UnicitySet::new(vec![2, 3], 3).unwrap();
        let sol = solve_lp_exact(&s, &coeffs(1)).unwrap();
        assert_eq!(sol.x, vec![ratio(2, 5), ratio(3, 5)]);
        assert_eq!(sol.y, ratio(3, 10));
        let s = UnicitySet::new(vec![2], 2).unwrap();
        let sol = solve_lp_exact(&s, &coeffs(1)).unwrap();
        assert_eq!((sol.x, sol.y), (vec![ratio(1, 1)], ratio(1, 4)));
        // only l = 0 is representable
        let rows = vec![vec![ratio(1, 4), ratio(1, 5)]];
        for sol in [solve_lp_vertices(&rows).unwrap(), solve_lp_simplex(&rows).unwrap()] {
            assert_eq!(sol.y, ratio(1, 4));
            assert_eq!(sol.x, vec![ratio(1, 1), ratio(0, 1)]);
        }
    }

    #[test]
    fn coefficients() {
        let expect = [(3, ratio(3, 10)), (4, ratio(5, 18)), (5, ratio(2, 9)), (6, ratio(1, 5))];
        let mut table = Vec::new();
        compute_ct_table(6, &mut table).unwrap();
        for (p, v) in expect {
            assert_eq!(table[p as usize].value, v, "p={p}");
            assert!(table[p as usize].heights_reproduce_x());
            assert!(table[p as usize].value >= ratio(1, p as i64 + 1));
        }
        assert_eq!(table[3].heights, vec![1, 1]);
        assert_eq!(compute_ct(4).unwrap(), table[4]);
    }

    #[test]
    fn record_round_trip() {
        for p in 0..=6 {
            let c = compute_ct(p).unwrap();
            let text = c.to_string();
            assert_eq!(text.parse::<TowersCoefficient>().unwrap(), c, "{text}");
        }
        assert_eq!(compute_ct(3).unwrap().to_string(), "p=3 ct=3/10 E=2,3 heights=1,1 x=2/5,3/5");
        assert!("p=3".parse::<TowersCoefficient>().is_err());
    }
}
