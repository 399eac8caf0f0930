//! Exact solvers for `max y` s.t. `sum x = 1`, `x >= 0`, `y <= a_l . x`.

use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::TowersError;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LpSolution {
    pub x: Vec<BigRational>,
    pub y: BigRational,
}

impl LpSolution {
    /// Checks feasibility and that some constraint is tight.
    pub fn certify(&self, rows: &[Vec<BigRational>]) -> bool {
        let sum: BigRational = self.x.iter().cloned().sum();
        let values: Vec<BigRational> = rows.iter().map(|r| dot(r, &self.x)).collect();
        sum.is_one()
            && self.x.iter().all(|v| !v.is_negative())
            && values.iter().all(|v| &self.y <= v)
            && values.iter().any(|v| v == &self.y)
    }
}

fn dot(a: &[BigRational], b: &[BigRational]) -> BigRational {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn check_rows(rows: &[Vec<BigRational>]) -> Result<usize, TowersError> {
    let k = rows.first().map(|r| r.len()).ok_or_else(|| TowersError::Lp("no constraints".into()))?;
    if k == 0 || rows.iter().any(|r| r.len() != k) {
        return Err(TowersError::Lp("ragged constraint rows".into()));
    }
    Ok(k)
}

/// Gaussian elimination; `None` when singular.
fn solve_square(mut a: Vec<Vec<BigRational>>, mut b: Vec<BigRational>) -> Option<Vec<BigRational>> {
    let n = b.len();
    for col in 0..n {
        let piv = (col..n).find(|&r| !a[r][col].is_zero())?;
        a.swap(col, piv);
        b.swap(col, piv);
        let inv = a[col][col].recip();
        for j in col..n {
            a[col][j] = &a[col][j] * &inv;
        }
        b[col] = &b[col] * &inv;
        for r in 0..n {
            if r != col && !a[r][col].is_zero() {
                let f = a[r][col].clone();
                for j in col..n {
                    let d = &f * &a[col][j];
                    a[r][j] -= d;
                }
                let d = &f * &b[col];
                b[r] -= d;
            }
        }
    }
    Some(b)
}

fn combinations(n: usize, k: usize, start: usize, cur: &mut Vec<usize>, f: &mut impl FnMut(&[usize])) {
    if cur.len() == k {
        f(cur);
        return;
    }
    for i in start..n {
        if n - i < k - cur.len() {
            break;
        }
        cur.push(i);
        combinations(n, k, i + 1, cur, f);
        cur.pop();
    }
}

/// Checks every basic solution; the first one reaching the best `y` wins.
pub fn solve_lp_vertices(rows: &[Vec<BigRational>]) -> Result<LpSolution, TowersError> {
    let k = check_rows(rows)?;
    let zero = BigRational::zero();
    let one = BigRational::one();
    // inequalities 0..k are x_i >= 0, then one per row
    let total = k + rows.len();
    let mut best: Option<LpSolution> = None;
    combinations(total, k, 0, &mut Vec::new(), &mut |tight| {
        let mut a = vec![vec![one.clone(); k].into_iter().chain([zero.clone()]).collect::<Vec<_>>()];
        let mut b = vec![one.clone()];
        for &t in tight {
            let mut eq = vec![zero.clone(); k + 1];
            if t < k {
                eq[t] = one.clone();
            } else {
                for (i, c) in rows[t - k].iter().enumerate() {
                    eq[i] = -c;
                }
                eq[k] = one.clone();
            }
            a.push(eq);
            b.push(zero.clone());
        }
        let Some(z) = solve_square(a, b) else { return };
        let (x, y) = (z[..k].to_vec(), z[k].clone());
        if x.iter().any(|v| v.is_negative()) || rows.iter().any(|r| dot(r, &x) < y) {
            return;
        }
        if best.as_ref().map_or(true, |s| y > s.y) {
            best = Some(LpSolution { x, y });
        }
    });
    best.ok_or_else(|| TowersError::Lp("no feasible vertex".into()))
}

/// Tableau simplex with Bland's rule from the basis `x_1 = 1`.
pub fn solve_lp_simplex(rows: &[Vec<BigRational>]) -> Result<LpSolution, TowersError> {
    let k = check_rows(rows)?;
    let m = rows.len();
    // columns: x (k), y, slacks (m), rhs
    let n = k + 1 + m;
    let zero = BigRational::zero();
    let one = BigRational::one();
    let mut t = vec![vec![zero.clone(); n + 1]; m + 1];
    for j in 0..k {
        t[0][j] = one.clone();
    }
    t[0][n] = one.clone();
    for (l, r) in rows.iter().enumerate() {
        for (j, c) in r.iter().enumerate() {
            t[l + 1][j] = -c;
        }
        t[l + 1][k] = one.clone();
        t[l + 1][k + 1 + l] = one.clone();
    }
    let mut basis: Vec<usize> = std::iter::once(0).chain((0..m).map(|l| k + 1 + l)).collect();
    pivot(&mut t, 0, 0);
    let cost = |j: usize| if j == k { one.clone() } else { zero.clone() };
    // Bland's rule cannot cycle; the cap only guards against bugs
    for _ in 0..10_000 {
        let entering = (0..n).find(|&j| {
            if basis.contains(&j) {
                return false;
            }
            let reduced = cost(j) - (0..=m).map(|r| cost(basis[r]) * &t[r][j]).sum::<BigRational>();
            reduced.is_positive()
        });
        let Some(j) = entering else {
            let mut x = vec![zero.clone(); k];
            let mut y = zero.clone();
            for (r, &b) in basis.iter().enumerate() {
                if b < k {
                    x[b] = t[r][n].clone();
                } else if b == k {
                    y = t[r][n].clone();
                }
            }
            return Ok(LpSolution { x, y });
        };
        let leaving = (0..=m)
            .filter(|&r| t[r][j].is_positive())
            .min_by(|&a, &b| {
                let ra = &t[a][n] / &t[a][j];
                let rb = &t[b][n] / &t[b][j];
                ra.cmp(&rb).then(basis[a].cmp(&basis[b]))
            })
            .ok_or_else(|| TowersError::Lp("unbounded".into()))?;
        pivot(&mut t, leaving, j);
        basis[leaving] = j;
    }
    Err(TowersError::Lp("simplex iteration cap".into()))
}

fn pivot(t: &mut [Vec<BigRational>], row: usize, col: usize) {
    let inv = t[row][col].recip();
    for v in t[row].iter_mut() {
        *v = &*v * &inv;
    }
    let pivot_row = t[row].clone();
    for (r, line) in t.iter_mut().enumerate() {
        if r == row || line[col].is_zero() {
            continue;
        }
        let f = line[col].clone();
        for (v, p) in line.iter_mut().zip(&pivot_row) {
            *v -= &f * p;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::towers_opt::ratio;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn both_routes_agree_on_random_rows() {
        let mut rng = ChaCha8Rng::seed_from_u64(12345);
        let mut next = || rng.gen_range(0..9i64);
        for k in 1..=4 {
            for m in 1..=5 {
                let rows: Vec<Vec<BigRational>> =
                    (0..m).map(|_| (0..k).map(|_| ratio(next(), 1 + next())).collect()).collect();
                let a = solve_lp_vertices(&rows).unwrap();
                let b = solve_lp_simplex(&rows).unwrap();
                assert_eq!(a.y, b.y, "{rows:?}");
                assert!(a.certify(&rows) && b.certify(&rows));
            }
        }
    }
}
