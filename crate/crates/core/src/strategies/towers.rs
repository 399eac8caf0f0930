//! The towers method for exactly `q` green units.
//!
//! After an opening box with `q+1` balls of one color, floors of
//! monocolored boxes of sizes `u_1..u_k` are stacked in `k` towers, `h_i`
//! boxes per tower and floor. Each accidental bicolored box is merged into
//! the opening box. Once the green count left for the towers is known, its
//! unique representation over the sizes says how many green boxes each
//! tower holds, and each tower is solved as a smaller instance.

use std::collections::VecDeque;

use crate::bounds::podium_height;
use crate::towers_opt::{compute_ct, TowersCoefficient, UnicitySet};

use super::board::{BoxId, Session};
use super::podium::podium_units;
use super::{unit_shape, unit_weight, StrategyError};

/// Box sizes and per-floor heights of the towers.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TowersPlan {
    pub sizes: Vec<u32>,
    pub heights: Vec<u32>,
}

impl TowersPlan {
    pub fn new(sizes: Vec<u32>, heights: Vec<u32>) -> Self {
        TowersPlan { sizes, heights }
    }

    /// `E = {2,3}` with one box of each size per floor.
    pub fn default_p3() -> Self {
        TowersPlan::new(vec![2, 3], vec![1, 1])
    }

    /// Drops sizes whose weight in the optimum is zero.
    pub fn from_coefficient(c: &TowersCoefficient) -> Option<Self> {
        let set = c.best_e.as_ref()?;
        let (sizes, heights) = set
            .elements()
            .iter()
            .zip(&c.heights)
            .filter(|(_, &h)| h > 0)
            .map(|(&u, &h)| (u, h as u32))
            .unzip();
        Some(TowersPlan { sizes, heights })
    }

    pub fn validate(&self, q: u32) -> Result<UnicitySet, StrategyError> {
        if self.sizes.len() != self.heights.len() || self.heights.iter().any(|&h| h == 0) {
            return Err(StrategyError::Precondition(
                "one positive height per size required".into(),
            ));
        }
        Ok(UnicitySet::new(self.sizes.clone(), q)?)
    }

    /// Units consumed by one complete floor cycle.
    pub fn cycle_units(&self) -> usize {
        self.sizes.iter().zip(&self.heights).map(|(&u, &h)| (u * h) as usize).sum()
    }

    /// Fewest units for which the opening and one full cycle always fit.
    pub fn min_units(&self, q: u32) -> usize {
        2 * q as usize + 1 + self.cycle_units()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TowersOutcome {
    pub comparisons: usize,
    pub final_boxes: usize,
    /// Green units in the opening box.
    pub x: u32,
    /// Boxes per tower when the floors stopped.
    pub tower_lengths: Vec<usize>,
    /// Green boxes per tower.
    pub green_per_tower: Vec<u32>,
}

enum Built {
    Done(BoxId),
    Partial(Option<BoxId>),
}

fn build_mono(
    session: &mut Session<'_>,
    fresh: &mut VecDeque<BoxId>,
    bicolored: &mut BoxId,
    size: u32,
    w: usize,
) -> Result<Built, StrategyError> {
    let mut cur: Option<BoxId> = None;
    loop {
        if let Some(c) = cur {
            if unit_shape(session, c, w)?.1 == size {
                return Ok(Built::Done(c));
            }
        }
        let Some(next) = fresh.pop_front() else {
            return Ok(Built::Partial(cur));
        };
        match cur {
            None => cur = Some(next),
            Some(c) => {
                let (_, m) = session.compare(c, next)?;
                if session.board().get(m).is_some_and(|b| b.is_monocolored()) {
                    cur = Some(m);
                } else {
                    *bicolored = session.compare(m, *bicolored)?.1;
                    cur = None;
                }
            }
        }
    }
}

/// Runs the towers method on `units` holding exactly `q` green units.
pub fn towers_units(
    session: &mut Session<'_>,
    units: &[BoxId],
    q: u32,
    plan: &TowersPlan,
) -> Result<TowersOutcome, StrategyError> {
    let set = plan.validate(q)?;
    if units.len() < plan.min_units(q) {
        return Err(StrategyError::Precondition(format!(
            "towers need at least {} units, got {}",
            plan.min_units(q),
            units.len()
        )));
    }
    let start = session.comparisons();
    let w = unit_weight(session, units)?;
    let mut fresh: VecDeque<BoxId> = units.iter().copied().collect();

    let mut bicolored = fresh.pop_front().expect("enough units");
    while unit_shape(session, bicolored, w)?.1 < q + 1 {
        let next = fresh.pop_front().ok_or(StrategyError::Exhausted("opening"))?;
        bicolored = session.compare(bicolored, next)?.1;
    }

    let mut towers: Vec<Vec<BoxId>> = vec![Vec::new(); plan.sizes.len()];
    'cycles: loop {
        let mut cycle: Vec<(usize, BoxId)> = Vec::new();
        for (r, (&u, &h)) in plan.sizes.iter().zip(&plan.heights).enumerate() {
            for _ in 0..h {
                match build_mono(session, &mut fresh, &mut bicolored, u, w)? {
                    Built::Done(b) => cycle.push((r, b)),
                    Built::Partial(rest) => {
                        for b in cycle.into_iter().map(|(_, b)| b).chain(rest) {
                            bicolored = session.compare(b, bicolored)?.1;
                        }
                        break 'cycles;
                    }
                }
            }
        }
        for (r, b) in cycle {
            towers[r].push(b);
        }
    }

    let x = unit_shape(session, bicolored, w)?.0;
    let l = q - x;
    let reps = set
        .rep(l)
        .ok_or_else(|| StrategyError::Precondition(format!("{l} green units left but not representable")))?
        .to_vec();
    let mut anchor = bicolored;
    for (tower, &qi) in towers.iter().zip(&reps) {
        identify_eq_units(session, tower, qi, &mut anchor)?;
    }
    Ok(TowersOutcome {
        comparisons: session.comparisons() - start,
        final_boxes: session.board().len(),
        x,
        tower_lengths: towers.iter().map(|t| t.len()).collect(),
        green_per_tower: reps,
    })
}

/// Top-level towers run over all balls.
pub fn towers_identify_eq(session: &mut Session<'_>, plan: &TowersPlan) -> Result<TowersOutcome, StrategyError> {
    let p = session.problem().p;
    let units = session.board().live_ids();
    towers_units(session, &units, p, plan)
}

/// Solves exactly `q` green units among `units`. `anchor` is a box whose
/// coloring is already known; it absorbs units when no better method fits.
pub fn identify_eq_units(
    session: &mut Session<'_>,
    units: &[BoxId],
    q: u32,
    anchor: &mut BoxId,
) -> Result<(), StrategyError> {
    let n = units.len();
    if q == 0 {
        return Ok(());
    }
    if 2 * q as usize >= n {
        for &u in units {
            *anchor = session.compare(*anchor, u)?.1;
        }
        return Ok(());
    }
    if q >= 3 {
        let plan = compute_ct(q)
            .ok()
            .and_then(|c| TowersPlan::from_coefficient(&c));
        if let Some(plan) = plan.filter(|pl| n >= pl.min_units(q)) {
            towers_units(session, units, q, &plan)?;
            return Ok(());
        }
    }
    podium_units(session, units, q, podium_height(n as u32, q))?;
    Ok(())
}

/// Least-squares line `boxes ~ slope * n + intercept`.
pub fn fit_box_counts(points: &[(u32, usize)]) -> Option<(f64, f64)> {
    let len = points.len() as f64;
    if points.len() < 2 {
        return None;
    }
    let mx = points.iter().map(|&(n, _)| n as f64).sum::<f64>() / len;
    let my = points.iter().map(|&(_, b)| b as f64).sum::<f64>() / len;
    let sxx: f64 = points.iter().map(|&(n, _)| (n as f64 - mx).powi(2)).sum();
    if sxx == 0.0 {
        return None;
    }
    let sxy: f64 = points
        .iter()
        .map(|&(n, b)| (n as f64 - mx) * (b as f64 - my))
        .sum();
    let slope = sxy / sxx;
    Some((slope, my - slope * mx))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bounds::Problem;
    use crate::strategies::{HiddenColoring, MajorityBreaker};

    #[test]
    fn identifies_every_coloring_small() {
        let (n, p) = (13u32, 3u32);
        let problem = Problem::eq(n, p).unwrap();
        let plan = TowersPlan::default_p3();
        for mask in (0u64..1 << n).filter(|m| m.count_ones() == p) {
            let mut hc = HiddenColoring::from_mask(n, mask);
            let mut s = Session::new(problem, &mut hc);
            let out = towers_identify_eq(&mut s, &plan).unwrap();
            assert_eq!(s.count(), 1, "mask {mask:b}");
            assert_eq!(out.final_boxes, s.board().len());
            assert!(s.comparisons() < n as usize);
        }
    }

    #[test]
    fn majority_breaker_leaves_many_boxes() {
        let plan = TowersPlan::default_p3();
        for n in [20u32, 40, 60] {
            let mut br = MajorityBreaker;
            let mut s = Session::new(Problem::eq(n, 3).unwrap(), &mut br);
            let out = towers_identify_eq(&mut s, &plan).unwrap();
            assert_eq!(s.count(), 1);
            assert!(out.final_boxes as i64 >= (3 * n as i64) / 10 - 5, "n={n} {out:?}");
        }
    }

    #[test]
    fn plan_checks() {
        assert!(TowersPlan::new(vec![2, 4], vec![1, 1]).validate(4).is_err());
        assert!(TowersPlan::new(vec![2, 3], vec![1]).validate(3).is_err());
        assert_eq!(TowersPlan::default_p3().min_units(3), 12);
        let mut br = MajorityBreaker;
        let mut s = Session::new(Problem::eq(11, 3).unwrap(), &mut br);
        assert!(towers_identify_eq(&mut s, &TowersPlan::default_p3()).is_err());
        let plan = TowersPlan::from_coefficient(&compute_ct(3).unwrap()).unwrap();
        assert_eq!(plan, TowersPlan::default_p3());
    }

    #[test]
    fn line_fit() {
        let (a, b) = fit_box_counts(&[(10, 5), (20, 8), (30, 11)]).unwrap();
        assert!((a - 0.3).abs() < 1e-9 && (b - 2.0).abs() < 1e-9);
        assert!(fit_box_counts(&[(1, 1)]).is_none());
    }
}
