//! The podium procedure for exactly `q` green units.
//!
//! Monocolored boxes of sizes `1, 2, .., 2^(nu-1)` are grown from a
//! laboratory of fresh units while balanced failures go to a reserve. The
//! rest of the laboratory is solved with the pivot recursion, the reserve is
//! swept into one solved box, and the green podium boxes are read off the
//! binary expansion of the leftover green count.

use std::collections::{BTreeMap, VecDeque};

use crate::bounds::podium_height;

use super::board::{Answer, BoxId, Session};
use super::{theorem1_units, unit_shape, unit_weight, StrategyError};

#[derive(Debug, Clone, Default)]
pub struct LabState {
    pub laboratory: VecDeque<BoxId>,
    pub reserve: Vec<BoxId>,
    pub podium: BTreeMap<u32, BoxId>,
    /// Guaranteed lower bound on red minus green units in the laboratory.
    pub overage: i64,
}

impl LabState {
    pub fn new(units: &[BoxId], q: u32) -> Self {
        LabState {
            laboratory: units.iter().copied().collect(),
            overage: units.len() as i64 - 2 * q as i64,
            ..LabState::default()
        }
    }
}

/// Builds a monocolored box of `2^i` units from the laboratory.
pub fn subroutine_s(session: &mut Session<'_>, state: &mut LabState, i: u32) -> Result<BoxId, StrategyError> {
    if state.overage < 1 << i {
        return Err(StrategyError::Precondition(format!(
            "overage {} below 2^{i}",
            state.overage
        )));
    }
    build(session, state, i)
}

fn build(session: &mut Session<'_>, state: &mut LabState, i: u32) -> Result<BoxId, StrategyError> {
    if i == 0 {
        let u = state
            .laboratory
            .pop_front()
            .ok_or(StrategyError::Exhausted("laboratory"))?;
        state.overage -= 1;
        return Ok(u);
    }
    loop {
        let before = state.overage;
        let b1 = build(session, state, i - 1)?;
        let b2 = build(session, state, i - 1)?;
        let (ans, merged) = session.compare(b1, b2)?;
        if ans == Answer::Same {
            return Ok(merged);
        }
        state.reserve.push(merged);
        state.overage = before;
    }
}

/// Podium indices whose boxes are green when they hold `d` green units.
pub fn podium_green_steps(d: u32) -> Vec<u32> {
    (0..32).filter(|i| (d >> i) & 1 == 1).collect()
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PodiumOutcome {
    pub podium: BTreeMap<u32, BoxId>,
    /// Podium indices declared green.
    pub green_steps: Vec<u32>,
    /// Solved boxes outside the podium.
    pub boxes: Vec<BoxId>,
}

/// Runs the podium procedure on `units` holding exactly `q` green units.
pub fn podium_units(
    session: &mut Session<'_>,
    units: &[BoxId],
    q: u32,
    nu: u32,
) -> Result<PodiumOutcome, StrategyError> {
    let w = unit_weight(session, units)?;
    let n = units.len() as i64;
    if (1i64 << nu) > n - 2 * q as i64 {
        return Err(StrategyError::Precondition(format!(
            "podium height {nu} needs 2^{nu} <= {}",
            n - 2 * q as i64
        )));
    }
    let mut state = LabState::new(units, q);
    for i in 0..nu {
        let b = subroutine_s(session, &mut state, i)?;
        state.podium.insert(i, b);
    }
    let mut reserve_units = 0;
    for &r in &state.reserve {
        reserve_units += session.shape(r)?.size() as u32 / w as u32;
    }
    let k = reserve_units / 2;
    let lab: Vec<BoxId> = state.laboratory.drain(..).collect();
    let q_lab = (q - k).min((lab.len() as u32).saturating_sub(1) / 2);
    let mut boxes = theorem1_units(session, &lab, q_lab)?;
    if let Some(anchor) = boxes.first_mut() {
        for &r in &state.reserve {
            *anchor = session.compare(*anchor, r)?.1;
        }
    }
    let mut solved_green = 0;
    for &b in &boxes {
        solved_green += unit_shape(session, b, w)?.0;
    }
    Ok(PodiumOutcome {
        podium: state.podium,
        green_steps: podium_green_steps(q - solved_green),
        boxes,
    })
}

/// Top-level podium run; `nu` defaults to the optimal height.
pub fn podium_identify_eq(session: &mut Session<'_>, nu: Option<u32>) -> Result<PodiumOutcome, StrategyError> {
    let problem = session.problem();
    let units = session.board().live_ids();
    if problem.p == 0 {
        return Ok(PodiumOutcome {
            podium: BTreeMap::new(),
            green_steps: Vec::new(),
            boxes: units,
        });
    }
    let nu = nu.unwrap_or_else(|| podium_height(problem.n, problem.p));
    podium_units(session, &units, problem.p, nu)
}
