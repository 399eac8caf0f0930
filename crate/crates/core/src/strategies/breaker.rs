//! Answer policies for the adversary.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::board::{Answer, AnswerRequest};

pub trait Breaker {
    /// Must return a feasible answer; sessions reject the rest.
    fn answer(&mut self, request: &AnswerRequest<'_>) -> Answer;
}

/// Keeps the larger set of colorings alive; ties answer `same`.
#[derive(Debug, Clone, Copy, Default)]
pub struct MajorityBreaker;

impl Breaker for MajorityBreaker {
    fn answer(&mut self, r: &AnswerRequest<'_>) -> Answer {
        if r.counts[0] >= r.counts[1] {
            Answer::Same
        } else {
            Answer::Diff
        }
    }
}

/// Picks uniformly among the feasible answers.
#[derive(Debug, Clone)]
pub struct RandomBreaker {
    rng: ChaCha8Rng,
}

impl RandomBreaker {
    pub fn new(seed: u64) -> Self {
        RandomBreaker {
            rng: ChaCha8Rng::seed_from_u64(seed),
        }
    }
}

impl Breaker for RandomBreaker {
    fn answer(&mut self, r: &AnswerRequest<'_>) -> Answer {
        match (r.feasible(Answer::Same), r.feasible(Answer::Diff)) {
            (true, false) => Answer::Same,
            (false, true) => Answer::Diff,
            _ => {
                if self.rng.gen::<bool>() {
                    Answer::Same
                } else {
                    Answer::Diff
                }
            }
        }
    }
}

/// Answers truthfully for a fixed coloring.
#[derive(Debug, Clone)]
pub struct HiddenColoring {
    green: Vec<bool>,
}

impl HiddenColoring {
    pub fn new(green: Vec<bool>) -> Self {
        HiddenColoring { green }
    }

    pub fn from_mask(n: u32, mask: u64) -> Self {
        HiddenColoring {
            green: (0..n).map(|b| (mask >> b) & 1 == 1).collect(),
        }
    }

    pub fn is_green(&self, ball: u32) -> bool {
        self.green[ball as usize]
    }
}

impl Breaker for HiddenColoring {
    fn answer(&mut self, r: &AnswerRequest<'_>) -> Answer {
        let color = |id| {
            let b = r.board.get(id).expect("live box");
            self.green[b.big()[0] as usize]
        };
        if color(r.a) == color(r.b) {
            Answer::Same
        } else {
            Answer::Diff
        }
    }
}

/// Replays a fixed answer prefix, then answers `same` when possible.
/// Records which comparisons had two feasible answers.
#[derive(Debug, Clone, Default)]
pub struct ScriptedBreaker {
    script: Vec<Answer>,
    pos: usize,
    /// `(step index, answer given, the other answer was feasible)`.
    pub log: Vec<(usize, Answer, bool)>,
}

impl ScriptedBreaker {
    pub fn new(script: Vec<Answer>) -> Self {
        ScriptedBreaker {
            script,
            pos: 0,
            log: Vec::new(),
        }
    }
}

impl Breaker for ScriptedBreaker {
    fn answer(&mut self, r: &AnswerRequest<'_>) -> Answer {
        let both = r.feasible(Answer::Same) && r.feasible(Answer::Diff);
        let ans = match self.script.get(self.pos) {
            Some(&a) => a,
            None if r.feasible(Answer::Same) => Answer::Same,
            None => Answer::Diff,
        };
        self.log.push((self.pos, ans, both));
        self.pos += 1;
        ans
    }
}
