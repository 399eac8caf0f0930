//! Boxes with ball identities, comparison sessions and transcripts.

use std::fmt;
use std::str::FromStr;

use crate::bounds::Problem;
use crate::pattern::{count_colorings, BoxShape, Count, Mode, Pattern};

use super::breaker::Breaker;
use super::StrategyError;

pub type BoxId = usize;

/// Outcome of comparing the big sides of two boxes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Answer {
    Same,
    Diff,
}

impl Answer {
    pub fn as_str(self) -> &'static str {
        match self {
            Answer::Same => "same",
            Answer::Diff => "diff",
        }
    }
}

/// A two-sided box; balls on one side share a color, the sides differ.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GameBox {
    small: Vec<u32>,
    big: Vec<u32>,
}

impl GameBox {
    fn singleton(ball: u32) -> Self {
        GameBox {
            small: Vec::new(),
            big: vec![ball],
        }
    }

    /// Orders the sides: more balls is big, ties go to the highest ball index.
    fn from_sides(a: Vec<u32>, b: Vec<u32>) -> Self {
        let a_big = match a.len().cmp(&b.len()) {
            std::cmp::Ordering::Greater => true,
            std::cmp::Ordering::Less => false,
            std::cmp::Ordering::Equal => a.iter().max() > b.iter().max(),
        };
        if a_big {
            GameBox { small: b, big: a }
        } else {
            GameBox { small: a, big: b }
        }
    }

    pub fn small(&self) -> &[u32] {
        &self.small
    }

    pub fn big(&self) -> &[u32] {
        &self.big
    }

    pub fn shape(&self) -> BoxShape {
        BoxShape::new(self.small.len() as u16, self.big.len() as u16).expect("non-empty box")
    }

    pub fn size(&self) -> usize {
        self.small.len() + self.big.len()
    }

    pub fn is_monocolored(&self) -> bool {
        self.small.is_empty()
    }

    fn merge(&self, other: &GameBox, answer: Answer) -> GameBox {
        let join = |x: &[u32], y: &[u32]| {
            let mut v = x.to_vec();
            v.extend_from_slice(y);
            v
        };
        match answer {
            Answer::Same => GameBox::from_sides(join(&self.big, &other.big), join(&self.small, &other.small)),
            Answer::Diff => GameBox::from_sides(join(&self.big, &other.small), join(&self.small, &other.big)),
        }
    }
}

/// The current partition of the balls; ids are never reused.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Board {
    n: u32,
    boxes: Vec<Option<GameBox>>,
    live: usize,
}

impl Board {
    pub fn new(n: u32) -> Self {
        Board {
            n,
            boxes: (0..n).map(|b| Some(GameBox::singleton(b))).collect(),
            live: n as usize,
        }
    }

    pub fn balls(&self) -> u32 {
        self.n
    }

    pub fn len(&self) -> usize {
        self.live
    }

    pub fn is_empty(&self) -> bool {
        self.live == 0
    }

    pub fn get(&self, id: BoxId) -> Option<&GameBox> {
        self.boxes.get(id).and_then(|b| b.as_ref())
    }

    pub fn live(&self) -> impl Iterator<Item = (BoxId, &GameBox)> {
        self.boxes
            .iter()
            .enumerate()
            .filter_map(|(id, b)| b.as_ref().map(|b| (id, b)))
    }

    pub fn live_ids(&self) -> Vec<BoxId> {
        self.live().map(|(id, _)| id).collect()
    }

    pub fn shapes(&self) -> impl Iterator<Item = BoxShape> + '_ {
        self.live().map(|(_, b)| b.shape())
    }

    pub fn pattern(&self) -> Pattern {
        Pattern::canonicalize(self.shapes()).expect("board holds at least one box")
    }

    pub fn count(&self, p: u32, mode: Mode) -> Count {
        count_colorings(self.shapes(), p, mode)
    }

    /// Box that currently holds `ball`.
    pub fn box_of(&self, ball: u32) -> Option<BoxId> {
        self.live()
            .find(|(_, b)| b.small.contains(&ball) || b.big.contains(&ball))
            .map(|(id, _)| id)
    }

    fn counts_after(&self, a: &GameBox, b: &GameBox, skip: [BoxId; 2], p: u32, mode: Mode) -> [Count; 2] {
        [Answer::Same, Answer::Diff].map(|ans| {
            let merged = a.merge(b, ans).shape();
            let rest = self
                .live()
                .filter(|(id, _)| !skip.contains(id))
                .map(|(_, b)| b.shape());
            count_colorings(rest.chain(std::iter::once(merged)), p, mode)
        })
    }

    fn apply(&mut self, a: BoxId, b: BoxId, answer: Answer) -> BoxId {
        let ba = self.boxes[a].take().expect("live box");
        let bb = self.boxes[b].take().expect("live box");
        self.boxes.push(Some(ba.merge(&bb, answer)));
        self.live -= 1;
        self.boxes.len() - 1
    }

    /// Green masks compatible with the partition, by enumerating all `2^n`
    /// colorings. Only for small boards.
    pub fn compatible_masks(&self, p: u32, mode: Mode) -> Vec<u32> {
        assert!(self.n <= 20, "enumeration limited to 20 balls");
        (0u32..1 << self.n)
            .filter(|m| match mode {
                Mode::ExactlyP => m.count_ones() == p,
                Mode::AtMostP => m.count_ones() <= p,
            })
            .filter(|&m| {
                self.live().all(|(_, bx)| {
                    let color = |ball: &u32| (m >> ball) & 1;
                    let big = bx.big.iter().map(color).collect::<Vec<_>>();
                    let small = bx.small.iter().map(color).collect::<Vec<_>>();
                    let c = big[0];
                    big.iter().all(|&x| x == c) && small.iter().all(|&x| x != c)
                })
            })
            .collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Step {
    pub a: BoxId,
    pub b: BoxId,
    pub answer: Answer,
    pub merged: BoxId,
}

/// Everything a Breaker may look at before answering.
pub struct AnswerRequest<'s> {
    pub board: &'s Board,
    pub a: BoxId,
    pub b: BoxId,
    /// Colorings left after `same` and after `diff`.
    pub counts: [Count; 2],
}

impl AnswerRequest<'_> {
    pub fn feasible(&self, answer: Answer) -> bool {
        match answer {
            Answer::Same => self.counts[0] > 0,
            Answer::Diff => self.counts[1] > 0,
        }
    }
}

/// A board plus the Breaker answering comparisons on it.
pub struct Session<'b> {
    problem: Problem,
    board: Board,
    breaker: &'b mut dyn Breaker,
    steps: Vec<Step>,
}

impl<'b> Session<'b> {
    pub fn new(problem: Problem, breaker: &'b mut dyn Breaker) -> Self {
        Session {
            problem,
            board: Board::new(problem.n),
            breaker,
            steps: Vec::new(),
        }
    }

    pub fn problem(&self) -> Problem {
        self.problem
    }

    pub fn board(&self) -> &Board {
        &self.board
    }

    pub fn comparisons(&self) -> usize {
        self.steps.len()
    }

    pub fn steps(&self) -> &[Step] {
        &self.steps
    }

    pub fn count(&self) -> Count {
        self.board.count(self.problem.p, self.problem.mode)
    }

    pub fn shape(&self, id: BoxId) -> Result<BoxShape, StrategyError> {
        self.board
            .get(id)
            .map(|b| b.shape())
            .ok_or(StrategyError::UnknownBox(id))
    }

    /// Compares the big sides of boxes `a` and `b` and merges them.
    pub fn compare(&mut self, a: BoxId, b: BoxId) -> Result<(Answer, BoxId), StrategyError> {
        if a == b {
            return Err(StrategyError::UnknownBox(a));
        }
        let ba = self.board.get(a).ok_or(StrategyError::UnknownBox(a))?;
        let bb = self.board.get(b).ok_or(StrategyError::UnknownBox(b))?;
        let counts = self
            .board
            .counts_after(ba, bb, [a, b], self.problem.p, self.problem.mode);
        let request = AnswerRequest {
            board: &self.board,
            a,
            b,
            counts,
        };
        let answer = self.breaker.answer(&request);
        if !request.feasible(answer) {
            return Err(StrategyError::InconsistentAnswer {
                step: self.steps.len() + 1,
            });
        }
        let merged = self.board.apply(a, b, answer);
        self.steps.push(Step { a, b, answer, merged });
        Ok((answer, merged))
    }

    pub fn transcript(&self) -> Transcript {
        Transcript {
            steps: self.steps.clone(),
            final_pattern: self.board.pattern(),
        }
    }
}

/// Line-oriented record of a run: one `step k: box A vs box B -> same|diff`
/// line per comparison, then the final Type in multiplicative notation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Transcript {
    pub steps: Vec<Step>,
    pub final_pattern: Pattern,
}

impl fmt::Display for Transcript {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (k, s) in self.steps.iter().enumerate() {
            writeln!(f, "step {}: box {} vs box {} -> {}", k + 1, s.a, s.b, s.answer.as_str())?;
        }
        writeln!(f, "{}", self.final_pattern)
    }
}

impl FromStr for Transcript {
    type Err = String;

    /// Parses the text form. Merged ids are not written, so they are
    /// rebuilt assuming ids are allocated sequentially after the first
    /// `n` singletons, as [`Board`] does.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let lines: Vec<&str> = s.lines().filter(|l| !l.trim().is_empty()).collect();
        let (last, body) = lines.split_last().ok_or("empty transcript")?;
        let final_pattern: Pattern = last.parse().map_err(|e| format!("{e}"))?;
        let first_new = final_pattern.total() as usize;
        let mut steps = Vec::with_capacity(body.len());
        for (k, line) in body.iter().enumerate() {
            let err = || format!("bad step line: {line}");
            let rest = line
                .strip_prefix(&format!("step {}: box ", k + 1))
                .ok_or_else(err)?;
            let (a, rest) = rest.split_once(" vs box ").ok_or_else(err)?;
            let (b, ans) = rest.split_once(" -> ").ok_or_else(err)?;
            let answer = match ans.trim() {
                "same" => Answer::Same,
                "diff" => Answer::Diff,
                _ => return Err(err()),
            };
            steps.push(Step {
                a: a.parse().map_err(|_| err())?,
                b: b.parse().map_err(|_| err())?,
                answer,
                merged: first_new + k,
            });
        }
        Ok(Transcript { steps, final_pattern })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::strategies::breaker::MajorityBreaker;

    #[test]
    fn merge_follows_big_sides() {
        let mut board = Board::new(4);
        let m = board.apply(0, 1, Answer::Diff);
        assert_eq!(board.get(m).unwrap().shape(), BoxShape::new(1, 1).unwrap());
        // tie: the side holding ball 1 is big
        assert_eq!(board.get(m).unwrap().big(), &[1]);
        let m2 = board.apply(m, 2, Answer::Same);
        let b = board.get(m2).unwrap();
        assert_eq!((b.small(), b.big()), (&[0][..], &[1, 2][..]));
        assert_eq!(board.len(), 2);
        assert_eq!(board.pattern().to_string(), "(1,2)^1(0,1)^1");
    }

    #[test]
    fn enumeration_matches_count() {
        let mut board = Board::new(6);
        let a = board.apply(0, 1, Answer::Diff);
        let b = board.apply(2, 3, Answer::Same);
        board.apply(a, b, Answer::Same);
        for p in 0..3 {
            for mode in Mode::ALL {
                assert_eq!(board.compatible_masks(p, mode).len() as Count, board.count(p, mode));
            }
        }
    }

    #[test]
    fn transcript_text_round_trip() {
        let mut breaker = MajorityBreaker;
        let mut s = Session::new(Problem::le(4, 1).unwrap(), &mut breaker);
        let (_, m) = s.compare(0, 1).unwrap();
        let (_, m) = s.compare(m, 2).unwrap();
        s.compare(m, 3).unwrap();
        let t = s.transcript();
        let text = t.to_string();
        assert!(text.starts_with("step 1: box 0 vs box 1 -> "));
        assert_eq!(text.parse::<Transcript>().unwrap(), t);
    }

    #[test]
    fn unknown_boxes_rejected() {
        let mut breaker = MajorityBreaker;
        let mut s = Session::new(Problem::le(3, 1).unwrap(), &mut breaker);
        assert!(matches!(s.compare(0, 0), Err(StrategyError::UnknownBox(0))));
        assert!(matches!(s.compare(0, 7), Err(StrategyError::UnknownBox(7))));
        s.compare(0, 1).unwrap();
        assert!(matches!(s.compare(0, 2), Err(StrategyError::UnknownBox(0))));
    }
}
