//! Find a ball of the majority color with the stack procedure, against a few Breakers.

use majority_game::strategies::{
    majority_bound, majority_find_red, worst_case_of_strategy, Breaker, HiddenColoring, MajorityBreaker,
    RandomBreaker, Session, Strategy,
};
use majority_game::Problem;

fn main() -> anyhow::Result<()> {
    let n = 11;
    let problem = Problem::le(n, (n - 1) / 2)?;
    let mut breakers: Vec<(&str, Box<dyn Breaker>)> = vec![
        ("majority", Box::new(MajorityBreaker)),
        ("random", Box::new(RandomBreaker::new(7))),
        ("hidden 0b10110010010", Box::new(HiddenColoring::from_mask(n, 0b101_1001_0010))),
    ];
    for (name, breaker) in breakers.iter_mut() {
        let mut session = Session::new(problem, breaker.as_mut());
        let id = majority_find_red(&mut session)?;
        let ball = session.board().get(id).unwrap().big()[0];
        println!("{name:>22}: ball {ball} after {} comparisons", session.comparisons());
    }
    let worst = worst_case_of_strategy(&Strategy::Majority, problem)?;
    println!("worst case over all answers: {} (bound {})", worst.worst, majority_bound(n));
    Ok(())
}
