//! Exhaustive worst-case comparison counts of the built-in strategies.

use majority_game::bounds::q_plus_le;
use majority_game::strategies::{worst_case_of_strategy, Strategy};
use majority_game::{Mode, Problem};

fn main() -> anyhow::Result<()> {
    println!("{:>3} {:>2} {:>6} {:>9} {:>7} {:>4}", "n", "p", "chain", "theorem1", "podium", "Q+");
    for n in 6..=14u32 {
        for p in 1..=3 {
            if 2 * p >= n {
                continue;
            }
            let le = Problem::le(n, p)?;
            let chain = worst_case_of_strategy(&Strategy::Chain, le)?.worst;
            let pivot = worst_case_of_strategy(&Strategy::Theorem1, le)?.worst;
            let podium = worst_case_of_strategy(&Strategy::Podium { nu: None }, Problem::new(n, p, Mode::ExactlyP)?)?.worst;
            println!("{n:>3} {p:>2} {chain:>6} {pivot:>9} {podium:>7} {:>4}", q_plus_le(n, p));
        }
    }
    Ok(())
}
