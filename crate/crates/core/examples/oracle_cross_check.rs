//! Brute-force the game over explicit coloring sets and compare with the solver.

use majority_game::oracle::{cross_check, solve_by_colorings, ColoringSet};
use majority_game::Problem;

fn main() -> anyhow::Result<()> {
    let problem = Problem::eq(6, 2)?;
    let start = ColoringSet::initial(&problem);
    println!("{problem}: {} colorings before any comparison", start.len());
    let same = start.answer(0, 1, true);
    let diff = start.answer(0, 1, false);
    println!("  ball 0 vs ball 1 -> same leaves {}, diff leaves {}", same.len(), diff.len());
    println!("  oracle value {}", solve_by_colorings(problem)?);

    let report = cross_check(7)?;
    println!("{} instances checked, {} mismatches", report.instances, report.mismatches.len());
    for m in &report.mismatches {
        println!("  {}: oracle {} solver {}", m.problem, m.oracle, m.solver);
    }
    Ok(())
}
