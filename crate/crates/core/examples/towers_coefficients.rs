//! Exact towers coefficients from unicity sets and small linear programs.

use majority_game::towers_opt::{compute_ct_table, enumerate_unicity_sets};
use majority_game::strategies::TowersPlan;

fn main() -> anyhow::Result<()> {
    let max_p: u32 = std::env::args().nth(1).map(|s| s.parse()).transpose()?.unwrap_or(8);
    println!("{} unicity sets for p = 5", enumerate_unicity_sets(5)?.len());
    let mut table = Vec::new();
    compute_ct_table(max_p, &mut table)?;
    for c in &table {
        println!("{c}");
        if let Some(plan) = TowersPlan::from_coefficient(c) {
            println!("    plan: sizes {:?} heights {:?}", plan.sizes, plan.heights);
        }
    }
    Ok(())
}
