//! Deficit table against Q+ and the small-pattern margin matrix.

use majority_game::cli::{emit_table, margin_matrix};
use majority_game::{Mode, SearchLimits};

fn main() -> anyhow::Result<()> {
    let max_n = std::env::args().nth(1).map(|s| s.parse()).transpose()?.unwrap_or(20);
    let rows = emit_table(max_n, &[Mode::ExactlyP], SearchLimits::default(), None, false)?;
    for r in rows.iter().filter(|r| r.flagged()) {
        println!("N={:>2} p={} Q={} Q+={} deficit {}", r.n, r.p, r.q_exact.unwrap(), r.q_plus, r.deficit.unwrap());
    }
    println!("{} instances, {} with a deficit", rows.len(), rows.iter().filter(|r| r.flagged()).count());
    for c in margin_matrix() {
        println!("m={} n1={} n2={} -> {}", c.m, c.n1, c.n2, c.value);
    }
    Ok(())
}
