//! Solve a few instances exactly and compare against the closed-form bounds.
//!
//! ```bash
//! cargo run --release --example solve_exact -- 17 3 eq
//! ```

use majority_game::{solve_exact, Mode, MemoStore, Problem, SearchLimits};

fn main() -> anyhow::Result<()> {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let instances = if args.len() == 3 {
        vec![(args[0].parse()?, args[1].parse()?, args[2].parse::<Mode>().map_err(anyhow::Error::msg)?)]
    } else {
        vec![(13, 4, Mode::AtMostP), (17, 3, Mode::ExactlyP), (14, 5, Mode::ExactlyP)]
    };
    for (n, p, mode) in instances {
        let problem = Problem::new(n, p, mode)?;
        let bounds = problem.bounds();
        let memo = MemoStore::new(p, mode);
        let report = solve_exact(problem, SearchLimits::default(), &memo)?;
        println!(
            "{problem} = {} (bounds {}..={}, Q+ = {}), {} nodes, {} memo entries, {:?}",
            report.q,
            bounds.lower,
            bounds.upper,
            bounds.q_plus,
            report.nodes,
            memo.len(),
            report.elapsed
        );
    }
    Ok(())
}
