//! Save a memo table, reload it and solve again with a warm start.

use majority_game::{solve_exact, MemoStore, Problem, SearchLimits};

fn main() -> anyhow::Result<()> {
    let dir = std::env::temp_dir().join("majid-example");
    std::fs::create_dir_all(&dir)?;
    let path = dir.join("memo-p4-le.bin");
    let problem = Problem::le(13, 4)?;

    let memo = MemoStore::new(4, problem.mode);
    let cold = solve_exact(problem, SearchLimits::default(), &memo)?;
    memo.save(&path)?;
    println!("cold: {} = {} in {} nodes, {} entries saved", problem, cold.q, cold.nodes, memo.len());

    let loaded = MemoStore::load_for(&path, 4, problem.mode)?;
    let warm = solve_exact(problem, SearchLimits::default(), &loaded)?;
    println!("warm: {} = {} in {} nodes", problem, warm.q, warm.nodes);

    // wrong metadata is refused
    if let Err(e) = MemoStore::load_for(&path, 3, problem.mode) {
        println!("loading as p=3: {e}");
    }
    Ok(())
}
