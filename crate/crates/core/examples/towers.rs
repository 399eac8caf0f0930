//! Run the towers procedure for p = 3 and watch the box count grow like 3N/10.

use majority_game::strategies::towers::fit_box_counts;
use majority_game::strategies::{towers_identify_eq, RandomBreaker, Session, TowersPlan};
use majority_game::Problem;

fn main() -> anyhow::Result<()> {
    let plan = TowersPlan::default_p3();
    println!("plan sizes {:?} heights {:?}, needs {} units", plan.sizes, plan.heights, plan.min_units(3));
    let mut points = Vec::new();
    for n in (20..=120u32).step_by(10) {
        let mut fewest = usize::MAX;
        for seed in 0..50 {
            let mut breaker = RandomBreaker::new(seed);
            let mut session = Session::new(Problem::eq(n, 3)?, &mut breaker);
            let out = towers_identify_eq(&mut session, &plan)?;
            assert_eq!(session.count(), 1);
            fewest = fewest.min(out.final_boxes);
        }
        println!("n={n:>3}: at least {fewest} boxes left, 3n/10 = {}", 3 * n / 10);
        points.push((n, fewest));
    }
    if let Some((slope, intercept)) = fit_box_counts(&points) {
        println!("fit: boxes ~ {slope:.3} n + {intercept:.2}");
    }
    Ok(())
}
