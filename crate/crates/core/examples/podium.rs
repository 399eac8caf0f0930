//! The podium procedure on a hidden coloring, with its transcript.

use majority_game::bounds::{podium_bound, podium_height};
use majority_game::strategies::{podium_identify_eq, HiddenColoring, Session};
use majority_game::Problem;

fn main() -> anyhow::Result<()> {
    let (n, p) = (17, 3);
    let problem = Problem::eq(n, p)?;
    let nu = podium_height(n, p);
    println!("{problem}: height {nu}, guaranteed {} comparisons", podium_bound(n, p, nu));

    let mut hidden = HiddenColoring::from_mask(n, 0b1_0000_0100_0010_0000);
    let mut session = Session::new(problem, &mut hidden);
    let out = podium_identify_eq(&mut session, Some(nu))?;
    println!("green podium steps {:?}, podium size {}", out.green_steps, out.podium.len());
    println!("{} comparisons, {} coloring(s) left", session.comparisons(), session.count());
    print!("{}", session.transcript());
    Ok(())
}
