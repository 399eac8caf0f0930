//! Record a game transcript, parse it back and replay it against a scripted Breaker.

use majority_game::strategies::{theorem1_identify, Answer, RandomBreaker, ScriptedBreaker, Session, Transcript};
use majority_game::Problem;

fn main() -> anyhow::Result<()> {
    let problem = Problem::le(9, 2)?;
    let mut random = RandomBreaker::new(3);
    let mut session = Session::new(problem, &mut random);
    theorem1_identify(&mut session)?;
    let text = session.transcript().to_string();
    print!("{text}");

    let parsed: Transcript = text.parse().map_err(anyhow::Error::msg)?;
    let script: Vec<Answer> = parsed.steps.iter().map(|s| s.answer).collect();
    let mut scripted = ScriptedBreaker::new(script);
    let mut replay = Session::new(problem, &mut scripted);
    theorem1_identify(&mut replay)?;
    println!("replay identical: {}", replay.transcript() == parsed);
    Ok(())
}
