use std::io::{ErrorKind, Write};

fn main() -> anyhow::Result<()> {
    let mut stdout = std::io::stdout();
    let code = majority_game::cli::run(std::env::args_os(), &mut stdout, &mut std::io::stderr());
    match stdout.flush() {
        Err(e) if e.kind() != ErrorKind::BrokenPipe => return Err(e.into()),
        _ => {}
    }
    std::process::exit(code);
}
