use std::io::Write;
use std::process::ExitCode;

fn main() -> ExitCode {
    let run = quatval_cli::execute(std::env::args_os());
    print!("{}", run.stdout);
    eprint!("{}", run.stderr);
    let _ = std::io::stdout().flush();
    ExitCode::from(run.code as u8)
}
