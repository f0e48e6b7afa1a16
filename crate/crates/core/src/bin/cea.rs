use std::process::ExitCode;

fn main() -> ExitCode {
    let outcome = cea_core::cli::run(std::env::args_os());
    if outcome.exit_code == 2 {
        eprintln!("{}", outcome.output.trim_end());
    } else {
        println!("{}", outcome.output.trim_end());
    }
    ExitCode::from(outcome.exit_code as u8)
}
