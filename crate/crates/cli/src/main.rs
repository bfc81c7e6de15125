use std::process::ExitCode;

fn main() -> ExitCode {
    ExitCode::from(rees_cli::run())
}
