use std::process::ExitCode;

fn main() -> ExitCode {
    ExitCode::from(ferrosim::cli::dispatch(std::env::args()) as u8)
}
