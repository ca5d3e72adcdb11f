use std::process::ExitCode;

fn main() -> ExitCode {
    ExitCode::from(ohmic_probe::cli::run() as u8)
}
