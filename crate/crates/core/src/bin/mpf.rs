use std::process::ExitCode;

fn main() -> ExitCode {
    let (code, text) = metric_preserving::cli::run(std::env::args_os());
    println!("{text}");
    ExitCode::from(code as u8)
}
