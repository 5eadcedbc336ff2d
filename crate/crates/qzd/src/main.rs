use std::process::ExitCode;

fn main() -> ExitCode {
    qzd::cli::main(std::env::args_os())
}
