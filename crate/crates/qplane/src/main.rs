use std::process::ExitCode;

fn main() -> ExitCode {
    ExitCode::from(qplane::main_with_args(std::env::args_os()))
}
