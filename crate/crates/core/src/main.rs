use std::process::ExitCode;

fn main() -> ExitCode {
    star_battery::cli::main()
}
