fn main() -> std::process::ExitCode {
    taperbeam_cli::app::main_with_args(std::env::args_os())
}
