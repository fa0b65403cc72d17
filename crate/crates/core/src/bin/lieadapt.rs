fn main() -> std::process::ExitCode {
    lieadapt::cli::main_with_args(std::env::args_os())
}
