fn main() -> std::process::ExitCode {
    naivepll_harness::cli::main_with(std::env::args_os().collect())
}
