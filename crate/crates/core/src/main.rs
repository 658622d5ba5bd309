fn main() -> std::process::ExitCode {
    tcfbm::cli::main()
}
