fn main() -> std::process::ExitCode {
    germcalc::cli::main()
}
