fn main() -> std::process::ExitCode {
    ternary_fock::cli::main()
}
