fn main() -> std::process::ExitCode {
    mdp_core::cli::main()
}
