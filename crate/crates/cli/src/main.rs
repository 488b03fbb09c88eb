fn main() {
    std::process::exit(blockdiag_cli::run_experiment(std::env::args_os()));
}
