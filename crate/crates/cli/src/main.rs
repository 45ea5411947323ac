fn main() {
    std::process::exit(impulse_varsolve_cli::run_cli(std::env::args_os()));
}
