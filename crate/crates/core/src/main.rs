fn main() {
    std::process::exit(mgimpact::cli::run_cli(std::env::args_os()));
}
