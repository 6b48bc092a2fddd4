fn main() {
    std::process::exit(proxvor::cli::run_cli(std::env::args_os()));
}
