fn main() {
    std::process::exit(robin_forge::cli::run(std::env::args_os()));
}
