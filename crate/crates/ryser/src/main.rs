fn main() {
    std::process::exit(ryser::cli::run(std::env::args_os()));
}
