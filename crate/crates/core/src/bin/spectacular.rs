fn main() {
    std::process::exit(spectacular::cli::run(std::env::args_os()));
}
