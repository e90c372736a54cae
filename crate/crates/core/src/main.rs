fn main() {
    std::process::exit(hazeopt::cli::run(std::env::args_os()));
}
