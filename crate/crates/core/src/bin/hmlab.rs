fn main() {
    std::process::exit(hmlab::cli::run(std::env::args_os()));
}
