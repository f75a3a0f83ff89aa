fn main() {
    std::process::exit(fincat::cli::run(std::env::args().collect()));
}
