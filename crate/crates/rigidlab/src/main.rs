fn main() {
    std::process::exit(rigidlab::cli::run(std::env::args().collect()));
}
