fn main() {
    std::process::exit(liouville4::cli::run(std::env::args().collect()));
}
