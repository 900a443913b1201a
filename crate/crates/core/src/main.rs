fn main() {
    std::process::exit(periodic_waves::cli::run(std::env::args()));
}
