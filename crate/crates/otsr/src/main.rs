fn main() {
    std::process::exit(otsr::cli::run());
}
