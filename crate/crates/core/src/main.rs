fn main() {
    std::process::exit(milnor::cli::run());
}
