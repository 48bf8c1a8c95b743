fn main() {
    std::process::exit(o2basis::cli::main());
}
