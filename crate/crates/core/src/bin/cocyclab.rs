fn main() {
    std::process::exit(cocyclab::cli::main());
}
