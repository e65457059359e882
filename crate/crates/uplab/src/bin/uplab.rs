fn main() {
    std::process::exit(uplab::cli::main());
}
