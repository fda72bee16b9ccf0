fn main() {
    std::process::exit(hde::cli::main());
}
