fn main() {
    std::process::exit(thinstrip::cli::main());
}
