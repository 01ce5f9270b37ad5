fn main() {
    std::process::exit(walk_oracle::cli::main());
}
