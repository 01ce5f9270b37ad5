//! Drive the command line in-process: a small probe-scaling bench.

fn main() {
    let code = walk_oracle::cli::run([
        "walk-oracle",
        "--seed",
        "1",
        "bench",
        "--sizes",
        "256..2048",
        "--trials",
        "5",
    ]);
    std::process::exit(code);
}
