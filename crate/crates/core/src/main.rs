fn main() {
    std::process::exit(hermsurf::cli::main());
}
