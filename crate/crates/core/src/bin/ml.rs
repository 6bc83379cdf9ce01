fn main() {
    std::process::exit(mlattice::cli::run(std::env::args_os()));
}
