fn main() {
    std::process::exit(nia_overapprox::cli::main());
}
