fn main() {
    clique_dynamics::cli::main();
}
