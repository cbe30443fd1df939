fn main() {
    std::process::exit(annulus_cluster::cli::run());
}
