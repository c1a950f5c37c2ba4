fn main() {
    std::process::exit(sigma_mpc::cli::run(std::env::args().collect()));
}
