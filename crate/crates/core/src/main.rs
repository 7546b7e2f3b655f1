fn main() {
    std::process::exit(medial_recon::cli::run(std::env::args_os()));
}
