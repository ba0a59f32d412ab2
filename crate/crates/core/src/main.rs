fn main() {
    std::process::exit(frozen_spectral::cli::run(std::env::args_os()));
}
