fn main() {
    std::process::exit(ier_spectra::cli::run_from(std::env::args_os()));
}
