fn main() {
    std::process::exit(hyperg_gauss::cli::run(std::env::args_os()));
}
