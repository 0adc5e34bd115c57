fn main() {
    std::process::exit(paircorr_cli::run(std::env::args_os().collect()));
}
