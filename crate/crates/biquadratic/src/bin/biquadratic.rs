fn main() {
    std::process::exit(biquadratic::cli::run(std::env::args_os()));
}
