fn main() {
    std::process::exit(mixzone::cli::run(std::env::args_os()));
}
