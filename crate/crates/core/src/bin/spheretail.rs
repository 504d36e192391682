fn main() {
    std::process::exit(spheretail::cli::run(std::env::args_os()));
}
