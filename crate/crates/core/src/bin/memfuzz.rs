fn main() {
    std::process::exit(memfuzz::cli::run(std::env::args_os()));
}
