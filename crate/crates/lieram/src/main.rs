fn main() {
    std::process::exit(lieram::cli::run(std::env::args_os()));
}
