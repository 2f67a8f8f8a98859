fn main() {
    std::process::exit(l27::cli::run(std::env::args_os()));
}
