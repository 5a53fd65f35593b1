fn main() {
    std::process::exit(qhborel::cli::run(std::env::args_os()));
}
