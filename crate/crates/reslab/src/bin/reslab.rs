fn main() {
    std::process::exit(reslab::cli::run(std::env::args_os()));
}
