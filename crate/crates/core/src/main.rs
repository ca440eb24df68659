fn main() {
    std::process::exit(cobloop::cli::run(std::env::args_os()));
}
