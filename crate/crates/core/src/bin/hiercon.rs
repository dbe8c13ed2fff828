fn main() {
    std::process::exit(hiercon::cli::run(std::env::args_os()));
}
