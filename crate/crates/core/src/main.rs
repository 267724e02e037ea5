fn main() {
    std::process::exit(netexp::cli::run(std::env::args_os()));
}
