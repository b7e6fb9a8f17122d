fn main() {
    std::process::exit(fdx_cli::run(std::env::args_os()));
}
