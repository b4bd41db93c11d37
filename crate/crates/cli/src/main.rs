fn main() {
    std::process::exit(hlgf_cli::run(std::env::args_os()));
}
