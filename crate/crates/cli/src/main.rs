fn main() {
    std::process::exit(masep_cli::run(std::env::args_os()));
}
