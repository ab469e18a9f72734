fn main() {
    std::process::exit(tanglekit_cli::main_with_args(std::env::args_os()));
}
