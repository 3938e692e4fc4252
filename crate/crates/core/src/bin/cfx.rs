fn main() {
    std::process::exit(cfx::cli::main_with_args(std::env::args_os()));
}
