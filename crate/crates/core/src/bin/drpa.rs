fn main() {
    std::process::exit(drpa::cli::main_with_args(std::env::args_os()));
}
