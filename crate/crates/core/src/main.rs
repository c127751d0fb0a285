fn main() {
    std::process::exit(bounded_percept::cli::main_with_args(std::env::args_os()));
}
