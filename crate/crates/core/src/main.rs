fn main() {
    std::process::exit(quadlie::cli::main_with_args(std::env::args_os()));
}
