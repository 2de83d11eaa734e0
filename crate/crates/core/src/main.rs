fn main() {
    std::process::exit(okounkov_lab::cli::main_with_args(std::env::args_os()));
}
