fn main() {
    std::process::exit(avgfid::cli::main_with_args(std::env::args_os()));
}
