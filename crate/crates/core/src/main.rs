fn main() {
    std::process::exit(sym2mom::cli::main_with_args(std::env::args_os()));
}
