fn main() {
    std::process::exit(srvreg::cli::main_with_args(std::env::args_os()));
}
