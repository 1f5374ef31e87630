fn main() {
    let code = regionbound::cli::main_with_args(std::env::args_os());
    std::process::exit(code);
}
