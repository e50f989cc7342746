fn main() {
    std::process::exit(heartml::cli::main_with_args(std::env::args_os()));
}
