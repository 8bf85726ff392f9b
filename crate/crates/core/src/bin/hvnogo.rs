fn main() {
    std::process::exit(hvnogo::cli::main_with_args(std::env::args_os()));
}
