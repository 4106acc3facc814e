fn main() {
    std::process::exit(qsverify::cli::main_with_args(std::env::args_os()));
}
