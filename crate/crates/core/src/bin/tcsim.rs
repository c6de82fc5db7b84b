fn main() {
    std::process::exit(tavis_cummings::cli::main_with_args(std::env::args_os()));
}
