fn main() {
    std::process::exit(periodic_monopole::cli::main_with(std::env::args_os()));
}
