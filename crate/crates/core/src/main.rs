fn main() {
    std::process::exit(unimodular_lab::cli::main_with(std::env::args_os()));
}
