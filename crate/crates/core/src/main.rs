fn main() {
    std::process::exit(rwkit::cli::main_with(std::env::args_os()));
}
