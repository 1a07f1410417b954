fn main() {
    std::process::exit(chirow::cli::main_with(std::env::args_os()));
}
