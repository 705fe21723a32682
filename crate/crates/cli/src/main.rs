fn main() {
    std::process::exit(topospec::main_with_args(std::env::args_os()));
}
