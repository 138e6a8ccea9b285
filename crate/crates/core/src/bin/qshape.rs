fn main() {
    std::process::exit(qshape::cli::main_from_env());
}
