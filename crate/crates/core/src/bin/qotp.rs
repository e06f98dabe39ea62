fn main() {
    std::process::exit(qotp::cli::main_from_env());
}
