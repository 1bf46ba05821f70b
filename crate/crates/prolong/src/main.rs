fn main() {
    std::process::exit(prolong::run(std::env::args_os()));
}
