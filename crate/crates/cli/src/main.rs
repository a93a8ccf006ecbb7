fn main() {
    std::process::exit(qcircle_cli::run(std::env::args_os()));
}
