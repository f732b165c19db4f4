fn main() {
    std::process::exit(cardimax_cli::run(std::env::args_os()));
}
