fn main() {
    std::process::exit(cosserat_cli::run(std::env::args_os()));
}
