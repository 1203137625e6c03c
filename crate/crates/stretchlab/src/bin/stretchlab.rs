fn main() {
    std::process::exit(stretchlab::cli::run(std::env::args_os()));
}
