fn main() {
    std::process::exit(pfml::cli::run(std::env::args_os()));
}
