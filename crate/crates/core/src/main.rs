fn main() {
    std::process::exit(multibell::cli::run(std::env::args_os()));
}
