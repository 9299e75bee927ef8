fn main() {
    std::process::exit(kummer_ag::cli::run(std::env::args_os()));
}
