fn main() {
    std::process::exit(qfibound::cli::run(std::env::args_os()));
}
