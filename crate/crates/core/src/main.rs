fn main() {
    std::process::exit(levywalk::cli::run(std::env::args_os()));
}
