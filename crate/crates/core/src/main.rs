fn main() {
    std::process::exit(mipcheck::cli::run(std::env::args_os()));
}
