fn main() {
    std::process::exit(faceflow::cli::run(std::env::args_os()));
}
