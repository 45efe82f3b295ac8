fn main() {
    std::process::exit(greyscale_contrast::cli::run(std::env::args_os()));
}
