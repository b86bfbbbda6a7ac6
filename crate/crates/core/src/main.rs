fn main() {
    std::process::exit(regge_area::cli::run(std::env::args_os()));
}
