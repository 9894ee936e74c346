fn main() {
    std::process::exit(hardybox_cli::run(std::env::args_os()));
}
