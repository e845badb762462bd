fn main() {
    std::process::exit(tmslab_cli::run(std::env::args_os()));
}
