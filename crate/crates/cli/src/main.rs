fn main() {
    std::process::exit(finitopos_cli::commands::run(std::env::args_os()));
}
