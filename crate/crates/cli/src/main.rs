fn main() {
    std::process::exit(shortcalc_cli::run(std::env::args_os()));
}
