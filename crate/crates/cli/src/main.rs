fn main() {
    let argv: Vec<String> = std::env::args().collect();
    std::process::exit(corravg_cli::run(&argv));
}
