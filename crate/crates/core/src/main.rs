fn main() {
    let (code, text) = pealab::cli::run(std::env::args_os());
    print!("{text}");
    std::process::exit(code);
}
