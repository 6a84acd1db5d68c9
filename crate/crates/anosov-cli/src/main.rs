fn main() {
    anosov_cli::configure_threads();
    let code = anosov_cli::run(std::env::args_os(), &mut std::io::stdout(), &mut std::io::stderr());
    std::process::exit(code);
}
