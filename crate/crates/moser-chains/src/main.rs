use std::io;

fn main() {
    let mut stdin = io::stdin().lock();
    let mut stdout = io::stdout().lock();
    let mut stderr = io::stderr().lock();
    let mut cli_io = moser_chains::cli::Io {
        stdin: &mut stdin,
        stdout: &mut stdout,
        stderr: &mut stderr,
        env_order: std::env::var(moser_chains::cli::ORDER_ENV).ok(),
    };
    let code = moser_chains::cli::run(std::env::args_os(), &mut cli_io);
    std::process::exit(code);
}
