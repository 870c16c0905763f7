use std::io::Write;

fn main() {
    let stdout = std::io::stdout();
    let mut out = stdout.lock();
    let mut code = nbparse_cli::run(std::env::args_os(), &mut out);
    if out.flush().is_err() && code == 0 {
        code = 1;
    }
    std::process::exit(code);
}
