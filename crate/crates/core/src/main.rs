use std::io;

fn main() {
    let stdin = io::stdin();
    let mut input = stdin.lock();
    let mut out = io::stdout().lock();
    let mut err = io::stderr().lock();
    let code = nhl::cli::run(
        std::env::args_os(),
        &mut nhl::cli::Io {
            input: &mut input,
            out: &mut out,
            err: &mut err,
        },
    );
    std::process::exit(code);
}
