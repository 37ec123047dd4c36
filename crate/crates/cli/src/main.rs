use std::io;

fn main() {
    let (stdout, stderr) = (io::stdout(), io::stderr());
    let outcome = opcert_cli::run(std::env::args_os(), &mut stdout.lock(), &mut stderr.lock());
    std::process::exit(outcome.code.0);
}
