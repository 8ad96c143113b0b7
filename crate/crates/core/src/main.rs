use std::io::Write;

fn main() {
    let out = pboxposs::cli::run_args(std::env::args_os(), std::io::stdin().lock());
    // a closed pipe is not worth a panic
    let _ = std::io::stdout().write_all(out.stdout.as_bytes());
    let _ = std::io::stderr().write_all(out.stderr.as_bytes());
    std::process::exit(out.code);
}
