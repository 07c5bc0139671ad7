use std::io::Write;

use gradval_cli::commands::execute;

fn main() {
    let out = execute(std::env::args_os());
    print!("{}", out.stdout);
    eprint!("{}", out.stderr);
    let _ = std::io::stdout().flush();
    std::process::exit(out.exit);
}
