use std::io::Write;
use std::process::ExitCode;

use ordrank_cli::{parse_args, run, USAGE};

fn main() -> ExitCode {
    let args: Vec<String> = std::env::args().skip(1).collect();
    if args.is_empty() || args.iter().any(|a| a == "--help" || a == "-h") {
        print!("{USAGE}");
        return ExitCode::from(if args.is_empty() { 2 } else { 0 });
    }
    let inv = match parse_args(&args) {
        Ok(inv) => inv,
        Err(e) => {
            let line = args.join(" ");
            eprintln!("{line}\n{}^\n{e}", " ".repeat(e.column - 1));
            return ExitCode::from(2);
        }
    };
    let outcome = run(&inv);
    eprint!("{}", outcome.prose);
    if !outcome.json.is_empty() {
        let written = match &inv.json {
            Some(path) => std::fs::write(path, &outcome.json),
            None => std::io::stdout().write_all(outcome.json.as_bytes()),
        };
        if let Err(e) = written {
            eprintln!("error: cannot write report: {e}");
            return ExitCode::from(2);
        }
    }
    ExitCode::from(outcome.exit_code as u8)
}
