use std::io::{IsTerminal, Write};
use std::process::ExitCode;

use formalcalc_cli::{color_from_env, run_with, RunOptions};

fn main() -> ExitCode {
    let opts = RunOptions {
        color: color_from_env(std::io::stdout().is_terminal()),
    };
    let out = run_with(std::env::args_os(), opts);
    if let Some(doc) = &out.doc {
        let mut stdout = std::io::stdout().lock();
        // A closed pipe is not worth a panic.
        let _ = stdout.write_all(doc.payload.as_bytes());
        let _ = stdout.flush();
    }
    if !out.diagnostics.is_empty() {
        eprint!("{}", out.diagnostics);
    }
    ExitCode::from(out.code as u8)
}
