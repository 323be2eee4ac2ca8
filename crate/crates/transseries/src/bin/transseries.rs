use std::io::{self, BufRead, IsTerminal, Write};
use std::path::PathBuf;
use std::process::ExitCode;
use std::thread;

use clap::Parser;
use transseries::cli::{Options, Report, Session};

/// Exact transseries expansions, distinguished solutions and zero tests.
#[derive(Parser, Debug)]
#[command(version)]
struct Args {
    /// Exponent bound for printed solution expansions.
    #[arg(long, default_value_t = 5)]
    order: u32,
    /// Log the steps of every zero test.
    #[arg(long)]
    trace: bool,
    /// Print monomials as exponent vectors.
    #[arg(long)]
    raw: bool,
    /// Exit with status 2 when a zero test answers false.
    #[arg(long)]
    assert_zero: bool,
    /// Run a script file instead of reading statements from stdin.
    #[arg(long, value_name = "FILE")]
    script: Option<PathBuf>,
}

#[derive(Default)]
struct Status {
    diagnostics: bool,
    nonzero: bool,
}

impl Status {
    fn absorb(&mut self, report: Report) {
        let mut stdout = io::stdout().lock();
        for line in &report.lines {
            let _ = writeln!(stdout, "{line}");
        }
        let _ = stdout.flush();
        for d in &report.diagnostics {
            eprintln!("{d}");
        }
        self.diagnostics |= !report.diagnostics.is_empty();
        self.nonzero |= report.nonzero;
    }

    fn code(&self, assert_zero: bool) -> u8 {
        if self.diagnostics {
            1
        } else if assert_zero && self.nonzero {
            2
        } else {
            0
        }
    }
}

fn run(args: Args) -> u8 {
    let options = Options { order: args.order, trace: args.trace, raw: args.raw };
    let mut session = Session::new(options);
    let mut status = Status::default();
    if let Some(path) = &args.script {
        match std::fs::read_to_string(path) {
            Ok(src) => status.absorb(session.run(&src)),
            Err(e) => {
                eprintln!("{}: {e}", path.display());
                return 1;
            }
        }
        return status.code(args.assert_zero);
    }
    let stdin = io::stdin();
    let interactive = stdin.is_terminal();
    let mut pending = String::new();
    loop {
        if interactive {
            eprint!("{}", if pending.is_empty() { "> " } else { ". " });
        }
        let mut line = String::new();
        match stdin.lock().read_line(&mut line) {
            Ok(0) => break,
            Ok(_) => {}
            Err(e) => {
                eprintln!("stdin: {e}");
                return 1;
            }
        }
        pending.push_str(&line);
        if pending.trim_end().ends_with(';') || pending.trim().is_empty() {
            status.absorb(session.run(&std::mem::take(&mut pending)));
        }
    }
    if !pending.trim().is_empty() {
        status.absorb(session.run(&pending));
    }
    status.code(args.assert_zero)
}

fn main() -> ExitCode {
    let args = Args::parse();
    let worker = thread::Builder::new().stack_size(256 << 20).spawn(move || run(args));
    match worker.map(|h| h.join()) {
        Ok(Ok(code)) => ExitCode::from(code),
        _ => ExitCode::from(1),
    }
}
