//! Running the bundled scripts through the interpreter.

use transseries::cli::{Options, Session};

const SCRIPTS: [(&str, &str); 4] = [
    ("quasilinear", include_str!("scripts/quasilinear.ts")),
    ("lambert", include_str!("scripts/lambert.ts")),
    ("controls", include_str!("scripts/controls.ts")),
    ("exp_log", include_str!("scripts/exp_log.ts")),
];

fn main() {
    for (name, src) in SCRIPTS {
        println!("== {name}");
        let report = Session::new(Options::default()).run(src);
        for line in &report.lines {
            println!("{line}");
        }
        for d in &report.diagnostics {
            println!("error: {d}");
        }
    }
}
