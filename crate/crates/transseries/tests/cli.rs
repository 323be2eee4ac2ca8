use std::io::Write;
use std::path::Path;
use std::process::{Command, Output, Stdio};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_transseries"))
}

fn script(name: &str) -> String {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("examples/scripts").join(name).display().to_string()
}

fn with_stdin(mut cmd: Command, input: &str) -> Output {
    let mut child = cmd.stdin(Stdio::piped()).stdout(Stdio::piped()).stderr(Stdio::piped()).spawn().unwrap();
    child.stdin.take().unwrap().write_all(input.as_bytes()).unwrap();
    child.wait_with_output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

#[test]
fn script_runs_and_succeeds() {
    let out = bin().args(["--script", &script("quasilinear.ts")]).output().unwrap();
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).starts_with("U = x*exp(-2*x) + (1/2*x^2 - x)*exp(-3*x)"));
}

#[test]
fn order_flag_lengthens_expansions() {
    let out = bin().args(["--order", "3", "--script", &script("quasilinear.ts")]).output().unwrap();
    assert_eq!(stdout(&out).trim(), "U = x*exp(-2*x) + O(exp(-3*x))");
}

#[test]
fn assert_zero_exit_codes() {
    let ok = bin().args(["--assert-zero", "--script", &script("lambert.ts")]).output().unwrap();
    assert_eq!(ok.status.code(), Some(0));
    let nonzero = bin().args(["--assert-zero", "--script", &script("controls.ts")]).output().unwrap();
    assert_eq!(nonzero.status.code(), Some(2));
    let plain = bin().args(["--script", &script("controls.ts")]).output().unwrap();
    assert_eq!(plain.status.code(), Some(0));
}

#[test]
fn diagnostics_go_to_stderr_with_exit_1() {
    let out = with_stdin(bin(), "expand(1/(1 - 1/x), 2);\nlet y = (x + ;\n");
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(stdout(&out), "1 + x^-1 + O(x^-2)\n");
    assert!(String::from_utf8_lossy(&out.stderr).contains("1:14: expected an expression"));
}

#[test]
fn repl_keeps_state_across_lines() {
    let out = with_stdin(bin(), "let a = x^2;\nlet b = a*a;\nb\n");
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout(&out), "x^4\n");
}

#[test]
fn missing_script_is_a_diagnostic() {
    let out = bin().args(["--script", "/nonexistent/file.ts"]).output().unwrap();
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn raw_and_trace_flags() {
    let out = bin().args(["--raw", "--trace", "--script", &script("lambert.ts")]).output().unwrap();
    let text = stdout(&out);
    assert!(text.contains("step 6"));
    assert!(text.contains("b^"));
}
