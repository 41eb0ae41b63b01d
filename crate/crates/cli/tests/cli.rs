use std::io::Write as _;
use std::process::{Command, Output, Stdio};

fn run(args: &[&str], stdin: &str) -> Output {
    let mut child = Command::new(env!("CARGO_BIN_EXE_dfvs-reduce"))
        .args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .unwrap();
    child.stdin.take().unwrap().write_all(stdin.as_bytes()).unwrap();
    child.wait_with_output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

const TRIANGLE_WITH_LOOP: &str = "a b\nb c\nc a\nb b\n";

#[test]
fn reduce_prints_kernel_forced_and_trace() {
    let o = run(&["reduce"], TRIANGLE_WITH_LOOP);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(text.starts_with("# kernel\n"), "{text}");
    assert!(text.contains("forced: b\n"), "{text}");
    assert!(text.contains("LOOP(b)"), "{text}");
}

#[test]
fn stdin_dash_and_file_agree() {
    let dir = std::env::temp_dir().join(format!("dfvs-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("g.txt");
    std::fs::write(&path, TRIANGLE_WITH_LOOP).unwrap();
    let from_file = run(&["solve", path.to_str().unwrap()], "");
    let from_dash = run(&["solve", "-"], TRIANGLE_WITH_LOOP);
    let from_stdin = run(&["solve"], TRIANGLE_WITH_LOOP);
    assert_eq!(stdout(&from_file), stdout(&from_dash));
    assert_eq!(stdout(&from_file), stdout(&from_stdin));
    assert_eq!(stdout(&from_file), "mfvs: b\nsize: 1\n");
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn exit_codes() {
    assert_eq!(run(&["reduce"], "a b c d\n").status.code(), Some(2));
    assert_eq!(run(&["reduce", "--bogus"], "").status.code(), Some(1));
    assert_eq!(run(&["reduce", "--rules", "NOPE"], "a b\n").status.code(), Some(1));
    assert_eq!(run(&["solve", "/nonexistent/graph"], "").status.code(), Some(1));
    assert_eq!(run(&["check", "--fvs", "a"], "a b\nb a\n").status.code(), Some(0));
    assert_eq!(run(&["check", "--fvs", ""], "a b\nb a\n").status.code(), Some(4));
    assert_eq!(run(&["--help"], "").status.code(), Some(0));
}

#[test]
fn solve_cap_exits_three() {
    // LOOP alone leaves a complete loop-free digraph untouched, and a
    // zero-vertex cap refuses to brute-force it.
    let g = run(&["gen", "--n", "6", "--p", "1.0", "--seed", "1"], "");
    let o = run(&["solve", "--cap", "0", "--rules", "LOOP"], &stdout(&g));
    assert_eq!(o.status.code(), Some(3), "{}", String::from_utf8_lossy(&o.stderr));
}

#[test]
fn confluence_verdicts() {
    let dome = stdout(&run(&["counterexample", "dome"], ""));
    let all = run(&["confluence", "--rules", "all"], &dome);
    assert_eq!(all.status.code(), Some(4));
    let confluent = run(&["confluence", "--rules", "confluent"], &dome);
    assert_eq!(confluent.status.code(), Some(0));
    let capped = run(&["confluence", "--rules", "all", "--cap", "1"], &dome);
    assert_eq!(capped.status.code(), Some(3));
    let sampled = run(&["confluence", "--mode", "sampled", "--trials", "0"], &dome);
    assert_eq!(sampled.status.code(), Some(1));
}

#[test]
fn seeded_commands_are_byte_identical() {
    let g = stdout(&run(&["gen", "--n", "9", "--p", "0.3", "--seed", "42", "--loops"], ""));
    assert_eq!(g, stdout(&run(&["gen", "--n", "9", "--p", "0.3", "--seed", "42", "--loops"], "")));
    for args in [
        &["reduce", "--strategy", "random", "--seed", "7"][..],
        &["confluence", "--mode", "sampled", "--trials", "16", "--seed", "7"][..],
    ] {
        let a = run(args, &g);
        let b = run(args, &g);
        assert_eq!(a.stdout, b.stdout);
        assert_eq!(a.status.code(), b.status.code());
    }
}

#[test]
fn kernel_output_parses_back() {
    let g = stdout(&run(&["gen", "--n", "8", "--p", "0.35", "--seed", "3"], ""));
    let reduced = stdout(&run(&["reduce"], &g));
    let kernel: String = reduced
        .lines()
        .skip(1)
        .take_while(|l| !l.starts_with("forced:"))
        .map(|l| format!("{l}\n"))
        .collect();
    let again = run(&["reduce"], &kernel);
    assert_eq!(again.status.code(), Some(0));
    let text = stdout(&again);
    assert!(text.starts_with(&format!("# kernel\n{kernel}")), "{text}");
}
