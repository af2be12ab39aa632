mod common;

use common::{cases, run_line, transcript};

#[test]
fn transcript_matches() {
    let mut mismatches = Vec::new();
    for case in cases() {
        let out = run_line(&case.command);
        let got = transcript(&case.command, &out);
        let want = format!("$ {}\n{}[exit {}]\n", case.command, case.expected, case.code);
        if got != want {
            mismatches.push(format!("--- expected\n{want}--- got\n{got}"));
        }
    }
    assert!(mismatches.is_empty(), "{}", mismatches.join("\n"));
}

#[test]
fn spec_examples() {
    let tom = run_line("--format json tom C(2)");
    let v: serde_json::Value = serde_json::from_str(&tom.stdout).unwrap();
    assert_eq!(v["rows"], serde_json::json!([[2, 0], [1, 1]]));

    let mul = run_line(r#"witt mul C(2) "(a0,a1)" "(b0,b1)" --symbolic"#);
    assert_eq!(mul.code, 0);
    assert_eq!(mul.stdout, "(a0*b0, a0^2*b1 + a1*b0^2 + 2*a1*b1)\n");

    assert_eq!(run_line("witt verify iso S(3)").code, 0);
    assert_eq!(run_line("tom C(2/").code, 2);
}

#[test]
fn batch_matches_individual_runs() {
    let script: String = cases().iter().filter(|c| !c.command.starts_with("check")).map(|c| c.command.clone() + "\n").collect();
    let out = tambara::cli::run(["tambara", "batch"], &mut script.as_bytes());
    let mut stdout = String::new();
    let mut code = 0;
    for c in cases().iter().filter(|c| !c.command.starts_with("check")) {
        let single = run_line(&c.command);
        stdout.push_str(&single.stdout);
        code = code.max(single.code);
    }
    assert_eq!(out.stdout, stdout);
    assert_eq!(out.code, code);
}

#[test]
fn help_exits_zero() {
    let out = run_line("--help");
    assert_eq!(out.code, 0);
    assert!(out.stdout.contains("Usage: tambara"));
    assert_eq!(run_line("witt").code, 2);
}
