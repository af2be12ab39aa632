//! Golden transcript of command-line sessions.
//!
//! Each case is a `$ ` line with the arguments, then the expected standard
//! output followed by standard error, then `[exit N]`.

#![allow(dead_code)]

use tambara::cli::{self, RunOutput};

pub const GOLDEN: &str = include_str!("../golden/cli.txt");

pub struct Case {
    pub command: String,
    pub expected: String,
    pub code: i32,
}

pub fn cases() -> Vec<Case> {
    let mut out = Vec::new();
    let mut current: Option<(String, String)> = None;
    for line in GOLDEN.lines() {
        if let Some(cmd) = line.strip_prefix("$ ") {
            assert!(current.is_none(), "unterminated case before {cmd}");
            current = Some((cmd.to_string(), String::new()));
        } else if let Some(code) = line.strip_prefix("[exit ").and_then(|s| s.strip_suffix(']')) {
            let (command, expected) = current.take().expect("[exit] without a command");
            out.push(Case { command, expected, code: code.parse().expect("exit code") });
        } else if let Some((_, text)) = current.as_mut() {
            text.push_str(line);
            text.push('\n');
        }
    }
    assert!(current.is_none(), "unterminated case at end of transcript");
    out
}

pub fn run_line(command: &str) -> RunOutput {
    let args = shlex::split(command).expect("balanced quotes");
    cli::run(std::iter::once("tambara".to_string()).chain(args), &mut std::io::empty())
}

/// Renders a run the way the transcript records it.
pub fn transcript(command: &str, out: &RunOutput) -> String {
    format!("$ {command}\n{}{}[exit {}]\n", out.stdout, out.stderr, out.code)
}
