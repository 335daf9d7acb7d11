//! `bageq-smt`: an SMT-LIB2 solver on stdin/stdout, backed by the built-in
//! engine. Usable anywhere an SMT-LIB2 process is expected, e.g.
//! `bageq --solver bageq-smt`.

use std::io::{BufRead, Write};

use bageq_smt::sexpr::Reader;
use bageq_smt::smtlib::Interpreter;

fn main() {
    let stdin = std::io::stdin();
    let mut stdout = std::io::stdout();
    let mut interp = Interpreter::new();
    let mut pending = String::new();

    for line in stdin.lock().lines() {
        let Ok(line) = line else { break };
        pending.push_str(&line);
        pending.push('\n');
        if !balanced(&pending) {
            continue;
        }
        let mut reader = Reader::new(&pending);
        let mut exit = false;
        loop {
            match reader.next() {
                Ok(Some(cmd)) => {
                    let is_exit = cmd
                        .list()
                        .and_then(|l| l.first())
                        .and_then(|h| h.atom())
                        .map(|h| h == "exit")
                        .unwrap_or(false);
                    match interp.eval(&cmd) {
                        Ok(Some(resp)) => {
                            let _ = writeln!(stdout, "{resp}");
                        }
                        Ok(None) => {}
                        Err(e) => {
                            let _ = writeln!(stdout, "(error \"{e}\")");
                        }
                    }
                    if is_exit {
                        exit = true;
                        break;
                    }
                }
                Ok(None) => break,
                Err(e) => {
                    let _ = writeln!(stdout, "(error \"{e}\")");
                    break;
                }
            }
        }
        let _ = stdout.flush();
        pending.clear();
        if exit {
            return;
        }
    }
}

fn balanced(text: &str) -> bool {
    let mut depth: i64 = 0;
    for ch in text.chars() {
        match ch {
            '(' => depth += 1,
            ')' => depth -= 1,
            _ => {}
        }
    }
    depth <= 0
}
