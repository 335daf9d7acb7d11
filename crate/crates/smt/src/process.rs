//! Driver for an external SMT-LIB2 solver process (`z3 -in`, `cvc5`, or the
//! bundled `bageq-smt` binary). One child process serves one verification
//! task; each check writes `(reset)` followed by a fresh script.

use std::io::Write;
use std::process::{Child, ChildStdin, Command, Stdio};
use std::sync::mpsc::{Receiver, RecvTimeoutError};
use std::time::{Duration, Instant};

#[derive(Debug, thiserror::Error)]
pub enum ProcessError {
    #[error("failed to spawn solver `{0}`: {1}")]
    Spawn(String, std::io::Error),
    #[error("solver pipe closed unexpectedly")]
    PipeClosed,
    #[error("solver protocol error: {0}")]
    Protocol(String),
}

pub struct SolverProcess {
    argv: Vec<String>,
    child: Child,
    stdin: ChildStdin,
    lines: Receiver<std::io::Result<String>>,
    poisoned: bool,
}

impl SolverProcess {
    pub fn spawn(argv: &[String]) -> Result<Self, ProcessError> {
        let (cmd, args) = argv
            .split_first()
            .ok_or_else(|| ProcessError::Protocol("empty solver command".to_string()))?;
        let mut child = Command::new(cmd)
            .args(args)
            .stdin(Stdio::piped())
            .stdout(Stdio::piped())
            .stderr(Stdio::null())
            .spawn()
            .map_err(|e| ProcessError::Spawn(argv.join(" "), e))?;
        let stdin = child.stdin.take().expect("stdin piped");
        let stdout = child.stdout.take().expect("stdout piped");
        let (tx, rx) = std::sync::mpsc::channel();
        std::thread::spawn(move || {
            use std::io::BufRead;
            let reader = std::io::BufReader::new(stdout);
            for line in reader.lines() {
                let stop = line.is_err();
                if tx.send(line).is_err() || stop {
                    break;
                }
            }
        });
        Ok(SolverProcess {
            argv: argv.to_vec(),
            child,
            stdin,
            lines: rx,
            poisoned: false,
        })
    }

    pub fn argv(&self) -> &[String] {
        &self.argv
    }

    pub fn is_poisoned(&self) -> bool {
        self.poisoned
    }

    pub fn send(&mut self, text: &str) -> Result<(), ProcessError> {
        self.stdin
            .write_all(text.as_bytes())
            .and_then(|_| self.stdin.flush())
            .map_err(|_| {
                self.poisoned = true;
                ProcessError::PipeClosed
            })
    }

    fn read_line(&mut self, deadline: Instant) -> Result<Option<String>, ProcessError> {
        loop {
            let now = Instant::now();
            if now >= deadline {
                return Ok(None);
            }
            match self.lines.recv_timeout(deadline - now) {
                Ok(Ok(line)) => {
                    let trimmed = line.trim();
                    if trimmed.is_empty() {
                        continue;
                    }
                    return Ok(Some(trimmed.to_string()));
                }
                Ok(Err(_)) | Err(RecvTimeoutError::Disconnected) => {
                    self.poisoned = true;
                    return Err(ProcessError::PipeClosed);
                }
                Err(RecvTimeoutError::Timeout) => return Ok(None),
            }
        }
    }

    /// Reads one status word (`sat`/`unsat`/`unknown`); `None` on deadline.
    pub fn read_status(&mut self, deadline: Instant) -> Result<Option<String>, ProcessError> {
        match self.read_line(deadline)? {
            None => {
                self.poisoned = true; // child may still be busy computing
                Ok(None)
            }
            Some(line) => {
                if line.starts_with("(error") {
                    return Err(ProcessError::Protocol(line));
                }
                Ok(Some(line))
            }
        }
    }

    /// Reads one balanced s-expression, possibly spanning lines.
    pub fn read_sexpr(&mut self, deadline: Instant) -> Result<Option<String>, ProcessError> {
        let mut buf = String::new();
        let mut depth: i64 = 0;
        loop {
            let Some(line) = self.read_line(deadline)? else {
                self.poisoned = true;
                return Ok(None);
            };
            for ch in line.chars() {
                match ch {
                    '(' => depth += 1,
                    ')' => depth -= 1,
                    _ => {}
                }
            }
            buf.push_str(&line);
            buf.push('\n');
            if depth <= 0 {
                return Ok(Some(buf));
            }
        }
    }

    pub fn kill(&mut self) {
        let _ = self.child.kill();
        let _ = self.child.wait();
        self.poisoned = true;
    }
}

impl Drop for SolverProcess {
    fn drop(&mut self) {
        let _ = self.send("(exit)\n");
        std::thread::sleep(Duration::from_millis(10));
        let _ = self.child.kill();
        let _ = self.child.wait();
    }
}

/// Splits a solver command line on whitespace; no shell quoting.
pub fn split_command(cmd: &str) -> Vec<String> {
    cmd.split_whitespace().map(|s| s.to_string()).collect()
}

/// Whether the command's executable can be spawned at all.
pub fn command_available(cmd: &str) -> bool {
    let argv = split_command(cmd);
    let Some(bin) = argv.first() else {
        return false;
    };
    Command::new(bin)
        .arg("--version")
        .stdin(Stdio::null())
        .stdout(Stdio::null())
        .stderr(Stdio::null())
        .spawn()
        .map(|mut c| {
            let _ = c.kill();
            let _ = c.wait();
            true
        })
        .unwrap_or(false)
}
