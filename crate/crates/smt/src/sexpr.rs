//! Minimal s-expression reader for the SMT-LIB2 surface this crate speaks.

use std::fmt;

#[derive(Clone, PartialEq, Eq, Debug)]
pub enum Sexpr {
    Atom(String),
    List(Vec<Sexpr>),
}

impl Sexpr {
    pub fn atom(&self) -> Option<&str> {
        match self {
            Sexpr::Atom(s) => Some(s),
            Sexpr::List(_) => None,
        }
    }

    pub fn list(&self) -> Option<&[Sexpr]> {
        match self {
            Sexpr::List(items) => Some(items),
            Sexpr::Atom(_) => None,
        }
    }
}

impl fmt::Display for Sexpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Sexpr::Atom(s) => write!(f, "{s}"),
            Sexpr::List(items) => {
                write!(f, "(")?;
                for (i, it) in items.iter().enumerate() {
                    if i > 0 {
                        write!(f, " ")?;
                    }
                    write!(f, "{it}")?;
                }
                write!(f, ")")
            }
        }
    }
}

#[derive(Debug, thiserror::Error)]
pub enum SexprError {
    #[error("unexpected end of input")]
    Eof,
    #[error("unbalanced ')' at byte {0}")]
    Unbalanced(usize),
}

pub struct Reader<'a> {
    input: &'a [u8],
    pos: usize,
}

impl<'a> Reader<'a> {
    pub fn new(input: &'a str) -> Self {
        Reader {
            input: input.as_bytes(),
            pos: 0,
        }
    }

    fn skip_trivia(&mut self) {
        while self.pos < self.input.len() {
            match self.input[self.pos] {
                b' ' | b'\t' | b'\r' | b'\n' => self.pos += 1,
                b';' => {
                    while self.pos < self.input.len() && self.input[self.pos] != b'\n' {
                        self.pos += 1;
                    }
                }
                _ => break,
            }
        }
    }

    pub fn at_end(&mut self) -> bool {
        self.skip_trivia();
        self.pos >= self.input.len()
    }

    /// Reads the next s-expression, or `None` at end of input.
    pub fn next(&mut self) -> Result<Option<Sexpr>, SexprError> {
        self.skip_trivia();
        if self.pos >= self.input.len() {
            return Ok(None);
        }
        match self.input[self.pos] {
            b'(' => {
                self.pos += 1;
                let mut items = Vec::new();
                loop {
                    self.skip_trivia();
                    if self.pos >= self.input.len() {
                        return Err(SexprError::Eof);
                    }
                    if self.input[self.pos] == b')' {
                        self.pos += 1;
                        return Ok(Some(Sexpr::List(items)));
                    }
                    match self.next()? {
                        Some(e) => items.push(e),
                        None => return Err(SexprError::Eof),
                    }
                }
            }
            b')' => Err(SexprError::Unbalanced(self.pos)),
            b'|' => {
                // quoted symbol
                let start = self.pos + 1;
                let mut end = start;
                while end < self.input.len() && self.input[end] != b'|' {
                    end += 1;
                }
                if end >= self.input.len() {
                    return Err(SexprError::Eof);
                }
                self.pos = end + 1;
                Ok(Some(Sexpr::Atom(
                    String::from_utf8_lossy(&self.input[start..end]).into_owned(),
                )))
            }
            b'"' => {
                let start = self.pos;
                self.pos += 1;
                while self.pos < self.input.len() && self.input[self.pos] != b'"' {
                    self.pos += 1;
                }
                if self.pos >= self.input.len() {
                    return Err(SexprError::Eof);
                }
                self.pos += 1;
                Ok(Some(Sexpr::Atom(
                    String::from_utf8_lossy(&self.input[start..self.pos]).into_owned(),
                )))
            }
            _ => {
                let start = self.pos;
                while self.pos < self.input.len()
                    && !matches!(
                        self.input[self.pos],
                        b' ' | b'\t' | b'\r' | b'\n' | b'(' | b')' | b';'
                    )
                {
                    self.pos += 1;
                }
                Ok(Some(Sexpr::Atom(
                    String::from_utf8_lossy(&self.input[start..self.pos]).into_owned(),
                )))
            }
        }
    }
}

/// Parses every s-expression in `input`.
pub fn parse_all(input: &str) -> Result<Vec<Sexpr>, SexprError> {
    let mut reader = Reader::new(input);
    let mut out = Vec::new();
    while let Some(e) = reader.next()? {
        out.push(e);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_nested_lists() {
        let all = parse_all("(declare-fun x0 () Int)\n(assert (> x0 3)) ; comment").unwrap();
        assert_eq!(all.len(), 2);
        assert_eq!(all[0].list().unwrap()[1].atom(), Some("x0"));
    }

    #[test]
    fn reports_unbalanced() {
        assert!(parse_all("(assert (> x 3)").is_err());
        assert!(parse_all(")").is_err());
    }
}
