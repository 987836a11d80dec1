//! S-expression reader for the `.qts` text format.
//!
//! Atoms may embed an infix rational-function literal such as `t/(1+t)`:
//! a parenthesized group with no whitespace inside that is glued to a
//! following non-delimiter character is read as part of one atom.

use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Sexp {
    Atom { text: String, line: usize, column: usize },
    List { items: Vec<Sexp>, line: usize, column: usize },
}

impl Sexp {
    pub fn position(&self) -> (usize, usize) {
        match self {
            Sexp::Atom { line, column, .. } | Sexp::List { line, column, .. } => (*line, *column),
        }
    }

    pub fn as_atom(&self) -> Option<&str> {
        match self {
            Sexp::Atom { text, .. } => Some(text),
            Sexp::List { .. } => None,
        }
    }

    pub fn as_list(&self) -> Option<&[Sexp]> {
        match self {
            Sexp::List { items, .. } => Some(items),
            Sexp::Atom { .. } => None,
        }
    }

    /// The head symbol of a non-empty list.
    pub fn head(&self) -> Option<&str> {
        self.as_list()?.first()?.as_atom()
    }

    pub fn error(&self, message: impl Into<String>) -> Error {
        let (line, column) = self.position();
        Error::parse(line, column, message)
    }
}

impl std::fmt::Display for Sexp {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Sexp::Atom { text, .. } => f.write_str(text),
            Sexp::List { items, .. } => {
                f.write_str("(")?;
                for (i, it) in items.iter().enumerate() {
                    if i > 0 {
                        f.write_str(" ")?;
                    }
                    write!(f, "{it}")?;
                }
                f.write_str(")")
            }
        }
    }
}

struct Reader {
    chars: Vec<char>,
    pos: usize,
    line: usize,
    column: usize,
}

impl Reader {
    fn new(text: &str) -> Self {
        Reader {
            chars: text.chars().collect(),
            pos: 0,
            line: 1,
            column: 1,
        }
    }

    fn bump(&mut self) -> char {
        let c = self.chars[self.pos];
        self.pos += 1;
        if c == '\n' {
            self.line += 1;
            self.column = 1;
        } else {
            self.column += 1;
        }
        c
    }

    fn skip_trivia(&mut self) {
        while self.pos < self.chars.len() {
            let c = self.chars[self.pos];
            if c.is_whitespace() {
                self.bump();
            } else if c == ';' {
                while self.pos < self.chars.len() && self.chars[self.pos] != '\n' {
                    self.bump();
                }
            } else {
                break;
            }
        }
    }

    fn err(&self, msg: impl Into<String>) -> Error {
        Error::parse(self.line, self.column, msg)
    }

    /// A `(` at `pos` opens a glued infix literal like `(1+t)/t`.
    fn glued_group_at(&self, start: usize) -> bool {
        let mut depth = 0usize;
        let mut i = start;
        while i < self.chars.len() {
            let c = self.chars[i];
            if c.is_whitespace() || c == ';' {
                return false;
            }
            if c == '(' {
                depth += 1;
            } else if c == ')' {
                depth -= 1;
                if depth == 0 {
                    return match self.chars.get(i + 1) {
                        Some(&n) => !(n.is_whitespace() || n == ')' || n == '(' || n == ';'),
                        None => false,
                    };
                }
            }
            i += 1;
        }
        false
    }

    fn read(&mut self) -> Result<Sexp> {
        self.skip_trivia();
        let (line, column) = (self.line, self.column);
        match self.chars.get(self.pos) {
            None => Err(self.err("unexpected end of input")),
            Some(')') => Err(self.err("unexpected `)`")),
            Some('(') if !self.glued_group_at(self.pos) => {
                self.bump();
                let mut items = Vec::new();
                loop {
                    self.skip_trivia();
                    match self.chars.get(self.pos) {
                        None => return Err(Error::parse(line, column, "unclosed `(`")),
                        Some(')') => {
                            self.bump();
                            return Ok(Sexp::List { items, line, column });
                        }
                        Some(_) => items.push(self.read()?),
                    }
                }
            }
            Some(_) => {
                let mut depth = 0usize;
                let mut text = String::new();
                while self.pos < self.chars.len() {
                    let c = self.chars[self.pos];
                    if depth == 0 && (c.is_whitespace() || c == ')' || c == ';') {
                        break;
                    }
                    if c == '(' {
                        depth += 1;
                    } else if c == ')' {
                        depth -= 1;
                    }
                    text.push(self.bump());
                }
                if depth != 0 {
                    return Err(Error::parse(line, column, "unbalanced parentheses in atom"));
                }
                Ok(Sexp::Atom { text, line, column })
            }
        }
    }
}

/// Read every top-level expression.
pub fn read_all(text: &str) -> Result<Vec<Sexp>> {
    let mut r = Reader::new(text);
    let mut out = Vec::new();
    loop {
        r.skip_trivia();
        if r.pos >= r.chars.len() {
            return Ok(out);
        }
        out.push(r.read()?);
    }
}

/// Read exactly one expression.
pub fn read_one(text: &str) -> Result<Sexp> {
    let mut r = Reader::new(text);
    let e = r.read()?;
    r.skip_trivia();
    if r.pos < r.chars.len() {
        return Err(r.err("trailing input after expression"));
    }
    Ok(e)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn glued_literals_stay_atoms() {
        let e = read_one("(lam t/(t+1) x)").unwrap();
        assert_eq!(e.as_list().unwrap()[1].as_atom(), Some("t/(t+1)"));
        let e = read_one("(lam (1+t)/t x)").unwrap();
        assert_eq!(e.as_list().unwrap()[1].as_atom(), Some("(1+t)/t"));
        let e = read_one("(lam (- t 100) one)").unwrap();
        assert_eq!(e.as_list().unwrap()[1].head(), Some("-"));
    }

    #[test]
    fn positions_and_errors() {
        let err = read_one("(and\n  (< x y)").unwrap_err();
        assert_eq!(err, Error::parse(1, 1, "unclosed `(`"));
        let err = read_one("(a) b").unwrap_err();
        assert!(matches!(err, Error::Parse { line: 1, column: 5, .. }));
        let e = read_one("; comment\n(x)").unwrap();
        assert_eq!(e.position(), (2, 1));
    }
}
