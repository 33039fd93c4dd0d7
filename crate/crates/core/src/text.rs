//! Whitespace tokenizer shared by the plain-text file formats.

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("line {line}: {message}")]
pub struct ParseError {
    pub line: usize,
    pub message: String,
}

impl ParseError {
    pub fn new(line: usize, message: impl Into<String>) -> Self {
        Self {
            line,
            message: message.into(),
        }
    }
}

/// Tokens in reading order, each tagged with its 1-based line number.
/// Everything from `#` to the end of a line is ignored.
pub(crate) struct Tokens<'a> {
    toks: Vec<(usize, &'a str)>,
    pos: usize,
    last_line: usize,
}

impl<'a> Tokens<'a> {
    pub fn new(text: &'a str) -> Self {
        let mut toks = Vec::new();
        let mut last_line = 1;
        for (i, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("");
            for t in line.split_whitespace() {
                toks.push((i + 1, t));
            }
            last_line = i + 1;
        }
        Self {
            toks,
            pos: 0,
            last_line,
        }
    }

    pub fn peek(&self) -> Option<&'a str> {
        self.toks.get(self.pos).map(|t| t.1)
    }

    pub fn line(&self) -> usize {
        self.toks.get(self.pos).map(|t| t.0).unwrap_or(self.last_line)
    }

    pub fn next_token(&mut self, what: &str) -> Result<(usize, &'a str), ParseError> {
        let t = self
            .toks
            .get(self.pos)
            .copied()
            .ok_or_else(|| ParseError::new(self.last_line, format!("unexpected end of input, expected {what}")))?;
        self.pos += 1;
        Ok(t)
    }

    pub fn expect(&mut self, keyword: &str) -> Result<(), ParseError> {
        let (line, t) = self.next_token(&format!("`{keyword}`"))?;
        if t != keyword {
            return Err(ParseError::new(line, format!("expected `{keyword}`, found `{t}`")));
        }
        Ok(())
    }

    pub fn int(&mut self, what: &str) -> Result<i64, ParseError> {
        let (line, t) = self.next_token(what)?;
        t.parse::<i64>()
            .map_err(|_| ParseError::new(line, format!("expected {what}, found `{t}`")))
    }

    pub fn uint(&mut self, what: &str) -> Result<usize, ParseError> {
        let line = self.line();
        let v = self.int(what)?;
        usize::try_from(v).map_err(|_| ParseError::new(line, format!("{what} must be nonnegative, found {v}")))
    }

    /// Reads an `n`×`n` integer table in row-major order.
    pub fn table(&mut self, n: usize, what: &str) -> Result<Vec<Vec<i64>>, ParseError> {
        (0..n).map(|_| (0..n).map(|_| self.int(what)).collect()).collect()
    }

    pub fn finish(&self) -> Result<(), ParseError> {
        match self.toks.get(self.pos) {
            None => Ok(()),
            Some(&(line, t)) => Err(ParseError::new(line, format!("unexpected trailing token `{t}`"))),
        }
    }
}

pub(crate) fn write_table<T: std::fmt::Display>(out: &mut String, rows: impl IntoIterator<Item = Vec<T>>) {
    for row in rows {
        let cells: Vec<String> = row.iter().map(|v| v.to_string()).collect();
        out.push_str(&cells.join(" "));
        out.push('\n');
    }
}
