//! Line tokenizer shared by the arena and automaton parsers.

use crate::error::Error;
use crate::rational::{parse_rational, Rational};

#[derive(Debug, Clone)]
pub(crate) struct Token<'a> {
    pub text: &'a str,
    pub column: usize,
}

#[derive(Debug, Clone)]
pub(crate) struct Line<'a> {
    pub number: usize,
    pub tokens: Vec<Token<'a>>,
}

impl<'a> Line<'a> {
    pub fn keyword(&self) -> &'a str {
        self.tokens[0].text
    }

    pub fn error(&self, index: usize, message: impl Into<String>) -> Error {
        let column = self
            .tokens
            .get(index)
            .map(|t| t.column)
            .unwrap_or_else(|| self.tokens.last().map(|t| t.column + t.text.len()).unwrap_or(1));
        Error::syntax(self.number, column, message)
    }

    /// Arguments after the keyword, with a trailing `#` comment removed.
    pub fn args(&self) -> &[Token<'a>] {
        let end = self.tokens[1..]
            .iter()
            .position(|t| t.text.starts_with('#'))
            .map(|p| p + 1)
            .unwrap_or(self.tokens.len());
        &self.tokens[1..end]
    }

    /// Exactly `n` arguments, ignoring a trailing comment.
    pub fn fixed_args(&self, n: usize) -> Result<&[Token<'a>], Error> {
        let rest = &self.tokens[1..];
        if rest.len() < n {
            return Err(self.error(rest.len() + 1, format!("`{}` expects {n} argument(s)", self.keyword())));
        }
        if let Some(extra) = rest.get(n) {
            if !extra.text.starts_with('#') {
                return Err(self.error(n + 1, format!("unexpected token `{}`", extra.text)));
            }
        }
        Ok(&rest[..n])
    }

    pub fn rational(&self, index: usize) -> Result<Rational, Error> {
        let tok = &self.tokens[index];
        parse_rational(tok.text).map_err(|m| Error::syntax(self.number, tok.column, m))
    }
}

/// Splits the input into non-empty lines of whitespace-separated tokens.
/// Lines whose first token starts with `#` are comments.
pub(crate) fn lines(text: &str) -> Vec<Line<'_>> {
    let mut out = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let mut tokens = Vec::new();
        let mut start = None;
        for (pos, ch) in raw.char_indices().chain(std::iter::once((raw.len(), ' '))) {
            if ch.is_whitespace() {
                if let Some(s) = start.take() {
                    tokens.push(Token {
                        text: &raw[s..pos],
                        column: raw[..s].chars().count() + 1,
                    });
                }
            } else if start.is_none() {
                start = Some(pos);
            }
        }
        if tokens.is_empty() || tokens[0].text.starts_with('#') {
            continue;
        }
        out.push(Line {
            number: i + 1,
            tokens,
        });
    }
    out
}
