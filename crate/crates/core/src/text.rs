//! Shared line tokenizer for the instance and run file formats.

use crate::error::Error;
use crate::ratio::{parse_ratio, Ratio};

#[derive(Debug, Clone, Copy)]
pub(crate) struct Token<'a> {
    pub text: &'a str,
    pub line: usize,
    pub column: usize,
}

impl<'a> Token<'a> {
    pub fn error(&self, message: impl Into<String>) -> Error {
        Error::Syntax {
            line: self.line,
            column: self.column,
            message: message.into(),
        }
    }

    pub fn ratio(&self) -> Result<Ratio, Error> {
        parse_ratio(self.text).ok_or_else(|| {
            self.error(format!(
                "expected a rational literal, found {:?}",
                self.text
            ))
        })
    }

    pub fn index(&self) -> Result<usize, Error> {
        self.text.parse().map_err(|_| {
            self.error(format!(
                "expected a non-negative integer, found {:?}",
                self.text
            ))
        })
    }
}

/// One non-empty logical line, comments removed. Columns are 1-based.
pub(crate) struct Line<'a> {
    pub number: usize,
    pub tokens: Vec<Token<'a>>,
    end_column: usize,
}

impl<'a> Line<'a> {
    pub fn keyword(&self) -> &'a str {
        self.tokens[0].text
    }

    pub fn expect_len(
        &self,
        range: std::ops::RangeInclusive<usize>,
        usage: &str,
    ) -> Result<(), Error> {
        if range.contains(&self.tokens.len()) {
            return Ok(());
        }
        let column = self
            .tokens
            .get(*range.end())
            .map_or(self.end_column, |t| t.column);
        Err(Error::Syntax {
            line: self.number,
            column,
            message: format!("expected `{usage}`"),
        })
    }
}

pub(crate) fn lines(text: &str) -> impl Iterator<Item = Line<'_>> {
    text.lines().enumerate().filter_map(|(i, raw)| {
        let content = raw.split('#').next().unwrap_or("");
        let mut tokens = Vec::new();
        let mut start = None;
        for (offset, ch) in content
            .char_indices()
            .chain(std::iter::once((content.len(), ' ')))
        {
            match (ch.is_whitespace(), start) {
                (false, None) => start = Some(offset),
                (true, Some(s)) => {
                    tokens.push(Token {
                        text: &content[s..offset],
                        line: i + 1,
                        column: content[..s].chars().count() + 1,
                    });
                    start = None;
                }
                _ => {}
            }
        }
        (!tokens.is_empty()).then(|| Line {
            number: i + 1,
            tokens,
            end_column: content.chars().count() + 1,
        })
    })
}
