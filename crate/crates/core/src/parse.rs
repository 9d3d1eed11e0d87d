//! Small shared machinery for the text grammars (events, polynomials,
//! rational functions, Levi-Civita terms).

use crate::scalar::{Int, Rat};
use num_traits::Zero;
use thiserror::Error;

/// Parse failure with the byte offset at which it occurred.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("parse error at byte {pos}: {msg}")]
pub struct ParseError {
    pub pos: usize,
    pub msg: String,
}

/// Character cursor over the source text.
pub struct Cursor<'a> {
    src: &'a str,
    pos: usize,
}

impl<'a> Cursor<'a> {
    pub fn new(src: &'a str) -> Self {
        Cursor { src, pos: 0 }
    }

    pub fn pos(&self) -> usize {
        self.pos
    }

    pub fn error(&self, msg: impl Into<String>) -> ParseError {
        ParseError { pos: self.pos, msg: msg.into() }
    }

    pub fn peek(&self) -> Option<char> {
        self.src[self.pos..].chars().next()
    }

    pub fn bump(&mut self) -> Option<char> {
        let c = self.peek()?;
        self.pos += c.len_utf8();
        Some(c)
    }

    pub fn skip_ws(&mut self) {
        while matches!(self.peek(), Some(c) if c.is_whitespace()) {
            self.bump();
        }
    }

    /// Consumes `c` if it is next (after whitespace); reports whether it did.
    pub fn eat(&mut self, c: char) -> bool {
        self.skip_ws();
        if self.peek() == Some(c) {
            self.bump();
            true
        } else {
            false
        }
    }

    pub fn expect(&mut self, c: char) -> Result<(), ParseError> {
        if self.eat(c) {
            Ok(())
        } else {
            Err(self.error(format!("expected '{c}'")))
        }
    }

    /// Consumes the keyword if it is next (after whitespace).
    pub fn eat_word(&mut self, word: &str) -> bool {
        self.skip_ws();
        if self.src[self.pos..].starts_with(word) {
            self.pos += word.len();
            true
        } else {
            false
        }
    }

    pub fn expect_end(&self) -> Result<(), ParseError> {
        let rest = self.src[self.pos..].trim_start();
        if rest.is_empty() {
            Ok(())
        } else {
            Err(ParseError {
                pos: self.src.len() - rest.len(),
                msg: "unexpected trailing input".into(),
            })
        }
    }

    /// Unsigned decimal integer.
    pub fn parse_uint(&mut self) -> Result<Int, ParseError> {
        self.skip_ws();
        let start = self.pos;
        while matches!(self.peek(), Some(c) if c.is_ascii_digit()) {
            self.bump();
        }
        if self.pos == start {
            return Err(self.error("expected a digit"));
        }
        Ok(self.src[start..self.pos].parse::<Int>().expect("digits"))
    }

    /// Signed integer: optional `-`, then digits.
    pub fn parse_int(&mut self) -> Result<Int, ParseError> {
        self.skip_ws();
        let neg = self.eat('-');
        let n = self.parse_uint()?;
        Ok(if neg { -n } else { n })
    }

    /// Rational literal `int ['/' int]`.  The `/` is consumed only when
    /// digits follow, so `1/(2*N)` leaves the slash to the caller.
    pub fn parse_rat(&mut self) -> Result<Rat, ParseError> {
        let num = self.parse_int()?;
        let save = self.pos;
        if self.eat('/') {
            self.skip_ws();
            if matches!(self.peek(), Some(c) if c.is_ascii_digit()) {
                let den = self.parse_uint()?;
                if den.is_zero() {
                    return Err(self.error("zero denominator"));
                }
                return Ok(Rat::new(num, den));
            }
            self.pos = save;
        }
        Ok(Rat::from_integer(num))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{rat, rat_int};

    #[test]
    fn rational_literals() {
        let mut c = Cursor::new(" -3/6 ");
        assert_eq!(c.parse_rat().unwrap(), rat(-1, 2));
        assert!(c.expect_end().is_ok());
    }

    #[test]
    fn slash_left_for_caller_when_not_a_fraction() {
        let mut c = Cursor::new("1/(2)");
        assert_eq!(c.parse_rat().unwrap(), rat_int(1));
        assert!(c.eat('/'));
    }

    #[test]
    fn zero_denominator_rejected() {
        let mut c = Cursor::new("1/0");
        let err = c.parse_rat().unwrap_err();
        assert!(err.msg.contains("zero denominator"));
    }

    #[test]
    fn error_carries_position() {
        let mut c = Cursor::new("12 +");
        c.parse_rat().unwrap();
        let err = c.expect_end().unwrap_err();
        assert_eq!(err.pos, 3);
    }
}
