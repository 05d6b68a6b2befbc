//! Category codes: fixed-length thesaurus sort keys.
//!
//! A category code is exactly ten symbols over the alphabet `0-9 a b c d`,
//! with digits ordering before letters. Codes compare lexicographically;
//! that total order is the only structure the sorting pipelines rely on.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use serde::{de, Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

/// Number of symbols in a category code.
pub const CODE_LEN: usize = 10;

/// The code alphabet in ascending sort order.
pub const ALPHABET: [char; 14] = [
    '0', '1', '2', '3', '4', '5', '6', '7', '8', '9', 'a', 'b', 'c', 'd',
];

/// One symbol of a category code, ordered by its position in [`ALPHABET`].
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Symbol(u8);

impl Symbol {
    pub fn from_char(c: char) -> Option<Symbol> {
        match c {
            '0'..='9' => Some(Symbol(c as u8 - b'0')),
            'a'..='d' => Some(Symbol(c as u8 - b'a' + 10)),
            _ => None,
        }
    }

    /// Symbol at the given alphabet position (0..14).
    pub fn from_rank(rank: u8) -> Option<Symbol> {
        (rank < ALPHABET.len() as u8).then_some(Symbol(rank))
    }

    pub fn rank(self) -> u8 {
        self.0
    }

    pub fn as_char(self) -> char {
        ALPHABET[self.0 as usize]
    }
}

impl fmt::Debug for Symbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.as_char())
    }
}

impl fmt::Display for Symbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.as_char())
    }
}

/// A ten-symbol category code. `Ord` is lexicographic over [`Symbol`]s,
/// so e.g. `9100000000 < aa00000000 < ab00000000 < d000000000`.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CategoryCode([Symbol; CODE_LEN]);

/// Why a code string was rejected.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CodeError {
    #[error("expected exactly {CODE_LEN} symbols, got {0}")]
    WrongLength(usize),
    #[error("invalid symbol {symbol:?} at position {position} (alphabet is 0-9, a-d)")]
    BadSymbol { position: usize, symbol: char },
}

impl CategoryCode {
    pub fn new(symbols: [Symbol; CODE_LEN]) -> CategoryCode {
        CategoryCode(symbols)
    }

    pub fn symbols(&self) -> &[Symbol; CODE_LEN] {
        &self.0
    }

    /// The first `len` symbols (clamped to the code length).
    pub fn prefix(&self, len: usize) -> &[Symbol] {
        &self.0[..len.min(CODE_LEN)]
    }

    pub(crate) fn set(&mut self, index: usize, symbol: Symbol) {
        self.0[index] = symbol;
    }
}

/// Three-way comparison of two codes under the alphabet order.
pub fn compare_codes(a: &CategoryCode, b: &CategoryCode) -> Ordering {
    a.cmp(b)
}

impl FromStr for CategoryCode {
    type Err = CodeError;

    fn from_str(s: &str) -> Result<Self, CodeError> {
        let mut symbols = [Symbol(0); CODE_LEN];
        let mut len = 0;
        for (i, c) in s.chars().enumerate() {
            if i >= CODE_LEN {
                return Err(CodeError::WrongLength(s.chars().count()));
            }
            symbols[i] =
                Symbol::from_char(c).ok_or(CodeError::BadSymbol { position: i, symbol: c })?;
            len = i + 1;
        }
        if len < CODE_LEN {
            return Err(CodeError::WrongLength(len));
        }
        Ok(CategoryCode(symbols))
    }
}

impl fmt::Display for CategoryCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for s in &self.0 {
            write!(f, "{}", s.as_char())?;
        }
        Ok(())
    }
}

impl fmt::Debug for CategoryCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "CategoryCode({self})")
    }
}

impl Serialize for CategoryCode {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for CategoryCode {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn code(s: &str) -> CategoryCode {
        s.parse().expect(s)
    }

    #[test]
    fn parses_valid_code() {
        assert_eq!(code("5363005022").to_string(), "5363005022");
    }

    #[test]
    fn rejects_wrong_length() {
        assert_eq!(
            "536300502".parse::<CategoryCode>(),
            Err(CodeError::WrongLength(9))
        );
        assert_eq!(
            "53630050221".parse::<CategoryCode>(),
            Err(CodeError::WrongLength(11))
        );
        assert_eq!("".parse::<CategoryCode>(), Err(CodeError::WrongLength(0)));
    }

    #[test]
    fn rejects_bad_symbol_with_position() {
        assert_eq!(
            "5363x05022".parse::<CategoryCode>(),
            Err(CodeError::BadSymbol { position: 4, symbol: 'x' })
        );
        assert_eq!(
            "e363005022".parse::<CategoryCode>(),
            Err(CodeError::BadSymbol { position: 0, symbol: 'e' })
        );
        // Uppercase is not in the alphabet.
        assert_eq!(
            "A363005022".parse::<CategoryCode>(),
            Err(CodeError::BadSymbol { position: 0, symbol: 'A' })
        );
    }

    #[test]
    fn comparison_examples() {
        assert_eq!(
            compare_codes(&code("5210007021"), &code("5210007022")),
            Ordering::Less
        );
        assert_eq!(
            compare_codes(&code("9100000000"), &code("aa00000000")),
            Ordering::Less
        );
        assert_eq!(
            compare_codes(&code("ab46002012"), &code("ab46002012")),
            Ordering::Equal
        );
    }

    #[test]
    fn digits_sort_before_letters() {
        assert!(code("9999999999") < code("a000000000"));
        assert!(code("aa00000000") < code("ab00000000"));
        assert!(code("ab99999999") < code("d000000000"));
    }

    #[test]
    fn serde_round_trip() {
        let c = code("aa11011014");
        let json = serde_json::to_string(&c).unwrap();
        assert_eq!(json, "\"aa11011014\"");
        let back: CategoryCode = serde_json::from_str(&json).unwrap();
        assert_eq!(back, c);
    }
}
