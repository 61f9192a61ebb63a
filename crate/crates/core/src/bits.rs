//! Fixed-width basis-state labels.
//!
//! Qubit 0 is the least-significant bit of the basis index. Kets are written
//! most-significant bit first, so `"00101"` is index 5 with qubits 0 and 2 set.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

/// Longest bitstring accepted.
pub const MAX_WIDTH: usize = 62;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum BitstringError {
    #[error("empty bitstring")]
    Empty,
    #[error("bitstring `{0}` contains a character other than 0 or 1")]
    InvalidChar(String),
    #[error("bitstring width {0} exceeds the maximum of {MAX_WIDTH}")]
    TooWide(usize),
    #[error("value {value} does not fit in {width} bits")]
    Overflow { value: u64, width: usize },
}

/// A basis state of a `width`-qubit register.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Bitstring {
    width: usize,
    value: u64,
}

impl Bitstring {
    pub fn new(value: u64, width: usize) -> Result<Self, BitstringError> {
        if width == 0 {
            return Err(BitstringError::Empty);
        }
        if width > MAX_WIDTH {
            return Err(BitstringError::TooWide(width));
        }
        if value >> width != 0 {
            return Err(BitstringError::Overflow { value, width });
        }
        Ok(Self { width, value })
    }

    pub fn width(&self) -> usize {
        self.width
    }

    /// Basis index of this state.
    pub fn value(&self) -> u64 {
        self.value
    }

    pub fn index(&self) -> usize {
        self.value as usize
    }

    /// State of `qubit` (qubit 0 is the rightmost character).
    pub fn bit(&self, qubit: usize) -> bool {
        (self.value >> qubit) & 1 == 1
    }

    /// Qubits whose bit is 0, in ascending order.
    pub fn zero_qubits(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.width).filter(move |&q| !self.bit(q))
    }

    pub fn count_zeros(&self) -> usize {
        self.width - self.value.count_ones() as usize
    }
}

impl fmt::Display for Bitstring {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for q in (0..self.width).rev() {
            f.write_str(if self.bit(q) { "1" } else { "0" })?;
        }
        Ok(())
    }
}

impl FromStr for Bitstring {
    type Err = BitstringError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        let s = s
            .strip_prefix('|')
            .and_then(|rest| rest.strip_suffix('>').or_else(|| rest.strip_suffix('⟩')))
            .unwrap_or(s);
        if s.is_empty() {
            return Err(BitstringError::Empty);
        }
        if s.len() > MAX_WIDTH {
            return Err(BitstringError::TooWide(s.len()));
        }
        let mut value = 0u64;
        for c in s.chars() {
            value <<= 1;
            match c {
                '0' => {}
                '1' => value |= 1,
                _ => return Err(BitstringError::InvalidChar(s.to_string())),
            }
        }
        Bitstring::new(value, s.len())
    }
}

impl Serialize for Bitstring {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Bitstring {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_msb_first() {
        let b: Bitstring = "00101".parse().unwrap();
        assert_eq!(b.value(), 5);
        assert_eq!(b.width(), 5);
        assert!(b.bit(0) && !b.bit(1) && b.bit(2));
        assert_eq!(b.zero_qubits().collect::<Vec<_>>(), vec![1, 3, 4]);
        assert_eq!(b.to_string(), "00101");
    }

    #[test]
    fn accepts_ket_notation() {
        assert_eq!("|10111>".parse::<Bitstring>().unwrap().value(), 0b10111);
        assert_eq!("|01⟩".parse::<Bitstring>().unwrap().value(), 1);
    }

    #[test]
    fn rejects_garbage() {
        assert_eq!("".parse::<Bitstring>(), Err(BitstringError::Empty));
        assert!(matches!(
            "01a".parse::<Bitstring>(),
            Err(BitstringError::InvalidChar(_))
        ));
        assert!(Bitstring::new(4, 2).is_err());
    }
}
