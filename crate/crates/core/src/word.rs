//! Short binary vectors.
//!
//! A [`Word`] packs up to nine coordinates into an integer. Coordinate 1 is
//! the most significant bit, so the integer value of a word is exactly its
//! position in the natural binary counting order of `F_2^len`, and the
//! printed form `0010110` reads coordinates 1..len from left to right.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

/// Shortest supported word.
pub const MIN_LEN: usize = 2;
/// Longest supported word (7 data bits plus 2 parity bits).
pub const MAX_LEN: usize = 9;

/// A binary vector of length 2..=9.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Word {
    bits: u16,
    len: u8,
}

impl Word {
    pub fn new(bits: u32, len: usize) -> Result<Self> {
        if !(MIN_LEN..=MAX_LEN).contains(&len) {
            return Err(Error::InvalidLength(len));
        }
        if bits >> len != 0 {
            return Err(Error::BitsOutOfRange { bits, len });
        }
        Ok(Word { bits: bits as u16, len: len as u8 })
    }

    /// The all-zero word.
    pub fn zero(len: usize) -> Result<Self> {
        Word::new(0, len)
    }

    /// Builds a word from coordinate values given in order 1..len.
    pub fn from_bits(coords: &[bool]) -> Result<Self> {
        let bits = coords.iter().fold(0u32, |acc, &b| (acc << 1) | b as u32);
        Word::new(bits, coords.len())
    }

    /// Integer value; equals the index in natural binary counting order.
    #[inline]
    pub fn bits(self) -> u32 {
        self.bits as u32
    }

    #[inline]
    pub fn len(self) -> usize {
        self.len as usize
    }

    /// Always false: words have at least two coordinates.
    #[inline]
    pub fn is_empty(self) -> bool {
        false
    }

    /// Value of coordinate `coord` (0-based; coordinate 1 in the usual
    /// 1-based notation is `get(0)`).
    ///
    /// # Panics
    /// If `coord >= len`.
    pub fn get(self, coord: usize) -> bool {
        assert!(coord < self.len(), "coordinate {coord} out of range");
        (self.bits >> (self.len() - 1 - coord)) & 1 == 1
    }

    /// Copy of `self` with coordinate `coord` (0-based) flipped.
    pub fn flip(self, coord: usize) -> Self {
        assert!(coord < self.len(), "coordinate {coord} out of range");
        Word { bits: self.bits ^ (1 << (self.len() - 1 - coord)), len: self.len }
    }

    /// Hamming weight.
    #[inline]
    pub fn weight(self) -> u32 {
        self.bits.count_ones()
    }

    /// Bitwise complement.
    #[inline]
    pub fn complement(self) -> Self {
        Word { bits: !self.bits & self.mask(), len: self.len }
    }

    pub fn xor(self, other: Word) -> Result<Self> {
        self.check_len(other)?;
        Ok(Word { bits: self.bits ^ other.bits, len: self.len })
    }

    /// Number of coordinates where the two words differ.
    pub fn distance(self, other: Word) -> Result<u32> {
        self.check_len(other)?;
        Ok((self.bits ^ other.bits).count_ones())
    }

    /// Concatenation `[self, tail]`.
    pub fn concat(self, tail: Word) -> Result<Self> {
        let len = self.len() + tail.len();
        Word::new((self.bits() << tail.len()) | tail.bits(), len)
    }

    /// Iterates over all `2^len` words in natural binary order.
    pub fn all(len: usize) -> Result<impl Iterator<Item = Word>> {
        Word::zero(len)?;
        Ok((0..1u16 << len).map(move |bits| Word { bits, len: len as u8 }))
    }

    #[inline]
    fn mask(self) -> u16 {
        (1u16 << self.len) - 1
    }

    fn check_len(self, other: Word) -> Result<()> {
        if self.len != other.len {
            return Err(Error::LengthMismatch { left: self.len(), right: other.len() });
        }
        Ok(())
    }
}

/// `d_H(x, y)`; errors when the lengths differ.
pub fn hamming_distance(x: Word, y: Word) -> Result<u32> {
    x.distance(y)
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for coord in 0..self.len() {
            f.write_str(if self.get(coord) { "1" } else { "0" })?;
        }
        Ok(())
    }
}

impl fmt::Debug for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Word({self})")
    }
}

impl FromStr for Word {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let coords = s
            .chars()
            .map(|c| match c {
                '0' => Ok(false),
                '1' => Ok(true),
                other => Err(Error::Parse {
                    token: 0,
                    message: format!("unexpected character {other:?} in binary word {s:?}"),
                }),
            })
            .collect::<Result<Vec<_>>>()?;
        Word::from_bits(&coords)
    }
}
