use std::fmt;

use crate::{Error, Result};

/// Fixed-length bit vector of at most 64 lines.
///
/// Bit `i` is bus line `i`. Bits at or above `len` are always zero.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct Word {
    bits: u64,
    len: u8,
}

impl Word {
    pub const MAX_LEN: usize = 64;

    pub fn zeros(len: usize) -> Result<Self> {
        Self::new(0, len)
    }

    /// Builds a word from its integer representation (line 0 = LSB).
    pub fn new(bits: u64, len: usize) -> Result<Self> {
        if len > Self::MAX_LEN {
            return Err(Error::out_of_range("word length", len as u128, "<= 64"));
        }
        if bits & !mask(len) != 0 {
            return Err(Error::out_of_range(
                "word value",
                bits,
                format!("< 2^{len}"),
            ));
        }
        Ok(Word {
            bits,
            len: len as u8,
        })
    }

    /// Caller guarantees `len <= 64` and no bits above `len`.
    pub(crate) fn from_raw(bits: u64, len: usize) -> Self {
        debug_assert!(len <= Self::MAX_LEN && bits & !mask(len) == 0);
        Word {
            bits,
            len: len as u8,
        }
    }

    #[inline]
    pub fn bits(&self) -> u64 {
        self.bits
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.len as usize
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    /// Hamming weight.
    #[inline]
    pub fn weight(&self) -> u32 {
        self.bits.count_ones()
    }

    pub fn get(&self, line: usize) -> bool {
        line < self.len() && (self.bits >> line) & 1 == 1
    }

    pub fn set(&mut self, line: usize, value: bool) -> Result<()> {
        if line >= self.len() {
            return Err(Error::PositionOutOfRange {
                position: line,
                len: self.len(),
            });
        }
        if value {
            self.bits |= 1 << line;
        } else {
            self.bits &= !(1 << line);
        }
        Ok(())
    }

    pub fn xor(&self, other: &Word) -> Result<Word> {
        other.check_len(self.len())?;
        Ok(Word::from_raw(self.bits ^ other.bits, self.len()))
    }

    pub fn distance(&self, other: &Word) -> Result<u32> {
        Ok(self.xor(other)?.weight())
    }

    pub fn complement(&self) -> Word {
        Word::from_raw(!self.bits & mask(self.len()), self.len())
    }

    /// Lines set to one, ascending.
    pub fn ones(&self) -> impl Iterator<Item = usize> + '_ {
        let mut rest = self.bits;
        std::iter::from_fn(move || {
            if rest == 0 {
                None
            } else {
                let line = rest.trailing_zeros() as usize;
                rest &= rest - 1;
                Some(line)
            }
        })
    }

    pub(crate) fn check_len(&self, expected: usize) -> Result<()> {
        if self.len() != expected {
            return Err(Error::LengthMismatch {
                expected,
                found: self.len(),
            });
        }
        Ok(())
    }
}

/// Low `len` bits set.
#[inline]
pub(crate) fn mask(len: usize) -> u64 {
    if len >= 64 {
        u64::MAX
    } else {
        (1u64 << len) - 1
    }
}

/// Binary with line 0 rightmost, zero-padded to the word length.
impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.len == 0 {
            return Ok(());
        }
        write!(f, "{:0width$b}", self.bits, width = self.len())
    }
}

impl fmt::Debug for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Word({self}; {})", self.len)
    }
}
