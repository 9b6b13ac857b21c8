//! Exact binomial coefficients and the combinatorial number system.
//!
//! Every `0 <= x < C(n, m)` has a unique representation
//! `x = C(s_1, 1) + C(s_2, 2) + ... + C(s_m, m)` with
//! `0 <= s_1 < ... < s_m < n`. The tuple `(s_1, ..., s_m)` is read as the
//! positions of `m` pulses on `n` lines, which is how the optimal encoder
//! turns an integer into a weight-`m` differential word.

use std::fmt::{Debug, Display};

use num_traits::{CheckedAdd, PrimInt, Unsigned};

use crate::word::Word;
use crate::{Error, Result};

/// Unsigned integer type usable as exact binomial storage.
pub trait ExactUint:
    PrimInt + Unsigned + CheckedAdd + Debug + Display + Send + Sync + 'static
{
}

impl<T> ExactUint for T where
    T: PrimInt + Unsigned + CheckedAdd + Debug + Display + Send + Sync + 'static
{
}

/// Dense triangular table of `C(i, j)` for `0 <= j <= i <= n_max`.
///
/// Immutable once built; share it freely between threads.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BinomialTable<T = u128> {
    n_max: usize,
    values: Vec<T>,
}

#[inline]
fn row_start(i: usize) -> usize {
    i * (i + 1) / 2
}

impl<T: ExactUint> BinomialTable<T> {
    /// Builds the table with Pascal's rule, failing on the first entry that
    /// does not fit in `T`.
    pub fn new(n_max: usize) -> Result<Self> {
        let mut values = Vec::with_capacity(row_start(n_max + 1));
        values.push(T::one());
        for i in 1..=n_max {
            let prev = row_start(i - 1);
            values.push(T::one());
            for j in 1..i {
                let v = values[prev + j - 1]
                    .checked_add(&values[prev + j])
                    .ok_or(Error::BinomialOverflow { n: i, k: j })?;
                values.push(v);
            }
            values.push(T::one());
        }
        Ok(BinomialTable { n_max, values })
    }

    pub fn n_max(&self) -> usize {
        self.n_max
    }

    /// `C(n, k)`, zero when `k > n`.
    ///
    /// Panics if `n > n_max`.
    #[inline]
    pub fn get(&self, n: usize, k: usize) -> T {
        assert!(n <= self.n_max, "C({n}, {k}) outside table (n_max = {})", self.n_max);
        if k > n {
            T::zero()
        } else {
            self.values[row_start(n) + k]
        }
    }

    pub fn try_get(&self, n: usize, k: usize) -> Result<T> {
        self.check_n(n)?;
        Ok(self.get(n, k))
    }

    fn check_n(&self, n: usize) -> Result<()> {
        if n > self.n_max {
            return Err(Error::out_of_range(
                "n",
                n as u128,
                format!("<= n_max = {}", self.n_max),
            ));
        }
        Ok(())
    }

    /// `C(n, 0) + C(n, 1) + ... + C(n, m)`.
    pub fn cumulative(&self, n: usize, m: usize) -> Result<T> {
        self.check_n(n)?;
        if m > n {
            return Err(Error::out_of_range("m", m as u128, format!("<= n = {n}")));
        }
        let mut acc = T::zero();
        for i in 0..=m {
            acc = acc
                .checked_add(&self.get(n, i))
                .ok_or(Error::Overflow("cumulative binomial sum"))?;
        }
        Ok(acc)
    }

    fn check_unrank_args(&self, x: T, m: usize, n: usize) -> Result<()> {
        self.check_n(n)?;
        if m > n {
            return Err(Error::out_of_range("m", m as u128, format!("<= n = {n}")));
        }
        let limit = self.get(n, m);
        if x >= limit {
            return Err(Error::RankOutOfRange {
                rank: x.to_u128().unwrap_or(u128::MAX),
                n,
                m,
                limit: limit.to_u128().unwrap_or(u128::MAX),
            });
        }
        Ok(())
    }

    /// Runs the descending pulse search, calling `emit(s_l)` for
    /// `l = m, ..., 1`. Each step scans `i = n-1, n-2, ...` for the first
    /// `C(i, l) <= remainder`, the serial form of `n` parallel comparators
    /// followed by a priority select.
    fn unrank_each(&self, x: T, m: usize, n: usize, mut emit: impl FnMut(usize)) {
        let mut remainder = x;
        for l in (1..=m).rev() {
            // C(l-1, l) = 0, so the scan always stops at or above l-1.
            let mut i = n - 1;
            loop {
                let c = self.get(i, l);
                if c <= remainder {
                    remainder = remainder - c;
                    emit(i);
                    break;
                }
                i -= 1;
            }
        }
        debug_assert!(remainder.is_zero());
    }

    /// Pulse positions whose combinatorial rank is `x`.
    pub fn mppm_unrank(&self, x: T, m: usize, n: usize) -> Result<PulsePositions> {
        self.check_unrank_args(x, m, n)?;
        let mut positions = Vec::with_capacity(m);
        self.unrank_each(x, m, n, |s| positions.push(s));
        positions.reverse();
        Ok(PulsePositions { positions })
    }

    /// Same as [`mppm_unrank`](Self::mppm_unrank), returned as a bit mask
    /// (requires `n <= 64`).
    pub fn mppm_unrank_mask(&self, x: T, m: usize, n: usize) -> Result<u64> {
        if n > Word::MAX_LEN {
            return Err(Error::out_of_range("n", n as u128, "<= 64"));
        }
        self.check_unrank_args(x, m, n)?;
        let mut bits = 0u64;
        self.unrank_each(x, m, n, |s| bits |= 1 << s);
        Ok(bits)
    }

    /// `C(s_1, 1) + ... + C(s_m, m)`.
    pub fn mppm_rank(&self, p: &PulsePositions) -> Result<T> {
        if let Some(&top) = p.positions.last() {
            self.check_n(top)?;
        }
        Ok(p
            .positions
            .iter()
            .enumerate()
            .fold(T::zero(), |acc, (idx, &s)| acc + self.get(s, idx + 1)))
    }

    /// Rank of the pulses set in `bits`.
    pub fn mppm_rank_mask(&self, bits: u64) -> Result<T> {
        if bits != 0 {
            self.check_n(63 - bits.leading_zeros() as usize)?;
        }
        let mut rest = bits;
        let mut acc = T::zero();
        let mut l = 1;
        while rest != 0 {
            let s = rest.trailing_zeros() as usize;
            rest &= rest - 1;
            acc = acc + self.get(s, l);
            l += 1;
        }
        Ok(acc)
    }
}

/// Strictly increasing pulse positions `s_1 < s_2 < ... < s_m`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct PulsePositions {
    positions: Vec<usize>,
}

impl PulsePositions {
    pub fn new(positions: Vec<usize>) -> Result<Self> {
        if positions.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::UnsortedPositions);
        }
        Ok(PulsePositions { positions })
    }

    /// Like [`new`](Self::new), also requiring every position `< n`.
    pub fn within(positions: Vec<usize>, n: usize) -> Result<Self> {
        let p = Self::new(positions)?;
        if let Some(&top) = p.positions.last() {
            if top >= n {
                return Err(Error::PositionOutOfRange {
                    position: top,
                    len: n,
                });
            }
        }
        Ok(p)
    }

    /// Number of pulses.
    pub fn count(&self) -> usize {
        self.positions.len()
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.positions
    }
}

/// Word of `n` lines with ones exactly at `p`.
pub fn positions_to_word(p: &PulsePositions, n: usize) -> Result<Word> {
    let mut w = Word::zeros(n)?;
    for &s in p.as_slice() {
        w.set(s, true)?;
    }
    Ok(w)
}

pub fn word_to_positions(w: &Word) -> PulsePositions {
    PulsePositions {
        positions: w.ones().collect(),
    }
}
