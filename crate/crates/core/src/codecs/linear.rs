//! Binary linear codes given by a parity-check matrix, and their coset
//! leader tables.
//!
//! A complete syndrome decoder maps every syndrome `s` to a lowest-weight
//! `e` with `H e = s`. Read backwards it is a bus encoder: the information
//! word is the syndrome and the leader is the differential word.

use crate::word::{mask, Word};
use crate::{Error, Result};

/// Largest redundancy `N - K` for which a leader table is built.
pub const MAX_TABLE_REDUNDANCY: usize = 16;
/// Largest dimension `K` for exhaustive codeword enumeration.
pub const MAX_ENUMERATED_DIMENSION: usize = 28;

/// `(N, K)` binary linear code; row `i` of `H` is stored as a bit mask over
/// the `N` columns.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LinearCode {
    length: usize,
    rows: Vec<u64>,
    correction_radius: usize,
}

impl LinearCode {
    /// Checks that every row fits in `length` columns and that `H` has full
    /// row rank.
    pub fn new(length: usize, rows: Vec<u64>, correction_radius: usize) -> Result<Self> {
        if length == 0 || length > Word::MAX_LEN {
            return Err(Error::InvalidCode(format!("length {length} not in 1..=64")));
        }
        if rows.len() > length {
            return Err(Error::InvalidCode(format!(
                "{} parity checks exceed length {length}",
                rows.len()
            )));
        }
        if let Some(r) = rows.iter().find(|&&r| r & !mask(length) != 0) {
            return Err(Error::InvalidCode(format!(
                "row {r:#b} has columns beyond {length}"
            )));
        }
        let code = LinearCode {
            length,
            rows,
            correction_radius,
        };
        if code.echelon().len() != code.rows.len() {
            return Err(Error::InvalidCode(
                "parity-check matrix is rank deficient".into(),
            ));
        }
        Ok(code)
    }

    /// `N`.
    pub fn length(&self) -> usize {
        self.length
    }

    /// `K`.
    pub fn dimension(&self) -> usize {
        self.length - self.rows.len()
    }

    /// `N - K`, the number of syndrome bits.
    pub fn redundancy(&self) -> usize {
        self.rows.len()
    }

    /// Guaranteed correction radius `t`.
    pub fn correction_radius(&self) -> usize {
        self.correction_radius
    }

    pub fn parity_rows(&self) -> &[u64] {
        &self.rows
    }

    /// `H e`, bit `i` being the parity of row `i`.
    #[inline]
    pub fn syndrome(&self, e: u64) -> u64 {
        self.rows
            .iter()
            .enumerate()
            .fold(0, |s, (i, &r)| s | (((r & e).count_ones() as u64) & 1) << i)
    }

    pub fn syndrome_of(&self, w: &Word) -> Result<Word> {
        w.check_len(self.length)?;
        Ok(Word::from_raw(self.syndrome(w.bits()), self.redundancy()))
    }

    pub fn is_codeword(&self, c: u64) -> bool {
        self.syndrome(c) == 0
    }

    /// Reduced row echelon form as `(pivot column, row)` pairs.
    fn echelon(&self) -> Vec<(usize, u64)> {
        let mut rows = self.rows.clone();
        let mut pivots = Vec::new();
        let mut next = 0;
        for col in 0..self.length {
            let bit = 1u64 << col;
            let Some(found) = (next..rows.len()).find(|&i| rows[i] & bit != 0) else {
                continue;
            };
            rows.swap(next, found);
            let pivot = rows[next];
            for (i, r) in rows.iter_mut().enumerate() {
                if i != next && *r & bit != 0 {
                    *r ^= pivot;
                }
            }
            pivots.push(col);
            next += 1;
        }
        pivots.into_iter().zip(rows).collect()
    }

    /// A basis of the code (the kernel of `H`), `K` vectors.
    pub fn kernel_basis(&self) -> Vec<u64> {
        let echelon = self.echelon();
        let pivot_cols: u64 = echelon.iter().fold(0, |m, &(p, _)| m | 1 << p);
        (0..self.length)
            .filter(|&f| pivot_cols & (1 << f) == 0)
            .map(|f| {
                echelon
                    .iter()
                    .filter(|&&(_, row)| row & (1 << f) != 0)
                    .fold(1u64 << f, |v, &(p, _)| v | 1 << p)
            })
            .collect()
    }

    /// Minimum nonzero codeword weight, by enumerating all `2^K` codewords
    /// in Gray-code order.
    pub fn minimum_distance(&self) -> Result<usize> {
        let basis = self.kernel_basis();
        if basis.len() > MAX_ENUMERATED_DIMENSION {
            return Err(Error::SizeCap(format!(
                "dimension {} too large to enumerate",
                basis.len()
            )));
        }
        let mut best = usize::MAX;
        let mut c = 0u64;
        for i in 1u64..1 << basis.len() {
            c ^= basis[i.trailing_zeros() as usize];
            best = best.min(c.count_ones() as usize);
        }
        Ok(best)
    }

    fn verify_distance(self, expected: usize) -> Result<Self> {
        if self.dimension() <= MAX_ENUMERATED_DIMENSION {
            let d = self.minimum_distance()?;
            if d != expected {
                return Err(Error::InvalidCode(format!(
                    "minimum distance {d}, expected {expected}"
                )));
            }
        }
        Ok(self)
    }
}

/// `(N, 1)` repetition code with `H = [I | 1]`: check `i` ties line `i` to
/// the last line.
///
/// Even lengths are accepted; `t = (N - 1) / 2` rounds down.
pub fn make_repetition(length: usize) -> Result<LinearCode> {
    if !(2..=Word::MAX_LEN).contains(&length) {
        return Err(Error::InvalidCode(format!(
            "repetition length {length} not in 2..=64"
        )));
    }
    let last = 1u64 << (length - 1);
    let rows = (0..length - 1).map(|i| 1 << i | last).collect();
    LinearCode::new(length, rows, (length - 1) / 2)?.verify_distance(length)
}

/// Hamming `(2^m - 1, 2^m - 1 - m)` code; column `j` of `H` is the binary
/// expansion of `j + 1`.
pub fn make_hamming(m: usize) -> Result<LinearCode> {
    if !(2..=6).contains(&m) {
        return Err(Error::InvalidCode(format!("Hamming order m = {m} not in 2..=6")));
    }
    let length = (1 << m) - 1;
    let rows = (0..m)
        .map(|i| {
            (0..length)
                .filter(|j| ((j + 1) >> i) & 1 == 1)
                .fold(0u64, |r, j| r | 1 << j)
        })
        .collect();
    LinearCode::new(length, rows, 1)?.verify_distance(3)
}

/// Generator polynomial `x^11 + x^10 + x^6 + x^5 + x^4 + x^2 + 1`.
const GOLAY_GENERATOR: u64 = 0b1100_0111_0101;

/// `(23, 12)` Golay code in systematic form `H = [A^T | I]`: information
/// columns 0..12, parity columns 12..23. Column `i < 12` of `A^T` is
/// `x^(11 + i) mod g(x)`.
pub fn make_golay23() -> Result<LinearCode> {
    let parity_of = |i: usize| {
        let mut r = 1u64 << (11 + i);
        for deg in (11..=22).rev() {
            if r & (1 << deg) != 0 {
                r ^= GOLAY_GENERATOR << (deg - 11);
            }
        }
        r
    };
    let columns: Vec<u64> = (0..12).map(parity_of).collect();
    let rows = (0..11)
        .map(|j| {
            columns
                .iter()
                .enumerate()
                .filter(|&(_, &c)| c >> j & 1 == 1)
                .fold(1u64 << (12 + j), |r, (i, _)| r | 1 << i)
        })
        .collect();
    LinearCode::new(23, rows, 3)?.verify_distance(7)
}

/// Syndrome-indexed minimum-weight error patterns.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CosetLeaderTable {
    length: usize,
    leaders: Vec<u64>,
}

impl CosetLeaderTable {
    /// Scans error patterns by increasing weight, and by increasing integer
    /// value within a weight, keeping the first pattern seen per syndrome.
    pub fn build(code: &LinearCode) -> Result<Self> {
        let r = code.redundancy();
        if r > MAX_TABLE_REDUNDANCY {
            return Err(Error::SizeCap(format!(
                "redundancy {r} exceeds {MAX_TABLE_REDUNDANCY}"
            )));
        }
        let n = code.length();
        let slots = 1usize << r;
        let mut leaders = vec![u64::MAX; slots];
        let mut filled = 0;
        'weights: for w in 0..=n {
            for e in FixedWeight::new(n, w) {
                let slot = &mut leaders[code.syndrome(e) as usize];
                if *slot == u64::MAX {
                    *slot = e;
                    filled += 1;
                    if filled == slots {
                        break 'weights;
                    }
                }
            }
        }
        debug_assert_eq!(filled, slots, "full-rank H reaches every syndrome");
        Ok(CosetLeaderTable {
            length: n,
            leaders,
        })
    }

    pub fn len(&self) -> usize {
        self.leaders.len()
    }

    pub fn is_empty(&self) -> bool {
        self.leaders.is_empty()
    }

    /// Line count of each leader.
    pub fn word_len(&self) -> usize {
        self.length
    }

    #[inline]
    pub fn leader_bits(&self, syndrome: u64) -> u64 {
        self.leaders[syndrome as usize]
    }

    pub fn leader(&self, syndrome: u64) -> Result<Word> {
        self.leaders
            .get(syndrome as usize)
            .map(|&e| Word::from_raw(e, self.length))
            .ok_or_else(|| {
                Error::out_of_range("syndrome", syndrome, format!("< {}", self.leaders.len()))
            })
    }

    pub fn max_weight(&self) -> usize {
        self.leaders
            .iter()
            .map(|e| e.count_ones() as usize)
            .max()
            .unwrap_or(0)
    }

    /// Number of leaders of each weight `0..=max_weight`.
    pub fn tier_sizes(&self) -> Vec<usize> {
        let mut tiers = vec![0; self.max_weight() + 1];
        for e in &self.leaders {
            tiers[e.count_ones() as usize] += 1;
        }
        tiers
    }
}

/// `n`-bit masks of weight `w` in increasing order (Gosper's hack).
struct FixedWeight {
    next: Option<u128>,
    limit: u128,
}

impl FixedWeight {
    fn new(n: usize, w: usize) -> Self {
        let limit = 1u128 << n;
        let first = (1u128 << w) - 1;
        FixedWeight {
            next: (w <= n).then_some(first),
            limit,
        }
    }
}

impl Iterator for FixedWeight {
    type Item = u64;

    fn next(&mut self) -> Option<u64> {
        let x = self.next?;
        self.next = if x == 0 {
            None
        } else {
            let low = x & x.wrapping_neg();
            let ripple = x + low;
            let y = (((ripple ^ x) >> 2) / low) | ripple;
            (y < self.limit).then_some(y)
        };
        Some(x as u64)
    }
}
