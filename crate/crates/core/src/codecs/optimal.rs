//! Optimal low-weight differential code built from MPPM modulators.
//!
//! Information values are split into tiers: value `u` gets `m` pulses where
//! `m` is the smallest count with `C(n,0) + ... + C(n,m) > u`, and the pulse
//! pattern is the combinatorial unranking of `u - (C(n,0) + ... + C(n,m-1))`.
//! Only the first `2^k - (C(n,0) + ... + C(n,d_max-1))` words of the top tier
//! are ever emitted.

use crate::analytics::{per_codeword_cost, pulse_count_cost, CostCount};
use crate::codecs::MAX_LINES;
use crate::{Binomials, Error, Result};

#[derive(Clone, Debug)]
pub struct OptimalMppm {
    k: usize,
    n: usize,
    d_max: usize,
    /// `tier_start[m] = C(n,0) + ... + C(n,m-1)`, for `m = 0..=d_max+1`.
    tier_start: Vec<u128>,
    table: Binomials,
}

impl OptimalMppm {
    pub fn new(k: usize, b: usize) -> Result<Self> {
        let n = k + b;
        if k == 0 || n > MAX_LINES {
            return Err(Error::InvalidSpec(format!(
                "optimal codec needs 1 <= k and k + b <= {MAX_LINES}, got k={k} b={b}"
            )));
        }
        let table = Binomials::new(n)?;
        let words = 1u128 << k;
        let mut tier_start = vec![0u128];
        let mut d_max = 0;
        for m in 0..=n {
            let next = tier_start[m] + table.get(n, m);
            tier_start.push(next);
            if next >= words {
                d_max = m;
                break;
            }
        }
        Ok(OptimalMppm {
            k,
            n,
            d_max,
            tier_start,
            table,
        })
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn d_max(&self) -> usize {
        self.d_max
    }

    pub fn table(&self) -> &Binomials {
        &self.table
    }

    /// Offset of the first value in tier `m`.
    pub fn tier_start(&self, m: usize) -> u128 {
        self.tier_start[m]
    }

    /// Number of top-tier words actually used.
    pub fn top_tier_used(&self) -> u128 {
        (1u128 << self.k) - self.tier_start[self.d_max]
    }

    /// Pulse count for information value `u`: one threshold comparison per
    /// tier, `d_max + 1` in total.
    #[inline]
    pub fn pulse_count(&self, u: u64) -> usize {
        let u = u as u128;
        (0..=self.d_max)
            .find(|&m| self.tier_start[m + 1] > u)
            .unwrap_or(self.d_max)
    }

    /// Differential word for `u < 2^k`, as a bit mask.
    pub fn differential_bits(&self, u: u64) -> Result<u64> {
        if (u as u128) >> self.k != 0 {
            return Err(Error::out_of_range("u", u, format!("< 2^{}", self.k)));
        }
        let m = self.pulse_count(u);
        self.table
            .mppm_unrank_mask(u as u128 - self.tier_start[m], m, self.n)
    }

    /// Inverse of [`differential_bits`](Self::differential_bits): counts the
    /// pulses, ranks them and adds the tier offset.
    pub fn info_bits(&self, d: u64) -> Result<u64> {
        let m = d.count_ones() as usize;
        if m > self.d_max {
            return Err(Error::CorruptedWord(format!(
                "differential weight {m} exceeds d_max = {}",
                self.d_max
            )));
        }
        if self.n < 64 && d >> self.n != 0 {
            return Err(Error::CorruptedWord(format!(
                "pulse beyond line {}",
                self.n - 1
            )));
        }
        let u = self.table.mppm_rank_mask(d)? + self.tier_start[m];
        if u >> self.k != 0 {
            return Err(Error::CorruptedWord(format!(
                "rank beyond the {} used words of tier {m}",
                self.top_tier_used()
            )));
        }
        Ok(u as u64)
    }

    /// Modulator cost of encoding `u`: pulse-count selection plus `n`
    /// comparisons and two additions per pulse.
    pub fn encode_cost(&self, u: u64) -> CostCount {
        pulse_count_cost(self.d_max) + per_codeword_cost(self.n, self.pulse_count(u))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tiers_for_golay_geometry() {
        let c = OptimalMppm::new(11, 12).unwrap();
        assert_eq!(c.d_max(), 3);
        assert_eq!(
            (0..=4).map(|m| c.tier_start(m)).collect::<Vec<_>>(),
            vec![0, 1, 24, 277, 2048]
        );
        assert_eq!(c.top_tier_used(), 1771);
    }

    #[test]
    fn differential_examples() {
        let c = OptimalMppm::new(11, 12).unwrap();
        assert_eq!(c.differential_bits(0).unwrap(), 0);
        // offset 2047 - 277 = 1770, the last weight-3 word
        assert_eq!(c.differential_bits(2047).unwrap(), 0b111 << 20);
        assert_eq!(c.pulse_count(2047), 3);
        assert_eq!(c.info_bits(0b1100).unwrap(), 29);
        assert!(c.differential_bits(2048).is_err());

        let c = OptimalMppm::new(4, 11).unwrap();
        assert_eq!(c.pulse_count(7), 1);
        assert_eq!(c.differential_bits(7).unwrap(), 1 << 6);
    }

    #[test]
    fn partial_top_tier_rejects_unused_ranks() {
        // k=11, b=1: cumulative tiers 1,13,79,299,794,1586,2510 and only 2048-1586=462
        // weight-6 words are used
        let c = OptimalMppm::new(11, 1).unwrap();
        assert_eq!(c.d_max(), 6);
        assert_eq!(c.top_tier_used(), 462);
        let last = c.differential_bits(2047).unwrap();
        assert_eq!(c.info_bits(last).unwrap(), 2047);
        let unused = c.table().mppm_unrank_mask(462, 6, 12).unwrap();
        assert!(matches!(c.info_bits(unused), Err(Error::CorruptedWord(_))));
        assert!(matches!(c.info_bits(0x7f), Err(Error::CorruptedWord(_))));
    }

    #[test]
    fn full_width_bus() {
        let c = OptimalMppm::new(64, 0).unwrap();
        assert_eq!(c.d_max(), 64);
        assert_eq!(c.differential_bits(u64::MAX).unwrap(), u64::MAX);
        assert_eq!(c.info_bits(u64::MAX).unwrap(), u64::MAX);
        assert!(OptimalMppm::new(60, 5).is_err());
    }

    #[test]
    fn cost_of_a_word() {
        let c = OptimalMppm::new(11, 12).unwrap();
        let cost = c.encode_cost(2047);
        assert_eq!(cost.comparisons, 4 + 69);
        assert_eq!(cost.additions, 6);
        assert_eq!(c.encode_cost(0).comparison_units(), 4);
    }
}
