//! Closed-form averages for the uncoded bus and the optimal low-weight code,
//! plus the encoder cost model.
//!
//! Everything is computed as an exact [`Rational`] and then converted into
//! the requested [`Scalar`]. Line counts may exceed the 64-line codec limit
//! here (the PPM0 point for `k = 11` needs `n = 2047`); binomials are built
//! incrementally with checked arithmetic and stop at the `2^k` threshold.

use std::ops::{Add, AddAssign};

use crate::{Error, Rational, Result, Scalar};

/// Largest information width accepted by the closed forms.
pub const MAX_INFO_BITS: usize = 64;
/// Largest bus width accepted by the closed forms.
pub const MAX_ANALYTIC_LINES: usize = 1 << 20;
/// Largest `k` for the PPM0 floor (its bus has `2^k - 1` lines).
pub const MAX_PPM_INFO_BITS: usize = 20;

fn check_k(k: usize) -> Result<()> {
    if !(1..=MAX_INFO_BITS).contains(&k) {
        return Err(Error::out_of_range("k", k as u128, "1..=64"));
    }
    Ok(())
}

fn lines(k: usize, b: usize) -> Result<usize> {
    check_k(k)?;
    let n = k
        .checked_add(b)
        .filter(|&n| n <= MAX_ANALYTIC_LINES)
        .ok_or_else(|| {
            Error::out_of_range("b", b as u128, format!("k + b <= {MAX_ANALYTIC_LINES}"))
        })?;
    Ok(n)
}

/// `C(n, 0), C(n, 1), ...` computed on demand with checked arithmetic.
struct BinomialRow {
    n: u128,
    i: u128,
    current: u128,
}

impl BinomialRow {
    fn new(n: usize) -> Self {
        BinomialRow {
            n: n as u128,
            i: 0,
            current: 1,
        }
    }
}

impl Iterator for BinomialRow {
    type Item = Result<u128>;

    fn next(&mut self) -> Option<Self::Item> {
        if self.i > self.n {
            return None;
        }
        let value = self.current;
        if self.i < self.n {
            // Exact: C(n, i) * (n - i) is divisible by i + 1.
            match value.checked_mul(self.n - self.i) {
                Some(p) => self.current = p / (self.i + 1),
                None => return Some(Err(Error::Overflow("binomial coefficient"))),
            }
        }
        self.i += 1;
        Some(Ok(value))
    }
}

/// The lowest-weight tiers `C(n, 0), ..., C(n, d_max)` needed to hold `2^k`
/// words.
fn tiers(k: usize, n: usize) -> Result<Vec<u128>> {
    let target = 1u128 << k;
    let mut out = Vec::new();
    let mut cumulative = 0u128;
    for c in BinomialRow::new(n) {
        let c = c?;
        out.push(c);
        cumulative += c;
        if cumulative >= target {
            return Ok(out);
        }
    }
    unreachable!("sum of C(n, i) is 2^n >= 2^k")
}

/// Probability that two independent uniform `k`-tuples are at distance `d`,
/// for `d = 0..=k`.
pub fn uncoded_distance_pmf<F: Scalar>(k: usize) -> Result<Vec<F>> {
    check_k(k)?;
    let total = 1i128 << k;
    BinomialRow::new(k)
        .map(|c| c.map(|c| F::from_rational(&Rational::new(c as i128, total))))
        .collect()
}

/// Average distance of the uncoded bus, `k / 2`.
pub fn d_unc<F: Scalar>(k: usize) -> Result<F> {
    check_k(k)?;
    Ok(F::from_rational(&Rational::new(k as i128, 2)))
}

/// Smallest `d` with `C(n, 0) + ... + C(n, d) >= 2^k`, `n = k + b`.
pub fn d_max(k: usize, b: usize) -> Result<usize> {
    let n = lines(k, b)?;
    Ok(tiers(k, n)?.len() - 1)
}

fn d_opt_exact(k: usize, b: usize) -> Result<(Rational, usize)> {
    let n = lines(k, b)?;
    let tiers = tiers(k, n)?;
    let d_max = tiers.len() - 1;
    let scale = 1i128 << k;
    let deficit: i128 = tiers[..d_max]
        .iter()
        .enumerate()
        .map(|(i, &c)| (d_max - i) as i128 * c as i128)
        .sum();
    Ok((Rational::new(d_max as i128 * scale - deficit, scale), d_max))
}

/// Average distance of the optimal `(k + b, k)` line code:
/// `d_max - sum_{i < d_max} (d_max - i) C(n, i) / 2^k`.
pub fn d_opt<F: Scalar>(k: usize, b: usize) -> Result<F> {
    Ok(F::from_rational(&d_opt_exact(k, b)?.0))
}

/// PPM0 floor `1 - 2^-k`, reached with `b = 2^k - 1 - k`.
pub fn d_min<F: Scalar>(k: usize) -> Result<F> {
    if !(1..=MAX_PPM_INFO_BITS).contains(&k) {
        return Err(Error::out_of_range("k", k as u128, "1..=20"));
    }
    let scale = 1i128 << k;
    Ok(F::from_rational(&Rational::new(scale - 1, scale)))
}

/// Redundancy of the PPM0 scheme, `2^k - 1 - k`.
pub fn ppm0_redundancy(k: usize) -> Result<usize> {
    if !(1..=MAX_PPM_INFO_BITS).contains(&k) {
        return Err(Error::out_of_range("k", k as u128, "1..=20"));
    }
    Ok((1 << k) - 1 - k)
}

/// `1 - D_opt(k, b) / D_unc(k)`.
pub fn energy_saving<F: Scalar>(k: usize, b: usize) -> Result<F> {
    let (d, _) = d_opt_exact(k, b)?;
    Ok(F::from_rational(&saving_from(d, k)))
}

fn saving_from(d: Rational, k: usize) -> Rational {
    Rational::from_integer(1) - d * Rational::new(2, k as i128)
}

/// Saving of the PPM0 floor, the upper bound of every `energy_saving(k, _)`.
pub fn ppm_bound<F: Scalar>(k: usize) -> Result<F> {
    let floor = d_min::<Rational>(k)?;
    Ok(F::from_rational(&saving_from(floor, k)))
}

/// Average encoder cost in units of `C_c(n)`:
/// `(n + 2) D_opt(k, b) + d_max + 1`.
///
/// The `+2` per pulse folds the two additions of each pulse step into
/// comparison units (`C_a = C_c`).
pub fn encoding_cost<F: Scalar>(k: usize, b: usize) -> Result<F> {
    let (d, d_max) = d_opt_exact(k, b)?;
    let n = (k + b) as i128;
    let cost = Rational::from_integer(n + 2) * d + Rational::from_integer(d_max as i128 + 1);
    Ok(F::from_rational(&cost))
}

/// Symbolic operation counts; never converted to energy.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub struct CostCount {
    pub comparisons: u64,
    pub additions: u64,
}

impl CostCount {
    /// Total with additions charged as comparisons.
    pub fn comparison_units(&self) -> u64 {
        self.comparisons + self.additions
    }
}

impl Add for CostCount {
    type Output = CostCount;

    fn add(self, rhs: CostCount) -> CostCount {
        CostCount {
            comparisons: self.comparisons + rhs.comparisons,
            additions: self.additions + rhs.additions,
        }
    }
}

impl AddAssign for CostCount {
    fn add_assign(&mut self, rhs: CostCount) {
        *self = *self + rhs;
    }
}

/// Cost of emitting one weight-`m` word on `n` lines: `n` comparisons and
/// two additions per pulse.
pub fn per_codeword_cost(n: usize, m: usize) -> CostCount {
    debug_assert!(m <= n);
    CostCount {
        comparisons: (n * m) as u64,
        additions: 2 * m as u64,
    }
}

/// Cost of choosing the pulse count: one comparison per tier threshold.
pub fn pulse_count_cost(d_max: usize) -> CostCount {
    CostCount {
        comparisons: d_max as u64 + 1,
        additions: 0,
    }
}

/// Every closed-form quantity for one `(k, b)` pair.
#[derive(Clone, Debug, PartialEq)]
pub struct Analysis {
    pub k: usize,
    pub b: usize,
    pub n: usize,
    pub d_unc: Rational,
    pub d_max: usize,
    pub d_opt: Rational,
    /// `D_opt / D_unc`.
    pub ratio: Rational,
    pub energy_saving: Rational,
    /// PPM0 floor and its ratio to uncoded, when `k <= 20`.
    pub d_min: Option<Rational>,
    pub d_min_ratio: Option<Rational>,
    pub encoding_cost: Rational,
}

pub fn analyze(k: usize, b: usize) -> Result<Analysis> {
    let n = lines(k, b)?;
    let (d_opt, d_max) = d_opt_exact(k, b)?;
    let d_unc = d_unc::<Rational>(k)?;
    let d_min = d_min::<Rational>(k).ok();
    Ok(Analysis {
        k,
        b,
        n,
        d_unc,
        d_max,
        d_opt,
        ratio: d_opt / d_unc,
        energy_saving: saving_from(d_opt, k),
        d_min,
        d_min_ratio: d_min.map(|d| d / d_unc),
        encoding_cost: encoding_cost(k, b)?,
    })
}
