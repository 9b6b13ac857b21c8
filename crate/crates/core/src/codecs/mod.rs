//! Bus encoders and decoders sharing one interface: `x_j = f(u_j; x_{j-1})`.
//!
//! Differential families (PPM0, optimal MPPM, coset) compute a low-weight
//! word `d(u)` and send `x_j = d(u_j) ^ x_{j-1}`; their transition count is
//! `w(d(u))` whatever the bus state. DBI and the uncoded bus depend on the
//! state.

mod linear;
mod optimal;

use std::fmt;

pub use linear::{
    make_golay23, make_hamming, make_repetition, CosetLeaderTable, LinearCode,
    MAX_ENUMERATED_DIMENSION, MAX_TABLE_REDUNDANCY,
};
pub use optimal::OptimalMppm;

use crate::word::{mask, Word};
use crate::{Error, Result};

/// Widest bus any codec drives.
pub const MAX_LINES: usize = Word::MAX_LEN;
/// Largest `k` for PPM0 (its bus has `2^k - 1 <= 64` lines).
pub const MAX_PPM0_INFO_BITS: usize = 6;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum CosetCode {
    /// `(N, 1)` repetition code.
    Repetition { length: usize },
    /// Hamming code of order `m`, `N = 2^m - 1`.
    Hamming { m: usize },
    /// `(23, 12)` Golay code.
    Golay23,
}

impl CosetCode {
    pub fn build(&self) -> Result<LinearCode> {
        match *self {
            CosetCode::Repetition { length } => make_repetition(length),
            CosetCode::Hamming { m } => make_hamming(m),
            CosetCode::Golay23 => make_golay23(),
        }
    }

    /// `(N, N - K)`: bus lines and information bits.
    fn geometry(&self) -> (usize, usize) {
        match *self {
            CosetCode::Repetition { length } => (length, length.saturating_sub(1)),
            CosetCode::Hamming { m } => ((1usize << m.min(63)) - 1, m),
            CosetCode::Golay23 => (23, 11),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Family {
    Uncoded,
    Dbi,
    Ppm0,
    OptimalMppm,
    Coset(CosetCode),
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Family::Uncoded => write!(f, "uncoded"),
            Family::Dbi => write!(f, "dbi"),
            Family::Ppm0 => write!(f, "ppm0"),
            Family::OptimalMppm => write!(f, "optimal"),
            Family::Coset(CosetCode::Repetition { length }) => write!(f, "repetition({length})"),
            Family::Coset(CosetCode::Hamming { m }) => write!(f, "hamming({m})"),
            Family::Coset(CosetCode::Golay23) => write!(f, "golay"),
        }
    }
}

/// Validated `(family, k, b)`; `n = k + b`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct CodecSpec {
    family: Family,
    k: usize,
    b: usize,
}

fn invalid(msg: String) -> Error {
    Error::InvalidSpec(msg)
}

impl CodecSpec {
    pub fn uncoded(k: usize) -> Result<Self> {
        if !(1..=MAX_LINES).contains(&k) {
            return Err(invalid(format!("uncoded k = {k} not in 1..=64")));
        }
        Ok(CodecSpec {
            family: Family::Uncoded,
            k,
            b: 0,
        })
    }

    pub fn dbi(k: usize) -> Result<Self> {
        if !(1..MAX_LINES).contains(&k) {
            return Err(invalid(format!("DBI k = {k} not in 1..=63")));
        }
        Ok(CodecSpec {
            family: Family::Dbi,
            k,
            b: 1,
        })
    }

    pub fn ppm0(k: usize) -> Result<Self> {
        if !(1..=MAX_PPM0_INFO_BITS).contains(&k) {
            return Err(invalid(format!("PPM0 k = {k} not in 1..=6")));
        }
        Ok(CodecSpec {
            family: Family::Ppm0,
            k,
            b: (1 << k) - 1 - k,
        })
    }

    pub fn optimal(k: usize, b: usize) -> Result<Self> {
        if k == 0 || k.saturating_add(b) > MAX_LINES {
            return Err(invalid(format!(
                "optimal codec needs k >= 1 and k + b <= 64, got k = {k}, b = {b}"
            )));
        }
        Ok(CodecSpec {
            family: Family::OptimalMppm,
            k,
            b,
        })
    }

    pub fn coset(code: CosetCode) -> Result<Self> {
        match code {
            CosetCode::Repetition { length } if !(2..=MAX_LINES).contains(&length) => {
                return Err(invalid(format!("repetition length {length} not in 2..=64")))
            }
            CosetCode::Hamming { m } if !(2..=6).contains(&m) => {
                return Err(invalid(format!("Hamming order {m} not in 2..=6")))
            }
            _ => {}
        }
        let (n, k) = code.geometry();
        Ok(CodecSpec {
            family: Family::Coset(code),
            k,
            b: n - k,
        })
    }

    pub fn family(&self) -> Family {
        self.family
    }

    /// Information bits.
    pub fn k(&self) -> usize {
        self.k
    }

    /// Added lines.
    pub fn b(&self) -> usize {
        self.b
    }

    /// Bus lines.
    pub fn n(&self) -> usize {
        self.k + self.b
    }

    /// Whether `x_j = d(u_j) ^ x_{j-1}` for a fixed map `d`.
    pub fn is_differential(&self) -> bool {
        matches!(
            self.family,
            Family::Ppm0 | Family::OptimalMppm | Family::Coset(_)
        )
    }
}

impl fmt::Display for CodecSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} (k={}, b={}, n={})", self.family, self.k, self.b, self.n())
    }
}

/// Every spec with `k <= max_k` that [`Codec::new`] accepts, in a fixed order.
pub fn supported_specs(max_k: usize) -> Vec<CodecSpec> {
    let mut specs = Vec::new();
    for k in 1..=max_k.min(MAX_LINES) {
        specs.push(CodecSpec::uncoded(k).expect("k in range"));
        if k < MAX_LINES {
            specs.push(CodecSpec::dbi(k).expect("k in range"));
        }
        for b in 0..=(MAX_LINES - k) {
            specs.push(CodecSpec::optimal(k, b).expect("n <= 64"));
        }
        if k <= MAX_PPM0_INFO_BITS {
            specs.push(CodecSpec::ppm0(k).expect("k in range"));
        }
        if k <= MAX_TABLE_REDUNDANCY {
            specs.push(CodecSpec::coset(CosetCode::Repetition { length: k + 1 }).expect("length in range"));
        }
        if (2..=6).contains(&k) {
            specs.push(CodecSpec::coset(CosetCode::Hamming { m: k }).expect("order in range"));
        }
        if k == 11 {
            specs.push(CodecSpec::coset(CosetCode::Golay23).expect("fixed code"));
        }
    }
    specs
}

/// Previous bus word `x_{j-1}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct BusState {
    word: Word,
}

impl BusState {
    /// All-zero power-on state.
    pub fn zero(n: usize) -> Result<Self> {
        Ok(BusState {
            word: Word::zeros(n)?,
        })
    }

    pub fn new(word: Word) -> Self {
        BusState { word }
    }

    pub fn word(&self) -> Word {
        self.word
    }
}

#[derive(Clone, Debug)]
struct CosetEncoder {
    code: LinearCode,
    leaders: CosetLeaderTable,
}

#[derive(Clone, Debug)]
enum Kernel {
    Uncoded,
    Dbi,
    Ppm0,
    Optimal(OptimalMppm),
    Coset(CosetEncoder),
}

/// A ready-to-use encoder/decoder; tables are built once in [`Codec::new`].
#[derive(Clone, Debug)]
pub struct Codec {
    spec: CodecSpec,
    kernel: Kernel,
}

impl Codec {
    pub fn new(spec: CodecSpec) -> Result<Self> {
        let kernel = match spec.family {
            Family::Uncoded => Kernel::Uncoded,
            Family::Dbi => Kernel::Dbi,
            Family::Ppm0 => Kernel::Ppm0,
            Family::OptimalMppm => Kernel::Optimal(OptimalMppm::new(spec.k, spec.b)?),
            Family::Coset(code) => {
                let code = code.build()?;
                let leaders = CosetLeaderTable::build(&code)?;
                Kernel::Coset(CosetEncoder { code, leaders })
            }
        };
        Ok(Codec { spec, kernel })
    }

    pub fn spec(&self) -> &CodecSpec {
        &self.spec
    }

    pub fn optimal(&self) -> Option<&OptimalMppm> {
        match &self.kernel {
            Kernel::Optimal(o) => Some(o),
            _ => None,
        }
    }

    pub fn linear_code(&self) -> Option<&LinearCode> {
        match &self.kernel {
            Kernel::Coset(c) => Some(&c.code),
            _ => None,
        }
    }

    pub fn coset_table(&self) -> Option<&CosetLeaderTable> {
        match &self.kernel {
            Kernel::Coset(c) => Some(&c.leaders),
            _ => None,
        }
    }

    /// Largest weight any differential can have, for differential families.
    pub fn max_differential_weight(&self) -> Option<usize> {
        match &self.kernel {
            Kernel::Ppm0 => Some(1),
            Kernel::Optimal(o) => Some(o.d_max()),
            Kernel::Coset(c) => Some(c.leaders.max_weight()),
            Kernel::Uncoded | Kernel::Dbi => None,
        }
    }

    pub fn initial_state(&self) -> BusState {
        BusState {
            word: Word::from_raw(0, self.spec.n()),
        }
    }

    /// `d(u)` as raw bits; `None` for state-dependent families.
    #[inline]
    pub(crate) fn differential_bits(&self, u: u64) -> Option<Result<u64>> {
        Some(match &self.kernel {
            Kernel::Ppm0 => Ok(if u == 0 { 0 } else { 1 << (u - 1) }),
            Kernel::Optimal(o) => o.differential_bits(u),
            Kernel::Coset(c) => Ok(c.leaders.leader_bits(u)),
            Kernel::Uncoded | Kernel::Dbi => return None,
        })
    }

    /// Raw encoder. `u` must already fit in `k` bits and `prev` in `n`.
    #[inline]
    pub(crate) fn encode_bits(&self, prev: u64, u: u64) -> Result<u64> {
        match &self.kernel {
            Kernel::Uncoded => Ok(u),
            Kernel::Dbi => Ok(dbi_bits(prev, u, self.spec.k)),
            _ => Ok(self.differential_bits(u).expect("differential family")? ^ prev),
        }
    }

    fn decode_bits(&self, prev: u64, x: u64) -> Result<u64> {
        let k = self.spec.k;
        match &self.kernel {
            Kernel::Uncoded => Ok(x),
            Kernel::Dbi => {
                let low = x & mask(k);
                Ok(if x >> k & 1 == 1 { !low & mask(k) } else { low })
            }
            Kernel::Ppm0 => {
                let d = x ^ prev;
                match d.count_ones() {
                    0 => Ok(0),
                    1 => Ok(d.trailing_zeros() as u64 + 1),
                    w => Err(Error::CorruptedWord(format!(
                        "PPM0 differential weight {w} exceeds 1"
                    ))),
                }
            }
            Kernel::Optimal(o) => o.info_bits(x ^ prev),
            Kernel::Coset(c) => Ok(c.code.syndrome(x ^ prev)),
        }
    }

    fn check_inputs(&self, state: &BusState, word: &Word, expected: usize) -> Result<()> {
        state.word.check_len(self.spec.n())?;
        word.check_len(expected)
    }

    /// `x_j` for information word `u` (length `k`) after bus word `state`.
    pub fn encode(&self, state: &BusState, u: &Word) -> Result<Word> {
        self.check_inputs(state, u, self.spec.k)?;
        let x = self.encode_bits(state.word.bits(), u.bits())?;
        Ok(Word::from_raw(x, self.spec.n()))
    }

    /// Recovers `u_j` from `x_j` and `x_{j-1}`.
    pub fn decode(&self, state: &BusState, x: &Word) -> Result<Word> {
        self.check_inputs(state, x, self.spec.n())?;
        let u = self.decode_bits(state.word.bits(), x.bits())?;
        Ok(Word::from_raw(u, self.spec.k))
    }

    /// Encodes `u` and advances `state` to the emitted word.
    pub fn step(&self, state: &mut BusState, u: &Word) -> Result<Word> {
        let x = self.encode(state, u)?;
        state.word = x;
        Ok(x)
    }

    /// The state-independent differential `d(u)`; errors for the uncoded bus
    /// and DBI.
    pub fn differential(&self, u: &Word) -> Result<Word> {
        u.check_len(self.spec.k)?;
        match self.differential_bits(u.bits()) {
            Some(d) => Ok(Word::from_raw(d?, self.spec.n())),
            None => Err(invalid(format!("{} is not a differential code", self.spec.family))),
        }
    }

    /// `d(u)` of the optimal code: `C(n,0) + ... + C(n,m) > u` picks `m`,
    /// the remainder is unranked into `m` pulses.
    pub fn optimal_differential(&self, u: &Word) -> Result<Word> {
        match self.kernel {
            Kernel::Optimal(_) => self.differential(u),
            _ => Err(invalid(format!("{} is not the optimal code", self.spec.family))),
        }
    }
}

/// DBI choice: `u || 0` or `!u || 1`, whichever is closer to `prev`;
/// ties keep `u || 0`.
#[inline]
fn dbi_bits(prev: u64, u: u64, k: usize) -> u64 {
    let plain = u;
    let inverted = (!u & mask(k)) | 1 << k;
    if (inverted ^ prev).count_ones() < (plain ^ prev).count_ones() {
        inverted
    } else {
        plain
    }
}

/// Data Bus Inversion on `k = u.len()` lines plus the flag on line `k`.
pub fn dbi_encode(state: &BusState, u: &Word) -> Result<Word> {
    let k = u.len();
    if k == 0 || k >= MAX_LINES {
        return Err(Error::LengthMismatch {
            expected: state.word.len().saturating_sub(1),
            found: k,
        });
    }
    state.word.check_len(k + 1)?;
    Ok(Word::from_raw(dbi_bits(state.word.bits(), u.bits(), k), k + 1))
}
