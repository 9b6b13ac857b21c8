//! Analysis and simulation of low-transition bus encodings.
//!
//! A bus encoder maps each `k`-bit information word onto an `n = k + b` line
//! bus so that consecutive bus words differ in as few lines as possible. This
//! crate provides:
//!
//! - [`combinatorics`]: exact binomial tables and the combinatorial number
//!   system used to map integers onto pulse positions (MPPM).
//! - [`codecs`]: encoders/decoders for the uncoded bus, Data Bus Inversion,
//!   PPM0, the optimal low-weight differential code and syndrome (coset)
//!   based encoders built from repetition, Hamming and Golay codes.
//! - [`analytics`]: closed-form average distances, energy savings and the
//!   encoder cost model, as exact rationals.
//! - [`simulator`]: seeded Monte Carlo traces and exhaustive averages.
//!
//! Bit `i` of every [`Word`] is bus line `i`; line 0 is the least
//! significant bit.

pub mod analytics;
pub mod codecs;
pub mod combinatorics;
mod error;
pub mod scalar;
pub mod simulator;
mod word;

pub use error::{Error, Result};
pub use scalar::Scalar;
pub use word::Word;

/// Exact rational used for every closed-form value.
pub type Rational = num_rational::Ratio<i128>;

/// Binomial table over 128-bit integers, wide enough for every `C(n, m)`
/// with `n <= 64`.
pub type Binomials = combinatorics::BinomialTable<u128>;

/// Binomial table over 64-bit integers (valid up to `n = 67`).
pub type Binomials64 = combinatorics::BinomialTable<u64>;
