//! Transition counting under a uniform memoryless source.
//!
//! Traces are cut into segments of [`SEGMENT_LEN`] words. Segment `i` starts
//! from the all-zero bus and draws its words from ChaCha8 stream `i` of the
//! trace seed, so a trace is fully determined by `(spec, length, seed)` and
//! the same totals come out whether segments run on one thread or many.

use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::analytics::CostCount;
use crate::codecs::{Codec, CodecSpec};
use crate::word::mask;
use crate::{Error, Rational, Result};

/// Words per independently seeded segment.
pub const SEGMENT_LEN: u64 = 1 << 16;
/// Exhaustive averaging limits.
pub const MAX_EXACT_INFO_BITS: usize = 14;
pub const MAX_EXACT_LINES: usize = 24;
/// Per-state means are kept only up to this many lines.
const MAX_PER_STATE_LINES: usize = 16;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct TraceConfig {
    pub spec: CodecSpec,
    pub trace_length: u64,
    pub seed: u64,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct TransitionStats {
    pub words_sent: u64,
    pub total_transitions: u64,
    /// `histogram[t]` counts words that toggled `t` lines.
    pub histogram: Vec<u64>,
    /// Clocks of the pulse-position modulator (one per pulse).
    pub clock_cycles_total: u64,
    /// Clocks of a bit-serial modulator (one per line).
    pub baseline_clock_cycles_total: u64,
    pub comparisons_total: u64,
    pub additions_total: u64,
}

impl TransitionStats {
    fn empty(n: usize) -> Self {
        TransitionStats {
            histogram: vec![0; n + 1],
            ..Default::default()
        }
    }

    pub fn mean_transitions(&self) -> Rational {
        Rational::new(self.total_transitions as i128, self.words_sent.max(1) as i128)
    }

    pub fn mean_transitions_f64(&self) -> f64 {
        self.total_transitions as f64 / self.words_sent.max(1) as f64
    }

    pub fn mean_clock_cycles(&self) -> Rational {
        Rational::new(self.clock_cycles_total as i128, self.words_sent.max(1) as i128)
    }

    pub fn cost(&self) -> CostCount {
        CostCount {
            comparisons: self.comparisons_total,
            additions: self.additions_total,
        }
    }

    /// Adds `other` into `self`; associative and commutative.
    pub fn merge(&mut self, other: &TransitionStats) {
        self.words_sent += other.words_sent;
        self.total_transitions += other.total_transitions;
        if self.histogram.len() < other.histogram.len() {
            self.histogram.resize(other.histogram.len(), 0);
        }
        for (a, b) in self.histogram.iter_mut().zip(&other.histogram) {
            *a += b;
        }
        self.clock_cycles_total += other.clock_cycles_total;
        self.baseline_clock_cycles_total += other.baseline_clock_cycles_total;
        self.comparisons_total += other.comparisons_total;
        self.additions_total += other.additions_total;
    }
}

fn segment_count(len: u64) -> u64 {
    len.div_ceil(SEGMENT_LEN)
}

fn run_segment(codec: &Codec, cfg: &TraceConfig, index: u64) -> Result<TransitionStats> {
    let spec = codec.spec();
    let (k, n) = (spec.k(), spec.n());
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    rng.set_stream(index);
    let words = SEGMENT_LEN.min(cfg.trace_length - index * SEGMENT_LEN);
    let optimal = codec.optimal();
    let mut stats = TransitionStats::empty(n);
    let mut prev = 0u64;
    for _ in 0..words {
        let u = rng.next_u64() & mask(k);
        let x = codec.encode_bits(prev, u)?;
        let toggled = (x ^ prev).count_ones() as u64;
        stats.histogram[toggled as usize] += 1;
        stats.total_transitions += toggled;
        if let Some(o) = optimal {
            stats.clock_cycles_total += toggled;
            stats.baseline_clock_cycles_total += n as u64;
            let cost = o.encode_cost(u);
            stats.comparisons_total += cost.comparisons;
            stats.additions_total += cost.additions;
        }
        prev = x;
    }
    stats.words_sent = words;
    Ok(stats)
}

/// Runs the trace on the current thread.
pub fn run_trace(cfg: &TraceConfig) -> Result<TransitionStats> {
    run_trace_parallel(cfg, 1)
}

/// Runs the trace's segments on `jobs` worker threads. The result does not
/// depend on `jobs`.
pub fn run_trace_parallel(cfg: &TraceConfig, jobs: usize) -> Result<TransitionStats> {
    if cfg.trace_length == 0 {
        return Err(Error::out_of_range("trace_length", 0u64, ">= 1"));
    }
    let codec = Codec::new(cfg.spec)?;
    let segments = segment_count(cfg.trace_length);
    let merged = |parts: Vec<TransitionStats>| {
        parts.iter().fold(TransitionStats::empty(cfg.spec.n()), |mut acc, s| {
            acc.merge(s);
            acc
        })
    };
    if jobs <= 1 {
        let parts = (0..segments)
            .map(|i| run_segment(&codec, cfg, i))
            .collect::<Result<Vec<_>>>()?;
        return Ok(merged(parts));
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs)
        .build()
        .map_err(|e| Error::InvalidSpec(format!("cannot start {jobs} workers: {e}")))?;
    let parts = pool.install(|| {
        (0..segments)
            .into_par_iter()
            .map(|i| run_segment(&codec, cfg, i))
            .collect::<Result<Vec<_>>>()
    })?;
    Ok(merged(parts))
}

/// Exact `E[w(x_j ^ x_{j-1})]` under uniform `u_j` and uniform `x_{j-1}`.
#[derive(Clone, Debug, PartialEq)]
pub struct ExactAverageReport {
    pub exact_mean: Rational,
    /// True for differential codes, whose mean is the same from every state.
    pub state_independent: bool,
    /// Mean from each previous state, for state-dependent codecs with at
    /// most 16 lines.
    pub per_state: Option<Vec<Rational>>,
}

pub fn exact_average_distance(spec: &CodecSpec) -> Result<ExactAverageReport> {
    if spec.k() > MAX_EXACT_INFO_BITS || spec.n() > MAX_EXACT_LINES {
        return Err(Error::SizeCap(format!(
            "exhaustive average needs k <= {MAX_EXACT_INFO_BITS} and n <= {MAX_EXACT_LINES}, got {spec}"
        )));
    }
    let codec = Codec::new(*spec)?;
    let inputs = 1u64 << spec.k();
    if spec.is_differential() {
        let mut total = 0u64;
        for u in 0..inputs {
            let d = codec.differential_bits(u).expect("differential family")?;
            total += d.count_ones() as u64;
        }
        return Ok(ExactAverageReport {
            exact_mean: Rational::new(total as i128, inputs as i128),
            state_independent: true,
            per_state: None,
        });
    }
    let states = 1u64 << spec.n();
    let per_state_totals = (0..states)
        .into_par_iter()
        .map(|s| {
            (0..inputs).try_fold(0u64, |acc, u| {
                Ok(acc + (codec.encode_bits(s, u)? ^ s).count_ones() as u64)
            })
        })
        .collect::<Result<Vec<u64>>>()?;
    let total: u64 = per_state_totals.iter().sum();
    let per_state = (spec.n() <= MAX_PER_STATE_LINES).then(|| {
        per_state_totals
            .iter()
            .map(|&t| Rational::new(t as i128, inputs as i128))
            .collect()
    });
    Ok(ExactAverageReport {
        exact_mean: Rational::new(total as i128, (inputs * states) as i128),
        state_independent: false,
        per_state,
    })
}

/// `(m, n)`: clocks of the pulse-position modulator versus a bit-serial one
/// that visits every line.
pub fn clock_model(codec: &Codec, u: u64) -> Result<(usize, usize)> {
    let o = codec.optimal().ok_or_else(|| {
        Error::InvalidSpec(format!("clock model needs the optimal codec, got {}", codec.spec()))
    })?;
    if (u as u128) >> o.k() != 0 {
        return Err(Error::out_of_range("u", u, format!("< 2^{}", o.k())));
    }
    Ok((o.pulse_count(u), o.n()))
}

/// Modulator totals over every input `0..2^k` of the optimal codec.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ModulatorPass {
    pub inputs: u64,
    pub clocks_total: u64,
    pub max_clocks: usize,
    pub baseline_clocks_total: u64,
    /// Total differential weight over all inputs.
    pub weight_total: u64,
    /// Inputs whose clock count differs from their differential weight.
    pub clock_weight_mismatches: u64,
    pub cost: CostCount,
}

impl ModulatorPass {
    pub fn mean_clocks(&self) -> Rational {
        Rational::new(self.clocks_total as i128, self.inputs as i128)
    }

    /// Average cost per word in comparison units.
    pub fn mean_cost_units(&self) -> Rational {
        Rational::new(self.cost.comparison_units() as i128, self.inputs as i128)
    }
}

pub fn exhaustive_modulator_pass(codec: &Codec) -> Result<ModulatorPass> {
    let o = codec.optimal().ok_or_else(|| {
        Error::InvalidSpec(format!("modulator pass needs the optimal codec, got {}", codec.spec()))
    })?;
    if o.k() > 32 {
        return Err(Error::SizeCap(format!("2^{} inputs", o.k())));
    }
    let inputs = 1u64 << o.k();
    let mut pass = ModulatorPass {
        inputs,
        clocks_total: 0,
        max_clocks: 0,
        baseline_clocks_total: 0,
        weight_total: 0,
        clock_weight_mismatches: 0,
        cost: CostCount::default(),
    };
    for u in 0..inputs {
        let (clocks, baseline) = clock_model(codec, u)?;
        let weight = o.differential_bits(u)?.count_ones() as usize;
        pass.clocks_total += clocks as u64;
        pass.max_clocks = pass.max_clocks.max(clocks);
        pass.baseline_clocks_total += baseline as u64;
        pass.weight_total += weight as u64;
        pass.clock_weight_mismatches += u64::from(clocks != weight);
        pass.cost += o.encode_cost(u);
    }
    Ok(pass)
}

#[derive(Clone, Debug, PartialEq)]
pub struct ConvergenceReport {
    pub mean: f64,
    pub reference: f64,
    pub relative_error: f64,
    pub tolerance: f64,
    /// `tolerance - relative_error`; negative on failure.
    pub margin: f64,
    pub passed: bool,
    pub stats: TransitionStats,
}

/// Runs the trace and checks `|mean - reference| / reference <= tolerance`.
pub fn convergence_check(
    cfg: &TraceConfig,
    reference: Rational,
    tolerance: f64,
    jobs: usize,
) -> Result<ConvergenceReport> {
    let stats = run_trace_parallel(cfg, jobs)?;
    let mean = stats.mean_transitions_f64();
    let reference = crate::Scalar::to_f64(&reference);
    let relative_error = if reference == 0.0 {
        mean.abs()
    } else {
        (mean - reference).abs() / reference.abs()
    };
    Ok(ConvergenceReport {
        mean,
        reference,
        relative_error,
        tolerance,
        margin: tolerance - relative_error,
        passed: relative_error <= tolerance,
        stats,
    })
}
