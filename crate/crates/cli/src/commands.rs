use std::fmt::Write as _;
use std::io::Write as _;
use std::path::PathBuf;

use buslab::analytics::{self, Analysis};
use buslab::codecs::{Codec, CodecSpec, CosetCode};
use buslab::scalar::{format_rational, format_significant};
use buslab::simulator::{exact_average_distance, run_trace_parallel, TraceConfig};
use buslab::{Rational, Scalar, Word};
use serde::Serialize;

use crate::{AnalyzeArgs, CliError, CodebookArgs, FamilyName, Format, SimulateArgs, SweepArgs};

const SIG_DIGITS: usize = 9;

pub fn usage(context: &str, err: impl std::fmt::Display) -> CliError {
    CliError::Usage(format!("{context}: {err}"))
}

fn decimal(r: &Rational) -> String {
    format_significant(r.to_f64(), SIG_DIGITS)
}

#[derive(Serialize)]
struct Exact {
    exact: String,
    decimal: String,
}

impl From<&Rational> for Exact {
    fn from(r: &Rational) -> Self {
        Exact {
            exact: format_rational(r),
            decimal: decimal(r),
        }
    }
}

fn emit(out: Option<&PathBuf>, content: &str) -> Result<(), CliError> {
    match out {
        Some(path) => std::fs::write(path, content)
            .map_err(|e| usage("--out", format!("{}: {e}", path.display()))),
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout
                .write_all(content.as_bytes())
                .map_err(|e| usage("stdout", e))
        }
    }
}

/// Maps a family name and `(k, b)` onto a codec spec.
pub fn spec_for(family: FamilyName, k: usize, b: Option<usize>) -> Result<CodecSpec, CliError> {
    let implied = |spec: CodecSpec| match b {
        Some(b) if b != spec.b() => Err(usage(
            "--b",
            format!("{} fixes b = {}, got {b}", spec.family(), spec.b()),
        )),
        _ => Ok(spec),
    };
    let spec = match family {
        FamilyName::Uncoded => CodecSpec::uncoded(k),
        FamilyName::Dbi => CodecSpec::dbi(k),
        FamilyName::Ppm0 => CodecSpec::ppm0(k),
        FamilyName::Optimal => {
            let b = b.ok_or_else(|| usage("--b", "required for the optimal family"))?;
            return CodecSpec::optimal(k, b).map_err(|e| usage("--k/--b", e));
        }
        FamilyName::Repetition => CodecSpec::coset(CosetCode::Repetition { length: k + 1 }),
        FamilyName::Hamming => CodecSpec::coset(CosetCode::Hamming { m: k }),
        FamilyName::Golay => {
            if k != 11 {
                return Err(usage("--k", format!("golay encodes k = 11 bits, got {k}")));
            }
            CodecSpec::coset(CosetCode::Golay23)
        }
    }
    .map_err(|e| usage("--k", e))?;
    implied(spec)
}

#[derive(Serialize)]
struct AnalyzeReport {
    k: usize,
    b: usize,
    n: usize,
    d_max: usize,
    d_unc: Exact,
    d_opt: Exact,
    ratio: Exact,
    energy_saving: Exact,
    d_min: Option<Exact>,
    d_min_ratio: Option<Exact>,
    encoding_cost: Exact,
}

impl From<&Analysis> for AnalyzeReport {
    fn from(a: &Analysis) -> Self {
        AnalyzeReport {
            k: a.k,
            b: a.b,
            n: a.n,
            d_max: a.d_max,
            d_unc: (&a.d_unc).into(),
            d_opt: (&a.d_opt).into(),
            ratio: (&a.ratio).into(),
            energy_saving: (&a.energy_saving).into(),
            d_min: a.d_min.as_ref().map(Exact::from),
            d_min_ratio: a.d_min_ratio.as_ref().map(Exact::from),
            encoding_cost: (&a.encoding_cost).into(),
        }
    }
}

fn both(r: &Rational) -> String {
    format!("{} = {}", format_rational(r), decimal(r))
}

pub fn analyze(args: &AnalyzeArgs) -> Result<(), CliError> {
    let a = analytics::analyze(args.k, args.b).map_err(|e| usage("analyze", e))?;
    let mut out = String::new();
    match args.format.format() {
        Format::Json => {
            out = serde_json::to_string_pretty(&AnalyzeReport::from(&a)).expect("serializable");
            out.push('\n');
        }
        Format::Csv => {
            let opt = |r: &Option<Rational>| r.as_ref().map(format_rational).unwrap_or_default();
            out.push_str("k,b,n,d_max,d_unc,d_opt,d_opt_decimal,ratio,energy_saving,d_min,d_min_ratio,encoding_cost\n");
            let _ = writeln!(
                out,
                "{},{},{},{},{},{},{},{},{},{},{},{}",
                a.k,
                a.b,
                a.n,
                a.d_max,
                format_rational(&a.d_unc),
                format_rational(&a.d_opt),
                decimal(&a.d_opt),
                format_rational(&a.ratio),
                decimal(&a.energy_saving),
                opt(&a.d_min),
                opt(&a.d_min_ratio),
                format_rational(&a.encoding_cost),
            );
        }
        Format::Text => {
            let _ = writeln!(out, "k              {}", a.k);
            let _ = writeln!(out, "b              {}", a.b);
            let _ = writeln!(out, "n              {}", a.n);
            let _ = writeln!(out, "d_unc          {}", both(&a.d_unc));
            let _ = writeln!(out, "d_max          {}", a.d_max);
            let _ = writeln!(out, "d_opt          {}", both(&a.d_opt));
            let _ = writeln!(out, "ratio          {}", both(&a.ratio));
            let _ = writeln!(out, "energy_saving  {}", both(&a.energy_saving));
            if let (Some(d), Some(r)) = (&a.d_min, &a.d_min_ratio) {
                let _ = writeln!(out, "d_min          {}", both(d));
                let _ = writeln!(out, "d_min_ratio    {}", both(r));
            }
            let _ = writeln!(out, "encoding_cost  {} x C_c(n)", both(&a.encoding_cost));
        }
    }
    emit(None, &out)
}

/// CSV rows `b,d_max,d_opt,saving` for `b = 0..=b_max`, then a `ppm_bound`
/// row with the PPM0 floor.
pub fn sweep_csv(k: usize, b_max: usize) -> Result<String, CliError> {
    let mut out = String::from("b,d_max,d_opt,saving\n");
    for b in 0..=b_max {
        let d_max = analytics::d_max(k, b).map_err(|e| usage("--b", e))?;
        let d_opt = analytics::d_opt::<Rational>(k, b).map_err(|e| usage("--b", e))?;
        let saving = analytics::energy_saving::<Rational>(k, b).map_err(|e| usage("--b", e))?;
        let _ = writeln!(out, "{b},{d_max},{},{}", format_rational(&d_opt), decimal(&saving));
    }
    let floor = analytics::d_min::<Rational>(k).map_err(|e| usage("--k", e))?;
    let bound = analytics::ppm_bound::<Rational>(k).map_err(|e| usage("--k", e))?;
    let _ = writeln!(out, "ppm_bound,1,{},{}", format_rational(&floor), decimal(&bound));
    Ok(out)
}

pub fn sweep(args: &SweepArgs) -> Result<(), CliError> {
    let b_max = match args.b_max {
        Some(b) => b,
        None => analytics::ppm0_redundancy(args.k).map_err(|e| usage("--k", e))?,
    };
    let csv = sweep_csv(args.k, b_max)?;
    emit(args.out.as_ref(), &csv)
}

#[derive(Serialize)]
struct SimulateReport {
    codec: String,
    family: String,
    k: usize,
    b: usize,
    n: usize,
    words: u64,
    seed: u64,
    total_transitions: u64,
    mean_transitions: f64,
    mean_transitions_exact: String,
    reference: Option<Exact>,
    reference_source: Option<&'static str>,
    relative_deviation: Option<f64>,
    histogram: Vec<u64>,
    clock_cycles_total: u64,
    baseline_clock_cycles_total: u64,
    comparisons_total: u64,
    additions_total: u64,
}

/// Expected mean transitions: exhaustive when small enough, else the closed
/// form where one exists.
fn reference_mean(spec: &CodecSpec) -> Option<(Rational, &'static str)> {
    if let Ok(report) = exact_average_distance(spec) {
        return Some((report.exact_mean, "exhaustive"));
    }
    use buslab::codecs::Family;
    let closed = match spec.family() {
        Family::Uncoded => analytics::d_unc::<Rational>(spec.k()),
        Family::OptimalMppm | Family::Dbi => analytics::d_opt::<Rational>(spec.k(), spec.b()),
        Family::Ppm0 => analytics::d_min::<Rational>(spec.k()),
        Family::Coset(_) => return None,
    };
    closed.ok().map(|r| (r, "closed form"))
}

pub fn simulate(args: &SimulateArgs) -> Result<(), CliError> {
    let spec = spec_for(args.family, args.k, args.b)?;
    if args.length == 0 {
        return Err(usage("--length", "must be at least 1"));
    }
    if args.jobs == 0 {
        return Err(usage("--jobs", "must be at least 1"));
    }
    let cfg = TraceConfig {
        spec,
        trace_length: args.length,
        seed: args.seed,
    };
    let stats = run_trace_parallel(&cfg, args.jobs).map_err(|e| usage("simulate", e))?;
    let mean = stats.mean_transitions_f64();
    let reference = reference_mean(&spec);
    let deviation = reference
        .as_ref()
        .map(|(r, _)| (mean - r.to_f64()).abs() / r.to_f64());
    let report = SimulateReport {
        codec: spec.to_string(),
        family: spec.family().to_string(),
        k: spec.k(),
        b: spec.b(),
        n: spec.n(),
        words: stats.words_sent,
        seed: args.seed,
        total_transitions: stats.total_transitions,
        mean_transitions: mean,
        mean_transitions_exact: format_rational(&stats.mean_transitions()),
        reference: reference.as_ref().map(|(r, _)| r.into()),
        reference_source: reference.as_ref().map(|&(_, s)| s),
        relative_deviation: deviation,
        histogram: stats.histogram.clone(),
        clock_cycles_total: stats.clock_cycles_total,
        baseline_clock_cycles_total: stats.baseline_clock_cycles_total,
        comparisons_total: stats.comparisons_total,
        additions_total: stats.additions_total,
    };
    let mut out = String::new();
    match args.format.format() {
        Format::Json => {
            out = serde_json::to_string_pretty(&report).expect("serializable");
            out.push('\n');
        }
        Format::Csv => {
            out.push_str("family,k,b,n,words,seed,total_transitions,mean,reference,relative_deviation\n");
            let _ = writeln!(
                out,
                "{},{},{},{},{},{},{},{},{},{}",
                report.family,
                report.k,
                report.b,
                report.n,
                report.words,
                report.seed,
                report.total_transitions,
                format_significant(mean, SIG_DIGITS),
                report.reference.as_ref().map(|r| r.exact.as_str()).unwrap_or(""),
                deviation.map(|d| format_significant(d, SIG_DIGITS)).unwrap_or_default(),
            );
        }
        Format::Text => {
            let _ = writeln!(out, "codec          {}", report.codec);
            let _ = writeln!(out, "words          {}", report.words);
            let _ = writeln!(out, "seed           {}", report.seed);
            let _ = writeln!(out, "transitions    {}", report.total_transitions);
            let _ = writeln!(out, "mean           {}", format_significant(mean, SIG_DIGITS));
            if let (Some((r, source)), Some(d)) = (&reference, deviation) {
                let _ = writeln!(out, "reference      {} ({source})", both(r));
                let _ = writeln!(out, "deviation      {:.4}%", d * 100.0);
            }
            if stats.baseline_clock_cycles_total > 0 {
                let words = stats.words_sent as f64;
                let _ = writeln!(
                    out,
                    "clocks/word    {} (bit-serial baseline {})",
                    format_significant(stats.clock_cycles_total as f64 / words, SIG_DIGITS),
                    stats.baseline_clock_cycles_total / stats.words_sent
                );
                let _ = writeln!(
                    out,
                    "cost/word      {} comparisons, {} additions",
                    format_significant(stats.comparisons_total as f64 / words, SIG_DIGITS),
                    format_significant(stats.additions_total as f64 / words, SIG_DIGITS)
                );
            }
            let hist: Vec<String> = stats
                .histogram
                .iter()
                .enumerate()
                .filter(|(_, &c)| c > 0)
                .map(|(t, c)| format!("{t}:{c}"))
                .collect();
            let _ = writeln!(out, "histogram      {}", hist.join(" "));
        }
    }
    emit(None, &out)
}

pub const MAX_CODEBOOK_INFO_BITS: usize = 12;

/// Lines `u,differential,weight` for every `u`, differential printed with
/// line 0 rightmost.
pub fn codebook_csv(spec: &CodecSpec) -> Result<String, CliError> {
    if spec.k() > MAX_CODEBOOK_INFO_BITS {
        return Err(usage("--k", format!("codebook dumps need k <= {MAX_CODEBOOK_INFO_BITS}")));
    }
    let codec = Codec::new(*spec).map_err(|e| usage("codebook", e))?;
    let mut out = String::from("u,differential,weight\n");
    for u in 0..1u64 << spec.k() {
        let u_word = Word::new(u, spec.k()).expect("u < 2^k");
        let d = codec
            .differential(&u_word)
            .map_err(|e| usage("--family", e))?;
        let _ = writeln!(out, "{u},{d},{}", d.weight());
    }
    Ok(out)
}

pub fn codebook(args: &CodebookArgs) -> Result<(), CliError> {
    let spec = spec_for(args.family, args.k, args.b)?;
    let csv = codebook_csv(&spec)?;
    emit(args.out.as_ref(), &csv)
}
