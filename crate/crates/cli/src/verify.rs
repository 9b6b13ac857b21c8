//! Built-in invariant checks behind `buslab verify`.

use std::collections::HashSet;
use std::time::Instant;

use buslab::analytics::{d_opt, encoding_cost};
use buslab::codecs::{
    make_golay23, make_hamming, supported_specs, BusState, Codec, CodecSpec, CosetLeaderTable,
    LinearCode,
};
use buslab::simulator::exhaustive_modulator_pass;
use buslab::{Binomials, Rational, Word};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::{CliError, Scope, VerifyArgs};

const RANK_MAX_LINES: usize = 12;
const ROUNDTRIP_MAX_INFO_BITS: usize = 12;
const ROUNDTRIP_STATES: usize = 100;

struct Outcome {
    name: &'static str,
    detail: String,
    passed: bool,
}

fn outcome(name: &'static str, result: Result<String, String>) -> Outcome {
    match result {
        Ok(detail) => Outcome {
            name,
            detail,
            passed: true,
        },
        Err(detail) => Outcome {
            name,
            detail,
            passed: false,
        },
    }
}

pub fn run(args: &VerifyArgs) -> Result<(), CliError> {
    let scopes: &[Scope] = match args.scope {
        Scope::All => &[Scope::Rank, Scope::Roundtrip, Scope::Coset, Scope::Optimal],
        ref one => std::slice::from_ref(one),
    };
    let mut failed = 0;
    for scope in scopes {
        let start = Instant::now();
        let result = match scope {
            Scope::Rank => outcome("rank", check_rank()),
            Scope::Roundtrip => outcome("roundtrip", check_roundtrip(args.seed)),
            Scope::Coset => outcome("coset", check_coset()),
            Scope::Optimal => outcome("optimal", check_optimal()),
            Scope::All => unreachable!(),
        };
        let tag = if result.passed { "PASS" } else { "FAIL" };
        println!(
            "[{tag}] {:<10} {} ({:.2} s)",
            result.name,
            result.detail,
            start.elapsed().as_secs_f64()
        );
        if !result.passed {
            failed += 1;
        }
    }
    if failed > 0 {
        return Err(CliError::Failed(format!("{failed} verification scope(s) failed")));
    }
    Ok(())
}

/// Unranking every `x < C(n, m)` yields distinct weight-`m` words whose rank
/// is `x`; with `C(n, m)` of them that is a bijection.
fn check_rank() -> Result<String, String> {
    let table = Binomials::new(RANK_MAX_LINES).map_err(|e| e.to_string())?;
    let mut pairs = 0u64;
    for n in 0..=RANK_MAX_LINES {
        for m in 0..=n {
            let count = table.get(n, m) as u64;
            let mut seen = HashSet::with_capacity(count as usize);
            for x in 0..count {
                let p = table
                    .mppm_unrank(x as u128, m, n)
                    .map_err(|e| format!("unrank({x}, {m}, {n}): {e}"))?;
                let s = p.as_slice();
                if s.len() != m || s.windows(2).any(|w| w[0] >= w[1]) || s.iter().any(|&i| i >= n) {
                    return Err(format!("unrank({x}, {m}, {n}) = {s:?} is not a valid {m}-subset"));
                }
                let mask = table
                    .mppm_unrank_mask(x as u128, m, n)
                    .map_err(|e| e.to_string())?;
                let back = table.mppm_rank(&p).map_err(|e| e.to_string())?;
                let back_mask = table.mppm_rank_mask(mask).map_err(|e| e.to_string())?;
                if back != x as u128 || back_mask != x as u128 || !seen.insert(mask) {
                    return Err(format!("rank/unrank mismatch at x={x}, m={m}, n={n}"));
                }
                pairs += 1;
            }
        }
    }
    Ok(format!("bijection for all n <= {RANK_MAX_LINES}, m <= n ({pairs} ranks)"))
}

fn random_states(rng: &mut ChaCha8Rng, n: usize) -> Vec<BusState> {
    let top = if n == 64 { u64::MAX } else { (1u64 << n) - 1 };
    let mut states = vec![
        BusState::new(Word::new(0, n).expect("n <= 64")),
        BusState::new(Word::new(top, n).expect("n <= 64")),
    ];
    while states.len() < ROUNDTRIP_STATES {
        let bits = rng.gen::<u64>() & top;
        states.push(BusState::new(Word::new(bits, n).expect("masked")));
    }
    states
}

fn roundtrip_one(spec: CodecSpec, states: &[BusState]) -> Result<u64, String> {
    let codec = Codec::new(spec).map_err(|e| format!("{spec}: {e}"))?;
    let mut checked = 0;
    for state in states {
        for u in 0..1u64 << spec.k() {
            let u = Word::new(u, spec.k()).expect("u < 2^k");
            let x = codec.encode(state, &u).map_err(|e| format!("{spec}: {e}"))?;
            let back = codec.decode(state, &x).map_err(|e| format!("{spec}: {e}"))?;
            if back != u {
                return Err(format!("{spec}: state {} u {u} decoded as {back}", state.word()));
            }
            checked += 1;
        }
    }
    Ok(checked)
}

fn check_roundtrip(seed: u64) -> Result<String, String> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let specs = supported_specs(ROUNDTRIP_MAX_INFO_BITS);
    let mut checked = 0;
    for &spec in &specs {
        let states = random_states(&mut rng, spec.n());
        checked += roundtrip_one(spec, &states)?;
    }
    Ok(format!(
        "{} specs with k <= {ROUNDTRIP_MAX_INFO_BITS}, {ROUNDTRIP_STATES} states each, {checked} words",
        specs.len()
    ))
}

fn leader_syndromes_ok(code: &LinearCode, table: &CosetLeaderTable) -> bool {
    (0..table.len() as u64).all(|s| code.syndrome(table.leader_bits(s)) == s)
}

fn check_coset() -> Result<String, String> {
    let hamming = make_hamming(4).map_err(|e| e.to_string())?;
    let hamming_table = CosetLeaderTable::build(&hamming).map_err(|e| e.to_string())?;
    if hamming_table.max_weight() > 1 || !leader_syndromes_ok(&hamming, &hamming_table) {
        return Err("Hamming(15,11) leaders are not all weight <= 1 with matching syndromes".into());
    }
    let golay = make_golay23().map_err(|e| e.to_string())?;
    let golay_table = CosetLeaderTable::build(&golay).map_err(|e| e.to_string())?;
    let tiers = golay_table.tier_sizes();
    if tiers != [1, 23, 253, 1771] || !leader_syndromes_ok(&golay, &golay_table) {
        return Err(format!("Golay leader tiers {tiers:?}, expected [1, 23, 253, 1771]"));
    }
    let distance = golay.minimum_distance().map_err(|e| e.to_string())?;
    if distance != 7 {
        return Err(format!("Golay minimum distance {distance}, expected 7"));
    }
    let tiers: Vec<String> = tiers.iter().map(usize::to_string).collect();
    Ok(format!(
        "Hamming(15,11) leaders weight <= 1; Golay(23,12) leader tiers {}; Golay d_min = {distance}",
        tiers.join("/")
    ))
}

/// Optimal-code grid: `k <= 10`, `b <= 8`, `k + b <= 18`.
fn optimal_grid() -> impl Iterator<Item = (usize, usize)> {
    (1..=10usize).flat_map(|k| (0..=8usize).filter(move |b| k + b <= 18).map(move |b| (k, b)))
}

fn check_optimal() -> Result<String, String> {
    let mut points = 0;
    for (k, b) in optimal_grid() {
        let spec = CodecSpec::optimal(k, b).map_err(|e| e.to_string())?;
        let codec = Codec::new(spec).map_err(|e| e.to_string())?;
        let total: i128 = (0..1u64 << k)
            .map(|u| {
                codec
                    .differential(&Word::new(u, k).expect("u < 2^k"))
                    .map(|d| d.weight() as i128)
            })
            .sum::<Result<i128, _>>()
            .map_err(|e| e.to_string())?;
        let mean = Rational::new(total, 1i128 << k);
        let closed = d_opt::<Rational>(k, b).map_err(|e| e.to_string())?;
        if mean != closed {
            return Err(format!("k={k} b={b}: codec mean {mean} != closed form {closed}"));
        }
        let pass = exhaustive_modulator_pass(&codec).map_err(|e| e.to_string())?;
        let cost = encoding_cost::<Rational>(k, b).map_err(|e| e.to_string())?;
        if pass.mean_cost_units() != cost || pass.clock_weight_mismatches != 0 {
            return Err(format!("k={k} b={b}: modulator clocks or cost disagree"));
        }
        points += 1;
    }
    Ok(format!(
        "codec mean weight, clocks and cost equal the closed forms at {points} (k, b) points"
    ))
}
