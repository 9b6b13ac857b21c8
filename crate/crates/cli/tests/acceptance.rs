//! Acceptance suite: one PASS/FAIL line per criterion, each checked against
//! its runtime budget. Runs without the libtest harness so the lines always
//! reach the output.

use std::process::{Command, ExitCode};
use std::time::{Duration, Instant};

use buslab::analytics::{d_max, d_min, d_opt, d_unc};
use buslab::codecs::{
    make_golay23, make_hamming, supported_specs, BusState, Codec, CodecSpec, CosetCode,
    CosetLeaderTable, LinearCode,
};
use buslab::simulator::{clock_model, exhaustive_modulator_pass};
use buslab::{Binomials, Rational, Word};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::Value;

type Check = Result<String, String>;
/// Id, name, runtime budget in seconds, check.
type Criterion = (&'static str, &'static str, u64, fn() -> Check);

fn buslab(args: &[&str]) -> Result<String, String> {
    let out = Command::new(env!("CARGO_BIN_EXE_buslab"))
        .args(args)
        .output()
        .map_err(|e| format!("spawn failed: {e}"))?;
    if !out.status.success() {
        return Err(format!(
            "buslab {} exited with {}: {}",
            args.join(" "),
            out.status,
            String::from_utf8_lossy(&out.stderr).trim()
        ));
    }
    String::from_utf8(out.stdout).map_err(|e| e.to_string())
}

fn json(args: &[&str]) -> Result<Value, String> {
    serde_json::from_str(&buslab(args)?).map_err(|e| e.to_string())
}

fn field<'a>(v: &'a Value, path: &[&str]) -> Result<&'a Value, String> {
    path.iter()
        .try_fold(v, |v, key| v.get(key))
        .ok_or_else(|| format!("missing JSON field {}", path.join(".")))
}

fn field_str<'a>(v: &'a Value, path: &[&str]) -> Result<&'a str, String> {
    field(v, path)?
        .as_str()
        .ok_or_else(|| format!("{} is not a string", path.join(".")))
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn err(e: impl std::fmt::Display) -> String {
    e.to_string()
}

fn word(bits: u64, len: usize) -> Word {
    Word::new(bits, len).unwrap()
}

fn rational(k: usize) -> impl Fn(i128) -> Rational {
    move |total| Rational::new(total, 1i128 << k)
}

/// Mean weight of the `2^k` lightest `n`-bit words, by sorting all of them.
fn greedy_mean(k: usize, n: usize) -> Rational {
    let mut weights: Vec<u8> = (0u64..1 << n).map(|x| x.count_ones() as u8).collect();
    weights.sort_unstable();
    rational(k)(weights[..1 << k].iter().map(|&w| w as i128).sum())
}

/// `k <= 10`, `b <= 8`, `n <= 18`.
fn grid() -> Vec<(usize, usize)> {
    (1..=10)
        .flat_map(|k| (0..=8).filter(move |b| k + b <= 18).map(move |b| (k, b)))
        .collect()
}

fn ac1_golay_anchor() -> Check {
    let report = json(&["analyze", "--k", "11", "--b", "12", "--json"])?;
    let exact = field_str(&report, &["d_opt", "exact"])?;
    ensure(exact == "2921/1024", || format!("d_opt = {exact}"))?;
    ensure(d_opt::<Rational>(11, 12).map_err(err)? == Rational::new(2921, 1024), || {
        "library d_opt(11, 12) != 2921/1024".into()
    })?;
    let ratio: f64 = field_str(&report, &["ratio", "decimal"])?.parse().map_err(err)?;
    let rounded = format!("{ratio:.4}");
    ensure(rounded == "0.5186", || format!("ratio {ratio} rounds to {rounded}"))?;
    Ok(format!("d_opt = {exact}, ratio = {rounded}"))
}

fn ac2_max_redundancy() -> Check {
    let floor = d_min::<Rational>(4).map_err(err)?;
    ensure(floor == Rational::new(15, 16), || format!("d_min(4) = {floor}"))?;
    let ratio = floor / d_unc::<Rational>(4).map_err(err)?;
    ensure(ratio == Rational::new(15, 32), || format!("ratio = {ratio}"))?;
    let at_max = d_opt::<Rational>(4, 11).map_err(err)?;
    ensure(at_max == floor, || format!("d_opt(4, 11) = {at_max}"))?;
    let report = json(&["analyze", "--k", "4", "--b", "11", "--json"])?;
    let cli_ratio = field_str(&report, &["d_min_ratio", "exact"])?;
    ensure(cli_ratio == "15/32", || format!("CLI d_min_ratio = {cli_ratio}"))?;
    Ok(format!("d_min(4) = {floor}, ratio = {ratio}, d_opt(4,11) = {at_max}"))
}

fn ac3_saving_curve() -> Check {
    let csv = buslab(&["sweep", "--k", "11"])?;
    let targets = [("1", 0.155184659), ("12", 0.481356534), ("2036", 0.818270597)];
    let mut seen = Vec::new();
    for (b, target) in targets {
        let line = csv
            .lines()
            .find(|l| l.split(',').next() == Some(b))
            .ok_or_else(|| format!("no row for b = {b}"))?;
        let saving: f64 = line.rsplit(',').next().unwrap().parse().map_err(err)?;
        ensure((saving - target).abs() <= 1e-9, || format!("b = {b}: {saving} vs {target}"))?;
        seen.push(format!("b={b}: {saving}"));
    }
    let bound_line = csv.lines().last().unwrap_or_default();
    let bound: f64 = bound_line.rsplit(',').next().unwrap().parse().map_err(err)?;
    ensure(
        bound_line.starts_with("ppm_bound,") && (bound - 0.818270597).abs() <= 1e-9,
        || format!("bound row {bound_line}"),
    )?;
    Ok(format!("{}, bound {bound}", seen.join(", ")))
}

fn ac4_optimality() -> Check {
    let points = grid();
    for &(k, b) in &points {
        let codec = Codec::new(CodecSpec::optimal(k, b).map_err(err)?).map_err(err)?;
        let total: i128 = (0..1u64 << k)
            .map(|u| codec.differential(&word(u, k)).unwrap().weight() as i128)
            .sum();
        let mean = rational(k)(total);
        let closed = d_opt::<Rational>(k, b).map_err(err)?;
        let greedy = greedy_mean(k, k + b);
        ensure(mean == closed && mean == greedy, || {
            format!("k={k} b={b}: codec {mean}, closed form {closed}, greedy {greedy}")
        })?;
    }
    Ok(format!("{} (k, b) points, codec = closed form = greedy", points.len()))
}

fn ac5_round_trip() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    let specs = supported_specs(12);
    let mut words = 0u64;
    for &spec in &specs {
        let codec = Codec::new(spec).map_err(err)?;
        let n = spec.n();
        let top = if n == 64 { u64::MAX } else { (1u64 << n) - 1 };
        let mut states: Vec<u64> = vec![0, top];
        states.extend((0..100).map(|_| rng.gen::<u64>() & top));
        for s in states {
            let state = BusState::new(word(s, n));
            for u in 0..1u64 << spec.k() {
                let u = word(u, spec.k());
                let x = codec.encode(&state, &u).map_err(err)?;
                let back = codec.decode(&state, &x).map_err(err)?;
                ensure(back == u, || format!("{spec}: state {s:#x} u {u} -> {back}"))?;
                words += 1;
            }
        }
    }
    Ok(format!("{} specs, 102 states each, {words} words, 0 failures", specs.len()))
}

/// Colex rank of a weight-`m` mask is its index among weight-`m` masks in
/// increasing integer order.
fn ac6_rank_bijection() -> Check {
    let table = Binomials::new(12).map_err(err)?;
    let mut checked = 0;
    for n in 0..=12usize {
        for m in 0..=n {
            let masks: Vec<u64> = (0u64..1 << n).filter(|x| x.count_ones() as usize == m).collect();
            ensure(masks.len() as u128 == table.get(n, m), || format!("C({n},{m}) count"))?;
            for (x, &mask) in masks.iter().enumerate() {
                let x = x as u128;
                let unranked = table.mppm_unrank_mask(x, m, n).map_err(err)?;
                let positions = table.mppm_unrank(x, m, n).map_err(err)?;
                let ranked = table.mppm_rank_mask(mask).map_err(err)?;
                let ranked_positions = table.mppm_rank(&positions).map_err(err)?;
                ensure(
                    unranked == mask && ranked == x && ranked_positions == x,
                    || format!("n={n} m={m} x={x}: unrank {unranked:#b} vs {mask:#b}"),
                )?;
                checked += 1;
            }
        }
    }
    Ok(format!("{checked} (n, m, x) triples, n <= 12"))
}

fn syndromes_match(code: &LinearCode, table: &CosetLeaderTable) -> bool {
    (0..table.len() as u64).all(|s| code.syndrome(table.leader_bits(s)) == s)
}

fn ac7_coset() -> Check {
    let hamming = make_hamming(4).map_err(err)?;
    ensure(hamming.length() == 15 && hamming.dimension() == 11, || "Hamming shape".into())?;
    let ht = CosetLeaderTable::build(&hamming).map_err(err)?;
    let hamming_max = (0..ht.len() as u64).map(|s| ht.leader_bits(s).count_ones()).max();
    ensure(hamming_max == Some(1), || format!("Hamming max leader weight {hamming_max:?}"))?;
    ensure(syndromes_match(&hamming, &ht), || "Hamming H*leader(s) != s".into())?;

    let golay = make_golay23().map_err(err)?;
    let gt = CosetLeaderTable::build(&golay).map_err(err)?;
    let mut tiers = [0usize; 24];
    for s in 0..gt.len() as u64 {
        tiers[gt.leader_bits(s).count_ones() as usize] += 1;
    }
    ensure(tiers[..4] == [1, 23, 253, 1771] && tiers[4..].iter().all(|&t| t == 0), || {
        format!("Golay tiers {:?}", &tiers[..5])
    })?;
    ensure(syndromes_match(&golay, &gt), || "Golay H*leader(s) != s".into())?;

    // every one of the 2^23 words, codewords picked out by a zero syndrome
    let mut codewords = 0u32;
    let mut d_min = u32::MAX;
    for c in 1u64..1 << 23 {
        if golay.syndrome(c) == 0 {
            codewords += 1;
            d_min = d_min.min(c.count_ones());
        }
    }
    ensure(codewords + 1 == 1 << 12, || format!("{} Golay codewords", codewords + 1))?;
    ensure(d_min == 7, || format!("Golay minimum distance {d_min}"))?;
    Ok("Hamming(15,11) leaders <= 1; Golay tiers 1/23/253/1771; H*leader(s) = s; Golay d_min = 7".into())
}

/// The coset encoder is fed `u ^ H x_prev`, which makes its syndrome target
/// the same as DBI's; ties may pick different wires but not different counts.
fn ac8_dbi_equivalence() -> Check {
    let mut pairs = 0u64;
    for k in 1..=8usize {
        let n = k + 1;
        let dbi = Codec::new(CodecSpec::dbi(k).map_err(err)?).map_err(err)?;
        let coset = Codec::new(CodecSpec::coset(CosetCode::Repetition { length: n }).map_err(err)?)
            .map_err(err)?;
        let h = coset.linear_code().ok_or("no parity checks")?;
        for s in 0..1u64 << n {
            let state = BusState::new(word(s, n));
            let precode = h.syndrome(s);
            for u in 0..1u64 << k {
                let t_dbi = dbi.encode(&state, &word(u, k)).map_err(err)?.distance(&state.word());
                let t_coset = coset
                    .encode(&state, &word(u ^ precode, k))
                    .map_err(err)?
                    .distance(&state.word());
                ensure(t_dbi == t_coset, || format!("k={k} state={s:#b} u={u:#b}"))?;
                pairs += 1;
            }
        }
    }
    Ok(format!("{pairs} (state, u) pairs for k <= 8, 0 mismatches"))
}

fn ac9_monte_carlo() -> Check {
    let target = 2921.0 / 1024.0;
    let mut means = Vec::new();
    for seed in ["1", "2", "3"] {
        let report = json(&[
            "simulate", "--family", "optimal", "--k", "11", "--b", "12", "--length", "1000000",
            "--seed", seed, "--json",
        ])?;
        let mean = field(&report, &["mean_transitions"])?.as_f64().ok_or("mean not a number")?;
        ensure((mean - target).abs() / target < 0.01, || format!("seed {seed}: mean {mean}"))?;
        means.push(format!("{mean:.5}"));
    }
    let report = json(&["simulate", "--family", "uncoded", "--k", "11", "--length", "1000000", "--json"])?;
    let mean = field(&report, &["mean_transitions"])?.as_f64().ok_or("mean not a number")?;
    ensure((mean - 5.5).abs() / 5.5 < 0.01, || format!("uncoded mean {mean}"))?;
    Ok(format!("optimal means {} vs {target:.5}; uncoded {mean:.5} vs 5.5", means.join("/")))
}

fn ac10_clocks() -> Check {
    let codec = Codec::new(CodecSpec::optimal(11, 12).map_err(err)?).map_err(err)?;
    let mut total = 0i128;
    let mut max = 0;
    for u in 0..1u64 << 11 {
        let weight = codec.differential(&word(u, 11)).map_err(err)?.weight() as usize;
        let (clocks, baseline) = clock_model(&codec, u).map_err(err)?;
        ensure(clocks == weight && baseline == 23, || {
            format!("u={u}: {clocks} clocks, weight {weight}, baseline {baseline}")
        })?;
        total += clocks as i128;
        max = max.max(clocks);
    }
    let mean = rational(11)(total);
    ensure(max == 3 && mean == Rational::new(2921, 1024), || format!("max {max}, mean {mean}"))?;
    let pass = exhaustive_modulator_pass(&codec).map_err(err)?;
    ensure(pass.mean_clocks() == mean && pass.max_clocks == 3, || "modulator pass disagrees".into())?;
    Ok(format!("clocks = weight for all 2048 inputs, max {max} vs 23, mean {mean}"))
}

fn ac11_cost() -> Check {
    let points = grid();
    for &(k, b) in &points {
        let n = k + b;
        let codec = Codec::new(CodecSpec::optimal(k, b).map_err(err)?).map_err(err)?;
        let pass = exhaustive_modulator_pass(&codec).map_err(err)?;
        let top = d_max(k, b).map_err(err)? as i128;
        let formula = Rational::from_integer(n as i128 + 2) * greedy_mean(k, n)
            + Rational::from_integer(top + 1);
        ensure(pass.mean_cost_units() == formula, || {
            format!("k={k} b={b}: counted {} vs {formula}", pass.mean_cost_units())
        })?;
    }
    Ok(format!("{} (k, b) points, counted cost = (n+2) D_opt + d_max + 1", points.len()))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 11] = [
        ("AC1", "exact anchor d_opt(11,12)", 1, ac1_golay_anchor),
        ("AC2", "exact anchor maximum redundancy", 1, ac2_max_redundancy),
        ("AC3", "energy-saving curve at k=11", 1, ac3_saving_curve),
        ("AC4", "codebook optimality oracle", 30, ac4_optimality),
        ("AC5", "round-trip bijection", 60, ac5_round_trip),
        ("AC6", "rank/unrank bijection", 10, ac6_rank_bijection),
        ("AC7", "coset correctness", 30, ac7_coset),
        ("AC8", "DBI equivalence", 30, ac8_dbi_equivalence),
        ("AC9", "Monte Carlo consistency", 60, ac9_monte_carlo),
        ("AC10", "modulator clocks", 5, ac10_clocks),
        ("AC11", "cost formula", 30, ac11_cost),
    ];
    let mut failures = 0;
    for (id, name, budget, check) in criteria {
        let start = Instant::now();
        let result = check();
        let elapsed = start.elapsed();
        let over = elapsed > Duration::from_secs(budget);
        let (tag, detail) = match (&result, over) {
            (Ok(d), false) => ("PASS", d.clone()),
            (Ok(d), true) => ("FAIL", format!("{d}; over the {budget} s budget")),
            (Err(e), _) => ("FAIL", e.clone()),
        };
        if tag == "FAIL" {
            failures += 1;
        }
        println!(
            "[{tag}] {id:<4} {name}: {detail} ({:.2} s, budget {budget} s)",
            elapsed.as_secs_f64()
        );
    }
    println!("acceptance: {} passed, {failures} failed", criteria.len() - failures);
    if failures == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
