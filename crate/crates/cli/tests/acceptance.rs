//! End-to-end acceptance battery. Prints one `PASS`/`FAIL` line per criterion
//! and exits nonzero if any criterion fails.
//!
//! Criteria 1 and 2 ask for 70 atoms in 64 dimensions with cumulative
//! coherence at most 0.45. Any dictionary with `mu1 < 1/2` has a positive
//! lower frame bound, so its atoms are linearly independent and there can be
//! at most 64 of them; those two criteria therefore fail by construction.
//! They run exactly as stated, and lines `1b`/`2b` repeat them with a square
//! 64 x 64 dictionary, the largest size the hypothesis permits.

use std::fs;
use std::path::Path;
use std::process::{Command, ExitCode};
use std::sync::OnceLock;
use std::time::Instant;

use pursuit::{
    best_mterm_oracle, check_energy_recursion, check_exact_recovery, check_exponential_decay,
    check_pga_lemmas, check_theorem1, check_theorem2, fit_decay_exponent, gen_power_law_signal,
    gen_sparse_signal, run_oga, run_pga, select_atom, Algorithm, Dictionary, Error, GreedyTrace,
    IncoherentBuilder, SparseRepresentation, StepRecord, StopReason, StopRule,
};

struct Outcome {
    passed: bool,
    detail: String,
}

impl Outcome {
    fn new(passed: bool, detail: impl Into<String>) -> Self {
        Outcome {
            passed,
            detail: detail.into(),
        }
    }
}

type Criterion = fn() -> Outcome;

/// One PGA instance from the rate battery: `mu1 <= 0.33`, 5-sparse signal
/// with amplitudes in `[1, 2]`, 200 tracked steps.
struct RateInstance {
    dict: Dictionary,
    rep: SparseRepresentation,
    trace: GreedyTrace,
}

const RATE_INSTANCES: u64 = 50;
const RATE_STEPS: usize = 200;

fn rate_instance(seed: u64) -> RateInstance {
    let dict = IncoherentBuilder::new(64, 64, 0.33, seed).build().unwrap();
    let rep = gen_sparse_signal(&dict, 5, 1.0, 2.0, seed + 10_000).unwrap();
    let f = rep.synthesize(&dict).unwrap();
    let trace = run_pga(&dict, &f, &StopRule::iterations(RATE_STEPS), Some(&rep)).unwrap();
    RateInstance { dict, rep, trace }
}

/// Shared by criteria 3, 6 and 7.
fn rate_battery() -> &'static [RateInstance] {
    static BATTERY: OnceLock<Vec<RateInstance>> = OnceLock::new();
    BATTERY.get_or_init(|| (0..RATE_INSTANCES).map(rate_instance).collect())
}

fn recovery(dim: usize, count: usize) -> Outcome {
    let mut passed = 0;
    let mut notes = Vec::new();
    for seed in 0..20u64 {
        let dict = match IncoherentBuilder::new(dim, count, 0.45, seed).build() {
            Ok(d) => d,
            Err(e) => {
                notes.push(format!("seed {seed}: {e}"));
                continue;
            }
        };
        let rep = gen_sparse_signal(&dict, 5, 1.0, 2.0, seed + 100).unwrap();
        let f = rep.synthesize(&dict).unwrap();
        let trace = run_oga(&dict, &f, &StopRule::iterations(64)).unwrap();
        let r = check_exact_recovery(&trace, &rep.support(), 1e-9).unwrap();
        if r.holds && trace.len() == 5 {
            passed += 1;
        } else {
            notes.push(format!("seed {seed}: {}", r.detail));
        }
    }
    let first = notes.first().cloned().unwrap_or_default();
    Outcome::new(
        passed == 20,
        format!("{passed}/20 exact recoveries in 5 steps (dim {dim}, {count} atoms) {first}"),
    )
}

fn exponential(dim: usize, count: usize) -> Outcome {
    let mut passed = 0;
    let mut first = String::new();
    for seed in 0..20u64 {
        let dict = match IncoherentBuilder::new(dim, count, 0.45, seed).build() {
            Ok(d) => d,
            Err(e) => {
                if first.is_empty() {
                    first = format!("seed {seed}: {e}");
                }
                continue;
            }
        };
        let rep = gen_sparse_signal(&dict, 8, 1.0, 2.0, seed + 200).unwrap();
        let f = rep.synthesize(&dict).unwrap();
        let trace = run_pga(&dict, &f, &StopRule::default(), None).unwrap();
        let r = check_exponential_decay(&trace);
        if r.holds {
            passed += 1;
        } else if first.is_empty() {
            first = format!("seed {seed}: {}", r.detail);
        }
    }
    Outcome::new(
        passed >= 19,
        format!("{passed}/20 exponential decay (dim {dim}, {count} atoms) {first}"),
    )
}

fn criterion_1() -> Outcome {
    recovery(64, 70)
}

fn criterion_1b() -> Outcome {
    recovery(64, 64)
}

fn criterion_2() -> Outcome {
    exponential(64, 70)
}

fn criterion_2b() -> Outcome {
    exponential(64, 64)
}

fn criterion_3() -> Outcome {
    let mut passed = 0;
    let mut max_mu1 = 0.0f64;
    for inst in rate_battery() {
        let mu1 = inst.dict.coherence().mu1;
        max_mu1 = max_mu1.max(mu1);
        let n1 = inst.rep.norm1();
        let report = check_theorem1(&inst.trace, n1).unwrap();
        let all_m = (1..=RATE_STEPS)
            .all(|m| inst.trace.residual_norm(m) <= n1 / (m as f64).sqrt() + 1e-12 * n1);
        if mu1 <= 0.33 && report.holds && all_m {
            passed += 1;
        }
    }
    Outcome::new(
        passed == RATE_INSTANCES,
        format!("{passed}/{RATE_INSTANCES} instances within n1/sqrt(m) for m in 1..=200; max mu1 {max_mu1:.4}"),
    )
}

fn criterion_4() -> Outcome {
    let mut exponent_ok = 0;
    let mut bound_ok = 0;
    let mut total = 0;
    let mut first = String::new();
    for &p in &[1.2, 1.5, 1.8] {
        for i in 0..10u64 {
            let seed = 500 + i;
            let dict = IncoherentBuilder::new(64, 64, 0.33, seed).build().unwrap();
            let mu1 = dict.coherence().mu1;
            let rep = gen_power_law_signal(&dict, p, 1.01, seed + 1).unwrap();
            let f = rep.synthesize(&dict).unwrap();
            let trace = run_pga(&dict, &f, &StopRule::iterations(RATE_STEPS), Some(&rep)).unwrap();
            let np = rep.quasi_norm(p).unwrap();
            total += 1;
            let exponent_only = check_theorem2(&trace, p, np, None).unwrap();
            let full = check_theorem2(&trace, p, np, Some(mu1)).unwrap();
            if exponent_only.holds {
                exponent_ok += 1;
            } else if first.is_empty() {
                first = format!("p={p} seed {seed}: {}", exponent_only.detail);
            }
            if full.detail.contains("coefficient_bound=true") {
                bound_ok += 1;
            } else if first.is_empty() {
                first = format!("p={p} seed {seed}: {}", full.detail);
            }
        }
    }
    Outcome::new(
        exponent_ok >= 27 && bound_ok == total,
        format!(
            "{exponent_ok}/{total} tail exponents, {bound_ok}/{total} coefficient bounds {first}"
        ),
    )
}

fn criterion_5() -> Outcome {
    let mut held = 0;
    let mut checked = 0;
    let mut lo = f64::INFINITY;
    let mut hi = 0.0f64;
    let mut seed = 0u64;
    while checked < 1000 {
        seed += 1;
        let dim = 2 + (seed % 15) as usize;
        let dict = match seed % 4 {
            0 => Dictionary::orthonormal(dim).unwrap(),
            1 => {
                let target = [0.1, 0.3, 0.45][(seed / 4 % 3) as usize];
                IncoherentBuilder::new(dim, dim, target, seed)
                    .build()
                    .unwrap()
            }
            _ => {
                let count = 1 + (seed / 4 % (2 * dim as u64)) as usize;
                Dictionary::gaussian(dim, count, seed).unwrap()
            }
        };
        let mu1 = dict.coherence().mu1;
        if mu1 > 1.5 {
            continue;
        }
        let sparsity = 1 + (seed as usize * 7) % dict.len();
        let rep = gen_sparse_signal(&dict, sparsity, 0.01, 3.0, seed + 7).unwrap();
        checked += 1;
        lo = lo.min(mu1);
        hi = hi.max(mu1);
        if dict.frame_bounds_check(&rep).unwrap().holds {
            held += 1;
        }
    }
    let spans = lo <= 1e-12 && hi >= 1.0;
    Outcome::new(
        held == 1000 && spans,
        format!("{held}/1000 frame bounds held; mu1 spanned [{lo:.3e}, {hi:.4}]"),
    )
}

fn criterion_6() -> Outcome {
    let mut l2 = 0;
    let mut l3 = 0;
    let mut exits = 0;
    for inst in rate_battery() {
        for p in [1.0, 1.5] {
            let lemmas = check_pga_lemmas(&inst.dict, &inst.rep, &inst.trace, p).unwrap();
            if p == 1.0 && lemmas.lemma2_holds {
                l2 += 1;
            }
            if lemmas.lemma3_applicable && lemmas.lemma3_holds && lemmas.regime_exits == 0 {
                l3 += 1;
            }
            exits += lemmas.regime_exits;
        }
    }
    let n = RATE_INSTANCES as usize;
    Outcome::new(
        l2 == n && l3 == 2 * n,
        format!(
            "inner-product bound on {l2}/{n} trajectories; coefficient descent on {l3}/{} (p = 1, 1.5); {exits} off-support selections",
            2 * n
        ),
    )
}

fn criterion_7() -> Outcome {
    let mut passed = 0;
    let mut worst = f64::INFINITY;
    for inst in rate_battery() {
        let n1 = inst.rep.norm1();
        let r = check_energy_recursion(&inst.trace, n1 * n1).unwrap();
        worst = worst.min(r.worst_margin);
        if r.holds {
            passed += 1;
        }
    }
    Outcome::new(
        passed == RATE_INSTANCES,
        format!("{passed}/{RATE_INSTANCES} trajectories; worst relative margin {worst:e}"),
    )
}

fn criterion_8() -> Outcome {
    let mut instances = 0;
    let mut ok = 0;
    let mut selection_checked = 0;
    let mut selection_ok = 0;
    let mut seed = 0u64;
    for dim in 2..=8usize {
        for count in 2..=10usize {
            for rep_seed in 0..2u64 {
                seed += 1;
                let dict = Dictionary::gaussian(dim, count, seed).unwrap();
                let sparsity = 1 + (rep_seed as usize + dim) % count.min(4);
                let rep = gen_sparse_signal(&dict, sparsity, 0.5, 2.0, seed + 3000).unwrap();
                let f = rep.synthesize(&dict).unwrap();
                let fnorm = pursuit::norm(&f);
                let oga = run_oga(&dict, &f, &StopRule::iterations(3)).unwrap();
                for m in 1..=3usize.min(count) {
                    let oracle = match best_mterm_oracle(&dict, &f, m) {
                        Ok(o) => o,
                        Err(Error::NoFeasibleSupport(_)) => continue,
                        Err(e) => panic!("{e}"),
                    };
                    instances += 1;
                    if oga.residual_norm(m) >= oracle.error - 1e-9 * fnorm {
                        ok += 1;
                    }
                    if m == 1 {
                        let mut ips: Vec<f64> =
                            dict.correlations(&f).iter().map(|x| x.abs()).collect();
                        ips.sort_by(|a, b| b.total_cmp(a));
                        if ips[0] - ips[1] > 1e-10 {
                            selection_checked += 1;
                            let (sel, _) = select_atom(&dict, &f).unwrap();
                            if oracle.support == vec![sel] {
                                selection_ok += 1;
                            }
                        }
                    }
                }
            }
        }
    }
    Outcome::new(
        instances >= 200 && ok == instances && selection_ok == selection_checked,
        format!(
            "{ok}/{instances} OGA residuals at or above the best m-term error; {selection_ok}/{selection_checked} one-term supports match greedy selection"
        ),
    )
}

const DETERMINISM_CONFIG: &str = r#"{
  "dictionary": {"incoherent": {"dim": 32, "count": 32, "target_mu1": 0.3, "seed": 3}},
  "signal": {"sparse": {"sparsity": 5, "amp_low": 1.0, "amp_high": 2.0, "seed": 4}},
  "algorithm": "both",
  "stop": {"max_iterations": 200},
  "checks": ["theorem1", "theoremA_recovery", "theoremA_exponential", "energy_recursion",
             "lemma1", "lemma2", "lemma3"],
  "p": 1.5,
  "snapshots": true
}"#;

fn collect_files(dir: &Path, prefix: &Path, out: &mut Vec<(String, Vec<u8>)>) {
    let mut entries: Vec<_> = fs::read_dir(dir)
        .unwrap()
        .map(|e| e.unwrap().path())
        .collect();
    entries.sort();
    for path in entries {
        if path.is_dir() {
            collect_files(&path, prefix, out);
        } else {
            let name = path.strip_prefix(prefix).unwrap().display().to_string();
            out.push((name, fs::read(&path).unwrap()));
        }
    }
}

fn criterion_9() -> Outcome {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = tmp.path().join("experiment.json");
    fs::write(&cfg, DETERMINISM_CONFIG).unwrap();
    let mut runs = Vec::new();
    for name in ["first", "second"] {
        let out = tmp.path().join(name);
        let status = Command::new(env!("CARGO_BIN_EXE_pursuit"))
            .arg("run")
            .arg("--config")
            .arg(&cfg)
            .arg("--out")
            .arg(&out)
            .arg("--quiet")
            .status()
            .unwrap();
        if status.code() != Some(0) {
            return Outcome::new(false, format!("run exited with {status}"));
        }
        let mut files = Vec::new();
        collect_files(&out, &out, &mut files);
        runs.push(files);
    }
    let same = runs[0] == runs[1];
    let has_traces = runs[0].iter().any(|(n, _)| n == "trace_pga.csv")
        && runs[0].iter().any(|(n, _)| n == "trace_oga.csv");
    Outcome::new(
        same && has_traces,
        format!(
            "{} output files, byte-identical across runs: {same}",
            runs[0].len()
        ),
    )
}

fn synthetic_trace(c: f64, exponent: f64, steps: usize) -> GreedyTrace {
    GreedyTrace {
        algorithm: Algorithm::Pga,
        steps: (1..=steps)
            .map(|m| StepRecord {
                selected: 0,
                inner_product: 0.0,
                residual_norm: c * (m as f64).powf(exponent),
                coefficients: None,
            })
            .collect(),
        initial_norm: c,
        stop_reason: StopReason::MaxIterations,
    }
}

fn criterion_10() -> Outcome {
    let mut worst = 0.0f64;
    let mut cases = 0;
    for &c in &[0.5, 1.0, 3.7, 100.0] {
        for &e in &[-0.1, -0.25, -1.0 / 6.0, -0.5, -0.75, -1.0, -2.0] {
            for &(lo, hi) in &[(1, 50), (10, 400), (100, 1000)] {
                let fit = fit_decay_exponent(&synthetic_trace(c, e, 1000), lo, hi).unwrap();
                worst = worst.max((fit.exponent - e).abs());
                worst = worst.max((fit.intercept - c.ln()).abs());
                cases += 1;
            }
        }
    }
    Outcome::new(
        worst <= 1e-9,
        format!("{cases} synthetic power laws; worst exponent/intercept error {worst:e}"),
    )
}

fn main() -> ExitCode {
    let criteria: [(&str, &str, Criterion); 12] = [
        ("1", "exact recovery, 64 dims x 70 atoms", criterion_1),
        ("1b", "exact recovery, 64 dims x 64 atoms", criterion_1b),
        ("2", "exponential decay, 64 dims x 70 atoms", criterion_2),
        ("2b", "exponential decay, 64 dims x 64 atoms", criterion_2b),
        ("3", "n1/sqrt(m) residual bound", criterion_3),
        ("4", "power-law decay and coefficient bound", criterion_4),
        ("5", "frame bounds", criterion_5),
        (
            "6",
            "inner-product bound and coefficient descent",
            criterion_6,
        ),
        ("7", "energy recursion", criterion_7),
        ("8", "oracle equivalence at small scale", criterion_8),
        ("9", "CLI determinism", criterion_9),
        ("10", "decay-exponent fit self-test", criterion_10),
    ];
    let mut failures = 0;
    for (id, name, run) in criteria {
        let start = Instant::now();
        let outcome = run();
        let verdict = if outcome.passed { "PASS" } else { "FAIL" };
        if !outcome.passed {
            failures += 1;
        }
        println!(
            "{verdict} criterion {id:<3} {name}: {} ({:.2}s)",
            outcome.detail,
            start.elapsed().as_secs_f64()
        );
    }
    println!(
        "acceptance: {} passed, {failures} failed",
        criteria.len() - failures
    );
    if failures == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
