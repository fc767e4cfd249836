//! Convergence checks evaluated along greedy traces, empirical decay fits,
//! and an exhaustive best-m-term oracle for small instances.

use std::fmt;
use std::io::{Read, Write};

use crate::dictionary::Dictionary;
use crate::error::{Error, Result};
use crate::greedy::{project_onto_atoms, Algorithm, GreedyTrace, StopReason};
use crate::linalg::norm;
use crate::signals::{check_lemma2_all, check_lemma3_descent, SparseRepresentation};
use crate::{format_real, parse_real};

/// Residuals at or below this multiple of `||f||` are treated as zero by the
/// fits.
pub const ZERO_RESIDUAL: f64 = 1e-13;
/// Minimum number of nonzero-residual steps for the decay-form checks.
pub const MIN_DECAY_STEPS: usize = 16;
/// Minimum number of points in a log-log fit window.
pub const MIN_FIT_POINTS: usize = 8;
/// Slack added to the required exponent `-(1/p - 1/2)`.
pub const EXPONENT_SLACK: f64 = 0.1;
/// Required goodness of fit of the semi-log model.
pub const EXPONENTIAL_R2: f64 = 0.9;
/// Largest number of supports the oracle will enumerate.
pub const ORACLE_LIMIT: u128 = 2_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TheoremKind {
    TheoremARecovery,
    TheoremAExponential,
    Theorem1,
    Theorem2,
    EnergyRecursion,
    Lemma35,
}

impl TheoremKind {
    pub fn name(&self) -> &'static str {
        match self {
            TheoremKind::TheoremARecovery => "theoremA_recovery",
            TheoremKind::TheoremAExponential => "theoremA_exponential",
            TheoremKind::Theorem1 => "theorem1",
            TheoremKind::Theorem2 => "theorem2",
            TheoremKind::EnergyRecursion => "energy_recursion",
            TheoremKind::Lemma35 => "lemma35",
        }
    }
}

impl fmt::Display for TheoremKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct TheoremReport {
    pub theorem: TheoremKind,
    pub holds: bool,
    /// Smallest slack observed; negative when the check fails.
    pub worst_margin: f64,
    /// Step (1-based) where `worst_margin` occurred, 0 when not tied to a step.
    pub worst_step: usize,
    pub detail: String,
}

impl TheoremReport {
    pub fn to_key_value(&self) -> String {
        key_value_block(&[
            ("theorem", self.theorem.name().to_string()),
            ("holds", self.holds.to_string()),
            ("worst_margin", format_real(self.worst_margin)),
            ("worst_step", self.worst_step.to_string()),
            ("detail", self.detail.clone()),
        ])
    }
}

/// Least-squares fit of `log ||f_m||` against `log m`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RateFit {
    pub exponent: f64,
    pub intercept: f64,
    pub r_squared: f64,
    pub range: (usize, usize),
}

impl RateFit {
    pub fn to_key_value(&self) -> String {
        key_value_block(&[
            ("exponent", format_real(self.exponent)),
            ("intercept", format_real(self.intercept)),
            ("r_squared", format_real(self.r_squared)),
            ("m_lo", self.range.0.to_string()),
            ("m_hi", self.range.1.to_string()),
        ])
    }
}

fn key_value_block(pairs: &[(&str, String)]) -> String {
    pairs
        .iter()
        .map(|(k, v)| format!("{k}={}\n", v.replace('\n', " ")))
        .collect()
}

/// Parses a `key=value` block back into ordered pairs.
pub fn parse_key_value(text: &str) -> Result<Vec<(String, String)>> {
    text.lines()
        .enumerate()
        .filter(|(_, l)| !l.trim().is_empty())
        .map(|(n, l)| {
            l.split_once('=')
                .map(|(k, v)| (k.to_string(), v.to_string()))
                .ok_or(Error::Parse {
                    line: n + 1,
                    message: format!("expected key=value, got `{l}`"),
                })
        })
        .collect()
}

/// A row of the `theorem,holds,worst_margin,worst_step` summary CSV.
#[derive(Debug, Clone, PartialEq)]
pub struct SummaryRow {
    pub name: String,
    pub holds: bool,
    pub worst_margin: f64,
    pub worst_step: usize,
}

impl From<&TheoremReport> for SummaryRow {
    fn from(r: &TheoremReport) -> Self {
        SummaryRow {
            name: r.theorem.name().to_string(),
            holds: r.holds,
            worst_margin: r.worst_margin,
            worst_step: r.worst_step,
        }
    }
}

pub const SUMMARY_CSV_HEADER: [&str; 4] = ["theorem", "holds", "worst_margin", "worst_step"];

pub fn write_summary_csv<W: Write>(rows: &[SummaryRow], w: W) -> Result<()> {
    let mut out = csv::Writer::from_writer(w);
    out.write_record(SUMMARY_CSV_HEADER)?;
    for r in rows {
        out.write_record([
            r.name.clone(),
            r.holds.to_string(),
            format_real(r.worst_margin),
            r.worst_step.to_string(),
        ])?;
    }
    out.flush()?;
    Ok(())
}

pub fn read_summary_csv<R: Read>(r: R) -> Result<Vec<SummaryRow>> {
    let mut rdr = csv::Reader::from_reader(r);
    let mut rows = Vec::new();
    for (n, rec) in rdr.records().enumerate() {
        let line = n + 2;
        let rec = rec?;
        let bad = |m: String| Error::Parse { line, message: m };
        rows.push(SummaryRow {
            name: rec[0].to_string(),
            holds: rec[1].parse().map_err(|e| bad(format!("{e}")))?,
            worst_margin: parse_real(&rec[2], line)?,
            worst_step: rec[3].parse().map_err(|e| bad(format!("{e}")))?,
        });
    }
    Ok(rows)
}

fn require(trace: &GreedyTrace, algorithm: Algorithm) -> Result<()> {
    if trace.algorithm != algorithm {
        return Err(Error::WrongAlgorithm {
            expected: match algorithm {
                Algorithm::Pga => "PGA",
                Algorithm::Oga => "OGA",
            },
        });
    }
    Ok(())
}

/// Number of leading steps whose residual exceeds `ZERO_RESIDUAL * ||f||`.
fn nonzero_steps(trace: &GreedyTrace) -> usize {
    let floor = ZERO_RESIDUAL * trace.initial_norm;
    trace
        .steps
        .iter()
        .take_while(|s| s.residual_norm > floor)
        .count()
}

struct LinearFit {
    slope: f64,
    intercept: f64,
    r_squared: f64,
}

fn least_squares(points: &[(f64, f64)]) -> LinearFit {
    let n = points.len() as f64;
    let mx = points.iter().map(|p| p.0).sum::<f64>() / n;
    let my = points.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = points.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let sxy: f64 = points.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let syy: f64 = points.iter().map(|p| (p.1 - my).powi(2)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let ss_res: f64 = points
        .iter()
        .map(|p| (p.1 - intercept - slope * p.0).powi(2))
        .sum();
    let r_squared = if syy > 0.0 {
        (1.0 - ss_res / syy).clamp(0.0, 1.0)
    } else {
        1.0
    };
    LinearFit {
        slope,
        intercept,
        r_squared,
    }
}

/// Ordinary least squares of `ln ||f_m||` on `ln m` over `m_lo..=m_hi`,
/// skipping residuals at or below `1e-13 * ||f||`.
pub fn fit_decay_exponent(trace: &GreedyTrace, m_lo: usize, m_hi: usize) -> Result<RateFit> {
    if m_lo < 1 || m_hi <= m_lo || m_hi > trace.len() {
        return Err(Error::InvalidShape(format!(
            "fit window [{m_lo}, {m_hi}] invalid for a trace of {} steps",
            trace.len()
        )));
    }
    let floor = ZERO_RESIDUAL * trace.initial_norm;
    let points: Vec<(f64, f64)> = (m_lo..=m_hi)
        .map(|m| (m, trace.steps[m - 1].residual_norm))
        .filter(|&(_, r)| r > floor)
        .map(|(m, r)| ((m as f64).ln(), r.ln()))
        .collect();
    if points.len() < MIN_FIT_POINTS {
        return Err(Error::InsufficientSteps {
            needed: MIN_FIT_POINTS,
            available: points.len(),
        });
    }
    let fit = least_squares(&points);
    Ok(RateFit {
        exponent: fit.slope,
        intercept: fit.intercept,
        r_squared: fit.r_squared,
        range: (m_lo, m_hi),
    })
}

/// `||f_m|| <= n1 / sqrt(m)` for every step, with `n1` an upper bound on the
/// signal's 1-norm in the dictionary (additive slack `1e-12 * n1`).
pub fn check_theorem1(trace: &GreedyTrace, n1: f64) -> Result<TheoremReport> {
    require(trace, Algorithm::Pga)?;
    let mut worst = (f64::INFINITY, 0usize);
    for (i, s) in trace.steps.iter().enumerate() {
        let m = i + 1;
        let margin = n1 / (m as f64).sqrt() - s.residual_norm;
        if margin < worst.0 {
            worst = (margin, m);
        }
    }
    let holds = worst.0 >= -1e-12 * n1;
    if trace.is_empty() {
        worst = (0.0, 0);
    }
    Ok(TheoremReport {
        theorem: TheoremKind::Theorem1,
        holds,
        worst_margin: worst.0,
        worst_step: worst.1,
        detail: format!("n1={} steps={}", format_real(n1), trace.len()),
    })
}

/// Power-law decay at rate `m^(1/2 - 1/p)`.
///
/// The constants in the rate are not explicit, so `holds` requires the
/// log-log slope over the tail window `[m_hi/4, m_hi]` to be at most
/// `-(1/p - 1/2) + 0.1`. When `mu1 < 1/3` is supplied and the trace carries
/// coefficient snapshots, the explicit intermediate bound
/// `max|c_m| <= 2 (1 - 3 mu1)^-1 m^(-1/p) np_norm` must also hold at every
/// step.
pub fn check_theorem2(
    trace: &GreedyTrace,
    p: f64,
    np_norm: f64,
    mu1: Option<f64>,
) -> Result<TheoremReport> {
    require(trace, Algorithm::Pga)?;
    if !(1.0..2.0).contains(&p) {
        return Err(Error::BadExponent(p));
    }
    let m_hi = nonzero_steps(trace);
    if m_hi < MIN_DECAY_STEPS {
        return Err(Error::InsufficientSteps {
            needed: MIN_DECAY_STEPS,
            available: m_hi,
        });
    }
    let fit = fit_decay_exponent(trace, (m_hi / 4).max(1), m_hi)?;
    let required = -(1.0 / p - 0.5) + EXPONENT_SLACK;
    let exponent_margin = required - fit.exponent;

    let mut coef_worst: Option<(f64, usize)> = None;
    let mut coef_note = String::from("coefficient_bound=unchecked");
    match mu1 {
        Some(mu1) if mu1 < 1.0 / 3.0 => {
            let lead = 2.0 / (1.0 - 3.0 * mu1) * np_norm;
            for (i, s) in trace.steps.iter().enumerate() {
                let Some(rep) = &s.coefficients else { continue };
                let m = (i + 1) as f64;
                let bound = lead * m.powf(-1.0 / p);
                let margin = bound * (1.0 + 1e-9) + 1e-12 * np_norm - rep.max_abs();
                if coef_worst.is_none_or(|(w, _)| margin < w) {
                    coef_worst = Some((margin, i + 1));
                }
            }
            if let Some((w, step)) = coef_worst {
                coef_note = format!(
                    "coefficient_bound={} coefficient_margin={} coefficient_step={step}",
                    w >= 0.0,
                    format_real(w)
                );
            }
        }
        Some(mu1) => coef_note = format!("coefficient_bound=skipped mu1={}", format_real(mu1)),
        None => {}
    }

    let exponent_ok = exponent_margin >= 0.0;
    let coef_ok = coef_worst.is_none_or(|(w, _)| w >= 0.0);
    let (worst_margin, worst_step) = match coef_worst {
        Some((w, step)) if w < 0.0 => (w, step),
        _ => (exponent_margin, m_hi),
    };
    Ok(TheoremReport {
        theorem: TheoremKind::Theorem2,
        holds: exponent_ok && coef_ok,
        worst_margin,
        worst_step,
        detail: format!(
            "exponent={} required={} r_squared={} m_lo={} m_hi={} {coef_note}",
            format_real(fit.exponent),
            format_real(required),
            format_real(fit.r_squared),
            fit.range.0,
            fit.range.1
        ),
    })
}

/// Exact recovery by the orthogonal greedy algorithm: the final residual is
/// at most `tol * ||f||`, the selected atoms are exactly `true_support`, and
/// the run took `|true_support|` steps.
pub fn check_exact_recovery(
    trace: &GreedyTrace,
    true_support: &[usize],
    tol: f64,
) -> Result<TheoremReport> {
    require(trace, Algorithm::Oga)?;
    let mut truth = true_support.to_vec();
    truth.sort_unstable();
    truth.dedup();
    let wrong_step = trace
        .steps
        .iter()
        .position(|s| truth.binary_search(&s.selected).is_err())
        .map(|i| i + 1);
    let residual_margin = tol * trace.initial_norm - trace.final_residual_norm();
    let support_ok = trace.selected_atoms() == truth;
    let count_ok = trace.len() == truth.len();
    let holds = residual_margin >= 0.0 && support_ok && count_ok;
    Ok(TheoremReport {
        theorem: TheoremKind::TheoremARecovery,
        holds,
        worst_margin: residual_margin,
        worst_step: wrong_step.unwrap_or(trace.len()),
        detail: format!(
            "steps={} sparsity={} support_match={} first_wrong_selection={}",
            trace.len(),
            truth.len(),
            support_ok,
            wrong_step.map_or("none".to_string(), |s| s.to_string())
        ),
    })
}

/// Exponential decay: the regression of `ln ||f_m||` on `m` over the
/// nonzero-residual steps must have negative slope and `r^2 >= 0.9`.
/// Traces that reach a zero residual in fewer than 16 steps hold vacuously.
pub fn check_exponential_decay(trace: &GreedyTrace) -> TheoremReport {
    let usable = nonzero_steps(trace);
    if usable < MIN_DECAY_STEPS {
        let terminated = trace.final_residual_norm() <= ZERO_RESIDUAL * trace.initial_norm
            || matches!(
                trace.stop_reason,
                StopReason::ResidualTolerance | StopReason::InnerProductTolerance
            );
        return TheoremReport {
            theorem: TheoremKind::TheoremAExponential,
            holds: terminated,
            worst_margin: 0.0,
            worst_step: trace.len(),
            detail: if terminated {
                format!("finite termination after {} steps", trace.len())
            } else {
                format!("insufficient steps: {usable} nonzero residuals")
            },
        };
    }
    let points: Vec<(f64, f64)> = trace.steps[..usable]
        .iter()
        .enumerate()
        .map(|(i, s)| ((i + 1) as f64, s.residual_norm.ln()))
        .collect();
    let fit = least_squares(&points);
    let margin = (-fit.slope).min(fit.r_squared - EXPONENTIAL_R2);
    TheoremReport {
        theorem: TheoremKind::TheoremAExponential,
        holds: fit.slope < 0.0 && fit.r_squared >= EXPONENTIAL_R2,
        worst_margin: margin,
        worst_step: usable,
        detail: format!(
            "slope={} rate={} r_squared={} steps={usable}",
            format_real(fit.slope),
            format_real(-fit.slope),
            format_real(fit.r_squared)
        ),
    }
}

/// With `a_m = ||f_{m-1}||^2` and `A = a_bound`: `a_{m+1} <= a_m (1 - a_m / A)`
/// at every step and `a_m <= A / m` for every `m >= 1`, each with slack
/// `1e-9 * A`. Margins are reported relative to `A`.
pub fn check_energy_recursion(trace: &GreedyTrace, a_bound: f64) -> Result<TheoremReport> {
    require(trace, Algorithm::Pga)?;
    let a: Vec<f64> = (0..=trace.len())
        .map(|k| trace.residual_norm(k).powi(2))
        .collect();
    let slack = 1e-9;
    let mut worst = (f64::INFINITY, 0usize);
    let mut note = |margin: f64, m: usize| {
        if margin < worst.0 {
            worst = (margin, m);
        }
    };
    // a[k] is a_{k+1}
    for (k, &ak) in a.iter().enumerate() {
        let m = k + 1;
        note((a_bound / m as f64 - ak) / a_bound, m);
        if let Some(&next) = a.get(k + 1) {
            note((ak * (1.0 - ak / a_bound) - next) / a_bound, m);
        }
    }
    Ok(TheoremReport {
        theorem: TheoremKind::EnergyRecursion,
        holds: worst.0 >= -slack,
        worst_margin: worst.0,
        worst_step: worst.1,
        detail: format!("a_bound={} terms={}", format_real(a_bound), a.len()),
    })
}

/// `|<f_m, g_{m+1}>| >= ||f_m||^2 / N1(m)` where `N1(m)` is the 1-norm of the
/// tracked representation of `f_m` (`initial` for `m = 0`, snapshots after).
pub fn check_lemma35(trace: &GreedyTrace, initial: &SparseRepresentation) -> Result<TheoremReport> {
    require(trace, Algorithm::Pga)?;
    let slack = 1e-12 * trace.initial_norm;
    let mut worst = (f64::INFINITY, 0usize);
    let mut rep = initial;
    for (i, s) in trace.steps.iter().enumerate() {
        let n1 = rep.norm1();
        if n1 > 0.0 {
            let r = trace.residual_norm(i);
            let margin = s.inner_product.abs() - r * r / n1;
            if margin < worst.0 {
                worst = (margin, i + 1);
            }
        }
        rep = s
            .coefficients
            .as_ref()
            .ok_or_else(|| Error::InvalidShape("trace carries no coefficient snapshots".into()))?;
    }
    if worst.1 == 0 {
        worst.0 = 0.0;
    }
    Ok(TheoremReport {
        theorem: TheoremKind::Lemma35,
        holds: worst.0 >= -slack,
        worst_margin: worst.0,
        worst_step: worst.1,
        detail: format!("steps={}", trace.len()),
    })
}

/// Per-step verification of the coefficient lemmas along a tracked pure
/// greedy run.
#[derive(Debug, Clone, PartialEq)]
pub struct TrajectoryLemmas {
    pub steps_checked: usize,
    /// Steps whose selected atom was outside the tracked support; these are
    /// outside the descent lemma's regime and excluded from `lemma3_holds`.
    pub regime_exits: usize,
    pub lemma2_holds: bool,
    pub lemma2_worst_margin: f64,
    pub lemma2_worst_step: usize,
    /// False when `mu1 >= 1/3`; the descent check is then not evaluated and
    /// `lemma3_holds` is false.
    pub lemma3_applicable: bool,
    pub lemma3_holds: bool,
    pub lemma3_worst_margin: f64,
    pub lemma3_worst_step: usize,
    pub max_inequality_holds: bool,
}

impl TrajectoryLemmas {
    pub fn summary_rows(&self) -> [SummaryRow; 2] {
        [
            SummaryRow {
                name: "lemma2".into(),
                holds: self.lemma2_holds,
                worst_margin: self.lemma2_worst_margin,
                worst_step: self.lemma2_worst_step,
            },
            SummaryRow {
                name: "lemma3".into(),
                holds: self.lemma3_holds,
                worst_margin: self.lemma3_worst_margin,
                worst_step: self.lemma3_worst_step,
            },
        ]
    }

    pub fn to_key_value(&self) -> String {
        key_value_block(&[
            ("steps_checked", self.steps_checked.to_string()),
            ("regime_exits", self.regime_exits.to_string()),
            ("lemma2_holds", self.lemma2_holds.to_string()),
            ("lemma2_worst_margin", format_real(self.lemma2_worst_margin)),
            ("lemma2_worst_step", self.lemma2_worst_step.to_string()),
            ("lemma3_applicable", self.lemma3_applicable.to_string()),
            ("lemma3_holds", self.lemma3_holds.to_string()),
            ("lemma3_worst_margin", format_real(self.lemma3_worst_margin)),
            ("lemma3_worst_step", self.lemma3_worst_step.to_string()),
            (
                "max_inequality_holds",
                self.max_inequality_holds.to_string(),
            ),
        ])
    }
}

/// Walks a tracked PGA trace, checking the inner-product bound (with
/// `epsilon = 0`, every atom) on each representation `c_{m-1}` and the
/// coefficient descent from `c_{m-1}` to `c_m` with exponent `p`.
pub fn check_pga_lemmas(
    dict: &Dictionary,
    initial: &SparseRepresentation,
    trace: &GreedyTrace,
    p: f64,
) -> Result<TrajectoryLemmas> {
    require(trace, Algorithm::Pga)?;
    let mu1 = dict.coherence().mu1;
    let applicable = mu1 < 1.0 / 3.0;
    let mut out = TrajectoryLemmas {
        steps_checked: 0,
        regime_exits: 0,
        lemma2_holds: true,
        lemma2_worst_margin: f64::INFINITY,
        lemma2_worst_step: 0,
        lemma3_applicable: applicable,
        lemma3_holds: applicable,
        lemma3_worst_margin: f64::INFINITY,
        lemma3_worst_step: 0,
        max_inequality_holds: true,
    };
    let mut before = initial;
    for (i, s) in trace.steps.iter().enumerate() {
        let step = i + 1;
        let after = s
            .coefficients
            .as_ref()
            .ok_or_else(|| Error::InvalidShape("trace carries no coefficient snapshots".into()))?;
        if !before.is_empty() {
            let l2 = check_lemma2_all(dict, before, 0.0)?;
            if l2.margin() < out.lemma2_worst_margin {
                out.lemma2_worst_margin = l2.margin();
                out.lemma2_worst_step = step;
            }
            out.lemma2_holds &= l2.holds;
        }
        if applicable && before.contains(s.selected) {
            let l3 = check_lemma3_descent(before, after, p, mu1)?;
            if l3.margin() < out.lemma3_worst_margin {
                out.lemma3_worst_margin = l3.margin();
                out.lemma3_worst_step = step;
            }
            out.lemma3_holds &= l3.holds;
            out.max_inequality_holds &= after.max_abs() <= before.max_abs() * (1.0 + 1e-12) + 1e-12;
        } else if applicable {
            out.regime_exits += 1;
        }
        out.steps_checked += 1;
        before = after;
    }
    if out.lemma2_worst_step == 0 {
        out.lemma2_worst_margin = 0.0;
    }
    if out.lemma3_worst_step == 0 {
        out.lemma3_worst_margin = 0.0;
    }
    Ok(out)
}

/// Best `m`-term approximation error over all supports of size `m`.
#[derive(Debug, Clone, PartialEq)]
pub struct OracleResult {
    pub error: f64,
    pub support: Vec<usize>,
}

pub fn binomial(n: usize, k: usize) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * (n - i) as u128 / (i + 1) as u128;
    }
    acc
}

/// Exhaustive search over all size-`m` supports, each scored by the norm of
/// the residual after orthogonal projection. Singular supports are skipped.
/// Ties go to the lexicographically smallest support.
pub fn best_mterm_oracle(dict: &Dictionary, f: &[f64], m: usize) -> Result<OracleResult> {
    if m == 0 {
        return Err(Error::InvalidShape("m must be positive".into()));
    }
    let combinations = binomial(dict.len(), m);
    if combinations > ORACLE_LIMIT {
        return Err(Error::TooLarge {
            combinations,
            limit: ORACLE_LIMIT,
        });
    }
    if m > dict.len() {
        return Err(Error::NoFeasibleSupport(m));
    }
    let k = dict.len();
    let mut support: Vec<usize> = (0..m).collect();
    let mut best: Option<OracleResult> = None;
    loop {
        match project_onto_atoms(dict, &support, f) {
            Ok((_, residual)) => {
                let error = norm(&residual);
                if best.as_ref().is_none_or(|b| error < b.error) {
                    best = Some(OracleResult {
                        error,
                        support: support.clone(),
                    });
                }
            }
            Err(Error::SingularGram { .. }) => {}
            Err(e) => return Err(e),
        }
        // next combination in lexicographic order
        let Some(pos) = (0..m).rev().find(|&i| support[i] < k - m + i) else {
            break;
        };
        support[pos] += 1;
        for i in pos + 1..m {
            support[i] = support[i - 1] + 1;
        }
    }
    best.ok_or(Error::NoFeasibleSupport(m))
}
