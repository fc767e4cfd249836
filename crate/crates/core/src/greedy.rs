//! Pure (matching pursuit) and orthogonal (orthogonal matching pursuit)
//! greedy algorithms with full per-step traces.

use std::fmt;
use std::io::{Read, Write};
use std::path::Path;

use crate::dictionary::Dictionary;
use crate::error::{Error, Result};
use crate::linalg::{axpy, distance, dot, norm, Cholesky};
use crate::signals::SparseRepresentation;
use crate::{format_real, parse_real};

/// Gap allowed between a tracked representation and the residual it mirrors,
/// relative to `||f||`.
pub const TRACKING_TOLERANCE: f64 = 1e-8;
/// Initial agreement required between `f` and its tracked representation.
pub const TRACKING_ENTRY_TOLERANCE: f64 = 1e-10;
/// Ties in the atom argmax are resolved to the lowest index within this
/// multiple of the residual norm.
pub const TIE_TOLERANCE: f64 = 1e-14;

pub const TRACE_CSV_HEADER: [&str; 4] = ["step", "selected", "inner_product", "residual_norm"];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Algorithm {
    Pga,
    Oga,
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Algorithm::Pga => "PGA",
            Algorithm::Oga => "OGA",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StopReason {
    MaxIterations,
    ResidualTolerance,
    InnerProductTolerance,
    Stagnation,
}

impl fmt::Display for StopReason {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            StopReason::MaxIterations => "max_iterations",
            StopReason::ResidualTolerance => "residual_tolerance",
            StopReason::InnerProductTolerance => "inner_product_tolerance",
            StopReason::Stagnation => "stagnation",
        })
    }
}

/// Termination rule. Both tolerances are relative to `||f||`: a run stops
/// once `||f_m|| <= residual_tol * ||f||` or once the best available inner
/// product satisfies `|<f_m, g>| <= inner_product_tol * ||f||`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StopRule {
    pub max_iterations: usize,
    pub residual_tol: f64,
    pub inner_product_tol: f64,
}

impl Default for StopRule {
    fn default() -> Self {
        StopRule {
            max_iterations: 1000,
            residual_tol: 1e-12,
            inner_product_tol: 1e-14,
        }
    }
}

impl StopRule {
    pub fn iterations(max_iterations: usize) -> Self {
        StopRule {
            max_iterations,
            ..Self::default()
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.max_iterations == 0 {
            return Err(Error::BadStopRule("max_iterations must be positive".into()));
        }
        let ok = |t: f64| t >= 0.0 && t.is_finite();
        if !ok(self.residual_tol) || !ok(self.inner_product_tol) {
            return Err(Error::BadStopRule(
                "tolerances must be finite and nonnegative".into(),
            ));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct StepRecord {
    pub selected: usize,
    /// Signed `<f_m, g_{m+1}>`.
    pub inner_product: f64,
    /// `||f_{m+1}||`.
    pub residual_norm: f64,
    /// Tracked coefficients (PGA) or projection coefficients (OGA).
    pub coefficients: Option<SparseRepresentation>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct GreedyTrace {
    pub algorithm: Algorithm,
    pub steps: Vec<StepRecord>,
    pub initial_norm: f64,
    pub stop_reason: StopReason,
}

impl GreedyTrace {
    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    /// `||f_m||`; `m = 0` is the input norm and indices past the end repeat
    /// the final residual.
    pub fn residual_norm(&self, m: usize) -> f64 {
        match m {
            0 => self.initial_norm,
            m => self
                .steps
                .get(m - 1)
                .or(self.steps.last())
                .map_or(self.initial_norm, |s| s.residual_norm),
        }
    }

    pub fn final_residual_norm(&self) -> f64 {
        self.residual_norm(self.len())
    }

    /// Distinct selected atoms in ascending order.
    pub fn selected_atoms(&self) -> Vec<usize> {
        let mut v: Vec<usize> = self.steps.iter().map(|s| s.selected).collect();
        v.sort_unstable();
        v.dedup();
        v
    }

    pub fn write_csv<W: Write>(&self, w: W) -> Result<()> {
        let mut out = csv::Writer::from_writer(w);
        out.write_record(TRACE_CSV_HEADER)?;
        for (i, s) in self.steps.iter().enumerate() {
            out.write_record([
                (i + 1).to_string(),
                s.selected.to_string(),
                format_real(s.inner_product),
                format_real(s.residual_norm),
            ])?;
        }
        out.flush()?;
        Ok(())
    }

    /// Writes each step's coefficient snapshot as `step_NNNN.rep` under `dir`.
    /// Returns the paths written.
    pub fn write_snapshots(&self, dir: &Path) -> Result<Vec<std::path::PathBuf>> {
        std::fs::create_dir_all(dir)?;
        let mut written = Vec::new();
        for (i, s) in self.steps.iter().enumerate() {
            if let Some(rep) = &s.coefficients {
                let path = dir.join(format!("step_{:04}.rep", i + 1));
                let mut buf = Vec::new();
                rep.write_text(&mut buf)?;
                std::fs::write(&path, buf)?;
                written.push(path);
            }
        }
        Ok(written)
    }
}

/// One parsed row of a trace CSV.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TraceRow {
    pub step: usize,
    pub selected: usize,
    pub inner_product: f64,
    pub residual_norm: f64,
}

pub fn read_trace_csv<R: Read>(r: R) -> Result<Vec<TraceRow>> {
    let mut rdr = csv::Reader::from_reader(r);
    let header = rdr.headers()?.clone();
    if header.iter().ne(TRACE_CSV_HEADER) {
        return Err(Error::Parse {
            line: 1,
            message: format!(
                "unexpected header `{}`",
                header.iter().collect::<Vec<_>>().join(",")
            ),
        });
    }
    let mut rows = Vec::new();
    for (n, rec) in rdr.records().enumerate() {
        let line = n + 2;
        let rec = rec?;
        let int = |k: usize| {
            rec[k].parse::<usize>().map_err(|e| Error::Parse {
                line,
                message: e.to_string(),
            })
        };
        rows.push(TraceRow {
            step: int(0)?,
            selected: int(1)?,
            inner_product: parse_real(&rec[2], line)?,
            residual_norm: parse_real(&rec[3], line)?,
        });
    }
    Ok(rows)
}

fn check_len(dict: &Dictionary, v: &[f64]) -> Result<()> {
    if v.len() != dict.dim() {
        return Err(Error::DimensionMismatch {
            expected: dict.dim(),
            found: v.len(),
        });
    }
    Ok(())
}

/// Atom maximizing `|<residual, g>|` and the signed inner product there.
/// Candidates within `1e-14 * ||residual||` of the maximum tie, and the
/// lowest index wins.
pub fn select_atom(dict: &Dictionary, residual: &[f64]) -> Result<(usize, f64)> {
    check_len(dict, residual)?;
    let ips = dict.correlations(residual);
    let best = ips.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    let tol = TIE_TOLERANCE * norm(residual);
    let index = ips.iter().position(|v| v.abs() >= best - tol).unwrap_or(0);
    Ok((index, ips[index]))
}

/// Pure greedy algorithm. With `track` given, the representation is updated
/// alongside the residual and snapshotted at every step; it must synthesize
/// `f` on entry and stay within `1e-8 * ||f||` of the residual throughout.
pub fn run_pga(
    dict: &Dictionary,
    f: &[f64],
    stop: &StopRule,
    track: Option<&SparseRepresentation>,
) -> Result<GreedyTrace> {
    check_len(dict, f)?;
    stop.validate()?;
    let f_norm = norm(f);
    let residual_tol = stop.residual_tol * f_norm;
    let ip_tol = stop.inner_product_tol * f_norm;

    let mut tracked = match track {
        Some(rep) => {
            let gap = distance(&rep.synthesize(dict)?, f);
            if gap > TRACKING_ENTRY_TOLERANCE * f_norm {
                return Err(Error::TrackingInconsistent { step: 0, gap });
            }
            Some(rep.clone())
        }
        None => None,
    };

    let mut residual = f.to_vec();
    let mut steps = Vec::new();
    let stop_reason = loop {
        if steps.len() >= stop.max_iterations {
            break StopReason::MaxIterations;
        }
        let (selected, ip) = select_atom(dict, &residual)?;
        if ip.abs() <= ip_tol {
            break StopReason::InnerProductTolerance;
        }
        axpy(-ip, dict.atom(selected), &mut residual);
        let residual_norm = norm(&residual);

        let coefficients = match tracked.as_mut() {
            Some(rep) => {
                *rep = rep.pga_step(selected, ip)?;
                let gap = distance(&rep.synthesize(dict)?, &residual);
                if gap > TRACKING_TOLERANCE * f_norm {
                    return Err(Error::TrackingInconsistent {
                        step: steps.len() + 1,
                        gap,
                    });
                }
                Some(rep.clone())
            }
            None => None,
        };
        steps.push(StepRecord {
            selected,
            inner_product: ip,
            residual_norm,
            coefficients,
        });
        if residual_norm <= residual_tol {
            break StopReason::ResidualTolerance;
        }
    };

    Ok(GreedyTrace {
        algorithm: Algorithm::Pga,
        steps,
        initial_norm: f_norm,
        stop_reason,
    })
}

/// Orthogonal projection of `f` onto the span of the atoms in `support`,
/// via Cholesky on the Gram normal equations.
pub fn project_onto_atoms(
    dict: &Dictionary,
    support: &[usize],
    f: &[f64],
) -> Result<(SparseRepresentation, Vec<f64>)> {
    check_len(dict, f)?;
    if support.is_empty() {
        return Err(Error::InvalidShape("projection support is empty".into()));
    }
    for &i in support {
        dict.check_index(i)?;
    }
    let n = support.len();
    let mut gram = vec![0.0; n * n];
    for (a, &i) in support.iter().enumerate() {
        for (b, &j) in support.iter().enumerate().skip(a) {
            let v = dot(dict.atom(i), dict.atom(j));
            gram[a * n + b] = v;
            gram[b * n + a] = v;
        }
    }
    let rhs: Vec<f64> = support.iter().map(|&i| dot(f, dict.atom(i))).collect();
    let coeffs = Cholesky::factor(&gram, n)?.solve(&rhs);

    let mut residual = f.to_vec();
    for (&i, &c) in support.iter().zip(&coeffs) {
        axpy(-c, dict.atom(i), &mut residual);
    }
    let rep = SparseRepresentation::from_pairs(dict, support.iter().copied().zip(coeffs))?;
    Ok((rep, residual))
}

/// Orthogonal greedy algorithm. Re-selecting an atom already in the support
/// ends the run with [`StopReason::Stagnation`].
pub fn run_oga(dict: &Dictionary, f: &[f64], stop: &StopRule) -> Result<GreedyTrace> {
    check_len(dict, f)?;
    stop.validate()?;
    let f_norm = norm(f);
    let residual_tol = stop.residual_tol * f_norm;
    let ip_tol = stop.inner_product_tol * f_norm;

    let mut residual = f.to_vec();
    let mut support: Vec<usize> = Vec::new();
    let mut steps = Vec::new();
    let stop_reason = loop {
        if steps.len() >= stop.max_iterations {
            break StopReason::MaxIterations;
        }
        let (selected, ip) = select_atom(dict, &residual)?;
        if ip.abs() <= ip_tol {
            break StopReason::InnerProductTolerance;
        }
        if support.contains(&selected) {
            break StopReason::Stagnation;
        }
        support.push(selected);
        let (coeffs, next) = project_onto_atoms(dict, &support, f)?;
        residual = next;
        let residual_norm = norm(&residual);
        steps.push(StepRecord {
            selected,
            inner_product: ip,
            residual_norm,
            coefficients: Some(coeffs),
        });
        if residual_norm <= residual_tol {
            break StopReason::ResidualTolerance;
        }
    };

    Ok(GreedyTrace {
        algorithm: Algorithm::Oga,
        steps,
        initial_norm: f_norm,
        stop_reason,
    })
}
