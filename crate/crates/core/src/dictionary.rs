//! Finite dictionaries of unit-norm atoms in `R^dim`, together with the
//! coherence measurements the greedy convergence results are phrased in.
//!
//! Atoms are stored column-major in one contiguous buffer; atom `i` occupies
//! `atoms[i * dim..(i + 1) * dim]`. Indices are stable for the lifetime of the
//! dictionary, and a dictionary is immutable once built, so it can be shared
//! freely between threads. The Gram matrix and the coherence report are
//! computed lazily and cached.

use std::io::{BufRead, Write};
use std::sync::OnceLock;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::error::{Error, Result};
use crate::linalg::{dot, norm};
use crate::signals::SparseRepresentation;
use crate::{format_real, parse_real};

/// Atoms whose norm is within this distance of 1 are stored untouched.
pub const UNIT_TOLERANCE: f64 = 1e-10;
/// Atoms whose norm is off by more than this are rejected by [`Dictionary::new`].
pub const NORMALIZABLE_TOLERANCE: f64 = 1e-6;
/// Two atoms closer than this (up to sign, in max-norm) are duplicates.
pub const DUPLICATE_TOLERANCE: f64 = 1e-12;

#[derive(Debug, Clone)]
pub struct Dictionary {
    dim: usize,
    count: usize,
    atoms: Vec<f64>,
    label: String,
    gram: OnceLock<Vec<f64>>,
    coherence: OnceLock<CoherenceReport>,
}

impl PartialEq for Dictionary {
    fn eq(&self, other: &Self) -> bool {
        self.dim == other.dim && self.label == other.label && self.atoms == other.atoms
    }
}

/// Cumulative and mutual coherence of a dictionary, plus the two-sided frame
/// interval `[1 - 2 mu1, 1 + 2 mu1]` they imply.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CoherenceReport {
    /// Largest sum, over one atom, of absolute inner products with all others.
    pub mu1: f64,
    /// Largest absolute inner product between two distinct atoms.
    pub mu: f64,
    pub lower_frame: f64,
    pub upper_frame: f64,
    /// Atom achieving `mu1`; lowest index on ties.
    pub worst_atom: usize,
}

impl CoherenceReport {
    fn from_mu1(mu1: f64, mu: f64, worst_atom: usize) -> Self {
        CoherenceReport {
            mu1,
            mu,
            lower_frame: 1.0 - 2.0 * mu1,
            upper_frame: 1.0 + 2.0 * mu1,
            worst_atom,
        }
    }
}

/// Outcome of comparing `||sum c g||^2` with `(1 +- 2 mu1) sum c^2`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FrameBounds {
    pub lhs: f64,
    pub mid: f64,
    pub rhs: f64,
    pub holds: bool,
}

impl Dictionary {
    /// Builds a dictionary from `columns`, each of length `dim`.
    ///
    /// Columns within [`UNIT_TOLERANCE`] of unit norm are kept verbatim,
    /// columns within [`NORMALIZABLE_TOLERANCE`] are renormalized, anything
    /// further off is a `NormViolation`.
    pub fn new(label: impl Into<String>, dim: usize, columns: Vec<Vec<f64>>) -> Result<Self> {
        Self::build(label.into(), dim, columns, false)
    }

    /// Like [`Dictionary::new`], but rescales every nonzero column to unit
    /// norm regardless of its length.
    pub fn from_unnormalized(
        label: impl Into<String>,
        dim: usize,
        columns: Vec<Vec<f64>>,
    ) -> Result<Self> {
        Self::build(label.into(), dim, columns, true)
    }

    fn build(label: String, dim: usize, columns: Vec<Vec<f64>>, normalize: bool) -> Result<Self> {
        if dim == 0 {
            return Err(Error::InvalidShape("dimension must be at least 1".into()));
        }
        if columns.is_empty() {
            return Err(Error::InvalidShape(
                "a dictionary needs at least one atom".into(),
            ));
        }
        let count = columns.len();
        let mut atoms = Vec::with_capacity(dim * count);
        for (index, mut col) in columns.into_iter().enumerate() {
            if col.len() != dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    found: col.len(),
                });
            }
            if col.iter().any(|x| !x.is_finite()) {
                return Err(Error::InvalidShape(format!(
                    "atom {index} has non-finite entries"
                )));
            }
            let n = norm(&col);
            if n == 0.0 {
                return Err(Error::ZeroAtom { index });
            }
            let off = (n - 1.0).abs();
            if off > UNIT_TOLERANCE {
                if off > NORMALIZABLE_TOLERANCE && !normalize {
                    return Err(Error::NormViolation { index, norm: n });
                }
                col.iter_mut().for_each(|x| *x /= n);
            }
            atoms.extend_from_slice(&col);
        }
        let dict = Dictionary {
            dim,
            count,
            atoms,
            label,
            gram: OnceLock::new(),
            coherence: OnceLock::new(),
        };
        dict.check_duplicates()?;
        Ok(dict)
    }

    fn check_duplicates(&self) -> Result<()> {
        for i in 0..self.count {
            for j in (i + 1)..self.count {
                let (a, b) = (self.atom(i), self.atom(j));
                let same = a
                    .iter()
                    .zip(b)
                    .all(|(x, y)| (x - y).abs() <= DUPLICATE_TOLERANCE);
                let flipped = a
                    .iter()
                    .zip(b)
                    .all(|(x, y)| (x + y).abs() <= DUPLICATE_TOLERANCE);
                if same || flipped {
                    return Err(Error::DuplicateAtom {
                        first: i,
                        second: j,
                    });
                }
            }
        }
        Ok(())
    }

    /// Standard basis of `R^dim`.
    pub fn orthonormal(dim: usize) -> Result<Self> {
        if dim == 0 {
            return Err(Error::InvalidShape("dimension must be at least 1".into()));
        }
        let columns = (0..dim)
            .map(|i| {
                let mut e = vec![0.0; dim];
                e[i] = 1.0;
                e
            })
            .collect();
        Self::new(format!("orthonormal-{dim}"), dim, columns)
    }

    /// `count` independent standard-normal vectors, normalized. No coherence
    /// constraint.
    pub fn gaussian(dim: usize, count: usize, seed: u64) -> Result<Self> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let columns = gaussian_columns(&mut rng, dim, count);
        Self::from_unnormalized(format!("gaussian-d{dim}-k{count}-s{seed}"), dim, columns)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Number of atoms `K`.
    pub fn len(&self) -> usize {
        self.count
    }

    pub fn is_empty(&self) -> bool {
        self.count == 0
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    /// Returns a copy carrying a different label.
    pub fn with_label(&self, label: impl Into<String>) -> Self {
        Dictionary {
            label: label.into(),
            ..self.clone()
        }
    }

    #[inline]
    pub fn atom(&self, index: usize) -> &[f64] {
        &self.atoms[index * self.dim..(index + 1) * self.dim]
    }

    pub fn atoms(&self) -> impl Iterator<Item = &[f64]> {
        self.atoms.chunks_exact(self.dim)
    }

    pub fn check_index(&self, index: usize) -> Result<()> {
        if index < self.count {
            Ok(())
        } else {
            Err(Error::IndexOutOfRange {
                index,
                count: self.count,
            })
        }
    }

    /// Row-major `K x K` Gram matrix, computed on first use.
    pub fn gram(&self) -> &[f64] {
        self.gram.get_or_init(|| {
            let k = self.count;
            let mut g = vec![0.0; k * k];
            for i in 0..k {
                g[i * k + i] = dot(self.atom(i), self.atom(i));
                for j in (i + 1)..k {
                    let v = dot(self.atom(i), self.atom(j));
                    g[i * k + j] = v;
                    g[j * k + i] = v;
                }
            }
            g
        })
    }

    /// Inner products `<v, g_i>` for every atom.
    pub fn correlations(&self, v: &[f64]) -> Vec<f64> {
        self.atoms().map(|g| dot(v, g)).collect()
    }

    /// Cumulative coherence: the largest, over atoms `g`, of the sum of
    /// `|<h, g>|` over all other atoms `h`. Cached after the first call.
    pub fn coherence(&self) -> CoherenceReport {
        *self.coherence.get_or_init(|| {
            let k = self.count;
            let gram = self.gram();
            let mut mu1 = 0.0;
            let mut mu: f64 = 0.0;
            let mut worst_atom = 0;
            for i in 0..k {
                let row = &gram[i * k..(i + 1) * k];
                let mut sum = 0.0;
                for (j, v) in row.iter().enumerate() {
                    if j != i {
                        sum += v.abs();
                        mu = mu.max(v.abs());
                    }
                }
                if sum > mu1 {
                    mu1 = sum;
                    worst_atom = i;
                }
            }
            CoherenceReport::from_mu1(mu1, mu, worst_atom)
        })
    }

    /// Checks `(1 - 2 mu1) sum c^2 <= ||sum c g||^2 <= (1 + 2 mu1) sum c^2`
    /// for the given coefficients, with an additive slack of
    /// `1e-9 * sum c^2` on both sides. Evaluated for any `mu1`; the lower
    /// bound is merely vacuous once `mu1 >= 1/2`.
    pub fn frame_bounds_check(&self, coeffs: &SparseRepresentation) -> Result<FrameBounds> {
        coeffs.check_bound_to(self)?;
        let mu1 = self.coherence().mu1;
        let energy: f64 = coeffs.iter().map(|(_, c)| c * c).sum();
        let synthesized = coeffs.synthesize(self)?;
        let mid = dot(&synthesized, &synthesized);
        let lhs = (1.0 - 2.0 * mu1) * energy;
        let rhs = (1.0 + 2.0 * mu1) * energy;
        let slack = 1e-9 * energy;
        Ok(FrameBounds {
            lhs,
            mid,
            rhs,
            holds: lhs <= mid + slack && mid <= rhs + slack,
        })
    }

    /// Writes the plain-text format: a `dim K` header, then one atom per line.
    pub fn write_text<W: Write>(&self, mut w: W) -> Result<()> {
        writeln!(w, "{} {}", self.dim, self.count)?;
        for atom in self.atoms() {
            let line: Vec<String> = atom.iter().map(|&x| format_real(x)).collect();
            writeln!(w, "{}", line.join(" "))?;
        }
        Ok(())
    }

    pub fn read_text<R: BufRead>(reader: R, label: impl Into<String>) -> Result<Self> {
        let mut lines = reader
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l))
            .filter(|(_, l)| !matches!(l, Ok(s) if s.trim().is_empty()));
        let (line_no, header) = lines.next().ok_or(Error::Parse {
            line: 1,
            message: "missing `dim K` header".into(),
        })?;
        let header = header?;
        let fields: Vec<&str> = header.split_whitespace().collect();
        let parse_usize = |s: &str| {
            s.parse::<usize>().map_err(|e| Error::Parse {
                line: line_no,
                message: format!("bad integer `{s}`: {e}"),
            })
        };
        if fields.len() != 2 {
            return Err(Error::Parse {
                line: line_no,
                message: "header must be `dim K`".into(),
            });
        }
        let dim = parse_usize(fields[0])?;
        let count = parse_usize(fields[1])?;
        let mut columns = Vec::with_capacity(count);
        for (line_no, line) in lines {
            let line = line?;
            let column = line
                .split_whitespace()
                .map(|s| parse_real(s, line_no))
                .collect::<Result<Vec<f64>>>()?;
            if column.len() != dim {
                return Err(Error::Parse {
                    line: line_no,
                    message: format!("expected {dim} values, found {}", column.len()),
                });
            }
            columns.push(column);
        }
        if columns.len() != count {
            return Err(Error::Parse {
                line: line_no,
                message: format!("header announces {count} atoms, file has {}", columns.len()),
            });
        }
        Self::new(label, dim, columns)
    }
}

fn gaussian_columns(rng: &mut ChaCha8Rng, dim: usize, count: usize) -> Vec<Vec<f64>> {
    (0..count)
        .map(|_| (0..dim).map(|_| StandardNormal.sample(rng)).collect())
        .collect()
}

/// Per-attempt shrink factor of the Gaussian component when blending toward
/// an orthonormal frame.
const BLEND_RATIO: f64 = 0.8;

/// Rejection sampler for dictionaries with `mu1 <= target_mu1`.
///
/// Every attempt draws a fresh set of standard-normal columns. Without
/// orthogonalization the normalized draw is the candidate. With
/// orthogonalization (only possible when `count <= dim`) the draw is also
/// orthonormalized to `Q`, and the candidate blends the two as
/// `normalize((1 - t) q_i + t u_i)` with `t = 0.8^attempt`; the final attempt
/// uses `t = 0`, the orthonormal frame itself.
///
/// When `count > dim` no target below `1/2` is reachable: `mu1 < 1/2` makes
/// the atoms linearly independent.
#[derive(Debug, Clone, PartialEq)]
pub struct IncoherentBuilder {
    pub dim: usize,
    pub count: usize,
    pub target_mu1: f64,
    pub seed: u64,
    pub max_attempts: usize,
    pub orthogonalize: bool,
}

impl IncoherentBuilder {
    pub fn new(dim: usize, count: usize, target_mu1: f64, seed: u64) -> Self {
        IncoherentBuilder {
            dim,
            count,
            target_mu1,
            seed,
            max_attempts: 64,
            orthogonalize: true,
        }
    }

    pub fn max_attempts(mut self, attempts: usize) -> Self {
        self.max_attempts = attempts;
        self
    }

    pub fn orthogonalize(mut self, enabled: bool) -> Self {
        self.orthogonalize = enabled;
        self
    }

    pub fn build(&self) -> Result<Dictionary> {
        if self.dim == 0 || self.count == 0 {
            return Err(Error::InvalidShape("dim and count must be positive".into()));
        }
        if self.target_mu1.is_nan() || self.target_mu1 <= 0.0 || self.max_attempts == 0 {
            return Err(Error::InvalidShape(
                "target_mu1 and max_attempts must be positive".into(),
            ));
        }
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        let blend = self.orthogonalize && self.count <= self.dim;
        let label = format!(
            "incoherent-d{}-k{}-t{}-s{}",
            self.dim, self.count, self.target_mu1, self.seed
        );
        let mut best = f64::INFINITY;
        for attempt in 0..self.max_attempts {
            let draw = gaussian_columns(&mut rng, self.dim, self.count);
            let candidate = if blend {
                let t = if attempt + 1 == self.max_attempts {
                    0.0
                } else {
                    BLEND_RATIO.powi(attempt as i32)
                };
                match blend_with_frame(&draw, t) {
                    Some(columns) => columns,
                    None => continue,
                }
            } else {
                draw
            };
            let Ok(dict) = Dictionary::from_unnormalized(label.clone(), self.dim, candidate) else {
                continue;
            };
            let mu1 = dict.coherence().mu1;
            if mu1 <= self.target_mu1 {
                return Ok(dict);
            }
            best = best.min(mu1);
        }
        Err(Error::TargetUnreachable {
            target: self.target_mu1,
            attempts: self.max_attempts,
            best,
        })
    }
}

/// Modified Gram-Schmidt with one reorthogonalization pass. `None` if the
/// columns are numerically dependent.
fn orthonormalize(columns: &[Vec<f64>]) -> Option<Vec<Vec<f64>>> {
    let mut q: Vec<Vec<f64>> = Vec::with_capacity(columns.len());
    for col in columns {
        let mut v = col.clone();
        for _ in 0..2 {
            for prev in &q {
                let r = dot(prev, &v);
                crate::linalg::axpy(-r, prev, &mut v);
            }
        }
        let n = norm(&v);
        if n < 1e-10 * norm(col) {
            return None;
        }
        v.iter_mut().for_each(|x| *x /= n);
        q.push(v);
    }
    Some(q)
}

fn blend_with_frame(draw: &[Vec<f64>], t: f64) -> Option<Vec<Vec<f64>>> {
    let frame = orthonormalize(draw)?;
    Some(
        draw.iter()
            .zip(frame)
            .map(|(u, q)| {
                let un = norm(u);
                q.iter()
                    .zip(u)
                    .map(|(qi, ui)| (1.0 - t) * qi + t * ui / un)
                    .collect()
            })
            .collect(),
    )
}
