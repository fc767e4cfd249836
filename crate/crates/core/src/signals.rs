//! Finite linear combinations over a dictionary and the coefficient-level
//! checks that drive the pure greedy convergence argument.

use std::collections::BTreeMap;
use std::io::{BufRead, Write};

use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::dictionary::Dictionary;
use crate::error::{Error, Result};
use crate::linalg::{axpy, dot};
use crate::{format_real, parse_real};

/// Sparse coefficient map `atom index -> coefficient`, bound to one
/// dictionary by label and atom count. Zero coefficients are never stored.
#[derive(Debug, Clone, PartialEq)]
pub struct SparseRepresentation {
    entries: BTreeMap<usize, f64>,
    dictionary_label: String,
    atom_count: usize,
}

impl SparseRepresentation {
    pub fn empty(dict: &Dictionary) -> Self {
        SparseRepresentation {
            entries: BTreeMap::new(),
            dictionary_label: dict.label().to_string(),
            atom_count: dict.len(),
        }
    }

    /// Collects `(index, coefficient)` pairs; repeated indices are summed.
    pub fn from_pairs<I>(dict: &Dictionary, pairs: I) -> Result<Self>
    where
        I: IntoIterator<Item = (usize, f64)>,
    {
        let mut rep = Self::empty(dict);
        for (index, c) in pairs {
            dict.check_index(index)?;
            *rep.entries.entry(index).or_insert(0.0) += c;
        }
        rep.entries.retain(|_, c| *c != 0.0);
        Ok(rep)
    }

    pub fn dictionary_label(&self) -> &str {
        &self.dictionary_label
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn get(&self, index: usize) -> f64 {
        self.entries.get(&index).copied().unwrap_or(0.0)
    }

    pub fn contains(&self, index: usize) -> bool {
        self.entries.contains_key(&index)
    }

    pub fn iter(&self) -> impl Iterator<Item = (usize, f64)> + '_ {
        self.entries.iter().map(|(&i, &c)| (i, c))
    }

    /// Indices carrying a nonzero coefficient, ascending.
    pub fn support(&self) -> Vec<usize> {
        self.entries.keys().copied().collect()
    }

    pub fn max_abs(&self) -> f64 {
        self.entries.values().fold(0.0, |m, c| m.max(c.abs()))
    }

    /// `sum |c|^p` with no restriction on `p`.
    pub fn power_sum(&self, p: f64) -> f64 {
        self.entries.values().map(|c| c.abs().powf(p)).sum()
    }

    pub fn norm1(&self) -> f64 {
        self.entries.values().map(|c| c.abs()).sum()
    }

    /// `(sum |c|^p)^(1/p)` for `1 <= p < 2`.
    pub fn quasi_norm(&self, p: f64) -> Result<f64> {
        check_exponent(p)?;
        Ok(self.power_sum(p).powf(1.0 / p))
    }

    pub fn check_bound_to(&self, dict: &Dictionary) -> Result<()> {
        if self.dictionary_label != dict.label() || self.atom_count != dict.len() {
            return Err(Error::DictionaryMismatch {
                expected: dict.label().to_string(),
                found: self.dictionary_label.clone(),
            });
        }
        Ok(())
    }

    fn check_same_binding(&self, other: &Self) -> Result<()> {
        if self.dictionary_label != other.dictionary_label || self.atom_count != other.atom_count {
            return Err(Error::DictionaryMismatch {
                expected: self.dictionary_label.clone(),
                found: other.dictionary_label.clone(),
            });
        }
        Ok(())
    }

    /// `f = sum c_i g_i`.
    pub fn synthesize(&self, dict: &Dictionary) -> Result<Vec<f64>> {
        self.check_bound_to(dict)?;
        let mut f = vec![0.0; dict.dim()];
        for (i, c) in self.iter() {
            axpy(c, dict.atom(i), &mut f);
        }
        Ok(f)
    }

    pub fn scale(&self, a: f64) -> Self {
        let mut out = self.clone();
        out.entries.values_mut().for_each(|c| *c *= a);
        out.entries.retain(|_, c| *c != 0.0);
        out
    }

    /// Entrywise sum of two representations over the same dictionary.
    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_same_binding(other)?;
        let mut out = self.clone();
        for (i, c) in other.iter() {
            *out.entries.entry(i).or_insert(0.0) += c;
        }
        out.entries.retain(|_, c| *c != 0.0);
        Ok(out)
    }

    /// One pure greedy step on the coefficients: the selected coefficient
    /// loses `inner_product`, every other coefficient is unchanged. The
    /// selected atom may lie outside the current support.
    pub fn pga_step(&self, selected: usize, inner_product: f64) -> Result<Self> {
        if selected >= self.atom_count {
            return Err(Error::IndexOutOfRange {
                index: selected,
                count: self.atom_count,
            });
        }
        let mut out = self.clone();
        let updated = out.get(selected) - inner_product;
        if updated == 0.0 {
            out.entries.remove(&selected);
        } else {
            out.entries.insert(selected, updated);
        }
        Ok(out)
    }

    /// Writes `index coefficient` lines followed by a terminating blank line.
    pub fn write_text<W: Write>(&self, mut w: W) -> Result<()> {
        for (i, c) in self.iter() {
            writeln!(w, "{} {}", i, format_real(c))?;
        }
        writeln!(w)?;
        Ok(())
    }

    /// Reads `index coefficient` lines up to the first blank line or EOF.
    pub fn read_text<R: BufRead>(reader: R, dict: &Dictionary) -> Result<Self> {
        let mut pairs = Vec::new();
        for (n, line) in reader.lines().enumerate() {
            let line_no = n + 1;
            let line = line?;
            let line = line.trim();
            if line.is_empty() {
                break;
            }
            let mut fields = line.split_whitespace();
            let (Some(i), Some(c), None) = (fields.next(), fields.next(), fields.next()) else {
                return Err(Error::Parse {
                    line: line_no,
                    message: "expected `index coefficient`".into(),
                });
            };
            let index = i.parse::<usize>().map_err(|e| Error::Parse {
                line: line_no,
                message: format!("bad index `{i}`: {e}"),
            })?;
            if index >= dict.len() {
                return Err(Error::Parse {
                    line: line_no,
                    message: format!("index {index} out of range for {} atoms", dict.len()),
                });
            }
            pairs.push((index, parse_real(c, line_no)?));
        }
        Self::from_pairs(dict, pairs)
    }
}

fn check_exponent(p: f64) -> Result<()> {
    if (1.0..2.0).contains(&p) {
        Ok(())
    } else {
        Err(Error::BadExponent(p))
    }
}

/// Random `sparsity`-term representation: uniform support, magnitudes uniform
/// in `[amp_low, amp_high]`, independent random signs.
pub fn gen_sparse_signal(
    dict: &Dictionary,
    sparsity: usize,
    amp_low: f64,
    amp_high: f64,
    seed: u64,
) -> Result<SparseRepresentation> {
    if sparsity == 0 || sparsity > dict.len() {
        return Err(Error::SparsityTooLarge {
            sparsity,
            count: dict.len(),
        });
    }
    if !(amp_low > 0.0 && amp_low <= amp_high && amp_high.is_finite()) {
        return Err(Error::BadAmplitude {
            low: amp_low,
            high: amp_high,
        });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut support = sample(&mut rng, dict.len(), sparsity).into_vec();
    support.sort_unstable();
    let pairs: Vec<(usize, f64)> = support
        .into_iter()
        .map(|i| {
            let magnitude = rng.random_range(amp_low..=amp_high);
            let sign = if rng.random::<bool>() { 1.0 } else { -1.0 };
            (i, sign * magnitude)
        })
        .collect();
    SparseRepresentation::from_pairs(dict, pairs)
}

/// Dense representation with `|c_k| proportional to k^(-decay / p)` placed on
/// a random permutation of all atoms with random signs, scaled so that its
/// `p`-quasi-norm is exactly 1 up to rounding.
pub fn gen_power_law_signal(
    dict: &Dictionary,
    p: f64,
    decay: f64,
    seed: u64,
) -> Result<SparseRepresentation> {
    check_exponent(p)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let order = sample(&mut rng, dict.len(), dict.len()).into_vec();
    let raw: Vec<f64> = (1..=dict.len())
        .map(|k| (k as f64).powf(-decay / p))
        .collect();
    let scale = raw.iter().map(|c| c.powf(p)).sum::<f64>().powf(1.0 / p);
    let pairs: Vec<(usize, f64)> = order
        .into_iter()
        .zip(raw)
        .map(|(i, c)| {
            let sign = if rng.random::<bool>() { 1.0 } else { -1.0 };
            (i, sign * c / scale)
        })
        .collect();
    SparseRepresentation::from_pairs(dict, pairs)
}

/// Result of a single inequality check: `holds == (lhs <= rhs + slack_used)`.
#[derive(Debug, Clone, PartialEq)]
pub struct LemmaReport {
    pub holds: bool,
    pub lhs: f64,
    pub rhs: f64,
    pub slack_used: f64,
    pub detail: String,
}

impl LemmaReport {
    fn new(lhs: f64, rhs: f64, slack_used: f64, detail: String) -> Self {
        LemmaReport {
            holds: lhs <= rhs + slack_used,
            lhs,
            rhs,
            slack_used,
            detail,
        }
    }

    pub fn margin(&self) -> f64 {
        self.rhs + self.slack_used - self.lhs
    }
}

/// Inner-product perturbation bound for `f = synthesize(rep)`:
/// `|<f, g_l0> - c_l0| <= mu1 * max|c| + epsilon`, with `c_l0 = 0` when `l0`
/// is outside the support. Comparison is non-strict with additive slack
/// `1e-12 * (1 + max|c|)`.
pub fn check_lemma2(
    dict: &Dictionary,
    rep: &SparseRepresentation,
    lambda0: usize,
    epsilon: f64,
) -> Result<LemmaReport> {
    dict.check_index(lambda0)?;
    if rep.is_empty() {
        return Err(Error::EmptyRepresentation);
    }
    let f = rep.synthesize(dict)?;
    Ok(lemma2_at(dict, rep, &f, lambda0, epsilon))
}

/// [`check_lemma2`] over every atom; returns the report with the smallest
/// margin (lowest index on ties).
pub fn check_lemma2_all(
    dict: &Dictionary,
    rep: &SparseRepresentation,
    epsilon: f64,
) -> Result<LemmaReport> {
    if rep.is_empty() {
        return Err(Error::EmptyRepresentation);
    }
    let f = rep.synthesize(dict)?;
    let mut worst: Option<LemmaReport> = None;
    for l0 in 0..dict.len() {
        let r = lemma2_at(dict, rep, &f, l0, epsilon);
        if worst.as_ref().is_none_or(|w| r.margin() < w.margin()) {
            worst = Some(r);
        }
    }
    Ok(worst.expect("dictionary has at least one atom"))
}

fn lemma2_at(
    dict: &Dictionary,
    rep: &SparseRepresentation,
    f: &[f64],
    lambda0: usize,
    epsilon: f64,
) -> LemmaReport {
    let max_c = rep.max_abs();
    let ip = dot(f, dict.atom(lambda0));
    let inside = rep.contains(lambda0);
    let lhs = (ip - rep.get(lambda0)).abs();
    let rhs = dict.coherence().mu1 * max_c + epsilon;
    let detail = format!(
        "lambda0={lambda0} {} support",
        if inside { "in" } else { "outside" }
    );
    LemmaReport::new(lhs, rhs, 1e-12 * (1.0 + max_c), detail)
}

/// Coefficient descent for one pure greedy step:
/// `sum|c_after|^p <= sum|c_before|^p - 2^-p (1 - 3 mu1)^p max|c_before|^p`.
///
/// `holds` refers to this power-sum inequality (slack
/// `1e-12 * (1 + sum|c_before|^p)`); `detail` also records whether
/// `max|c_after| <= max|c_before|` held and whether the support grew, which
/// means the step left the regime the inequality is stated for.
pub fn check_lemma3_descent(
    before: &SparseRepresentation,
    after: &SparseRepresentation,
    p: f64,
    mu1: f64,
) -> Result<LemmaReport> {
    check_exponent(p)?;
    if mu1.is_nan() || mu1 >= 1.0 / 3.0 {
        return Err(Error::HypothesisViolated(format!(
            "cumulative coherence {mu1} is not below 1/3"
        )));
    }
    before.check_same_binding(after)?;
    let before_sum = before.power_sum(p);
    let max_before = before.max_abs();
    let lhs = after.power_sum(p);
    let rhs = before_sum - 2f64.powf(-p) * (1.0 - 3.0 * mu1).powf(p) * max_before.powf(p);
    let max_after = after.max_abs();
    let max_ok = max_after <= max_before * (1.0 + 1e-12) + 1e-12;
    let grew = after.iter().any(|(i, _)| !before.contains(i));
    let detail = format!(
        "max_before={} max_after={} max_inequality={} support_grew={}",
        format_real(max_before),
        format_real(max_after),
        max_ok,
        grew
    );
    Ok(LemmaReport::new(
        lhs,
        rhs,
        1e-12 * (1.0 + before_sum),
        detail,
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::{FRAC_1_SQRT_2, SQRT_2};

    fn plane3() -> Dictionary {
        Dictionary::new(
            "plane3",
            2,
            vec![
                vec![1.0, 0.0],
                vec![0.0, 1.0],
                vec![FRAC_1_SQRT_2, FRAC_1_SQRT_2],
            ],
        )
        .unwrap()
    }

    fn pair() -> Dictionary {
        Dictionary::new(
            "pair",
            2,
            vec![vec![1.0, 0.0], vec![FRAC_1_SQRT_2, FRAC_1_SQRT_2]],
        )
        .unwrap()
    }

    #[test]
    fn synthesize_examples() {
        let d = Dictionary::orthonormal(3).unwrap();
        let rep = SparseRepresentation::from_pairs(&d, [(0, 2.0), (2, -1.0)]).unwrap();
        assert_eq!(rep.synthesize(&d).unwrap(), vec![2.0, 0.0, -1.0]);
        assert_eq!(
            SparseRepresentation::empty(&d).synthesize(&d).unwrap(),
            vec![0.0; 3]
        );

        let p = pair();
        let f = SparseRepresentation::from_pairs(&p, [(0, 1.0), (1, SQRT_2)])
            .unwrap()
            .synthesize(&p)
            .unwrap();
        assert!((f[0] - 2.0).abs() < 1e-15 && (f[1] - 1.0).abs() < 1e-15);

        assert!(matches!(
            rep.synthesize(&p),
            Err(Error::DictionaryMismatch { .. })
        ));
    }

    #[test]
    fn quasi_norm_examples() {
        let d = Dictionary::orthonormal(3).unwrap();
        let rep = SparseRepresentation::from_pairs(&d, [(0, 3.0), (1, -4.0)]).unwrap();
        assert_eq!(rep.quasi_norm(1.0).unwrap(), 7.0);
        assert_eq!(rep.quasi_norm(2.0), Err(Error::BadExponent(2.0)));
        assert_eq!(rep.quasi_norm(0.5), Err(Error::BadExponent(0.5)));
        let ones = SparseRepresentation::from_pairs(&d, [(0, 1.0), (1, 1.0), (2, 1.0)]).unwrap();
        assert!((ones.quasi_norm(1.5).unwrap() - 3f64.powf(2.0 / 3.0)).abs() < 1e-14);
        assert!((ones.quasi_norm(1.5).unwrap() - 2.080083823051904).abs() < 1e-14);
        assert_eq!(
            SparseRepresentation::empty(&d).quasi_norm(1.2).unwrap(),
            0.0
        );
    }

    #[test]
    fn sparse_signal_generation() {
        let d = Dictionary::orthonormal(64).unwrap();
        assert!(matches!(
            gen_sparse_signal(&d, 0, 1.0, 2.0, 1),
            Err(Error::SparsityTooLarge { .. })
        ));
        assert!(matches!(
            gen_sparse_signal(&d, 65, 1.0, 2.0, 1),
            Err(Error::SparsityTooLarge { .. })
        ));
        let a = gen_sparse_signal(&d, 5, 1.0, 2.0, 7).unwrap();
        let b = gen_sparse_signal(&d, 5, 1.0, 2.0, 7).unwrap();
        assert_eq!(a.len(), 5);
        assert_eq!(a, b);
        assert!(a.iter().all(|(_, c)| (1.0..=2.0).contains(&c.abs())));
        let full = gen_sparse_signal(&Dictionary::orthonormal(6).unwrap(), 6, 1.0, 1.0, 3).unwrap();
        assert_eq!(full.support(), (0..6).collect::<Vec<_>>());
    }

    #[test]
    fn power_law_signal_has_unit_quasi_norm() {
        let d = Dictionary::orthonormal(40).unwrap();
        for p in [1.0, 1.2, 1.5, 1.8] {
            let rep = gen_power_law_signal(&d, p, 1.01, 9).unwrap();
            assert_eq!(rep.len(), 40);
            assert!((rep.quasi_norm(p).unwrap() - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn pga_step_examples() {
        let d = Dictionary::orthonormal(3).unwrap();
        let rep = SparseRepresentation::from_pairs(&d, [(0, 2.0)]).unwrap();
        assert!(rep.pga_step(0, 2.0).unwrap().is_empty());
        let grown = rep.pga_step(1, 0.5).unwrap();
        assert_eq!(grown.iter().collect::<Vec<_>>(), vec![(0, 2.0), (1, -0.5)]);
        assert!(matches!(
            rep.pga_step(3, 1.0),
            Err(Error::IndexOutOfRange { .. })
        ));

        let p = plane3();
        let rep = SparseRepresentation::from_pairs(&p, [(0, 1.0), (1, 1.0)]).unwrap();
        let f = rep.synthesize(&p).unwrap();
        let ip = dot(&f, p.atom(2));
        assert!((ip - SQRT_2).abs() < 1e-15);
        let next = rep.pga_step(2, ip).unwrap();
        assert_eq!(next.get(0), 1.0);
        assert_eq!(next.get(1), 1.0);
        assert!((next.get(2) + SQRT_2).abs() < 1e-15);
    }

    #[test]
    fn lemma2_examples() {
        let d = Dictionary::orthonormal(3).unwrap();
        let rep = SparseRepresentation::from_pairs(&d, [(0, 2.0)]).unwrap();
        let r = check_lemma2(&d, &rep, 0, 0.0).unwrap();
        assert_eq!((r.lhs, r.rhs, r.holds), (0.0, 0.0, true));
        let r = check_lemma2(&d, &rep, 1, 0.0).unwrap();
        assert_eq!((r.lhs, r.holds), (0.0, true));

        let p = plane3();
        let rep = SparseRepresentation::from_pairs(&p, [(0, 1.0)]).unwrap();
        let r = check_lemma2(&p, &rep, 2, 0.0).unwrap();
        assert!((r.lhs - FRAC_1_SQRT_2).abs() < 1e-15);
        assert!((r.rhs - SQRT_2).abs() < 1e-15);
        assert!(r.holds);

        assert_eq!(
            check_lemma2(&d, &SparseRepresentation::empty(&d), 0, 0.0),
            Err(Error::EmptyRepresentation)
        );
    }

    #[test]
    fn lemma3_examples() {
        let d = Dictionary::orthonormal(3).unwrap();
        let before = SparseRepresentation::from_pairs(&d, [(0, 2.0)]).unwrap();
        let after = SparseRepresentation::empty(&d);
        let r = check_lemma3_descent(&before, &after, 1.0, 0.0).unwrap();
        assert_eq!((r.lhs, r.rhs, r.holds), (0.0, 1.0, true));

        let stuck = SparseRepresentation::from_pairs(&d, [(0, 1.0), (1, 1.0)]).unwrap();
        let r = check_lemma3_descent(&stuck, &stuck, 1.0, 0.0).unwrap();
        assert_eq!((r.lhs, r.rhs, r.holds), (2.0, 1.5, false));

        assert!(matches!(
            check_lemma3_descent(&stuck, &stuck, 1.0, 0.34),
            Err(Error::HypothesisViolated(_))
        ));
    }

    #[test]
    fn representation_text_round_trip() {
        let d = Dictionary::orthonormal(10).unwrap();
        let rep = gen_sparse_signal(&d, 4, 0.1, 3.0, 2).unwrap();
        let mut buf = Vec::new();
        rep.write_text(&mut buf).unwrap();
        buf.extend_from_slice(b"9 1.0\n");
        let back = SparseRepresentation::read_text(buf.as_slice(), &d).unwrap();
        assert_eq!(back, rep);
        assert!(matches!(
            SparseRepresentation::read_text("12 1.0\n".as_bytes(), &d),
            Err(Error::Parse { line: 1, .. })
        ));
    }
}
