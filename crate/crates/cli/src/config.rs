//! JSON experiment configuration.

use std::fs::File;
use std::io::BufReader;
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use pursuit::{
    gen_power_law_signal, gen_sparse_signal, Dictionary, IncoherentBuilder, SparseRepresentation,
    StopRule,
};
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum DictionarySource {
    Orthonormal {
        dim: usize,
    },
    Incoherent {
        dim: usize,
        count: usize,
        target_mu1: f64,
        seed: u64,
        #[serde(default = "default_attempts")]
        max_attempts: usize,
        #[serde(default = "default_true")]
        orthogonalize: bool,
    },
    File {
        path: PathBuf,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum SignalSource {
    Sparse {
        sparsity: usize,
        amp_low: f64,
        amp_high: f64,
        seed: u64,
    },
    /// Dense coefficients `~ k^(-decay/p)` with unit `p`-quasi-norm.
    PowerLaw {
        p: f64,
        #[serde(default = "default_decay")]
        decay: f64,
        seed: u64,
    },
    File {
        path: PathBuf,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AlgorithmChoice {
    Pga,
    Oga,
    Both,
}

impl AlgorithmChoice {
    pub fn pga(self) -> bool {
        matches!(self, AlgorithmChoice::Pga | AlgorithmChoice::Both)
    }

    pub fn oga(self) -> bool {
        matches!(self, AlgorithmChoice::Oga | AlgorithmChoice::Both)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum CheckName {
    #[serde(rename = "theorem1")]
    Theorem1,
    #[serde(rename = "theorem2")]
    Theorem2,
    #[serde(rename = "theoremA_recovery")]
    TheoremARecovery,
    #[serde(rename = "theoremA_exponential")]
    TheoremAExponential,
    #[serde(rename = "energy_recursion")]
    EnergyRecursion,
    #[serde(rename = "lemma1")]
    Lemma1,
    #[serde(rename = "lemma2")]
    Lemma2,
    #[serde(rename = "lemma3")]
    Lemma3,
    #[serde(rename = "oracle")]
    Oracle,
}

impl CheckName {
    pub fn name(self) -> &'static str {
        match self {
            CheckName::Theorem1 => "theorem1",
            CheckName::Theorem2 => "theorem2",
            CheckName::TheoremARecovery => "theoremA_recovery",
            CheckName::TheoremAExponential => "theoremA_exponential",
            CheckName::EnergyRecursion => "energy_recursion",
            CheckName::Lemma1 => "lemma1",
            CheckName::Lemma2 => "lemma2",
            CheckName::Lemma3 => "lemma3",
            CheckName::Oracle => "oracle",
        }
    }

    fn needs_pga(self) -> bool {
        matches!(
            self,
            CheckName::Theorem1
                | CheckName::Theorem2
                | CheckName::TheoremAExponential
                | CheckName::EnergyRecursion
                | CheckName::Lemma2
                | CheckName::Lemma3
        )
    }

    fn needs_oga(self) -> bool {
        matches!(self, CheckName::TheoremARecovery | CheckName::Oracle)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct StopConfig {
    pub max_iterations: usize,
    pub residual_tol: f64,
    pub inner_product_tol: f64,
}

impl Default for StopConfig {
    fn default() -> Self {
        let d = StopRule::default();
        StopConfig {
            max_iterations: d.max_iterations,
            residual_tol: d.residual_tol,
            inner_product_tol: d.inner_product_tol,
        }
    }
}

impl From<StopConfig> for StopRule {
    fn from(s: StopConfig) -> Self {
        StopRule {
            max_iterations: s.max_iterations,
            residual_tol: s.residual_tol,
            inner_product_tol: s.inner_product_tol,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub dictionary: DictionarySource,
    #[serde(default)]
    pub signal: Option<SignalSource>,
    #[serde(default = "default_algorithm")]
    pub algorithm: AlgorithmChoice,
    #[serde(default)]
    pub stop: StopConfig,
    #[serde(default)]
    pub checks: Vec<CheckName>,
    #[serde(default)]
    pub p: Option<f64>,
    #[serde(default = "default_output_dir")]
    pub output_dir: PathBuf,
    /// Also write per-step coefficient snapshots.
    #[serde(default)]
    pub snapshots: bool,
}

fn default_attempts() -> usize {
    64
}

fn default_true() -> bool {
    true
}

fn default_decay() -> f64 {
    1.01
}

fn default_algorithm() -> AlgorithmChoice {
    AlgorithmChoice::Both
}

fn default_output_dir() -> PathBuf {
    PathBuf::from("out")
}

impl ExperimentConfig {
    /// Reads a config and resolves every relative path against the config
    /// file's directory.
    pub fn load(path: &Path) -> Result<Self> {
        let file =
            File::open(path).with_context(|| format!("cannot open config {}", path.display()))?;
        let mut cfg: ExperimentConfig = serde_json::from_reader(BufReader::new(file))
            .with_context(|| format!("cannot parse config {}", path.display()))?;
        let base = path.parent().unwrap_or(Path::new("."));
        cfg.resolve_paths(base);
        Ok(cfg)
    }

    fn resolve_paths(&mut self, base: &Path) {
        let fix = |p: &mut PathBuf| {
            if p.is_relative() {
                *p = base.join(&*p);
            }
        };
        if let DictionarySource::File { path } = &mut self.dictionary {
            fix(path);
        }
        if let Some(SignalSource::File { path }) = &mut self.signal {
            fix(path);
        }
        fix(&mut self.output_dir);
    }

    pub fn override_seed(&mut self, seed: u64) {
        if let DictionarySource::Incoherent { seed: s, .. } = &mut self.dictionary {
            *s = seed;
        }
        match &mut self.signal {
            Some(SignalSource::Sparse { seed: s, .. })
            | Some(SignalSource::PowerLaw { seed: s, .. }) => *s = seed,
            _ => {}
        }
    }

    pub fn validate(&self) -> Result<()> {
        StopRule::from(self.stop).validate()?;
        if self.checks.contains(&CheckName::Theorem2) && self.p.is_none() {
            bail!("check `theorem2` requires `p`");
        }
        if let Some(p) = self.p {
            if !(1.0..2.0).contains(&p) {
                bail!("p = {p} outside [1, 2)");
            }
        }
        for c in &self.checks {
            if c.needs_pga() && !self.algorithm.pga() {
                bail!("check `{}` needs the PGA run", c.name());
            }
            if c.needs_oga() && !self.algorithm.oga() {
                bail!("check `{}` needs the OGA run", c.name());
            }
        }
        Ok(())
    }
}

impl DictionarySource {
    pub fn build(&self) -> Result<Dictionary> {
        Ok(match self {
            DictionarySource::Orthonormal { dim } => Dictionary::orthonormal(*dim)?,
            DictionarySource::Incoherent {
                dim,
                count,
                target_mu1,
                seed,
                max_attempts,
                orthogonalize,
            } => IncoherentBuilder::new(*dim, *count, *target_mu1, *seed)
                .max_attempts(*max_attempts)
                .orthogonalize(*orthogonalize)
                .build()?,
            DictionarySource::File { path } => {
                let file = File::open(path)
                    .with_context(|| format!("cannot open dictionary {}", path.display()))?;
                let label = path
                    .file_stem()
                    .map_or("dictionary".into(), |s| s.to_string_lossy().into_owned());
                Dictionary::read_text(BufReader::new(file), label)
                    .with_context(|| format!("cannot parse dictionary {}", path.display()))?
            }
        })
    }
}

impl SignalSource {
    pub fn build(&self, dict: &Dictionary) -> Result<SparseRepresentation> {
        Ok(match self {
            SignalSource::Sparse {
                sparsity,
                amp_low,
                amp_high,
                seed,
            } => gen_sparse_signal(dict, *sparsity, *amp_low, *amp_high, *seed)?,
            SignalSource::PowerLaw { p, decay, seed } => {
                gen_power_law_signal(dict, *p, *decay, *seed)?
            }
            SignalSource::File { path } => {
                let file = File::open(path)
                    .with_context(|| format!("cannot open signal {}", path.display()))?;
                SparseRepresentation::read_text(BufReader::new(file), dict)
                    .with_context(|| format!("cannot parse signal {}", path.display()))?
            }
        })
    }
}
