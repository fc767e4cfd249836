use anyhow::{Context, Result};
use pursuit::analysis::write_summary_csv;
use pursuit::{
    best_mterm_oracle, check_energy_recursion, check_exact_recovery, check_exponential_decay,
    check_lemma35, check_pga_lemmas, check_theorem1, check_theorem2, format_real, run_oga, run_pga,
    CoherenceReport, Dictionary, GreedyTrace, SparseRepresentation, StopRule, SummaryRow,
    TheoremReport,
};

use crate::config::{CheckName, ExperimentConfig};
use crate::output::OutputSet;

pub const EXIT_OK: u8 = 0;
pub const EXIT_WARNING: u8 = 2;

/// Relative slack for the OGA-versus-oracle comparison.
const ORACLE_SLACK: f64 = 1e-9;
/// Residual tolerance for exact recovery, relative to `||f||`.
const RECOVERY_TOL: f64 = 1e-9;

pub fn coherence_text(dict: &Dictionary, c: &CoherenceReport) -> String {
    format!(
        "label={}\ndim={}\natoms={}\nmu1={}\nmu={}\nlower_frame={}\nupper_frame={}\nworst_atom={}\n",
        dict.label(),
        dict.dim(),
        dict.len(),
        c.mu1,
        c.mu,
        c.lower_frame,
        c.upper_frame,
        c.worst_atom
    )
}

pub fn cmd_coherence(dict: &Dictionary, quiet: bool) -> Result<u8> {
    let c = dict.coherence();
    if !quiet {
        print!("{}", coherence_text(dict, &c));
    }
    if c.mu1 >= 0.5 {
        eprintln!(
            "warning: mu1 = {} >= 1/2; exact recovery and exponential decay are not guaranteed",
            c.mu1
        );
        return Ok(EXIT_WARNING);
    }
    Ok(EXIT_OK)
}

fn require_signal(cfg: &ExperimentConfig, dict: &Dictionary) -> Result<SparseRepresentation> {
    cfg.signal
        .as_ref()
        .context("config has no `signal` section")?
        .build(dict)
}

struct RunState {
    outputs: Vec<(String, Vec<u8>)>,
    rows: Vec<SummaryRow>,
    warnings: Vec<String>,
}

impl RunState {
    fn report(&mut self, name: &str, text: String) {
        self.outputs
            .push((format!("report_{name}.txt"), text.into_bytes()));
    }

    fn theorem(&mut self, r: &TheoremReport) {
        self.rows.push(SummaryRow::from(r));
    }
}

pub fn cmd_run(cfg: &ExperimentConfig, quiet: bool) -> Result<u8> {
    cfg.validate()?;
    let dict = cfg.dictionary.build()?;
    let rep = require_signal(cfg, &dict)?;
    let f = rep.synthesize(&dict)?;
    let stop = StopRule::from(cfg.stop);
    let coherence = dict.coherence();
    let mu1 = coherence.mu1;

    let mut state = RunState {
        outputs: Vec::new(),
        rows: Vec::new(),
        warnings: Vec::new(),
    };
    state.outputs.push((
        "coherence.txt".into(),
        coherence_text(&dict, &coherence).into_bytes(),
    ));

    let needs_third = [
        CheckName::Theorem1,
        CheckName::Theorem2,
        CheckName::EnergyRecursion,
        CheckName::Lemma3,
    ];
    if mu1 >= 1.0 / 3.0 && cfg.checks.iter().any(|c| needs_third.contains(c)) {
        state.warnings.push(format!(
            "mu1 = {mu1} >= 1/3: hypotheses of the PGA rate bounds fail"
        ));
    }
    let needs_half = [CheckName::TheoremARecovery, CheckName::TheoremAExponential];
    if mu1 >= 0.5 && cfg.checks.iter().any(|c| needs_half.contains(c)) {
        state.warnings.push(format!(
            "mu1 = {mu1} >= 1/2: exact recovery hypotheses fail"
        ));
    }

    let pga = if cfg.algorithm.pga() {
        let t = run_pga(&dict, &f, &stop, Some(&rep))?;
        state.outputs.push(("trace_pga.csv".into(), trace_csv(&t)?));
        Some(t)
    } else {
        None
    };
    let oga = if cfg.algorithm.oga() {
        let t = run_oga(&dict, &f, &stop)?;
        state.outputs.push(("trace_oga.csv".into(), trace_csv(&t)?));
        Some(t)
    } else {
        None
    };

    let n1 = rep.norm1();
    let mut lemmas = None;
    for &check in &cfg.checks {
        match check {
            CheckName::Theorem1 => {
                let t = pga.as_ref().expect("validated");
                let r1 = check_theorem1(t, n1)?;
                let r35 = check_lemma35(t, &rep)?;
                state.theorem(&r1);
                state.theorem(&r35);
                state.report(
                    "theorem1",
                    format!("{}\n{}", r1.to_key_value(), r35.to_key_value()),
                );
            }
            CheckName::Theorem2 => {
                let t = pga.as_ref().expect("validated");
                let p = cfg.p.expect("validated");
                let np = rep.quasi_norm(p)?;
                let r = check_theorem2(t, p, np, Some(mu1))?;
                state.theorem(&r);
                state.report("theorem2", r.to_key_value());
            }
            CheckName::TheoremARecovery => {
                let t = oga.as_ref().expect("validated");
                let r = check_exact_recovery(t, &rep.support(), RECOVERY_TOL)?;
                state.theorem(&r);
                state.report("theoremA_recovery", r.to_key_value());
            }
            CheckName::TheoremAExponential => {
                let r = check_exponential_decay(pga.as_ref().expect("validated"));
                state.theorem(&r);
                state.report("theoremA_exponential", r.to_key_value());
            }
            CheckName::EnergyRecursion => {
                let r = check_energy_recursion(pga.as_ref().expect("validated"), n1 * n1)?;
                state.theorem(&r);
                state.report("energy_recursion", r.to_key_value());
            }
            CheckName::Lemma1 => {
                let fb = dict.frame_bounds_check(&rep)?;
                let slack = 1e-9 * rep.power_sum(2.0);
                let margin = (fb.mid + slack - fb.lhs).min(fb.rhs + slack - fb.mid);
                state.rows.push(SummaryRow {
                    name: "lemma1".into(),
                    holds: fb.holds,
                    worst_margin: margin,
                    worst_step: 0,
                });
                state.report(
                    "lemma1",
                    format!(
                        "lhs={}\nmid={}\nrhs={}\nholds={}\n",
                        format_real(fb.lhs),
                        format_real(fb.mid),
                        format_real(fb.rhs),
                        fb.holds
                    ),
                );
            }
            CheckName::Lemma2 | CheckName::Lemma3 => {
                let t = pga.as_ref().expect("validated");
                if lemmas.is_none() {
                    lemmas = Some(check_pga_lemmas(&dict, &rep, t, cfg.p.unwrap_or(1.0))?);
                }
                let l = lemmas.as_ref().expect("just computed");
                let [l2, l3] = l.summary_rows();
                state
                    .rows
                    .push(if check == CheckName::Lemma2 { l2 } else { l3 });
                state.report(check.name(), l.to_key_value());
            }
            CheckName::Oracle => {
                let t = oga.as_ref().expect("validated");
                let m = rep.len();
                let o = best_mterm_oracle(&dict, &f, m)?;
                let greedy = t.residual_norm(m);
                let margin = greedy - (o.error - ORACLE_SLACK * t.initial_norm);
                state.rows.push(SummaryRow {
                    name: "oracle".into(),
                    holds: margin >= 0.0,
                    worst_margin: margin,
                    worst_step: m,
                });
                state.report(
                    "oracle",
                    format!(
                        "m={m}\noracle_error={}\noracle_support={}\noga_residual={}\n",
                        format_real(o.error),
                        join(&o.support),
                        format_real(greedy)
                    ),
                );
            }
        }
    }

    let mut summary = Vec::new();
    write_summary_csv(&state.rows, &mut summary)?;
    state.outputs.push(("summary.csv".into(), summary));

    if cfg.snapshots {
        for (name, trace) in [("pga", &pga), ("oga", &oga)] {
            let Some(trace) = trace else { continue };
            for (i, s) in trace.steps.iter().enumerate() {
                if let Some(c) = &s.coefficients {
                    let mut buf = Vec::new();
                    c.write_text(&mut buf)?;
                    state
                        .outputs
                        .push((format!("snapshots/{name}/step_{:04}.rep", i + 1), buf));
                }
            }
        }
    }

    let mut out = OutputSet::create(&cfg.output_dir)?;
    for (name, bytes) in &state.outputs {
        if let Err(e) = out.write(name, bytes) {
            out.discard();
            return Err(e);
        }
    }

    for w in &state.warnings {
        eprintln!("warning: {w}");
    }
    if !quiet {
        println!("mu1={mu1}");
        if let Some(t) = &pga {
            println!(
                "pga_steps={} pga_residual={:e}",
                t.len(),
                t.final_residual_norm()
            );
        }
        if let Some(t) = &oga {
            println!(
                "oga_steps={} oga_residual={:e}",
                t.len(),
                t.final_residual_norm()
            );
        }
        for r in &state.rows {
            println!(
                "{} holds={} worst_margin={:e} worst_step={}",
                r.name, r.holds, r.worst_margin, r.worst_step
            );
        }
        println!("outputs={}", out.dir().display());
    }
    let failed = state.rows.iter().any(|r| !r.holds);
    Ok(if failed || !state.warnings.is_empty() {
        EXIT_WARNING
    } else {
        EXIT_OK
    })
}

pub fn cmd_oracle(cfg: &ExperimentConfig, m: usize, quiet: bool) -> Result<u8> {
    let dict = cfg.dictionary.build()?;
    let rep = require_signal(cfg, &dict)?;
    let f = rep.synthesize(&dict)?;
    let oracle = best_mterm_oracle(&dict, &f, m)?;
    let stop = StopRule {
        max_iterations: m,
        ..StopRule::from(cfg.stop)
    };
    let pga = run_pga(&dict, &f, &stop, None)?;
    let oga = run_oga(&dict, &f, &stop)?;
    if !quiet {
        println!("m={m}");
        println!("oracle_error={}", oracle.error);
        println!("oracle_support={}", join(&oracle.support));
        println!("pga_residual={}", pga.residual_norm(m));
        println!("oga_residual={}", oga.residual_norm(m));
    }
    Ok(EXIT_OK)
}

fn trace_csv(t: &GreedyTrace) -> Result<Vec<u8>> {
    let mut buf = Vec::new();
    t.write_csv(&mut buf)?;
    Ok(buf)
}

fn join(v: &[usize]) -> String {
    v.iter()
        .map(|i| i.to_string())
        .collect::<Vec<_>>()
        .join(" ")
}
