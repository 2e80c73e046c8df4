use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use super::problem::{Pair, ProblemFile};
use crate::helstrom::Strategy;
use crate::linalg::Subsystem;
use crate::tolerance::Tolerances;

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Text,
    Json,
}

/// Output of one command. Every field is a function of the problem file,
/// the seed and the tolerances, except `SampleSummary::elapsed_ms`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub command: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub input: Option<ProblemFile>,
    /// The concrete states that were analysed; differs from `input` only when
    /// a random instance was requested.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub instance: Option<ProblemFile>,
    pub tolerances: Tolerances,
    pub tolerance_scale: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rng: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub discrimination: Option<DiscriminationSection>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub filtering: Option<FilteringSection>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub two_qubit: Option<TwoQubitSection>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sample: Option<SampleSummary>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DiscriminationSection {
    pub p_error: f64,
    pub strategy: Strategy,
    pub spectrum: Vec<f64>,
    pub split_index: usize,
    pub pi1: Vec<Vec<Pair>>,
    pub pi2: Vec<Vec<Pair>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FilteringSection {
    pub d: usize,
    pub dim: usize,
    pub parallel_norm_sq: f64,
    pub linearly_dependent: bool,
    pub closed_form_pe: f64,
    pub closed_form_spectrum: Vec<f64>,
    pub oracle_pe: f64,
    pub pe_abs_difference: f64,
    pub spectrum_deviation: f64,
    /// Unambiguous-filtering failure probability at equal priors; reported as
    /// a benchmark value only.
    pub unambiguous_qf_benchmark: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TwoQubitSection {
    pub d: usize,
    pub party: Subsystem,
    pub collective_pe: f64,
    pub local_pe: f64,
    pub gap: f64,
    pub l00: f64,
    pub l01: Pair,
    pub l11: f64,
    pub local_eigenvalues: [f64; 2],
    /// Signs of the local eigenvalues decided against `±τ_eig`: -1, 0 or +1.
    pub local_eigenvalue_signs: [i8; 2],
    pub local_oracle_pe: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub symmetric_case_pe: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SampleSummary {
    pub trials: usize,
    pub d: usize,
    pub dim: usize,
    pub max_pe_deviation: f64,
    pub max_spectrum_deviation: f64,
    pub qf_violations: usize,
    pub qf_equalities_with_nonzero_overlap: usize,
    pub strategy_counts: StrategyCounts,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub two_qubit: Option<SampleTwoQubit>,
    pub elapsed_ms: f64,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct StrategyCounts {
    pub projective: usize,
    pub always_guess_rho1: usize,
    pub always_guess_rho2: usize,
}

impl StrategyCounts {
    pub fn add(&mut self, s: Strategy) {
        match s {
            Strategy::Projective => self.projective += 1,
            Strategy::AlwaysGuessRho1 => self.always_guess_rho1 += 1,
            Strategy::AlwaysGuessRho2 => self.always_guess_rho2 += 1,
        }
    }
}

/// Aggregates over the two-qubit view of each trial (`dim = 4` only).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SampleTwoQubit {
    pub party: Subsystem,
    pub collective_pe_min: f64,
    pub collective_pe_max: f64,
    pub local_pe_min: f64,
    pub local_pe_max: f64,
    pub min_local_eigenvalue: f64,
    pub collective_above_local: usize,
}

impl Report {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serialises")
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Json => self.to_json() + "\n",
            Format::Text => self.to_text(),
        }
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "command            {}", self.command);
        if let Some(seed) = self.seed {
            let _ = writeln!(out, "seed               {seed}");
        }
        if let Some(rng) = &self.rng {
            let _ = writeln!(out, "rng                {rng}");
        }
        let t = &self.tolerances;
        let _ = writeln!(
            out,
            "tolerances         herm={:e} norm={:e} orth={:e} resid={:e} eig={:e} (scale {})",
            t.herm, t.norm, t.orth, t.resid, t.eig, self.tolerance_scale
        );
        if let Some(f) = &self.filtering {
            let _ = writeln!(out, "\n[filtering]  d = {}, dim = {}", f.d, f.dim);
            row(&mut out, "|psi_par|^2", f.parallel_norm_sq);
            let _ = writeln!(out, "{:<19}{}", "linearly dependent", f.linearly_dependent);
            row(&mut out, "P_E closed form", f.closed_form_pe);
            row(&mut out, "P_E oracle", f.oracle_pe);
            row(&mut out, "|difference|", f.pe_abs_difference);
            list(&mut out, "spectrum (closed)", &f.closed_form_spectrum);
            row(&mut out, "spectrum deviation", f.spectrum_deviation);
            row(&mut out, "Q_F (benchmark)", f.unambiguous_qf_benchmark);
        }
        if let Some(q) = &self.two_qubit {
            let _ = writeln!(out, "\n[two-qubit]  d = {}, local party {}", q.d, q.party);
            row(&mut out, "P_E collective", q.collective_pe);
            if let Some(s) = q.symmetric_case_pe {
                row(&mut out, "P_E symmetric form", s);
            }
            row(&mut out, "P_E local", q.local_pe);
            row(&mut out, "P_E local oracle", q.local_oracle_pe);
            row(&mut out, "gap", q.gap);
            row(&mut out, "L00", q.l00);
            let _ = writeln!(out, "{:<19}{}", "L01", complex(&q.l01));
            row(&mut out, "L11", q.l11);
            list(&mut out, "lambda^A", &q.local_eigenvalues);
            let _ = writeln!(
                out,
                "{:<19}{:+} {:+}",
                "lambda^A signs", q.local_eigenvalue_signs[0], q.local_eigenvalue_signs[1]
            );
        }
        if let Some(dsc) = &self.discrimination {
            let _ = writeln!(out, "\n[minimum error]");
            row(&mut out, "P_E", dsc.p_error);
            let _ = writeln!(out, "{:<19}{:?}", "strategy", dsc.strategy);
            list(&mut out, "spectrum", &dsc.spectrum);
            let _ = writeln!(out, "{:<19}{}", "negative count", dsc.split_index);
            matrix(&mut out, "Pi1", &dsc.pi1);
            matrix(&mut out, "Pi2", &dsc.pi2);
        }
        if let Some(s) = &self.sample {
            let _ = writeln!(out, "\n[sample]  trials = {}, d = {}, dim = {}", s.trials, s.d, s.dim);
            row(&mut out, "max |P_E diff|", s.max_pe_deviation);
            row(&mut out, "max spectrum dev", s.max_spectrum_deviation);
            let _ = writeln!(out, "{:<19}{}", "P_E > Q_F", s.qf_violations);
            let _ = writeln!(out, "{:<19}{}", "P_E = Q_F, x > 0", s.qf_equalities_with_nonzero_overlap);
            let c = &s.strategy_counts;
            let _ = writeln!(
                out,
                "{:<19}projective {} / guess rho1 {} / guess rho2 {}",
                "strategies", c.projective, c.always_guess_rho1, c.always_guess_rho2
            );
            if let Some(q) = &s.two_qubit {
                let _ = writeln!(out, "{:<19}{}", "local party", q.party);
                list(&mut out, "P_E coll min/max", &[q.collective_pe_min, q.collective_pe_max]);
                list(&mut out, "P_E loc min/max", &[q.local_pe_min, q.local_pe_max]);
                row(&mut out, "min lambda^A", q.min_local_eigenvalue);
                let _ = writeln!(out, "{:<19}{}", "coll > loc", q.collective_above_local);
            }
            let _ = writeln!(out, "{:<19}{:.1} ms", "elapsed", s.elapsed_ms);
        }
        out
    }
}

/// Formats `x` with 12 significant digits, trailing zeros trimmed.
pub fn sig12(x: f64) -> String {
    if x == 0.0 {
        return "0".to_string();
    }
    if !x.is_finite() {
        return format!("{x}");
    }
    let exp = x.abs().log10().floor() as i32;
    if !(-5..=11).contains(&exp) {
        return format!("{x:.11e}");
    }
    let decimals = (11 - exp).max(0) as usize;
    let s = format!("{x:.decimals$}");
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.').to_string()
    } else {
        s
    }
}

fn complex(p: &Pair) -> String {
    if p[1] < 0.0 {
        format!("{}-{}i", sig12(p[0]), sig12(-p[1]))
    } else {
        format!("{}+{}i", sig12(p[0]), sig12(p[1]))
    }
}

fn row(out: &mut String, label: &str, x: f64) {
    let _ = writeln!(out, "{label:<19}{}", sig12(x));
}

fn list(out: &mut String, label: &str, xs: &[f64]) {
    let cells: Vec<String> = xs.iter().map(|&x| sig12(x)).collect();
    let _ = writeln!(out, "{label:<19}[{}]", cells.join(", "));
}

fn matrix(out: &mut String, label: &str, m: &[Vec<Pair>]) {
    let _ = writeln!(out, "{label}");
    for r in m {
        let cells: Vec<String> = r.iter().map(complex).collect();
        let _ = writeln!(out, "  [{}]", cells.join(", "));
    }
}
