use std::time::Instant;

use rand::SeedableRng;
use rand_chacha::ChaCha20Rng;
use rayon::prelude::*;

use super::problem::{matrix_pairs, parse_matrix, parse_vector, require, to_pair, vector_pairs, Mode, ProblemFile};
use super::report::{
    DiscriminationSection, FilteringSection, Report, SampleSummary, SampleTwoQubit, StrategyCounts, TwoQubitSection,
};
use super::CliError;
use crate::filtering::{self, FilteringProblem};
use crate::helstrom::{minimum_error, DiscriminationResult, Ensemble, Strategy};
use crate::linalg::{ComplexVector, Subsystem};
use crate::sampling;
use crate::tolerance::Tolerances;
use crate::twoqubit::{self, Amplitudes, OrthonormalSet, TwoQubitState};

/// Settings coming from command-line flags rather than the problem file.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RunOptions {
    /// Multiplies every tolerance (`--tolerance`).
    pub tolerance_scale: f64,
    /// Overrides the file's seed (`--seed`).
    pub seed: Option<u64>,
    /// Overrides the file's measuring party (`--subsystem`).
    pub subsystem: Option<Subsystem>,
}

impl Default for RunOptions {
    fn default() -> Self {
        Self { tolerance_scale: 1.0, seed: None, subsystem: None }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SampleParams {
    pub trials: usize,
    pub seed: u64,
    pub d: usize,
    pub dim: usize,
    pub subsystem: Subsystem,
}

/// Each trial draws from its own ChaCha20 stream, so results do not depend
/// on the order in which trials are evaluated.
fn trial_rng(seed: u64, trial: usize) -> ChaCha20Rng {
    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    rng.set_stream(trial as u64);
    rng
}

fn resolve_tolerances(file: Option<&ProblemFile>, opts: &RunOptions) -> Result<Tolerances, CliError> {
    let base = file.and_then(|f| f.tolerances).map(|o| o.apply(Tolerances::default())).unwrap_or_default();
    let tol = base.scaled(opts.tolerance_scale);
    if !tol.is_valid() {
        return Err(CliError::Validation(format!("tolerances must be positive and finite, got {tol:?}")));
    }
    Ok(tol)
}

fn expect_mode(file: &ProblemFile, mode: Mode, command: &str) -> Result<(), CliError> {
    if file.mode != mode {
        return Err(CliError::Validation(format!(
            "{command} expects mode {:?}, the file declares {:?}",
            mode, file.mode
        )));
    }
    Ok(())
}

fn reject_explicit_with_random(file: &ProblemFile) -> Result<(), CliError> {
    let explicit = [
        ("rho1", file.rho1.is_some()),
        ("rho2", file.rho2.is_some()),
        ("psi", file.psi.is_some()),
        ("u", file.u.is_some()),
    ];
    if let Some((name, _)) = explicit.iter().find(|(_, present)| *present) {
        return Err(CliError::Parse(format!("field `{name}`: cannot be combined with `random`")));
    }
    Ok(())
}

fn random_field(field: &str, value: Option<usize>) -> Result<usize, CliError> {
    value.ok_or_else(|| CliError::Parse(format!("field `random.{field}`: required for this mode")))
}

fn discrimination_section(r: &DiscriminationResult) -> DiscriminationSection {
    DiscriminationSection {
        p_error: r.p_error,
        strategy: r.strategy,
        spectrum: r.spectrum.clone(),
        split_index: r.split_index,
        pi1: matrix_pairs(&r.pi1),
        pi2: matrix_pairs(&r.pi2),
    }
}

fn base_report(command: &str, file: &ProblemFile, tol: Tolerances, opts: &RunOptions) -> Report {
    Report {
        command: command.into(),
        input: Some(file.clone()),
        instance: None,
        tolerances: tol,
        tolerance_scale: opts.tolerance_scale,
        seed: None,
        rng: None,
        discrimination: None,
        filtering: None,
        two_qubit: None,
        sample: None,
    }
}

fn explicit_instance(file: &ProblemFile) -> ProblemFile {
    ProblemFile { random: None, seed: None, tolerances: None, ..file.clone() }
}

/// Dispatches on the file's `mode`.
pub fn run(file: &ProblemFile, opts: &RunOptions) -> Result<Report, CliError> {
    match file.mode {
        Mode::General => cmd_discriminate(file, opts),
        Mode::Filtering => cmd_filter(file, opts),
        Mode::TwoQubit => cmd_two_qubit(file, opts),
    }
}

/// General two-state minimum-error discrimination.
pub fn cmd_discriminate(file: &ProblemFile, opts: &RunOptions) -> Result<Report, CliError> {
    expect_mode(file, Mode::General, "discriminate")?;
    let tol = resolve_tolerances(Some(file), opts)?;
    let mut report = base_report("discriminate", file, tol, opts);

    let ensemble = if let Some(spec) = &file.random {
        reject_explicit_with_random(file)?;
        let dim = random_field("dim", spec.dim)?;
        if !(1..=64).contains(&dim) {
            return Err(CliError::Validation(format!("random.dim must be in 1..=64, got {dim}")));
        }
        let seed = opts.seed.or(file.seed).unwrap_or(0);
        report.seed = Some(seed);
        report.rng = Some(sampling::RNG_ALGORITHM.into());
        let e = sampling::random_ensemble(&mut trial_rng(seed, 0), dim);
        Ensemble::with_tolerances(e.rho1().clone(), e.rho2().clone(), e.p1(), e.p2(), tol)?
    } else {
        let rho1 = parse_matrix(require(&file.rho1, "rho1", "general")?, "rho1")?;
        let rho2 = parse_matrix(require(&file.rho2, "rho2", "general")?, "rho2")?;
        let p1 = *require(&file.p1, "p1", "general")?;
        let p2 = file.p2.unwrap_or(1.0 - p1);
        Ensemble::with_tolerances(rho1, rho2, p1, p2, tol)?
    };

    report.instance = Some(ProblemFile {
        rho1: Some(matrix_pairs(ensemble.rho1())),
        rho2: Some(matrix_pairs(ensemble.rho2())),
        p1: Some(ensemble.p1()),
        p2: Some(ensemble.p2()),
        ..explicit_instance(file)
    });
    report.discrimination = Some(discrimination_section(&minimum_error(&ensemble)?));
    Ok(report)
}

fn check_filtering_priors(file: &ProblemFile, d: usize, tol: &Tolerances) -> Result<(), CliError> {
    let eta = 1.0 / (d as f64 + 1.0);
    if let Some(p1) = file.p1 {
        if (p1 - eta).abs() > tol.norm {
            return Err(CliError::Validation(format!(
                "p1 = {p1} violates the prior convention p1 = 1/(d+1) = {eta} for d = {d}"
            )));
        }
    }
    if let Some(p2) = file.p2 {
        if (p2 - d as f64 * eta).abs() > tol.norm {
            return Err(CliError::Validation(format!(
                "p2 = {p2} violates the prior convention p2 = d/(d+1) = {} for d = {d}",
                d as f64 * eta
            )));
        }
    }
    Ok(())
}

/// Pure state against a uniform orthonormal mixture: closed form next to the
/// numeric Helstrom oracle.
pub fn cmd_filter(file: &ProblemFile, opts: &RunOptions) -> Result<Report, CliError> {
    expect_mode(file, Mode::Filtering, "filter")?;
    let tol = resolve_tolerances(Some(file), opts)?;
    let mut report = base_report("filter", file, tol, opts);

    let (psi, u) = if let Some(spec) = &file.random {
        reject_explicit_with_random(file)?;
        let d = random_field("d", spec.d)?;
        let dim = random_field("dim", spec.dim)?;
        if d == 0 || d > dim || dim > 64 {
            return Err(CliError::Validation(format!(
                "random instance needs 1 <= d <= dim <= 64, got d = {d}, dim = {dim}"
            )));
        }
        let seed = opts.seed.or(file.seed).unwrap_or(0);
        report.seed = Some(seed);
        report.rng = Some(sampling::RNG_ALGORITHM.into());
        let mut rng = trial_rng(seed, 0);
        let psi = sampling::haar_state(&mut rng, dim);
        let u = sampling::orthonormal_set(&mut rng, dim, d);
        (psi, u)
    } else {
        let psi = parse_vector(require(&file.psi, "psi", "filtering")?, "psi")?;
        let u = require(&file.u, "u", "filtering")?
            .iter()
            .enumerate()
            .map(|(j, row)| parse_vector(row, &format!("u[{j}]")))
            .collect::<Result<Vec<_>, _>>()?;
        (psi, u)
    };

    check_filtering_priors(file, u.len(), &tol)?;
    let fp = FilteringProblem::with_tolerances(psi, u, tol)?;
    let oracle = minimum_error(&fp.ensemble()?)?;
    let closed_pe = filtering::closed_form_pe(&fp);
    let closed_spectrum = filtering::closed_form_spectrum(&fp);

    report.instance = Some(ProblemFile {
        psi: Some(vector_pairs(fp.psi())),
        u: Some(fp.components().iter().map(vector_pairs).collect()),
        ..explicit_instance(file)
    });
    report.filtering = Some(FilteringSection {
        d: fp.d(),
        dim: fp.dim(),
        parallel_norm_sq: filtering::parallel_norm_sq(&fp),
        linearly_dependent: fp.is_linearly_dependent(),
        closed_form_pe: closed_pe,
        spectrum_deviation: filtering::spectrum_deviation(&closed_spectrum, &oracle.spectrum),
        closed_form_spectrum: closed_spectrum,
        oracle_pe: oracle.p_error,
        pe_abs_difference: (closed_pe - oracle.p_error).abs(),
        unambiguous_qf_benchmark: filtering::unambiguous_qf(&fp),
    });
    report.discrimination = Some(discrimination_section(&oracle));
    Ok(report)
}

fn amplitudes(v: &ComplexVector, name: &str) -> Result<Amplitudes, CliError> {
    v.entries().try_into().map_err(|_| {
        CliError::Validation(format!("{name} must have 4 amplitudes in the basis |00>,|01>,|10>,|11>, got {}", v.dim()))
    })
}

fn sign(x: f64, tol: &Tolerances) -> i8 {
    if x < -tol.eig {
        -1
    } else if x > tol.eig {
        1
    } else {
        0
    }
}

fn spans_symmetric_subspace(set: &OrthonormalSet, tol: &Tolerances) -> bool {
    let singlet = TwoQubitState::singlet().to_vector();
    set.d() == 3 && set.to_vectors().iter().all(|u| u.inner(&singlet).norm() <= tol.orth)
}

/// Two-qubit comparison of collective and local minimum-error discrimination.
pub fn cmd_two_qubit(file: &ProblemFile, opts: &RunOptions) -> Result<Report, CliError> {
    expect_mode(file, Mode::TwoQubit, "two-qubit")?;
    let tol = resolve_tolerances(Some(file), opts)?;
    let mut report = base_report("two-qubit", file, tol, opts);
    let party = opts.subsystem.or(file.subsystem).unwrap_or(Subsystem::A);

    let (psi, rows) = if let Some(spec) = &file.random {
        reject_explicit_with_random(file)?;
        let d = random_field("d", spec.d)?;
        if !(1..=4).contains(&d) || spec.dim.is_some_and(|dim| dim != 4) {
            return Err(CliError::Validation(format!(
                "two-qubit random instance needs 1 <= d <= 4 and dim = 4, got d = {d}"
            )));
        }
        let seed = opts.seed.or(file.seed).unwrap_or(0);
        report.seed = Some(seed);
        report.rng = Some(sampling::RNG_ALGORITHM.into());
        let mut rng = trial_rng(seed, 0);
        let psi = sampling::haar_state(&mut rng, 4);
        let u = sampling::orthonormal_set(&mut rng, 4, d);
        (psi, u)
    } else {
        let psi = parse_vector(require(&file.psi, "psi", "two-qubit")?, "psi")?;
        let u = require(&file.u, "u", "two-qubit")?
            .iter()
            .enumerate()
            .map(|(j, row)| parse_vector(row, &format!("u[{j}]")))
            .collect::<Result<Vec<_>, _>>()?;
        (psi, u)
    };

    let psi = TwoQubitState::with_tolerances(amplitudes(&psi, "psi")?, &tol)?;
    let rows =
        rows.iter().enumerate().map(|(j, v)| amplitudes(v, &format!("u[{j}]"))).collect::<Result<Vec<_>, _>>()?;
    let set = OrthonormalSet::with_tolerances(rows, tol)?;
    check_filtering_priors(file, set.d(), &tol)?;

    let collective = twoqubit::collective_pe(&psi, &set)?;
    let collective_oracle = minimum_error(&twoqubit::filtering_problem(&psi, &set)?.ensemble()?)?;
    let local = twoqubit::local_analysis(&psi, &set, party);
    let local_oracle = minimum_error(&twoqubit::reduced_ensemble(&psi, &set, party)?)?;

    report.instance = Some(ProblemFile {
        psi: Some(psi.amplitudes().iter().map(to_pair).collect()),
        u: Some(set.rows().iter().map(|r| r.iter().map(to_pair).collect()).collect()),
        subsystem: Some(party),
        ..explicit_instance(file)
    });
    report.two_qubit = Some(TwoQubitSection {
        d: set.d(),
        party,
        collective_pe: collective,
        local_pe: local.p_error,
        gap: local.p_error - collective,
        l00: local.lambda.l00,
        l01: to_pair(&local.lambda.l01),
        l11: local.lambda.l11,
        local_eigenvalues: [local.eigenvalues.0, local.eigenvalues.1],
        local_eigenvalue_signs: [sign(local.eigenvalues.0, &tol), sign(local.eigenvalues.1, &tol)],
        local_oracle_pe: local_oracle.p_error,
        symmetric_case_pe: spans_symmetric_subspace(&set, &tol).then(|| twoqubit::symmetric_case_pe(&psi)),
    });
    report.discrimination = Some(discrimination_section(&collective_oracle));
    Ok(report)
}

struct TrialOutcome {
    pe_deviation: f64,
    spectrum_deviation: f64,
    qf_violation: bool,
    qf_equality: bool,
    strategy: Strategy,
    two_qubit: Option<(f64, f64, f64)>,
}

fn run_trial(params: &SampleParams, tol: &Tolerances, trial: usize) -> crate::Result<TrialOutcome> {
    let mut rng = trial_rng(params.seed, trial);
    let psi = sampling::haar_state(&mut rng, params.dim);
    let u = sampling::orthonormal_set(&mut rng, params.dim, params.d);
    let fp = FilteringProblem::with_tolerances(psi.clone(), u.clone(), *tol)?;
    let oracle = minimum_error(&fp.ensemble()?)?;
    let pe = filtering::closed_form_pe(&fp);
    let qf = filtering::unambiguous_qf(&fp);
    let parallel_norm = filtering::parallel_norm_sq(&fp).sqrt();

    let two_qubit = if params.dim == 4 {
        let state = TwoQubitState::with_tolerances(psi.entries().try_into().expect("dim 4"), tol)?;
        let rows = u.iter().map(|v| v.entries().try_into().expect("dim 4")).collect();
        let set = OrthonormalSet::with_tolerances(rows, *tol)?;
        let local = twoqubit::local_analysis(&state, &set, params.subsystem);
        Some((twoqubit::collective_pe(&state, &set)?, local.p_error, local.eigenvalues.0))
    } else {
        None
    };

    Ok(TrialOutcome {
        pe_deviation: (pe - oracle.p_error).abs(),
        spectrum_deviation: filtering::spectrum_deviation(&filtering::closed_form_spectrum(&fp), &oracle.spectrum),
        qf_violation: pe > qf,
        qf_equality: parallel_norm >= 1e-6 && (qf - pe).abs() <= 1e-10,
        strategy: oracle.strategy,
        two_qubit,
    })
}

/// Randomised oracle-equivalence experiment over Haar-random filtering
/// instances. Trials run in parallel and are folded in index order.
pub fn cmd_sample(params: &SampleParams, opts: &RunOptions) -> Result<Report, CliError> {
    if params.trials == 0 {
        return Err(crate::Error::InvalidParameters("trials must be at least 1".into()).into());
    }
    if params.d == 0 || params.d > params.dim || params.dim > 8 {
        return Err(crate::Error::InvalidParameters(format!(
            "need 1 <= d <= dim <= 8, got d = {}, dim = {}",
            params.d, params.dim
        ))
        .into());
    }
    let tol = resolve_tolerances(None, opts)?;
    let start = Instant::now();
    let outcomes =
        (0..params.trials).into_par_iter().map(|t| run_trial(params, &tol, t)).collect::<crate::Result<Vec<_>>>()?;
    let elapsed_ms = start.elapsed().as_secs_f64() * 1e3;

    let mut strategy_counts = StrategyCounts::default();
    let mut two_qubit: Option<SampleTwoQubit> = None;
    for o in &outcomes {
        strategy_counts.add(o.strategy);
        if let Some((coll, loc, min_eig)) = o.two_qubit {
            let agg = two_qubit.get_or_insert(SampleTwoQubit {
                party: params.subsystem,
                collective_pe_min: f64::INFINITY,
                collective_pe_max: f64::NEG_INFINITY,
                local_pe_min: f64::INFINITY,
                local_pe_max: f64::NEG_INFINITY,
                min_local_eigenvalue: f64::INFINITY,
                collective_above_local: 0,
            });
            agg.collective_pe_min = agg.collective_pe_min.min(coll);
            agg.collective_pe_max = agg.collective_pe_max.max(coll);
            agg.local_pe_min = agg.local_pe_min.min(loc);
            agg.local_pe_max = agg.local_pe_max.max(loc);
            agg.min_local_eigenvalue = agg.min_local_eigenvalue.min(min_eig);
            agg.collective_above_local += usize::from(coll > loc + 1e-12);
        }
    }

    let summary = SampleSummary {
        trials: params.trials,
        d: params.d,
        dim: params.dim,
        max_pe_deviation: outcomes.iter().map(|o| o.pe_deviation).fold(0.0, f64::max),
        max_spectrum_deviation: outcomes.iter().map(|o| o.spectrum_deviation).fold(0.0, f64::max),
        qf_violations: outcomes.iter().filter(|o| o.qf_violation).count(),
        qf_equalities_with_nonzero_overlap: outcomes.iter().filter(|o| o.qf_equality).count(),
        strategy_counts,
        two_qubit,
        elapsed_ms,
    };

    Ok(Report {
        command: "sample".into(),
        input: None,
        instance: None,
        tolerances: tol,
        tolerance_scale: opts.tolerance_scale,
        seed: Some(params.seed),
        rng: Some(sampling::RNG_ALGORITHM.into()),
        discrimination: None,
        filtering: None,
        two_qubit: None,
        sample: Some(summary),
    })
}
