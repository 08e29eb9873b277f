//! The per-instance pipeline: sample circuit -> exact reference run (record
//! generation) -> TEBD -> fidelity -> bounds.
//!
//! The measurement record always comes from an exact backend (dense,
//! stabilizer, or full-bond MPS), never from the truncated MPS, and the
//! trajectory and all estimators are pure functions of
//! (master seed, cell index, sample index).

use mirror_core::bounds::{
    entropy_lower_from_eps, entropy_upper_from_eps, entropy_upper_from_f, max_fidelity_bound,
    BoundsReport,
};
use mirror_core::circuit::{sample_instance, CircuitInstance, GateSet};
use mirror_core::dense::{self, DenseState};
use mirror_core::error::{Error, Result};
use mirror_core::mirror::build_mirror;
use mirror_core::mps::{full_bond_cap, run_tebd, run_tebd_sampling, Mps};
use mirror_core::rng::{derive_seed, instance_rng, Stream};
use mirror_core::stab::{self, StabilizerTableau};

use crate::config::{BackendPolicy, Cell, ExperimentConfig, FidelityMethodSpec};

/// One sample's scalar output (a CSV row plus the full report).
#[derive(Clone, Debug)]
pub struct ResultRow {
    pub cell: Cell,
    pub sample: usize,
    pub seed: u64,
    pub f: f64,
    pub f_err: Option<f64>,
    pub method: &'static str,
    pub eps_max: f64,
    pub s_ub_f: f64,
    pub s_ub_eps_half: f64,
    pub s_lb_eps_half: f64,
    pub s_exact_half: f64,
    pub wall_ms: u64,
    pub report: BoundsReport,
}

/// Concrete fidelity method after auto-resolution.
#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub enum FidelityMethod {
    ExactOverlap,
    MirrorDense,
    McStabilizer(usize),
    Shots(usize),
}

impl FidelityMethod {
    pub fn label(self) -> &'static str {
        match self {
            FidelityMethod::ExactOverlap => "exact-overlap",
            FidelityMethod::MirrorDense => "mirror-dense",
            FidelityMethod::McStabilizer(_) => "mc-stabilizer",
            FidelityMethod::Shots(_) => "shots",
        }
    }
}

/// The exact reference produced alongside the measurement record.
enum Reference {
    Dense(DenseState<f64>),
    Stabilizer(StabilizerTableau),
    MpsFull(Mps<f64>),
}

impl Reference {
    /// Exact entropies (nats) at every cut `1..n`.
    fn entropies(&mut self, n: usize) -> Vec<f64> {
        match self {
            Reference::Dense(state) => {
                (1..n).map(|cut| state.schmidt_spectrum(cut).entropy()).collect()
            }
            Reference::Stabilizer(tab) => {
                (1..n).map(|cut| tab.entanglement_entropy(cut)).collect()
            }
            Reference::MpsFull(mps) => (1..n).map(|cut| mps.entropy(cut)).collect(),
        }
    }

    /// Exact Schmidt errors of the rank-`d` truncation at every cut.
    fn schmidt_errors(&mut self, n: usize, d: usize) -> Vec<f64> {
        match self {
            Reference::Dense(state) => {
                (1..n).map(|cut| state.schmidt_spectrum(cut).schmidt_error(d)).collect()
            }
            Reference::Stabilizer(tab) => (1..n).map(|cut| tab.schmidt_error(cut, d)).collect(),
            Reference::MpsFull(mps) => (1..n).map(|cut| mps.schmidt_error(cut, d)).collect(),
        }
    }

    /// Dense form of the reference state, when within the dense limit.
    fn to_dense(&self, instance: &CircuitInstance, limit: usize) -> Result<DenseState<f64>> {
        match self {
            Reference::Dense(state) => Ok(state.clone()),
            Reference::Stabilizer(_) => {
                let record = instance.record.as_ref().expect("reference run filled the record");
                let (state, _) = dense::run_replay::<f64>(instance, record, limit)?;
                Ok(state)
            }
            Reference::MpsFull(mps) => mps.to_dense(limit),
        }
    }
}

fn resolve_backend(policy: BackendPolicy, gate_set: GateSet, n: usize, dense_limit: usize) -> Result<BackendPolicy> {
    let resolved = match policy {
        BackendPolicy::Auto => match gate_set {
            GateSet::Clifford => BackendPolicy::Stabilizer,
            GateSet::Haar => {
                if n <= dense_limit {
                    BackendPolicy::Dense
                } else {
                    BackendPolicy::MpsFull
                }
            }
        },
        other => other,
    };
    if resolved == BackendPolicy::Stabilizer && gate_set != GateSet::Clifford {
        return Err(Error::Invalid("stabilizer backend needs Clifford gates".into()));
    }
    Ok(resolved)
}

fn resolve_fidelity(
    spec: FidelityMethodSpec,
    gate_set: GateSet,
    n: usize,
    dense_limit: usize,
    mc_samples: usize,
    shots: usize,
) -> Result<FidelityMethod> {
    Ok(match spec {
        FidelityMethodSpec::Auto => {
            if n <= dense_limit {
                FidelityMethod::ExactOverlap
            } else if gate_set == GateSet::Clifford {
                FidelityMethod::McStabilizer(mc_samples)
            } else {
                FidelityMethod::ExactOverlap // full-bond MPS overlap path
            }
        }
        FidelityMethodSpec::ExactOverlap => FidelityMethod::ExactOverlap,
        FidelityMethodSpec::MirrorDense => FidelityMethod::MirrorDense,
        FidelityMethodSpec::McStabilizer => {
            if gate_set != GateSet::Clifford {
                return Err(Error::Invalid("mc-stabilizer needs Clifford gates".into()));
            }
            FidelityMethod::McStabilizer(mc_samples)
        }
        FidelityMethodSpec::Shots => FidelityMethod::Shots(shots),
    })
}

/// Run the full pipeline for one (cell, sample) coordinate.
pub fn run_instance(config: &ExperimentConfig, cell: Cell, sample: usize) -> Result<ResultRow> {
    run_instance_with_mps(config, cell, sample).map(|(row, _)| row)
}

/// Pipeline variant that also hands back the truncated MPS, for export.
pub fn run_instance_with_mps(
    config: &ExperimentConfig,
    cell: Cell,
    sample: usize,
) -> Result<(ResultRow, Mps<f64>)> {
    let seed = derive_seed(config.master_seed, cell.index as u64, sample as u64);
    let instance = sample_instance(cell.gate_set, cell.n, cell.l, cell.p, seed)?;
    run_pipeline(config, cell, instance, sample)
}

/// Run the pipeline on an externally supplied instance (for example one
/// loaded from circuit JSON). A present measurement record is replayed as
/// the trajectory; otherwise the reference backend samples one.
pub fn run_loaded_instance(
    config: &ExperimentConfig,
    instance: CircuitInstance,
    d: usize,
) -> Result<(ResultRow, Mps<f64>)> {
    let cell = Cell {
        index: 0,
        gate_set: instance.gate_set,
        n: instance.n,
        l: instance.l,
        p: instance.p,
        d,
    };
    run_pipeline(config, cell, instance, 0)
}

fn run_pipeline(
    config: &ExperimentConfig,
    cell: Cell,
    mut instance: CircuitInstance,
    sample: usize,
) -> Result<(ResultRow, Mps<f64>)> {
    let start = std::time::Instant::now();
    let seed = instance.seed;
    let n = cell.n;

    let backend = resolve_backend(config.backend, cell.gate_set, n, config.dense_limit)?;
    let mut meas_rng = instance_rng(seed, Stream::Measurement);
    let mut reference = if let Some(record) = instance.record.clone() {
        // Fixed trajectory: replay the given record on the dense reference.
        let (state, _) = dense::run_replay::<f64>(&instance, &record, config.dense_limit)?;
        Reference::Dense(state)
    } else {
        match backend {
            BackendPolicy::Dense => {
                let (state, record) =
                    dense::run_monitored::<f64>(&instance, &mut meas_rng, config.dense_limit)?;
                instance.record = Some(record);
                Reference::Dense(state)
            }
            BackendPolicy::Stabilizer => {
                let (tab, record) = stab::run_monitored(&instance, &mut meas_rng)?;
                instance.record = Some(record);
                Reference::Stabilizer(tab)
            }
            BackendPolicy::MpsFull => {
                let (mps, record) =
                    run_tebd_sampling::<f64>(&instance, full_bond_cap(n), &mut meas_rng)?;
                instance.record = Some(record);
                Reference::MpsFull(mps)
            }
            BackendPolicy::Auto => unreachable!("resolved above"),
        }
    };

    let mut psi_d = run_tebd::<f64>(&instance, cell.d)?;

    let method = resolve_fidelity(
        config.fidelity,
        cell.gate_set,
        n,
        config.dense_limit,
        config.mc_samples,
        config.shots,
    )?;
    let mut est_rng = instance_rng(seed, Stream::Estimator);
    let (f, f_err) = match method {
        FidelityMethod::ExactOverlap => match &reference {
            Reference::MpsFull(full) => {
                let ov = full.overlap(&psi_d)?;
                (ov.norm_sqr(), None)
            }
            _ => {
                let psi = reference.to_dense(&instance, config.dense_limit)?;
                let approx = psi_d.to_dense(config.dense_limit)?;
                (psi.overlap(&approx)?.norm_sqr(), None)
            }
        },
        FidelityMethod::MirrorDense => {
            let psi = reference.to_dense(&instance, config.dense_limit)?;
            psi_d.move_center(n.div_ceil(2));
            let mirror = build_mirror(&psi_d)?;
            (mirror.fidelity(&psi)?, None)
        }
        FidelityMethod::McStabilizer(samples) => {
            let Reference::Stabilizer(tab) = &reference else {
                return Err(Error::Invalid(
                    "mc-stabilizer fidelity needs the stabilizer reference".into(),
                ));
            };
            let (est, se) = tab.mc_overlap(&psi_d, samples, &mut est_rng)?;
            (est, Some(se))
        }
        FidelityMethod::Shots(shots) => {
            let psi = reference.to_dense(&instance, config.dense_limit)?;
            psi_d.move_center(n.div_ceil(2));
            let mirror = build_mirror(&psi_d)?;
            let (est, se) = mirror.fidelity_shots(&psi, shots, &mut est_rng)?;
            (est, Some(se))
        }
    };

    let eps_cuts = reference.schmidt_errors(n, cell.d);
    let s_exact_cuts = reference.entropies(n);
    let eps_tilde_cuts: Vec<f64> =
        (1..n).map(|cut| psi_d.ledger().max_step_at_cut(cut)).collect();

    let mut s_upper_from_eps_cuts = Vec::with_capacity(n - 1);
    let mut s_lower_from_eps_cuts = Vec::with_capacity(n - 1);
    let mut s_lower_from_ledger_cuts = Vec::with_capacity(n - 1);
    for cut in 1..n {
        let n_bar = cut.min(n - cut);
        let full = 1usize << n_bar;
        let d_eff = cell.d.min(full);
        let eps = eps_cuts[cut - 1];
        s_upper_from_eps_cuts.push(entropy_upper_from_eps(eps, d_eff, n_bar)?);
        // The lower-bound form needs D >= 2; smaller effective ranks make the
        // Schmidt error zero and the bound trivially zero.
        if d_eff >= 2 {
            s_lower_from_eps_cuts.push(entropy_lower_from_eps(eps, d_eff)?);
            s_lower_from_ledger_cuts
                .push(entropy_lower_from_eps(eps_tilde_cuts[cut - 1], d_eff)?);
        } else {
            s_lower_from_eps_cuts.push(0.0);
            s_lower_from_ledger_cuts.push(0.0);
        }
    }

    let report = BoundsReport {
        gate_set: cell.gate_set,
        n,
        l: cell.l,
        p: cell.p,
        d: cell.d,
        seed,
        f,
        f_err,
        method: method.label().to_string(),
        eps_cuts: eps_cuts.clone(),
        eps_tilde_cuts,
        s_exact_cuts: Some(s_exact_cuts.clone()),
        s_upper_from_f: entropy_upper_from_f(f, cell.d, n)?,
        s_upper_from_eps_cuts: s_upper_from_eps_cuts.clone(),
        s_lower_from_eps_cuts: s_lower_from_eps_cuts.clone(),
        s_lower_from_ledger_cuts,
        max_fidelity_bound: max_fidelity_bound(&eps_cuts)?,
    };

    let half = (n / 2).max(1);
    let wall_ms = if config.record_timing {
        start.elapsed().as_millis() as u64
    } else {
        0
    };
    let row = ResultRow {
        cell,
        sample,
        seed,
        f,
        f_err,
        method: method.label(),
        eps_max: report.eps_max(),
        s_ub_f: report.s_upper_from_f,
        s_ub_eps_half: s_upper_from_eps_cuts[half - 1],
        s_lb_eps_half: s_lower_from_eps_cuts[half - 1],
        s_exact_half: s_exact_cuts[half - 1],
        wall_ms,
        report,
    };
    Ok((row, psi_d))
}
