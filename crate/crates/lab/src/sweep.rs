//! Sweep execution and order-independent aggregation.

use mirror_core::bounds::SweepCurve;
use mirror_core::error::Result;
use rayon::prelude::*;

use crate::config::{Cell, ExperimentConfig};
use crate::pipeline::{run_instance, ResultRow};

/// All rows of a sweep plus the per-cell aggregates.
pub struct SweepResult {
    pub rows: Vec<ResultRow>,
    pub stats: Vec<CellStats>,
    pub failures: Vec<(Cell, usize, String)>,
}

/// Aggregates of one grid cell.
#[derive(Clone, Debug, PartialEq)]
pub struct CellStats {
    pub cell: Cell,
    pub samples: usize,
    pub mean_f: f64,
    pub stderr_f: f64,
    pub mean_s_ub_f: f64,
    pub stderr_s_ub_f: f64,
    pub mean_eps_max: f64,
    pub mean_s_exact: f64,
}

/// Execute every (cell, sample) work item. Results are merged by coordinate
/// key afterwards, so the execution order never affects the output.
pub fn run_sweep(config: &ExperimentConfig) -> Result<SweepResult> {
    let cells = config.cells();
    let work: Vec<(Cell, usize)> = cells
        .iter()
        .flat_map(|&cell| (0..config.samples).map(move |s| (cell, s)))
        .collect();
    let outcomes: Vec<(Cell, usize, std::result::Result<ResultRow, String>)> = work
        .par_iter()
        .map(|&(cell, sample)| {
            let res = run_instance(config, cell, sample).map_err(|e| e.to_string());
            (cell, sample, res)
        })
        .collect();
    let mut rows = Vec::with_capacity(work.len());
    let mut failures = Vec::new();
    for (cell, sample, res) in outcomes {
        match res {
            Ok(row) => rows.push(row),
            Err(msg) => failures.push((cell, sample, msg)),
        }
    }
    rows.sort_by_key(|r| (r.cell.index, r.sample));
    let stats = aggregate(&rows);
    Ok(SweepResult { rows, stats, failures })
}

/// Per-cell means and standard errors, computed over rows sorted by
/// (cell, sample).
pub fn aggregate(rows: &[ResultRow]) -> Vec<CellStats> {
    let mut stats: Vec<CellStats> = Vec::new();
    let mut idx = 0usize;
    while idx < rows.len() {
        let cell = rows[idx].cell;
        let mut end = idx;
        while end < rows.len() && rows[end].cell.index == cell.index {
            end += 1;
        }
        let group = &rows[idx..end];
        let (mean_f, stderr_f) = mean_stderr(group.iter().map(|r| r.f));
        let (mean_s_ub_f, stderr_s_ub_f) = mean_stderr(group.iter().map(|r| r.s_ub_f));
        let (mean_eps_max, _) = mean_stderr(group.iter().map(|r| r.eps_max));
        let (mean_s_exact, _) = mean_stderr(group.iter().map(|r| r.s_exact_half));
        stats.push(CellStats {
            cell,
            samples: group.len(),
            mean_f,
            stderr_f,
            mean_s_ub_f,
            stderr_s_ub_f,
            mean_eps_max,
            mean_s_exact,
        });
        idx = end;
    }
    stats
}

/// Mean and standard error of the mean (0 for a single sample).
pub fn mean_stderr(values: impl Iterator<Item = f64>) -> (f64, f64) {
    let v: Vec<f64> = values.collect();
    let count = v.len();
    if count == 0 {
        return (f64::NAN, f64::NAN);
    }
    let mean = v.iter().sum::<f64>() / count as f64;
    if count == 1 {
        return (mean, 0.0);
    }
    let var = v.iter().map(|x| (x - mean) * (x - mean)).sum::<f64>() / (count - 1) as f64;
    (mean, (var / count as f64).sqrt())
}

/// Aggregates grouped into per-(n, d) curves over the p grid.
pub fn fidelity_curves(stats: &[CellStats]) -> Vec<SweepCurve> {
    curves_of(stats, |s| (s.mean_f, s.stderr_f))
}

pub fn bound_curves(stats: &[CellStats]) -> Vec<SweepCurve> {
    curves_of(stats, |s| (s.mean_s_ub_f, s.stderr_s_ub_f))
}

fn curves_of(stats: &[CellStats], pick: impl Fn(&CellStats) -> (f64, f64)) -> Vec<SweepCurve> {
    let mut keys: Vec<(usize, usize)> = stats.iter().map(|s| (s.cell.n, s.cell.d)).collect();
    keys.dedup();
    keys.sort_unstable();
    keys.dedup();
    let mut out = Vec::new();
    for (n, d) in keys {
        let mut pts: Vec<(f64, f64, f64, usize, mirror_core::circuit::GateSet)> = stats
            .iter()
            .filter(|s| s.cell.n == n && s.cell.d == d)
            .map(|s| {
                let (m, e) = pick(s);
                (s.cell.p, m, e, s.samples, s.cell.gate_set)
            })
            .collect();
        pts.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());
        if pts.is_empty() {
            continue;
        }
        let gate_set = pts[0].4;
        let samples = pts[0].3;
        let curve = SweepCurve::new(
            gate_set,
            n,
            d,
            pts.iter().map(|x| x.0).collect(),
            pts.iter().map(|x| x.1).collect(),
            pts.iter().map(|x| x.2).collect(),
            samples,
        );
        if let Ok(c) = curve {
            out.push(c);
        }
    }
    out
}
