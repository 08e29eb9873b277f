//! Closed-form entanglement-entropy bounds and their validation oracles.
//!
//! All entropies are in nats. The bounds relate the Schmidt error of a
//! rank-`D` truncation, or the measured mirror fidelity, to the Von Neumann
//! entropy of the underlying state:
//!
//! * `F <= 1 - max_n eps_D^(n)` (best rank-D fidelity),
//! * `S <= Sbar(eps) + (1 - eps) ln D + eps ln(2^nbar - D)`,
//! * `S_half <= [1 + N (1 - F)/2] ln 2 + F ln D`,
//! * `S >= Sbar(eps) + eps (1 + ln(D ln D))`,
//! * volume-law coefficient `S_half / N <= (2 ln 2 + beta F ln(A N)) / N`.

use serde::{Deserialize, Serialize};

use crate::circuit::GateSet;
use crate::error::{Error, Result};
use crate::scalar::Real;

/// `Sbar(eps) = -(1 - eps) ln(1 - eps) - eps ln(eps)`, with `0 ln 0 := 0`.
pub fn binary_entropy<T: Real>(eps: T) -> Result<T> {
    if eps < T::zero() || eps > T::one() {
        return Err(Error::Domain(format!("binary entropy needs eps in [0,1], got {eps}")));
    }
    let mut s = T::zero();
    if eps > T::zero() {
        s -= eps * eps.ln();
    }
    let rest = T::one() - eps;
    if rest > T::zero() {
        s -= rest * rest.ln();
    }
    Ok(s)
}

/// Best possible squared overlap of any rank-`D` state: `1 - max_n eps^(n)`.
pub fn max_fidelity_bound<T: Real>(eps_cuts: &[T]) -> Result<T> {
    if eps_cuts.is_empty() {
        return Err(Error::Invalid("max_fidelity_bound needs at least one cut".into()));
    }
    let worst = eps_cuts.iter().copied().fold(T::zero(), T::max);
    Ok(T::one() - worst)
}

/// Entropy upper bound from the Schmidt error at one cut:
/// `Sbar(eps) + (1 - eps) ln D + eps ln(2^nbar - D)`.
/// When `D = 2^nbar` the last term is dropped (the error is then zero).
pub fn entropy_upper_from_eps<T: Real>(eps: T, d: usize, n_bar: usize) -> Result<T> {
    if d == 0 {
        return Err(Error::Domain("rank D must be at least 1".into()));
    }
    if n_bar >= 63 {
        return Err(Error::Domain(format!("half-cut width {n_bar} too large")));
    }
    let full = 1u64 << n_bar;
    if d as u64 > full {
        return Err(Error::Domain(format!("D = {d} exceeds 2^{n_bar}")));
    }
    let sbar = binary_entropy(eps)?;
    let mut bound = sbar + (T::one() - eps) * T::of(d as f64).ln();
    if (d as u64) < full {
        bound += eps * T::of((full - d as u64) as f64).ln();
    }
    Ok(bound)
}

/// Half-chain entropy upper bound from the mirror fidelity:
/// `[1 + N (1 - F)/2] ln 2 + F ln D`.
pub fn entropy_upper_from_f<T: Real>(f: T, d: usize, n: usize) -> Result<T> {
    if d == 0 {
        return Err(Error::Domain("rank D must be at least 1".into()));
    }
    let ln2 = T::of(std::f64::consts::LN_2);
    Ok((T::one() + T::of(n as f64) * (T::one() - f) / T::of(2.0)) * ln2
        + f * T::of(d as f64).ln())
}

/// Volume-law coefficient bound `(2 ln 2 + beta F ln(A N)) / N`, valid when
/// the bond dimension obeys `D <= (A N)^beta`.
pub fn volume_law_bound<T: Real>(f: T, d: usize, n: usize, beta: T, a: T) -> Result<T> {
    let an = a * T::of(n as f64);
    let cap = an.powf(beta);
    if T::of(d as f64) > cap * (T::one() + T::of(1e-12)) {
        return Err(Error::Domain(format!(
            "D = {d} is inconsistent with (A N)^beta = {:.6}",
            cap.as_f64()
        )));
    }
    let ln2 = T::of(std::f64::consts::LN_2);
    Ok((T::of(2.0) * ln2 + beta * f * an.ln()) / T::of(n as f64))
}

/// Entropy lower bound from the Schmidt error:
/// `Sbar(eps) + eps (1 + ln(D ln D))`, needing `D >= 2`.
pub fn entropy_lower_from_eps<T: Real>(eps: T, d: usize) -> Result<T> {
    if d < 2 {
        return Err(Error::Domain("entropy lower bound needs D >= 2".into()));
    }
    let sbar = binary_entropy(eps)?;
    let dd = T::of(d as f64);
    Ok(sbar + eps * (T::one() + (dd * dd.ln()).ln()))
}

// ---------------------------------------------------------------------------
// Sweep curves and the eps-test critical-point estimator
// ---------------------------------------------------------------------------

/// One aggregated quantity over a measurement-rate grid.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SweepCurve {
    pub gate_set: GateSet,
    pub n: usize,
    pub d: usize,
    /// Strictly increasing measurement rates.
    pub p_grid: Vec<f64>,
    pub mean: Vec<f64>,
    pub stderr: Vec<f64>,
    pub samples: usize,
}

impl SweepCurve {
    pub fn new(
        gate_set: GateSet,
        n: usize,
        d: usize,
        p_grid: Vec<f64>,
        mean: Vec<f64>,
        stderr: Vec<f64>,
        samples: usize,
    ) -> Result<Self> {
        if p_grid.is_empty() || p_grid.len() != mean.len() || mean.len() != stderr.len() {
            return Err(Error::Invalid("sweep curve arrays must be nonempty and aligned".into()));
        }
        if p_grid.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::Invalid("p grid must be strictly increasing".into()));
        }
        Ok(Self { gate_set, n, d, p_grid, mean, stderr, samples })
    }
}

/// The eps-test estimate of the critical measurement rate: the smallest grid
/// point where the mean fidelity-derived entropy bound drops below
/// `threshold * N / 2` nats. `None` when no grid point qualifies.
pub fn epsilon_test_pc(curve: &SweepCurve, threshold: f64) -> Result<Option<f64>> {
    if threshold <= 0.0 {
        return Err(Error::Domain("eps-test threshold must be positive".into()));
    }
    let cutoff = threshold * curve.n as f64 / 2.0;
    Ok(curve
        .p_grid
        .iter()
        .zip(curve.mean.iter())
        .find(|(_, &m)| m < cutoff)
        .map(|(&p, _)| p))
}

/// Default eps-test threshold, in nats per qubit.
pub const DEFAULT_EPS_THRESHOLD: f64 = 0.05;

// ---------------------------------------------------------------------------
// Extremization closed forms and the brute-force oracle
// ---------------------------------------------------------------------------

/// `F+`: maximum of `sum mu_i^alpha` over the constrained simplex, attained
/// at the uniform distribution: `m (Sigma/m)^alpha`.
pub fn extremal_max_closed_form(m: usize, sigma: f64, alpha: f64) -> f64 {
    m as f64 * (sigma / m as f64).powf(alpha)
}

/// `F-` with `p_min = 0`: minimum of `sum mu_i^alpha`, attained by packing
/// values at `p_max`: `floor(Sigma/p_max) p_max^alpha + remainder^alpha`.
pub fn extremal_min_pmin_zero(sigma: f64, p_max: f64, alpha: f64) -> f64 {
    let k = (sigma / p_max + 1e-12).floor();
    let rem = (sigma - k * p_max).max(0.0);
    let rem_term = if rem > 0.0 { rem.powf(alpha) } else { 0.0 };
    k * p_max.powf(alpha) + rem_term
}

/// `F-` with `p_max = Sigma`: minimum attained by one large value and
/// `m - 1` values at `p_min`.
pub fn extremal_min_pmax_sigma(m: usize, sigma: f64, p_min: f64, alpha: f64) -> f64 {
    let pm_term = if p_min > 0.0 { p_min.powf(alpha) } else { 0.0 };
    (sigma - (m - 1) as f64 * p_min).powf(alpha) + (m - 1) as f64 * pm_term
}

/// Direction of the brute-force extremization.
#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub enum ExtremalSign {
    Maximize,
    Minimize,
}

/// Which Renyi-entropy extremum a power-sum extremization corresponds to.
/// For `alpha > 1` the entropy decreases in the power sum, so the power-sum
/// direction flips sign with `1 - alpha`.
#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub enum EntropyExtremum {
    MaxEntropy,
    MinEntropy,
}

/// Power-sum extremum corresponding to an entropy extremum (`F+` / `F-`).
pub fn extremal_power_sum(
    m: usize,
    sigma: f64,
    p_min: f64,
    p_max: f64,
    alpha: f64,
    which: EntropyExtremum,
    steps: usize,
) -> Result<f64> {
    let sign = match (which, alpha < 1.0) {
        (EntropyExtremum::MaxEntropy, true) | (EntropyExtremum::MinEntropy, false) => {
            ExtremalSign::Maximize
        }
        _ => ExtremalSign::Minimize,
    };
    extremal_spectrum_oracle(m, sigma, p_min, p_max, alpha, sign, steps)
}

/// Brute-force extremum of `sum_i mu_i^alpha` over non-increasing sequences
/// on a grid of `steps` intervals of `[0, Sigma]`, subject to
/// `sum mu_i = Sigma` and `p_min <= mu_i <= p_max`. Test oracle for the
/// closed forms; exact when the extremal configuration lies on the grid.
pub fn extremal_spectrum_oracle(
    m: usize,
    sigma: f64,
    p_min: f64,
    p_max: f64,
    alpha: f64,
    sign: ExtremalSign,
    steps: usize,
) -> Result<f64> {
    if m == 0 || m > 8 {
        return Err(Error::Domain("oracle supports 1 <= m <= 8".into()));
    }
    // Feasibility needs m p_min <= Sigma <= m p_max; p_max above the largest
    // attainable value Sigma - (m-1) p_min acts as a plain cap.
    if !(p_min <= sigma / m as f64 + 1e-12 && sigma / m as f64 <= p_max + 1e-12) {
        return Err(Error::Domain(format!(
            "infeasible constraints: p_min {p_min}, p_max {p_max}, Sigma {sigma}, m {m}"
        )));
    }
    let h = sigma / steps as f64;
    let lo = ((p_min / h) - 1e-9).ceil().max(0.0) as i64;
    let hi = ((p_max / h) + 1e-9).floor() as i64;
    let mut best = match sign {
        ExtremalSign::Maximize => f64::NEG_INFINITY,
        ExtremalSign::Minimize => f64::INFINITY,
    };
    // Depth-first over non-increasing integer compositions of `steps`.
    fn recurse(
        left: usize,
        remaining: i64,
        upper: i64,
        lo: i64,
        h: f64,
        alpha: f64,
        acc: f64,
        sign: ExtremalSign,
        best: &mut f64,
    ) {
        if left == 0 {
            if remaining == 0 {
                match sign {
                    ExtremalSign::Maximize => *best = best.max(acc),
                    ExtremalSign::Minimize => *best = best.min(acc),
                }
            }
            return;
        }
        let left_i = left as i64;
        // value for this slot: v <= upper, v >= lo, and the rest must fit
        let v_max = upper.min(remaining - lo * (left_i - 1));
        let v_min = lo.max((remaining + left_i - 1) / left_i);
        for v in (v_min..=v_max).rev() {
            let term = if v == 0 { 0.0 } else { (v as f64 * h).powf(alpha) };
            recurse(left - 1, remaining - v, v, lo, h, alpha, acc + term, sign, best);
        }
    }
    recurse(m, steps as i64, hi, lo, h, alpha, 0.0, sign, &mut best);
    if !best.is_finite() {
        return Err(Error::Domain("no grid point satisfies the constraints".into()));
    }
    Ok(best)
}

// ---------------------------------------------------------------------------
// Per-instance bounds report
// ---------------------------------------------------------------------------

/// Everything the bound machinery produces for one circuit instance.
/// Per-cut vectors run over cuts `1..N`; entropies are in nats.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct BoundsReport {
    pub gate_set: GateSet,
    pub n: usize,
    pub l: usize,
    pub p: f64,
    pub d: usize,
    pub seed: u64,
    /// Mirror fidelity (or its estimate).
    pub f: f64,
    /// Standard error of `f` when it was estimated, else absent.
    pub f_err: Option<f64>,
    /// How `f` was obtained.
    pub method: String,
    /// Exact Schmidt errors per cut, when a reference backend provided them.
    pub eps_cuts: Vec<f64>,
    /// Ledger-derived per-cut feed (max step error at each bond).
    pub eps_tilde_cuts: Vec<f64>,
    /// Exact entropies per cut, when available.
    pub s_exact_cuts: Option<Vec<f64>>,
    /// Eq.-5-style bound from `f` at the half chain.
    pub s_upper_from_f: f64,
    /// Eq.-4-style bounds per cut, from the exact Schmidt errors.
    pub s_upper_from_eps_cuts: Vec<f64>,
    /// Eq.-6-style lower bounds per cut, from the exact Schmidt errors.
    pub s_lower_from_eps_cuts: Vec<f64>,
    /// Same lower bound fed with the ledger eps-tilde.
    pub s_lower_from_ledger_cuts: Vec<f64>,
    /// `1 - max_n eps^(n)`.
    pub max_fidelity_bound: f64,
}

impl BoundsReport {
    pub fn half_cut(&self) -> usize {
        self.n / 2
    }

    pub fn eps_max(&self) -> f64 {
        self.eps_cuts.iter().copied().fold(0.0, f64::max)
    }

    /// Validity audit of the four bound inequalities against the exact
    /// entropies, with `slack` tolerance. Errors on the first violation.
    pub fn audit(&self, slack: f64) -> Result<()> {
        let Some(s_exact) = &self.s_exact_cuts else {
            return Err(Error::Invalid("audit needs exact entropies".into()));
        };
        for (idx, (&s, &ub)) in s_exact.iter().zip(&self.s_upper_from_eps_cuts).enumerate() {
            if s > ub + slack {
                return Err(Error::Invalid(format!(
                    "upper bound from eps violated at cut {}: S = {s} > {ub}",
                    idx + 1
                )));
            }
        }
        let half = self.half_cut();
        if half >= 1 {
            let s_half = s_exact[half - 1];
            if s_half > self.s_upper_from_f + slack {
                return Err(Error::Invalid(format!(
                    "upper bound from F violated: S = {s_half} > {}",
                    self.s_upper_from_f
                )));
            }
        }
        if self.d >= 2 {
            for (idx, (&s, &lb)) in s_exact.iter().zip(&self.s_lower_from_eps_cuts).enumerate() {
                if s < lb - slack {
                    return Err(Error::Invalid(format!(
                        "lower bound violated at cut {}: S = {s} < {lb}",
                        idx + 1
                    )));
                }
            }
            // The ledger-fed variant is deliberately not audited: the
            // per-step truncation error is an estimate of the final Schmidt
            // error, not a bound on it — a mid-run step can discard more
            // weight than the final state's cut retains when measurements
            // disentangle later layers.
        }
        if self.f_err.is_none() && self.f > self.max_fidelity_bound + slack {
            return Err(Error::Invalid(format!(
                "achieved fidelity {} exceeds the max-fidelity bound {}",
                self.f, self.max_fidelity_bound
            )));
        }
        Ok(())
    }
}
