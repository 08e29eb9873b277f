//! Exact dense statevector simulation of monitored circuits.
//!
//! This backend is the ground-truth oracle for states, measurement records,
//! Schmidt spectra, entropies, and overlaps at small qubit counts.
//! Amplitude indexing is little-endian: qubit 1 is the least significant bit.

use ndarray::Array2;
use rand::Rng;

use crate::circuit::{CircuitInstance, GateSpec, MeasurementRecord};
use crate::error::{Error, Result};
use crate::linalg::singular_values;
use crate::outcome::decide_outcome;
use crate::scalar::{norm_sqr, Real, C};

/// Default cap on dense simulation size (16 MiB of f64 amplitudes at n = 20).
pub const DEFAULT_DENSE_LIMIT: usize = 20;

/// Branch-weight floor distinguishing impossible outcomes from underflow.
pub const BRANCH_FLOOR: f64 = 1e-14;

/// A pure state of `n` qubits as a dense amplitude vector.
#[derive(Clone, Debug, PartialEq)]
pub struct DenseState<T: Real> {
    n: usize,
    amps: Vec<C<T>>,
}

/// Squared Schmidt coefficients across the cut `{1..n} | {n+1..N}`,
/// descending.
#[derive(Clone, Debug, PartialEq)]
pub struct SchmidtSpectrum<T: Real> {
    pub cut: usize,
    pub values: Vec<T>,
}

impl<T: Real> SchmidtSpectrum<T> {
    pub fn total(&self) -> T {
        self.values.iter().copied().sum()
    }

    /// Schmidt error: total weight beyond the largest `d` values.
    pub fn schmidt_error(&self, d: usize) -> T {
        neumaier_sum(self.values.iter().skip(d).copied())
    }

    /// Von Neumann entropy in nats, with 0 ln 0 := 0.
    pub fn entropy(&self) -> T {
        neumaier_sum(self.values.iter().map(|&mu| {
            if mu > T::zero() {
                -mu * mu.ln()
            } else {
                T::zero()
            }
        }))
    }
}

/// Compensated (Neumaier) summation.
pub fn neumaier_sum<T: Real, I: IntoIterator<Item = T>>(xs: I) -> T {
    let mut sum = T::zero();
    let mut comp = T::zero();
    for x in xs {
        let t = sum + x;
        if sum.abs() >= x.abs() {
            comp += (sum - t) + x;
        } else {
            comp += (x - t) + sum;
        }
        sum = t;
    }
    sum + comp
}

impl<T: Real> DenseState<T> {
    /// The all-zeros computational basis state.
    pub fn zero(n: usize) -> Self {
        let mut amps = vec![C::new(T::zero(), T::zero()); 1 << n];
        amps[0] = C::new(T::one(), T::zero());
        Self { n, amps }
    }

    pub fn from_amplitudes(n: usize, amps: Vec<C<T>>) -> Result<Self> {
        if amps.len() != 1 << n {
            return Err(Error::InvalidSize(format!(
                "amplitude vector of length {} does not hold {n} qubits",
                amps.len()
            )));
        }
        Ok(Self { n, amps })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn amplitudes(&self) -> &[C<T>] {
        &self.amps
    }

    pub fn norm(&self) -> T {
        neumaier_sum(self.amps.iter().map(|z| norm_sqr(*z))).sqrt()
    }

    /// Apply a two-qubit gate. The matrix acts in the `|q1 q2>` basis
    /// (index = 2 x_{q1} + x_{q2}), on any q1 < q2.
    pub fn apply_two_qubit(&mut self, q1: usize, q2: usize, u: &[[C<T>; 4]; 4]) {
        debug_assert!(q1 >= 1 && q1 < q2 && q2 <= self.n);
        let b1 = q1 - 1;
        let b2 = q2 - 1;
        let low_mask = (1usize << b1) - 1;
        let mid_bits = b2 - 1 - b1;
        let mid_mask = (1usize << mid_bits) - 1;
        let bit1 = 1usize << b1;
        let bit2 = 1usize << b2;
        let groups = 1usize << (self.n - 2);
        for i in 0..groups {
            let low = i & low_mask;
            let mid = (i >> b1) & mid_mask;
            let high = i >> (b1 + mid_bits);
            let base = low | (mid << (b1 + 1)) | (high << (b2 + 1));
            let k = [base, base | bit2, base | bit1, base | bit1 | bit2];
            let v = [self.amps[k[0]], self.amps[k[1]], self.amps[k[2]], self.amps[k[3]]];
            for s in 0..4 {
                let row = &u[s];
                self.amps[k[s]] = row[0] * v[0] + row[1] * v[1] + row[2] * v[2] + row[3] * v[3];
            }
        }
    }

    /// Apply a gate drawn from a circuit instance.
    pub fn apply_gate(&mut self, gate: &GateSpec) {
        debug_assert!(
            gate.unitarity_deviation() < 1e-10,
            "gate at layer {}, pair ({},{}) is not unitary",
            gate.layer,
            gate.q1,
            gate.q2
        );
        let u = convert_mat4::<T>(&gate.matrix);
        self.apply_two_qubit(gate.q1, gate.q2, &u);
    }

    /// Apply a `2^k x 2^k` unitary on the contiguous span starting at
    /// `start` (1-based), little-endian within the span.
    pub fn apply_contiguous(&mut self, start: usize, k: usize, u: &Array2<C<T>>) {
        let dim = 1usize << k;
        debug_assert_eq!(u.nrows(), dim);
        debug_assert!(start >= 1 && start + k - 1 <= self.n);
        let s = start - 1;
        let low_count = 1usize << s;
        let high_count = 1usize << (self.n - s - k);
        let mut scratch = vec![C::new(T::zero(), T::zero()); dim];
        for high in 0..high_count {
            let hi_base = high << (s + k);
            for low in 0..low_count {
                let base = hi_base | low;
                for (g, slot) in scratch.iter_mut().enumerate() {
                    *slot = self.amps[base | (g << s)];
                }
                for g in 0..dim {
                    let mut acc = C::new(T::zero(), T::zero());
                    for (gp, &v) in scratch.iter().enumerate() {
                        acc += u[(g, gp)] * v;
                    }
                    self.amps[base | (g << s)] = acc;
                }
            }
        }
    }

    /// Probability of measuring qubit `q` as 1.
    pub fn prob_one(&self, q: usize) -> T {
        let bit = 1usize << (q - 1);
        neumaier_sum(
            self.amps
                .iter()
                .enumerate()
                .filter(|(k, _)| k & bit != 0)
                .map(|(_, z)| norm_sqr(*z)),
        )
    }

    /// Projective measurement with the shared outcome-decision convention.
    /// Returns the outcome and the branch probability.
    pub fn measure_qubit(&mut self, q: usize, rng: &mut impl Rng) -> Result<(bool, T)> {
        let p1 = self.prob_one(q).as_f64();
        let p0 = 1.0 - p1;
        if p1 < BRANCH_FLOOR && p0 < BRANCH_FLOOR {
            return Err(Error::CorruptedState { qubit: q });
        }
        let outcome = decide_outcome(p1, rng);
        let weight = self.project_qubit(q, outcome)?;
        Ok((outcome, weight))
    }

    /// Force qubit `q` onto `bit`, renormalizing. Returns the branch
    /// probability; errors if it is below the floor.
    pub fn project_qubit(&mut self, q: usize, bit: bool) -> Result<T> {
        let bitmask = 1usize << (q - 1);
        let want = if bit { bitmask } else { 0 };
        let p = neumaier_sum(
            self.amps
                .iter()
                .enumerate()
                .filter(|(k, _)| k & bitmask == want)
                .map(|(_, z)| norm_sqr(*z)),
        );
        if p.as_f64() < BRANCH_FLOOR {
            return Err(Error::ImpossibleOutcome { layer: 0, qubit: q, weight: p.as_f64() });
        }
        let scale = T::one() / p.sqrt();
        for (k, z) in self.amps.iter_mut().enumerate() {
            if k & bitmask == want {
                *z = z.scale(scale);
            } else {
                *z = C::new(T::zero(), T::zero());
            }
        }
        Ok(p)
    }

    /// Schmidt spectrum across the cut after qubit `cut`.
    pub fn schmidt_spectrum(&self, cut: usize) -> SchmidtSpectrum<T> {
        debug_assert!(cut >= 1 && cut < self.n);
        let rows = 1usize << cut;
        let cols = 1usize << (self.n - cut);
        let m = Array2::from_shape_fn((rows, cols), |(a, b)| self.amps[a | (b << cut)]);
        let values = singular_values(&m.view()).into_iter().map(|s| s * s).collect();
        SchmidtSpectrum { cut, values }
    }

    /// `<self|other>`.
    pub fn overlap(&self, other: &DenseState<T>) -> Result<C<T>> {
        if self.n != other.n {
            return Err(Error::SizeMismatch(self.n, other.n));
        }
        let re = neumaier_sum(
            self.amps.iter().zip(&other.amps).map(|(a, b)| (a.conj() * b).re),
        );
        let im = neumaier_sum(
            self.amps.iter().zip(&other.amps).map(|(a, b)| (a.conj() * b).im),
        );
        Ok(C::new(re, im))
    }

    /// Raw little-endian `(re, im)` f64 pairs, for debugging dumps.
    pub fn write_amplitudes(&self, out: &mut impl std::io::Write) -> Result<()> {
        for z in &self.amps {
            out.write_all(&z.re.as_f64().to_le_bytes())?;
            out.write_all(&z.im.as_f64().to_le_bytes())?;
        }
        Ok(())
    }
}

/// Convert a stored f64 gate matrix into the working scalar type.
pub fn convert_mat4<T: Real>(m: &crate::circuit::Mat4) -> [[C<T>; 4]; 4] {
    std::array::from_fn(|i| {
        std::array::from_fn(|j| C::new(T::of(m[i][j].re), T::of(m[i][j].im)))
    })
}

fn check_limit(n: usize, limit: usize) -> Result<()> {
    if n > limit {
        return Err(Error::Capacity { n, limit });
    }
    Ok(())
}

/// Run a monitored circuit, sampling outcomes from the Born rule.
/// Gates apply in brickwork order; each layer's measured qubits are then
/// measured in ascending order, consuming the shared measurement stream.
pub fn run_monitored<T: Real>(
    instance: &CircuitInstance,
    rng: &mut impl Rng,
    limit: usize,
) -> Result<(DenseState<T>, MeasurementRecord)> {
    check_limit(instance.n, limit)?;
    let mut state = DenseState::zero(instance.n);
    let mut record = MeasurementRecord::new();
    let mut cursor = 0usize;
    for layer in 1..=instance.l {
        while cursor < instance.gates.len() && instance.gates[cursor].layer == layer {
            state.apply_gate(&instance.gates[cursor]);
            cursor += 1;
        }
        for &q in instance.layout.sites(layer) {
            let (bit, _) = state.measure_qubit(q, rng)?;
            record.insert(layer, q, bit);
        }
    }
    Ok((state, record))
}

/// Replay a fixed measurement record, applying projectors instead of
/// sampling. Returns the final state and the log of the branch probability.
pub fn run_replay<T: Real>(
    instance: &CircuitInstance,
    record: &MeasurementRecord,
    limit: usize,
) -> Result<(DenseState<T>, f64)> {
    check_limit(instance.n, limit)?;
    let mut state = DenseState::zero(instance.n);
    let mut log_prob = 0.0f64;
    let mut cursor = 0usize;
    for layer in 1..=instance.l {
        while cursor < instance.gates.len() && instance.gates[cursor].layer == layer {
            state.apply_gate(&instance.gates[cursor]);
            cursor += 1;
        }
        for &q in instance.layout.sites(layer) {
            let bit = record.get(layer, q).ok_or_else(|| {
                Error::Invalid(format!("record is missing layer {layer}, qubit {q}"))
            })?;
            let weight: T = state.project_qubit(q, bit).map_err(|e| match e {
                Error::ImpossibleOutcome { qubit, weight, .. } => {
                    Error::ImpossibleOutcome { layer, qubit, weight }
                }
                other => other,
            })?;
            log_prob += weight.as_f64().ln();
        }
    }
    Ok((state, log_prob))
}
