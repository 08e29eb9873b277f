//! Bond-capped matrix product states and the projective TEBD sweep.
//!
//! Tensors `A^(k)` have shape `(left bond, 2, right bond)`; everything left
//! of the center is left-orthogonal, everything right of it right-orthogonal,
//! and the center tensor carries the norm. Two-site updates absorb the
//! measurement projectors into the gate, split by SVD, keep at most `D`
//! singular values, absorb the singular values into the left factor and
//! renormalize. Every two-site application appends its discarded weight to
//! the truncation ledger.

use ndarray::{s, Array2, Array3};
use rand::Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::circuit::{brickwork_pairs, CircuitInstance, GateSpec, MeasurementRecord};
use crate::dense::{convert_mat4, neumaier_sum, DenseState, SchmidtSpectrum};
use crate::error::{Error, Result};
use crate::linalg::{lq, qr, svd_trunc};
use crate::outcome::decide_outcome;
use crate::pauli::PauliString;
use crate::scalar::{norm_sqr, Real, C};

/// Branch-weight floor for projected gates and site projections.
pub const BRANCH_FLOOR: f64 = 1e-14;

/// One two-site update's discarded weight.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LedgerEntry {
    pub layer: usize,
    pub q1: usize,
    pub eps_step: f64,
}

/// Ordered per-step truncation errors of a TEBD run.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct TruncationLedger {
    pub entries: Vec<LedgerEntry>,
}

impl TruncationLedger {
    /// Conservative per-cut feed for the entropy lower bound: the largest
    /// single-step error attributed to the bond at `cut` (the bond between
    /// `cut` and `cut + 1`). A max over steps never exceeds the true Schmidt
    /// error, which keeps the monotone lower bound valid.
    pub fn max_step_at_cut(&self, cut: usize) -> f64 {
        self.entries
            .iter()
            .filter(|e| e.q1 == cut)
            .map(|e| e.eps_step)
            .fold(0.0, f64::max)
    }

    /// Sum of step errors at a cut. Exploratory only: the sum can exceed the
    /// true Schmidt error and is not used by the default bound feed.
    pub fn sum_steps_at_cut(&self, cut: usize) -> f64 {
        self.entries.iter().filter(|e| e.q1 == cut).map(|e| e.eps_step).sum()
    }
}

/// Mixed-canonical matrix product state with a hard bond cap.
#[derive(Clone, Debug, PartialEq)]
pub struct Mps<T: Real> {
    n: usize,
    bond_cap: usize,
    tensors: Vec<Array3<C<T>>>,
    center: usize,
    ledger: TruncationLedger,
}

impl<T: Real> Mps<T> {
    /// `|0...0>` with all bond dimensions 1 and the center at site 1.
    pub fn zero_state(n: usize, bond_cap: usize) -> Result<Self> {
        if n < 2 {
            return Err(Error::InvalidSize(format!("need at least 2 sites, got {n}")));
        }
        if bond_cap == 0 {
            return Err(Error::InvalidSize("bond cap must be at least 1".into()));
        }
        let tensors = (0..n)
            .map(|_| {
                let mut t = Array3::from_elem((1, 2, 1), C::new(T::zero(), T::zero()));
                t[(0, 0, 0)] = C::new(T::one(), T::zero());
                t
            })
            .collect();
        Ok(Self { n, bond_cap, tensors, center: 1, ledger: TruncationLedger::default() })
    }

    /// Random normalized MPS in right-canonical form (center 1), bond
    /// dimensions `min(2^k, 2^{n-k}, cap)`.
    pub fn random(n: usize, bond_cap: usize, rng: &mut impl Rng) -> Result<Self> {
        let mut mps = Self::zero_state(n, bond_cap)?;
        let dim = |k: usize| -> usize {
            let left = 1usize << k.min(40);
            let right = 1usize << (n - k).min(40);
            left.min(right).min(bond_cap)
        };
        for site in 1..=n {
            let (l, r) = (dim(site - 1), dim(site));
            mps.tensors[site - 1] = Array3::from_shape_fn((l, 2, r), |_| {
                let re: f64 = rng.sample(StandardNormal);
                let im: f64 = rng.sample(StandardNormal);
                C::new(T::of(re), T::of(im))
            });
        }
        mps.center = n;
        mps.move_center(1);
        let norm = mps.norm();
        let inv = T::one() / norm;
        mps.tensors[0].mapv_inplace(|z| z.scale(inv));
        Ok(mps)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn bond_cap(&self) -> usize {
        self.bond_cap
    }

    pub fn center(&self) -> usize {
        self.center
    }

    pub fn ledger(&self) -> &TruncationLedger {
        &self.ledger
    }

    pub fn tensor(&self, site: usize) -> &Array3<C<T>> {
        &self.tensors[site - 1]
    }

    /// Interior bond dimensions (bond `k` sits between sites `k` and `k+1`).
    pub fn bond_dims(&self) -> Vec<usize> {
        (1..self.n).map(|k| self.tensors[k - 1].dim().2).collect()
    }

    /// Frobenius norm of the center tensor (= state norm in canonical form).
    pub fn norm(&self) -> T {
        neumaier_sum(self.tensors[self.center - 1].iter().map(|z| norm_sqr(*z))).sqrt()
    }

    /// Left-normalize the center site and push the remainder right.
    fn shift_right(&mut self) {
        let k = self.center - 1;
        let (l, _, _) = self.tensors[k].dim();
        let m = reshape_lp_r(&self.tensors[k]);
        let (q, rm) = qr(&m.view());
        let new_r = q.ncols();
        self.tensors[k] = reshape_to_lpr(&q, l, new_r);
        let next = &self.tensors[k + 1];
        let (_, _, r2) = next.dim();
        let next_m = reshape_l_pr(next);
        let merged = rm.dot(&next_m);
        self.tensors[k + 1] = reshape_from_l_pr(&merged, new_r, r2);
        self.center += 1;
    }

    /// Right-normalize the center site and push the remainder left.
    fn shift_left(&mut self) {
        let k = self.center - 1;
        let (_, _, r) = self.tensors[k].dim();
        let m = reshape_l_pr(&self.tensors[k]);
        let (lm, q) = lq(&m.view());
        let new_l = q.nrows();
        self.tensors[k] = reshape_from_l_pr(&q, new_l, r);
        let prev = &self.tensors[k - 1];
        let (l0, _, _) = prev.dim();
        let prev_m = reshape_lp_r(prev);
        let merged = prev_m.dot(&lm);
        self.tensors[k - 1] = reshape_to_lpr(&merged, l0, new_l);
        self.center -= 1;
    }

    /// Move the orthogonality center, leaving the state unchanged.
    pub fn move_center(&mut self, target: usize) {
        debug_assert!(target >= 1 && target <= self.n);
        while self.center < target {
            self.shift_right();
        }
        while self.center > target {
            self.shift_left();
        }
    }

    /// Apply `(P1 ⊗ P2) U` on the adjacent pair `(q1, q1+1)`, split by SVD,
    /// truncate to the bond cap, absorb singular values into the left factor
    /// and renormalize. Returns `(eps_step, branch_norm)` where `branch_norm`
    /// is the pre-renormalization norm of the projected two-site block.
    pub fn apply_projected_gate(
        &mut self,
        gate: &GateSpec,
        p1: Option<bool>,
        p2: Option<bool>,
    ) -> Result<(f64, f64)> {
        let q1 = gate.q1;
        debug_assert_eq!(gate.q2, q1 + 1);
        self.move_center(q1);
        let mut op = convert_mat4::<T>(&gate.matrix);
        // Projectors delete the output rows of the disallowed outcomes
        // (row index s = 2 x_{q1} + x_{q2}).
        for (srow, row) in op.iter_mut().enumerate() {
            let keep1 = p1.is_none_or(|b| (srow >> 1 == 1) == b);
            let keep2 = p2.is_none_or(|b| (srow & 1 == 1) == b);
            if !(keep1 && keep2) {
                *row = [C::new(T::zero(), T::zero()); 4];
            }
        }
        let a1 = &self.tensors[q1 - 1];
        let a2 = &self.tensors[q1];
        let (l, _, _) = a1.dim();
        let (_, _, r) = a2.dim();
        // theta[(l,x),(y,r)] = sum_{x',y'} op[2x+y, 2x'+y'] A1[l,x',m] A2[m,y',r]
        let m1 = reshape_lp_r(a1); // (l*2, mid)
        let m2 = reshape_l_pr(a2); // (mid, 2*r)
        let joined = m1.dot(&m2); // ((l,x'), (y',r))
        let mut theta = Array2::from_elem((l * 2, 2 * r), C::new(T::zero(), T::zero()));
        for a in 0..l {
            for b in 0..r {
                let mut v = [C::new(T::zero(), T::zero()); 4];
                for xp in 0..2 {
                    for yp in 0..2 {
                        v[2 * xp + yp] = joined[(a * 2 + xp, yp * r + b)];
                    }
                }
                for x in 0..2 {
                    for y in 0..2 {
                        let row = &op[2 * x + y];
                        let acc = row[0] * v[0] + row[1] * v[1] + row[2] * v[2] + row[3] * v[3];
                        theta[(a * 2 + x, y * r + b)] = acc;
                    }
                }
            }
        }
        let min_dim = (l * 2).min(2 * r);
        let (new_a1, new_a2, eps_step, branch_norm) = if min_dim <= self.bond_cap {
            // No truncation is possible at this bond: an LQ split yields the
            // same state with zero discarded weight at a fraction of the
            // SVD cost.
            let total: T = neumaier_sum(theta.iter().map(|z| norm_sqr(*z)));
            if total.as_f64() < BRANCH_FLOOR {
                return Err(Error::ImpossibleOutcome {
                    layer: gate.layer,
                    qubit: q1,
                    weight: total.as_f64(),
                });
            }
            let (lm, qm) = lq(&theta.view());
            let kept = qm.nrows();
            let inv = T::one() / total.sqrt();
            let a1_new = reshape_to_lpr(&lm.mapv(|z| z.scale(inv)), l, kept);
            let a2_new = reshape_from_l_pr(&qm, kept, r);
            (a1_new, a2_new, 0.0, total.sqrt().as_f64())
        } else {
            let dec = svd_trunc(&theta.view(), self.bond_cap);
            if dec.total_weight.as_f64() < BRANCH_FLOOR {
                return Err(Error::ImpossibleOutcome {
                    layer: gate.layer,
                    qubit: q1,
                    weight: dec.total_weight.as_f64(),
                });
            }
            let kept = dec.s.len();
            let eps = (T::one() - dec.kept_weight / dec.total_weight).max(T::zero());
            let scale = T::one() / dec.kept_weight.sqrt();
            let mut us = dec.u;
            for (j, &sv) in dec.s.iter().enumerate() {
                let f = sv * scale;
                for i in 0..l * 2 {
                    us[(i, j)] = us[(i, j)].scale(f);
                }
            }
            let a1_new = reshape_to_lpr(&us, l, kept);
            let a2_new = reshape_from_l_pr(&dec.vh, kept, r);
            (a1_new, a2_new, eps.as_f64(), dec.total_weight.sqrt().as_f64())
        };
        self.tensors[q1 - 1] = new_a1;
        self.tensors[q1] = new_a2;
        self.center = q1;
        self.ledger.entries.push(LedgerEntry { layer: gate.layer, q1, eps_step });
        Ok((eps_step, branch_norm))
    }

    /// Project the physical index of site `q` onto `bit` and renormalize.
    /// Returns the branch probability. Used for the boundary projections of
    /// the TEBD sweep and for sampling-mode measurements.
    pub fn project_site(&mut self, q: usize, bit: bool) -> Result<f64> {
        self.move_center(q);
        let t = &mut self.tensors[q - 1];
        let keep = bit as usize;
        let p = neumaier_sum(t.slice(s![.., keep, ..]).iter().map(|z| norm_sqr(*z)));
        if p.as_f64() < BRANCH_FLOOR {
            return Err(Error::ImpossibleOutcome { layer: 0, qubit: q, weight: p.as_f64() });
        }
        let inv = T::one() / p.sqrt();
        let (l, _, r) = t.dim();
        for a in 0..l {
            for b in 0..r {
                t[(a, keep, b)] = t[(a, keep, b)].scale(inv);
                t[(a, 1 - keep, b)] = C::new(T::zero(), T::zero());
            }
        }
        Ok(p.as_f64())
    }

    /// P(qubit `q` = 1); moves the center to `q`.
    pub fn prob_one(&mut self, q: usize) -> f64 {
        self.move_center(q);
        let t = &self.tensors[q - 1];
        let p1 = neumaier_sum(t.slice(s![.., 1, ..]).iter().map(|z| norm_sqr(*z)));
        let total = neumaier_sum(t.iter().map(|z| norm_sqr(*z)));
        (p1 / total).as_f64()
    }

    /// Squared Schmidt coefficients across the bond between `cut` and
    /// `cut + 1`; moves the center to `cut`.
    pub fn schmidt_spectrum(&mut self, cut: usize) -> SchmidtSpectrum<T> {
        debug_assert!(cut >= 1 && cut < self.n);
        self.move_center(cut);
        let m = reshape_lp_r(&self.tensors[cut - 1]);
        let values = crate::linalg::singular_values(&m.view())
            .into_iter()
            .map(|sv| sv * sv)
            .collect();
        SchmidtSpectrum { cut, values }
    }

    /// Von Neumann entropy (nats) across a cut; moves the center.
    pub fn entropy(&mut self, cut: usize) -> T {
        self.schmidt_spectrum(cut).entropy()
    }

    /// Schmidt error of a rank-`d` truncation at a cut; moves the center.
    pub fn schmidt_error(&mut self, cut: usize, d: usize) -> T {
        self.schmidt_spectrum(cut).schmidt_error(d)
    }

    /// `<self|other>` by transfer contraction, cost `O(n D^3)`.
    pub fn overlap(&self, other: &Mps<T>) -> Result<C<T>> {
        if self.n != other.n {
            return Err(Error::SizeMismatch(self.n, other.n));
        }
        let mut env = Array2::from_elem((1, 1), C::new(T::one(), T::zero()));
        for k in 0..self.n {
            let a = &self.tensors[k];
            let b = &other.tensors[k];
            let (_, _, ra) = a.dim();
            let (_, _, rb) = b.dim();
            let mut next = Array2::from_elem((ra, rb), C::new(T::zero(), T::zero()));
            for x in 0..2 {
                let ax = a.slice(s![.., x, ..]);
                let bx = b.slice(s![.., x, ..]);
                let adag: Array2<C<T>> = ax.map(|z| z.conj()).t().to_owned();
                let tmp = adag.dot(&env).dot(&bx);
                next += &tmp;
            }
            env = next;
        }
        Ok(env[(0, 0)])
    }

    /// `<psi| g |psi>` for a signed Pauli string; real for Hermitian `g`.
    pub fn pauli_expectation(&self, g: &PauliString) -> T {
        debug_assert_eq!(g.n(), self.n);
        let mut env = Array2::from_elem((1, 1), C::new(T::one(), T::zero()));
        for k in 0..self.n {
            let a = &self.tensors[k];
            let o: [[C<T>; 2]; 2] = g.site_matrix(k + 1);
            let (_, _, r) = a.dim();
            let mut next = Array2::from_elem((r, r), C::new(T::zero(), T::zero()));
            for xp in 0..2 {
                for x in 0..2 {
                    if norm_sqr(o[xp][x]) == T::zero() {
                        continue;
                    }
                    let axp = a.slice(s![.., xp, ..]);
                    let ax = a.slice(s![.., x, ..]);
                    let adag: Array2<C<T>> = axp.map(|z| z.conj()).t().to_owned();
                    let tmp = adag.dot(&env).dot(&ax).mapv(|z| z * o[xp][x]);
                    next += &tmp;
                }
            }
            env = next;
        }
        let val = env[(0, 0)] * g.phase_factor::<T>();
        debug_assert!(
            val.im.abs().as_f64() < 1e-8,
            "Hermitian expectation came out complex"
        );
        val.re
    }

    /// Contract to a dense state (little-endian, site 1 = LSB).
    pub fn to_dense(&self, limit: usize) -> Result<DenseState<T>> {
        if self.n > limit {
            return Err(Error::Capacity { n: self.n, limit });
        }
        let mut acc = Array2::from_elem((1, 1), C::new(T::one(), T::zero()));
        for k in 0..self.n {
            let a = &self.tensors[k];
            let (l, _, r) = a.dim();
            let rows = acc.nrows();
            debug_assert_eq!(acc.ncols(), l);
            let mut next = Array2::from_elem((rows * 2, r), C::new(T::zero(), T::zero()));
            for x in 0..2 {
                let block = acc.dot(&a.slice(s![.., x, ..]));
                for i in 0..rows {
                    for j in 0..r {
                        // little-endian: new index = old | x << k
                        next[(i + rows * x, j)] = block[(i, j)];
                    }
                }
            }
            acc = next;
        }
        let amps: Vec<C<T>> = acc.column(0).to_vec();
        DenseState::from_amplitudes(self.n, amps)
    }

    /// Maximum deviation from the canonical-form contract: left/right
    /// orthogonality away from the center and unit norm at it.
    pub fn canonical_deviation(&self) -> T {
        let mut worst = T::zero();
        for site in 1..=self.n {
            let t = &self.tensors[site - 1];
            if site < self.center {
                let m = reshape_lp_r(t);
                let g = m.t().map(|z| z.conj()).dot(&m);
                worst = worst.max(eye_deviation(&g));
            } else if site > self.center {
                let m = reshape_l_pr(t);
                let g = m.dot(&m.t().map(|z| z.conj()));
                worst = worst.max(eye_deviation(&g));
            } else {
                worst = worst.max((self.norm() - T::one()).abs());
            }
        }
        worst
    }

    pub fn audit_canonical(&self, tol: f64) -> Result<()> {
        let dev = self.canonical_deviation();
        if dev.as_f64() > tol {
            return Err(Error::CanonicalForm { site: self.center, deviation: dev.as_f64() });
        }
        Ok(())
    }

    /// Serialize as a JSON header line plus a raw tensor blob (interleaved
    /// f64 re/im, site-major, row-major within each tensor).
    pub fn export(&self, out: &mut impl std::io::Write) -> Result<()> {
        let header = MpsHeader {
            version: 1,
            n: self.n,
            d: self.bond_cap,
            center: self.center,
            bond_dims: self.bond_dims(),
        };
        let mut text = serde_json::to_string(&header)?;
        text.push('\n');
        out.write_all(text.as_bytes())?;
        for t in &self.tensors {
            for z in t.iter() {
                out.write_all(&z.re.as_f64().to_le_bytes())?;
                out.write_all(&z.im.as_f64().to_le_bytes())?;
            }
        }
        Ok(())
    }

    pub fn import(data: &[u8]) -> Result<Self> {
        let newline = data
            .iter()
            .position(|&b| b == b'\n')
            .ok_or_else(|| Error::Invalid("missing header line".into()))?;
        let header: MpsHeader = serde_json::from_slice(&data[..newline])?;
        if header.version != 1 {
            return Err(Error::Invalid(format!("unsupported version {}", header.version)));
        }
        if header.bond_dims.len() + 1 != header.n {
            return Err(Error::Invalid("bond dimension list does not match n".into()));
        }
        let mut blob = &data[newline + 1..];
        let mut tensors = Vec::with_capacity(header.n);
        for site in 1..=header.n {
            let l = if site == 1 { 1 } else { header.bond_dims[site - 2] };
            let r = if site == header.n { 1 } else { header.bond_dims[site - 1] };
            let count = l * 2 * r;
            if blob.len() < 16 * count {
                return Err(Error::Invalid("tensor blob truncated".into()));
            }
            let mut t = Array3::from_elem((l, 2, r), C::new(T::zero(), T::zero()));
            for slot in t.iter_mut() {
                let re = f64::from_le_bytes(blob[0..8].try_into().unwrap());
                let im = f64::from_le_bytes(blob[8..16].try_into().unwrap());
                *slot = C::new(T::of(re), T::of(im));
                blob = &blob[16..];
            }
            tensors.push(t);
        }
        if !blob.is_empty() {
            return Err(Error::Invalid("trailing bytes after tensor blob".into()));
        }
        Ok(Self {
            n: header.n,
            bond_cap: header.d,
            tensors,
            center: header.center,
            ledger: TruncationLedger::default(),
        })
    }
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct MpsHeader {
    version: u32,
    n: usize,
    d: usize,
    center: usize,
    bond_dims: Vec<usize>,
}

fn eye_deviation<T: Real>(g: &Array2<C<T>>) -> T {
    let mut worst = T::zero();
    for i in 0..g.nrows() {
        for j in 0..g.ncols() {
            let target = if i == j { T::one() } else { T::zero() };
            worst = worst.max((g[(i, j)] - C::new(target, T::zero())).norm());
        }
    }
    worst
}

/// `(l, 2, r) -> (l*2, r)` with the physical index fused into the rows.
fn reshape_lp_r<T: Real>(t: &Array3<C<T>>) -> Array2<C<T>> {
    let (l, _, r) = t.dim();
    Array2::from_shape_fn((l * 2, r), |(a, b)| t[(a / 2, a % 2, b)])
}

/// `(l, 2, r) -> (l, 2*r)` with the physical index fused into the columns.
fn reshape_l_pr<T: Real>(t: &Array3<C<T>>) -> Array2<C<T>> {
    let (l, _, r) = t.dim();
    Array2::from_shape_fn((l, 2 * r), |(a, b)| t[(a, b / r, b % r)])
}

fn reshape_to_lpr<T: Real>(m: &Array2<C<T>>, l: usize, r: usize) -> Array3<C<T>> {
    Array3::from_shape_fn((l, 2, r), |(a, x, b)| m[(a * 2 + x, b)])
}

fn reshape_from_l_pr<T: Real>(m: &Array2<C<T>>, l: usize, r: usize) -> Array3<C<T>> {
    Array3::from_shape_fn((l, 2, r), |(a, x, b)| m[(a, x * r + b)])
}

/// Deterministic TEBD replay of a recorded trajectory.
///
/// Layer loop: (2.1) for even layers on even `n`, project site `n` first if
/// measured; (2.2) sweep the layer's brickwork pairs in snake order applying
/// the projector-absorbed gates; (2.3) for odd layers on odd `n`, project
/// site `n`; (2.4) for even layers, project site 1 if measured.
pub fn run_tebd<T: Real>(instance: &CircuitInstance, bond_cap: usize) -> Result<Mps<T>> {
    let record = instance
        .record
        .as_ref()
        .ok_or_else(|| Error::Invalid("TEBD replay needs a measurement record".into()))?;
    run_tebd_impl(instance, bond_cap, Some(record), None).map(|(mps, _)| mps)
}

/// TEBD with outcomes sampled from the evolving MPS itself (exact when the
/// bond cap is `2^ceil(n/2)`). Gates apply without projectors; each layer's
/// measured qubits are then measured in ascending order using the shared
/// outcome-decision convention.
pub fn run_tebd_sampling<T: Real>(
    instance: &CircuitInstance,
    bond_cap: usize,
    rng: &mut impl Rng,
) -> Result<(Mps<T>, MeasurementRecord)> {
    run_tebd_impl(instance, bond_cap, None, Some(rng)).map(|(mps, rec)| (mps, rec.unwrap()))
}

fn run_tebd_impl<T: Real>(
    instance: &CircuitInstance,
    bond_cap: usize,
    record: Option<&MeasurementRecord>,
    mut rng: Option<&mut dyn rand::RngCore>,
) -> Result<(Mps<T>, Option<MeasurementRecord>)> {
    let n = instance.n;
    let mut mps = Mps::zero_state(n, bond_cap)?;
    let mut sampled = rng.as_ref().map(|_| MeasurementRecord::new());
    let mut cursor = 0usize;
    let bit_for = |record: Option<&MeasurementRecord>, layer: usize, q: usize| -> Result<bool> {
        record
            .expect("replay mode requires a record")
            .get(layer, q)
            .ok_or_else(|| Error::Invalid(format!("record missing layer {layer}, qubit {q}")))
    };
    for layer in 1..=instance.l {
        let replaying = record.is_some();
        // 2.1: pre-sweep boundary projection at site n (even layer, even n).
        if replaying && layer % 2 == 0 && n.is_multiple_of(2) && instance.layout.contains(layer, n) {
            let bit = bit_for(record, layer, n)?;
            project_with_context(&mut mps, n, bit, layer)?;
        }
        for (q1, q2) in brickwork_pairs(n, layer)? {
            let gate = &instance.gates[cursor];
            debug_assert!(gate.layer == layer && gate.q1 == q1 && gate.q2 == q2);
            cursor += 1;
            let (p1, p2) = if replaying {
                let p1 = if instance.layout.contains(layer, q1) {
                    Some(bit_for(record, layer, q1)?)
                } else {
                    None
                };
                let p2 = if instance.layout.contains(layer, q2) {
                    Some(bit_for(record, layer, q2)?)
                } else {
                    None
                };
                (p1, p2)
            } else {
                (None, None)
            };
            mps.apply_projected_gate(gate, p1, p2)?;
        }
        if replaying {
            // 2.3: post-sweep boundary projection at site n (odd layer, odd n).
            if layer % 2 == 1 && n % 2 == 1 && instance.layout.contains(layer, n) {
                let bit = bit_for(record, layer, n)?;
                project_with_context(&mut mps, n, bit, layer)?;
            }
            // 2.4: boundary projection at site 1 (even layer).
            if layer % 2 == 0 && instance.layout.contains(layer, 1) {
                let bit = bit_for(record, layer, 1)?;
                project_with_context(&mut mps, 1, bit, layer)?;
            }
        } else {
            let rng = rng.as_deref_mut().expect("sampling mode requires an RNG");
            for &q in instance.layout.sites(layer) {
                let p1 = mps.prob_one(q);
                let outcome = decide_outcome(p1, rng);
                project_with_context(&mut mps, q, outcome, layer)?;
                sampled.as_mut().unwrap().insert(layer, q, outcome);
            }
        }
    }
    Ok((mps, sampled))
}

fn project_with_context<T: Real>(
    mps: &mut Mps<T>,
    q: usize,
    bit: bool,
    layer: usize,
) -> Result<f64> {
    mps.project_site(q, bit).map_err(|e| match e {
        Error::ImpossibleOutcome { qubit, weight, .. } => {
            Error::ImpossibleOutcome { layer, qubit, weight }
        }
        other => other,
    })
}

/// Exact bond cap for `n` qubits: `2^ceil(n/2)` represents any state.
pub fn full_bond_cap(n: usize) -> usize {
    1usize << n.div_ceil(2)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit::{sample_instance, GateSet};
    use crate::dense;
    use crate::rng::{instance_rng, Stream};

    #[test]
    fn zero_state_contracts_to_basis_vector() {
        let mps = Mps::<f64>::zero_state(4, 3).unwrap();
        let dense = mps.to_dense(20).unwrap();
        assert!((dense.amplitudes()[0].re - 1.0).abs() < 1e-15);
        assert!(dense.amplitudes()[1..].iter().all(|z| z.norm() == 0.0));
        assert!((mps.norm() - 1.0).abs() < 1e-15);
        let mut m = mps;
        for cut in 1..4 {
            assert!(m.entropy(cut).abs() < 1e-14);
        }
    }

    #[test]
    fn move_center_is_a_gauge_transformation() {
        let mut rng = instance_rng(3, Stream::Circuit);
        let mut mps = Mps::<f64>::random(8, 6, &mut rng).unwrap();
        let reference = mps.to_dense(20).unwrap();
        let mut order = vec![1usize];
        for k in 0..30 {
            order.push(1 + (k * 5 + 3) % 8);
        }
        for &target in &order {
            mps.move_center(target);
            assert_eq!(mps.center(), target);
            assert!((mps.norm() - 1.0).abs() < 1e-12);
        }
        mps.audit_canonical(1e-10).unwrap();
        let after = mps.to_dense(20).unwrap();
        let ov = reference.overlap(&after).unwrap();
        assert!((ov - crate::scalar::c::<f64>(1.0, 0.0)).norm() < 1e-10);
    }

    #[test]
    fn norm_preserved_over_many_center_moves() {
        let mut rng = instance_rng(5, Stream::Circuit);
        let mut mps = Mps::<f64>::random(6, 4, &mut rng).unwrap();
        for k in 0..1000 {
            mps.move_center(1 + (k * 7 + 1) % 6);
        }
        assert!((mps.norm() - 1.0).abs() < 1e-12);
    }

    fn identity_mat4() -> crate::circuit::Mat4 {
        let mut m = [[crate::C64::new(0.0, 0.0); 4]; 4];
        for (i, row) in m.iter_mut().enumerate() {
            row[i] = crate::C64::new(1.0, 0.0);
        }
        m
    }

    #[test]
    fn identity_gate_with_room_is_a_noop_in_state() {
        let mut rng = instance_rng(7, Stream::Circuit);
        let mut mps = Mps::<f64>::random(5, 8, &mut rng).unwrap();
        let before = mps.to_dense(20).unwrap();
        let gate = GateSpec { layer: 1, q1: 2, q2: 3, matrix: identity_mat4(), clifford_tag: None };
        let (eps, branch) = mps.apply_projected_gate(&gate, None, None).unwrap();
        assert_eq!(eps, 0.0);
        assert!((branch - 1.0).abs() < 1e-12);
        let after = mps.to_dense(20).unwrap();
        let ov = before.overlap(&after).unwrap();
        assert!((ov.norm() - 1.0).abs() < 1e-11);
    }

    #[test]
    fn impossible_projection_is_an_error() {
        let mut mps = Mps::<f64>::zero_state(4, 2).unwrap();
        assert!(matches!(
            mps.project_site(4, true),
            Err(Error::ImpossibleOutcome { qubit: 4, .. })
        ));
        let mut mps = Mps::<f64>::zero_state(4, 4).unwrap();
        let gate = GateSpec { layer: 1, q1: 1, q2: 2, matrix: identity_mat4(), clifford_tag: None };
        let err = mps.apply_projected_gate(&gate, Some(true), None);
        assert!(matches!(err, Err(Error::ImpossibleOutcome { .. })));
    }

    #[test]
    fn projected_gate_matches_dense_oracle() {
        // Random gate + projectors at full bond vs dense apply-project-renorm.
        for seed in 0..12u64 {
            let mut rng = instance_rng(100 + seed, Stream::Circuit);
            let n = 6;
            let mut mps = Mps::<f64>::random(n, full_bond_cap(n), &mut rng).unwrap();
            let dense_before = mps.to_dense(20).unwrap();
            let matrix = crate::circuit::sample_haar_gate(&mut rng);
            let q1 = 1 + (seed as usize % (n - 1));
            let gate = GateSpec { layer: 1, q1, q2: q1 + 1, matrix, clifford_tag: None };
            let p1 = match seed % 3 {
                0 => None,
                1 => Some(false),
                _ => Some(true),
            };
            let p2 = match (seed / 3) % 3 {
                0 => None,
                1 => Some(false),
                _ => Some(true),
            };
            let res = mps.apply_projected_gate(&gate, p1, p2);
            let mut ds = dense_before.clone();
            ds.apply_gate(&gate);
            let mut ok = true;
            let mut weight = 1.0;
            if let Some(b) = p1 {
                match ds.project_qubit(q1, b) {
                    Ok(w) => weight *= w,
                    Err(_) => ok = false,
                }
            }
            if ok {
                if let Some(b) = p2 {
                    match ds.project_qubit(q1 + 1, b) {
                        Ok(w) => weight *= w,
                        Err(_) => ok = false,
                    }
                }
            }
            match (res, ok) {
                (Ok((eps, branch)), true) => {
                    assert!(eps < 1e-12, "full bond must not truncate");
                    assert!((branch * branch - weight).abs() < 1e-10, "seed {seed}");
                    let after = mps.to_dense(20).unwrap();
                    let ov = ds.overlap(&after).unwrap();
                    assert!((ov.norm() - 1.0).abs() < 1e-10, "seed {seed}");
                }
                (Err(_), false) => {}
                (got, want_ok) => panic!("seed {seed}: mismatch (dense ok = {want_ok}): {got:?}"),
            }
        }
    }

    fn recorded_instance(gate_set: GateSet, n: usize, l: usize, p: f64, seed: u64) -> CircuitInstance {
        let mut inst = sample_instance(gate_set, n, l, p, seed).unwrap();
        let mut rng = instance_rng(inst.seed, Stream::Measurement);
        let (_, rec) = dense::run_monitored::<f64>(&inst, &mut rng, 20).unwrap();
        inst.record = Some(rec);
        inst
    }

    #[test]
    fn tebd_full_bond_matches_dense_replay() {
        for seed in 0..8 {
            let gate_set = if seed % 2 == 0 { GateSet::Haar } else { GateSet::Clifford };
            let n = 6 + 2 * (seed as usize % 2);
            let inst = recorded_instance(gate_set, n, n, 0.3, 500 + seed);
            let (dense_state, _) =
                dense::run_replay::<f64>(&inst, inst.record.as_ref().unwrap(), 20).unwrap();
            let mps = run_tebd::<f64>(&inst, full_bond_cap(n)).unwrap();
            assert!((mps.norm() - 1.0).abs() < 1e-10);
            let mps_dense = mps.to_dense(20).unwrap();
            let f = dense_state.overlap(&mps_dense).unwrap().norm_sqr();
            assert!(f >= 1.0 - 1e-9, "seed {seed}: fidelity {f}");
            mps.audit_canonical(1e-8).unwrap();
        }
    }

    #[test]
    fn tebd_p1_d1_reproduces_basis_state() {
        for seed in 0..5 {
            let inst = recorded_instance(GateSet::Haar, 7, 5, 1.0, 900 + seed);
            let (dense_state, _) =
                dense::run_replay::<f64>(&inst, inst.record.as_ref().unwrap(), 20).unwrap();
            let mps = run_tebd::<f64>(&inst, 1).unwrap();
            assert!(mps.ledger().entries.iter().all(|e| e.eps_step < 1e-12));
            let f = dense_state.overlap(&mps.to_dense(20).unwrap()).unwrap().norm_sqr();
            assert!(f >= 1.0 - 1e-9, "seed {seed}: fidelity {f}");
            assert!(mps.bond_dims().iter().all(|&d| d == 1));
        }
    }

    #[test]
    fn tebd_is_bit_deterministic() {
        let inst = recorded_instance(GateSet::Haar, 6, 6, 0.4, 31);
        let a = run_tebd::<f64>(&inst, 3).unwrap();
        let b = run_tebd::<f64>(&inst, 3).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn ledger_counts_two_site_applications() {
        let inst = recorded_instance(GateSet::Haar, 6, 4, 0.5, 77);
        let mps = run_tebd::<f64>(&inst, 2).unwrap();
        assert_eq!(mps.ledger().entries.len(), inst.gates.len());
        for e in &mps.ledger().entries {
            assert!((0.0..1.0).contains(&e.eps_step));
        }
    }

    #[test]
    fn entropy_capped_by_log_bond() {
        let inst = recorded_instance(GateSet::Haar, 8, 8, 0.1, 13);
        for d in [1usize, 2, 4] {
            let mut mps = run_tebd::<f64>(&inst, d).unwrap();
            for cut in 1..8 {
                let state_entropy = mps.entropy(cut);
                assert!(
                    state_entropy <= (d as f64).ln() + 1e-12,
                    "d {d} cut {cut}: {state_entropy}"
                );
            }
        }
    }

    #[test]
    fn sampling_mode_reproduces_dense_records_at_full_bond() {
        for seed in 0..60 {
            let inst = sample_instance(GateSet::Haar, 5, 3, 0.5, 2000 + seed).unwrap();
            let mut rng_a = instance_rng(inst.seed, Stream::Measurement);
            let mut rng_b = instance_rng(inst.seed, Stream::Measurement);
            let (_, rec_dense) = dense::run_monitored::<f64>(&inst, &mut rng_a, 20).unwrap();
            let (mps, rec_mps) =
                run_tebd_sampling::<f64>(&inst, full_bond_cap(5), &mut rng_b).unwrap();
            assert!((mps.norm() - 1.0).abs() < 1e-10);
            assert_eq!(rec_dense, rec_mps, "seed {seed}");
        }
    }

    #[test]
    fn sampling_is_deterministic_per_seed() {
        let inst = sample_instance(GateSet::Haar, 6, 4, 0.5, 91).unwrap();
        let run = || {
            let mut rng = instance_rng(inst.seed, Stream::Measurement);
            run_tebd_sampling::<f64>(&inst, full_bond_cap(6), &mut rng).unwrap().1
        };
        assert_eq!(run(), run());
    }

    #[test]
    fn mps_schmidt_matches_dense() {
        let mut rng = instance_rng(17, Stream::Circuit);
        let mut mps = Mps::<f64>::random(10, 8, &mut rng).unwrap();
        let dense_state = mps.to_dense(20).unwrap();
        for cut in [1usize, 3, 5, 7, 9] {
            let from_mps = mps.schmidt_spectrum(cut);
            let from_dense = dense_state.schmidt_spectrum(cut);
            for (a, b) in from_mps.values.iter().zip(from_dense.values.iter()) {
                assert!((a - b).abs() < 1e-9, "cut {cut}");
            }
            assert!((from_mps.entropy() - from_dense.entropy()).abs() < 1e-9);
        }
    }

    #[test]
    fn overlap_against_dense_oracle() {
        let mut rng = instance_rng(23, Stream::Circuit);
        for n in [4usize, 8, 12] {
            let a = Mps::<f64>::random(n, 6, &mut rng).unwrap();
            let b = Mps::<f64>::random(n, 6, &mut rng).unwrap();
            let ov_mps = a.overlap(&b).unwrap();
            let ov_dense = a.to_dense(20).unwrap().overlap(&b.to_dense(20).unwrap()).unwrap();
            assert!((ov_mps - ov_dense).norm() < 1e-10, "n {n}");
            let self_ov = a.overlap(&a).unwrap();
            assert!((self_ov.re - 1.0).abs() < 1e-12 && self_ov.im.abs() < 1e-12);
        }
        let a = Mps::<f64>::zero_state(4, 2).unwrap();
        let b = Mps::<f64>::zero_state(5, 2).unwrap();
        assert!(a.overlap(&b).is_err());
    }

    #[test]
    fn basis_overlaps_are_kronecker_deltas() {
        let zero = Mps::<f64>::zero_state(5, 2).unwrap();
        let mut same = Mps::<f64>::zero_state(5, 2).unwrap();
        same.project_site(3, false).unwrap();
        assert!((zero.overlap(&same).unwrap().re - 1.0).abs() < 1e-14);
        let mut flipped = Mps::<f64>::zero_state(5, 2).unwrap();
        flipped.tensors[2][(0, 0, 0)] = crate::scalar::c::<f64>(0.0, 0.0);
        flipped.tensors[2][(0, 1, 0)] = crate::scalar::c::<f64>(1.0, 0.0);
        assert!(zero.overlap(&flipped).unwrap().norm() < 1e-14);
    }

    #[test]
    fn pauli_expectation_basics_and_oracle() {
        let zero = Mps::<f64>::zero_state(4, 2).unwrap();
        let mut z1 = PauliString::identity(4);
        z1.set_site(1, false, true);
        assert!((zero.pauli_expectation(&z1) - 1.0).abs() < 1e-14);
        let mut x1 = PauliString::identity(4);
        x1.set_site(1, true, false);
        assert!(zero.pauli_expectation(&x1).abs() < 1e-14);

        let mut rng = instance_rng(29, Stream::Circuit);
        let mps = Mps::<f64>::random(8, 6, &mut rng).unwrap();
        let dense_state = mps.to_dense(20).unwrap();
        for trial in 0..30u64 {
            let mut g = PauliString::identity(8);
            let mut bits = trial.wrapping_mul(0x9e3779b97f4a7c15);
            for q in 1..=8 {
                g.set_site(q, bits & 1 == 1, bits & 2 == 2);
                bits >>= 2;
            }
            let from_mps = mps.pauli_expectation(&g);
            let gv = g.apply_dense(dense_state.amplitudes());
            let from_dense: f64 = dense_state
                .amplitudes()
                .iter()
                .zip(gv.iter())
                .map(|(a, b)| (a.conj() * b).re)
                .sum();
            assert!((from_mps - from_dense).abs() < 1e-10, "trial {trial}");
        }
    }

    #[test]
    fn export_import_roundtrip() {
        let mut rng = instance_rng(37, Stream::Circuit);
        let mps = Mps::<f64>::random(6, 4, &mut rng).unwrap();
        let mut buf = Vec::new();
        mps.export(&mut buf).unwrap();
        let back = Mps::<f64>::import(&buf).unwrap();
        assert_eq!(mps.n(), back.n());
        assert_eq!(mps.bond_dims(), back.bond_dims());
        assert_eq!(mps.center(), back.center());
        let ov = mps.overlap(&back).unwrap();
        assert!((ov.re - 1.0).abs() < 1e-12);
    }

    #[test]
    fn generic_f32_tebd_smoke() {
        let inst = recorded_instance(GateSet::Haar, 5, 3, 0.4, 41);
        let mps32 = run_tebd::<f32>(&inst, full_bond_cap(5)).unwrap();
        let mps64 = run_tebd::<f64>(&inst, full_bond_cap(5)).unwrap();
        let d32 = mps32.to_dense(20).unwrap();
        let d64 = mps64.to_dense(20).unwrap();
        let f: f64 = d64
            .amplitudes()
            .iter()
            .zip(d32.amplitudes())
            .map(|(a, b)| (a.conj() * crate::C64::new(b.re as f64, b.im as f64)).re)
            .sum::<f64>();
        assert!(f.abs() > 1.0 - 1e-3, "cross-precision fidelity {f}");
    }
}
