//! Stabilizer-tableau simulation of Clifford monitored circuits.
//!
//! Generator rows are bit-packed into one `u64` per Pauli axis, which caps
//! the backend at 64 qubits. Rows follow the usual destabilizer/stabilizer
//! split; the sign of every row is an `i`-power kept mod 4 (stabilizer rows
//! stay at 0 or 2). Entanglement entropies come from the GF(2) rank of the
//! cut-restricted generator matrix.

use rand::Rng;

use crate::circuit::{CircuitInstance, GateSpec, MeasurementRecord};
use crate::dense::DenseState;
use crate::error::{Error, Result};
use crate::mps::Mps;
use crate::outcome::decide_outcome;
use crate::pauli::{word_product_phase, PauliString};
use crate::scalar::Real;

/// Stabilizer state of up to 64 qubits.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StabilizerTableau {
    n: usize,
    /// X bits, rows 0..n destabilizers, n..2n stabilizers.
    x: Vec<u64>,
    /// Z bits, same layout.
    z: Vec<u64>,
    /// i-power of each row, mod 4.
    r: Vec<u8>,
}

impl StabilizerTableau {
    /// `|0...0>`: destabilizers X_i, stabilizers Z_i.
    pub fn zero_state(n: usize) -> Result<Self> {
        if n == 0 || n > 64 {
            return Err(Error::InvalidSize(format!("tableau supports 1..=64 qubits, got {n}")));
        }
        let mut t = Self { n, x: vec![0; 2 * n], z: vec![0; 2 * n], r: vec![0; 2 * n] };
        for i in 0..n {
            t.x[i] = 1 << i;
            t.z[n + i] = 1 << i;
        }
        Ok(t)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Row `h <- row_i * row_h` (operator product, exact phase).
    fn left_mul_row(&mut self, h: usize, i: usize) {
        let inc = word_product_phase(self.x[i], self.z[i], self.x[h], self.z[h]);
        self.r[h] = (self.r[i] + self.r[h] + inc) % 4;
        self.x[h] ^= self.x[i];
        self.z[h] ^= self.z[i];
    }

    /// Apply a two-qubit Clifford gate through its tableau action table.
    pub fn apply_gate(&mut self, gate: &GateSpec) -> Result<()> {
        let tag = gate.clifford_tag.as_ref().ok_or(Error::MissingCliffordTag {
            layer: gate.layer,
            q1: gate.q1,
            q2: gate.q2,
        })?;
        // Action table: local sub-Pauli (x1,z1,x2,z2) -> (image bits, phase).
        let mut table = [(0u8, 0u8); 16];
        for (sub, slot) in table.iter_mut().enumerate().skip(1) {
            let img = tag.image_of(sub as u8);
            let (x1, z1) = img.site(1);
            let (x2, z2) = img.site(2);
            let bits = x1 as u8 | (z1 as u8) << 1 | (x2 as u8) << 2 | (z2 as u8) << 3;
            *slot = (bits, img.phase());
        }
        let b1 = gate.q1 - 1;
        let b2 = gate.q2 - 1;
        for row in 0..2 * self.n {
            let x1 = (self.x[row] >> b1) & 1;
            let z1 = (self.z[row] >> b1) & 1;
            let x2 = (self.x[row] >> b2) & 1;
            let z2 = (self.z[row] >> b2) & 1;
            let sub = (x1 | z1 << 1 | x2 << 2 | z2 << 3) as usize;
            if sub == 0 {
                continue;
            }
            let (bits, phase) = table[sub];
            let clear = !((1u64 << b1) | (1u64 << b2));
            self.x[row] = self.x[row] & clear
                | ((bits & 1) as u64) << b1
                | (((bits >> 2) & 1) as u64) << b2;
            self.z[row] = self.z[row] & clear
                | (((bits >> 1) & 1) as u64) << b1
                | (((bits >> 3) & 1) as u64) << b2;
            self.r[row] = (self.r[row] + phase) % 4;
        }
        Ok(())
    }

    /// Measure qubit `q` with the shared outcome-decision convention.
    pub fn measure_qubit(&mut self, q: usize, rng: &mut impl Rng) -> bool {
        let n = self.n;
        let bit = 1u64 << (q - 1);
        let pivot = (n..2 * n).find(|&row| self.x[row] & bit != 0);
        match pivot {
            Some(p) => {
                // Genuinely random: the outcome probability is exactly 1/2.
                let outcome = decide_outcome(0.5, rng);
                for row in 0..2 * n {
                    if row != p && self.x[row] & bit != 0 {
                        self.left_mul_row(row, p);
                    }
                }
                // The old stabilizer becomes the destabilizer of the result.
                self.x[p - n] = self.x[p];
                self.z[p - n] = self.z[p];
                self.r[p - n] = self.r[p];
                self.x[p] = 0;
                self.z[p] = bit;
                self.r[p] = if outcome { 2 } else { 0 };
                outcome
            }
            None => {
                // Deterministic: accumulate the stabilizer product that equals
                // +-Z_q, steered by the destabilizer X bits.
                let mut sx = 0u64;
                let mut sz = 0u64;
                let mut sr = 0u8;
                for i in 0..n {
                    if self.x[i] & bit != 0 {
                        let row = n + i;
                        let inc = word_product_phase(sx, sz, self.x[row], self.z[row]);
                        sr = (sr + self.r[row] + inc) % 4;
                        sx ^= self.x[row];
                        sz ^= self.z[row];
                    }
                }
                debug_assert_eq!(sx, 0);
                debug_assert_eq!(sz, bit);
                debug_assert!(sr.is_multiple_of(2));
                sr == 2
            }
        }
    }

    /// Entanglement entropy (nats) of qubits `1..=cut`:
    /// `(rank of the restricted generator matrix - cut) * ln 2`.
    pub fn entanglement_entropy(&self, cut: usize) -> f64 {
        self.entropy_bits(cut) as f64 * std::f64::consts::LN_2
    }

    /// Entropy of the cut in units of ln 2 (always a nonnegative integer).
    pub fn entropy_bits(&self, cut: usize) -> usize {
        debug_assert!(cut >= 1 && cut < self.n);
        let mask = (1u64 << cut) - 1;
        let rows: Vec<u128> = (self.n..2 * self.n)
            .map(|row| (self.x[row] & mask) as u128 | (((self.z[row] & mask) as u128) << cut))
            .collect();
        gf2_rank(rows) - cut
    }

    /// Schmidt error of the rank-`d` truncation at `cut`. Stabilizer states
    /// have flat Schmidt spectra, so this is exact:
    /// `eps = 1 - min(d, 2^k) / 2^k` with `k` the entropy in bits.
    pub fn schmidt_error(&self, cut: usize, d: usize) -> f64 {
        let k = self.entropy_bits(cut);
        let rank = 1u64 << k;
        let kept = (d as u64).min(rank);
        (rank - kept) as f64 / rank as f64
    }

    /// Uniform random element of the stabilizer group, with exact sign.
    pub fn sample_group_element(&self, rng: &mut impl Rng) -> PauliString {
        let mask: u64 = if self.n == 64 {
            rng.random()
        } else {
            rng.random::<u64>() & ((1u64 << self.n) - 1)
        };
        self.subset_product(mask)
    }

    /// Product of the stabilizer generators selected by `mask`.
    pub fn subset_product(&self, mask: u64) -> PauliString {
        let mut acc = PauliString::identity(self.n);
        for i in 0..self.n {
            if mask >> i & 1 == 1 {
                let row = self.n + i;
                acc.mul_assign(&PauliString::from_words(
                    self.n,
                    vec![self.x[row]],
                    vec![self.z[row]],
                    self.r[row],
                ));
            }
        }
        debug_assert!(acc.is_hermitian());
        acc
    }

    /// Monte Carlo estimate of `|<psi | psi_D>|^2` against an MPS.
    ///
    /// `F = <psi_D| P |psi_D>` with `P = 2^-n sum_g g`; sampling group
    /// elements uniformly gives the unbiased estimator
    /// `F_hat = mean of Re<psi_D| g |psi_D>`, with a standard error from the
    /// sample variance.
    pub fn mc_overlap<T: Real>(
        &self,
        mps: &Mps<T>,
        samples: usize,
        rng: &mut impl Rng,
    ) -> Result<(f64, f64)> {
        if mps.n() != self.n {
            return Err(Error::SizeMismatch(self.n, mps.n()));
        }
        if samples == 0 {
            return Err(Error::Invalid("mc_overlap needs at least one sample".into()));
        }
        let mut mean = 0.0f64;
        let mut m2 = 0.0f64;
        for k in 0..samples {
            let g = self.sample_group_element(rng);
            let term = mps.pauli_expectation(&g).as_f64();
            let delta = term - mean;
            mean += delta / (k + 1) as f64;
            m2 += delta * (term - mean);
        }
        let stderr = if samples > 1 {
            (m2 / (samples - 1) as f64 / samples as f64).sqrt()
        } else {
            0.0
        };
        Ok((mean, stderr))
    }

    /// Dense amplitudes of the stabilizer state (small `n` only). The global
    /// phase is fixed by making the first nonzero amplitude real positive.
    pub fn to_dense<T: Real>(&self, limit: usize) -> Result<DenseState<T>> {
        if self.n > limit {
            return Err(Error::Capacity { n: self.n, limit });
        }
        let n = self.n;
        // Find a computational basis state in the support: Gauss-eliminate
        // the X parts of the stabilizer rows; the leftover pure-Z rows give
        // affine constraints z . k = r/2 on the support.
        let mut rows: Vec<PauliString> = (n..2 * n)
            .map(|row| {
                PauliString::from_words(n, vec![self.x[row]], vec![self.z[row]], self.r[row])
            })
            .collect();
        let snapshot = rows.clone();
        let mut used = vec![false; n];
        for bitpos in 0..n {
            let pivot = (0..n).find(|&i| {
                !used[i] && {
                    let (x, _) = rows[i].site(bitpos + 1);
                    x
                }
            });
            if let Some(p) = pivot {
                used[p] = true;
                for i in 0..n {
                    if i != p {
                        let (x, _) = rows[i].site(bitpos + 1);
                        if x {
                            let rp = rows[p].clone();
                            rows[i].mul_assign(&rp);
                        }
                    }
                }
            }
        }
        // Pure-Z rows -> linear constraints on the support bits.
        let mut sys: Vec<(u64, u64)> = Vec::new(); // (z bits, rhs bit)
        for (i, row) in rows.iter().enumerate() {
            if used[i] {
                continue;
            }
            let mut zbits = 0u64;
            for q in 1..=n {
                let (x, z) = row.site(q);
                debug_assert!(!x, "pure-Z elimination left an X bit");
                zbits |= (z as u64) << (q - 1);
            }
            debug_assert!(row.is_hermitian());
            let rhs = (row.sign() < 0) as u64;
            sys.push((zbits, rhs));
        }
        let k0 = solve_affine_gf2(&sys);
        let mut state = vec![crate::scalar::C::new(T::zero(), T::zero()); 1usize << n];
        state[k0 as usize] = crate::scalar::C::new(T::one(), T::zero());
        for g in &snapshot {
            let gv = g.apply_dense(&state);
            for (s, t) in state.iter_mut().zip(gv) {
                *s = (*s + t).unscale(T::of(2.0));
            }
        }
        let norm = state.iter().map(|z| crate::scalar::norm_sqr(*z)).sum::<T>().sqrt();
        debug_assert!(norm.as_f64() > 1e-9, "projector chain annihilated the support point");
        let first = state
            .iter()
            .find(|z| crate::scalar::norm_sqr(**z).sqrt() > T::of(1e-9))
            .copied()
            .unwrap();
        let phase = first.unscale(crate::scalar::norm_sqr(first).sqrt());
        let fix = phase.conj().unscale(norm);
        for z in state.iter_mut() {
            *z *= fix;
        }
        DenseState::from_amplitudes(n, state)
    }

    /// Structural audit used by tests: commutation, independence, phases.
    pub fn audit(&self) -> Result<()> {
        let n = self.n;
        for a in n..2 * n {
            if !self.r[a].is_multiple_of(2) {
                return Err(Error::Invalid(format!("stabilizer row {a} has odd phase")));
            }
            for b in (a + 1)..2 * n {
                if symplectic_odd(self.x[a], self.z[a], self.x[b], self.z[b]) {
                    return Err(Error::Invalid(format!("stabilizer rows {a},{b} anticommute")));
                }
            }
        }
        for i in 0..n {
            for j in n..2 * n {
                let anti = symplectic_odd(self.x[i], self.z[i], self.x[j], self.z[j]);
                if anti != (j == n + i) {
                    return Err(Error::Invalid(format!(
                        "destabilizer {i} pairing broken against row {j}"
                    )));
                }
            }
        }
        let rows: Vec<u128> = (0..2 * n)
            .map(|row| self.x[row] as u128 | ((self.z[row] as u128) << 64))
            .collect();
        if gf2_rank(rows) != 2 * n {
            return Err(Error::Invalid("tableau rows are GF(2)-dependent".into()));
        }
        Ok(())
    }
}

fn symplectic_odd(xa: u64, za: u64, xb: u64, zb: u64) -> bool {
    (((xa & zb).count_ones() + (za & xb).count_ones()) & 1) == 1
}

/// Rank of a set of GF(2) row vectors.
pub fn gf2_rank(mut rows: Vec<u128>) -> usize {
    let mut rank = 0;
    for bit in 0..128u32 {
        let Some(pivot) = rows.iter().position(|&r| r >> bit & 1 == 1) else {
            continue;
        };
        let prow = rows.swap_remove(pivot);
        rank += 1;
        for r in rows.iter_mut() {
            if *r >> bit & 1 == 1 {
                *r ^= prow;
            }
        }
        if rows.is_empty() {
            break;
        }
    }
    rank
}

/// Deterministic particular solution of `z . k = rhs (mod 2)` rows.
/// Free variables are set to zero.
fn solve_affine_gf2(sys: &[(u64, u64)]) -> u64 {
    let mut rows: Vec<(u64, u64)> = sys.to_vec();
    let mut pivots: Vec<(u32, u64, u64)> = Vec::new();
    for bit in 0..64u32 {
        let Some(pos) = rows.iter().position(|&(z, _)| z >> bit & 1 == 1) else {
            continue;
        };
        let (pz, pr) = rows.swap_remove(pos);
        for (z, r) in rows.iter_mut() {
            if *z >> bit & 1 == 1 {
                *z ^= pz;
                *r ^= pr;
            }
        }
        pivots.push((bit, pz, pr));
    }
    // Back-substitute with free variables at zero.
    let mut k = 0u64;
    for &(bit, pz, pr) in pivots.iter().rev() {
        let acc = (pz & k).count_ones() as u64 & 1;
        let want = pr & 1;
        if acc != want {
            k |= 1 << bit;
        }
    }
    k
}

/// Run a Clifford monitored circuit on the tableau, sampling outcomes.
/// Layer structure and measurement order match the dense backend exactly.
pub fn run_monitored(
    instance: &CircuitInstance,
    rng: &mut impl Rng,
) -> Result<(StabilizerTableau, MeasurementRecord)> {
    let mut tab = StabilizerTableau::zero_state(instance.n)?;
    let mut record = MeasurementRecord::new();
    let mut cursor = 0usize;
    for layer in 1..=instance.l {
        while cursor < instance.gates.len() && instance.gates[cursor].layer == layer {
            tab.apply_gate(&instance.gates[cursor])?;
            cursor += 1;
        }
        for &q in instance.layout.sites(layer) {
            let bit = tab.measure_qubit(q, rng);
            record.insert(layer, q, bit);
        }
    }
    Ok((tab, record))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit::{sample_instance, GateSet};
    use crate::clifford::{CliffordTag, Pauli2};
    use crate::dense;
    use crate::rng::{instance_rng, Stream};

    fn tag(entries: [(u8, bool); 4]) -> CliffordTag {
        CliffordTag {
            images: std::array::from_fn(|k| Pauli2 { bits: entries[k].0, neg: entries[k].1 }),
        }
    }

    fn gate_from_tag(t: CliffordTag, layer: usize, q1: usize) -> GateSpec {
        GateSpec {
            layer,
            q1,
            q2: q1 + 1,
            matrix: crate::circuit::array_to_mat4(&t.matrix()),
            clifford_tag: Some(t),
        }
    }

    #[test]
    fn zero_state_measures_zero_everywhere() {
        let mut tab = StabilizerTableau::zero_state(5).unwrap();
        let mut rng = instance_rng(0, Stream::Measurement);
        for q in 1..=5 {
            assert!(!tab.measure_qubit(q, &mut rng));
        }
        tab.audit().unwrap();
    }

    #[test]
    fn cnot_twice_is_identity_on_tableau() {
        let cnot = tag([(5, false), (2, false), (4, false), (10, false)]);
        let gate = gate_from_tag(cnot, 1, 2);
        let mut tab = StabilizerTableau::zero_state(4).unwrap();
        let inst = sample_instance(GateSet::Clifford, 4, 2, 0.0, 5).unwrap();
        for g in &inst.gates {
            tab.apply_gate(g).unwrap();
        }
        let before = tab.clone();
        tab.apply_gate(&gate).unwrap();
        tab.apply_gate(&gate).unwrap();
        assert_eq!(tab, before);
    }

    #[test]
    fn missing_tag_is_an_error() {
        let mut tab = StabilizerTableau::zero_state(3).unwrap();
        let inst = sample_instance(GateSet::Haar, 3, 1, 0.0, 1).unwrap();
        assert!(matches!(
            tab.apply_gate(&inst.gates[0]),
            Err(Error::MissingCliffordTag { .. })
        ));
    }

    #[test]
    fn to_dense_matches_dense_backend_up_to_phase() {
        for seed in 0..25 {
            let inst = sample_instance(GateSet::Clifford, 4, 3, 0.0, seed).unwrap();
            let mut tab = StabilizerTableau::zero_state(4).unwrap();
            for g in &inst.gates {
                tab.apply_gate(g).unwrap();
            }
            tab.audit().unwrap();
            let from_tab: DenseState<f64> = tab.to_dense(10).unwrap();
            let mut rng = instance_rng(inst.seed, Stream::Measurement);
            let (from_dense, _) = dense::run_monitored::<f64>(&inst, &mut rng, 10).unwrap();
            let ov = from_tab.overlap(&from_dense).unwrap();
            assert!((ov.norm() - 1.0).abs() < 1e-10, "seed {seed}: |ov| = {}", ov.norm());
        }
    }

    #[test]
    fn records_match_dense_backend_under_shared_stream() {
        for seed in 0..40 {
            let inst = sample_instance(GateSet::Clifford, 6, 6, 0.4, 1000 + seed).unwrap();
            let mut rng_a = instance_rng(inst.seed, Stream::Measurement);
            let mut rng_b = instance_rng(inst.seed, Stream::Measurement);
            let (_, rec_dense) = dense::run_monitored::<f64>(&inst, &mut rng_a, 20).unwrap();
            let (tab, rec_stab) = run_monitored(&inst, &mut rng_b).unwrap();
            assert_eq!(rec_dense, rec_stab, "seed {seed}");
            tab.audit().unwrap();
        }
    }

    #[test]
    fn entropies_match_dense_backend() {
        for seed in 0..20 {
            let inst = sample_instance(GateSet::Clifford, 8, 8, 0.3, 77 + seed).unwrap();
            let mut rng = instance_rng(inst.seed, Stream::Measurement);
            let (tab, record) = run_monitored(&inst, &mut rng).unwrap();
            let (state, _) = dense::run_replay::<f64>(&inst, &record, 20).unwrap();
            for cut in 1..8 {
                let se = tab.entanglement_entropy(cut);
                let de = state.schmidt_spectrum(cut).entropy();
                assert!((se - de).abs() < 1e-9, "seed {seed} cut {cut}: {se} vs {de}");
                let bits = se / std::f64::consts::LN_2;
                assert!((bits - bits.round()).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn entropy_is_cut_symmetric() {
        let inst = sample_instance(GateSet::Clifford, 9, 9, 0.2, 3).unwrap();
        let mut rng = instance_rng(inst.seed, Stream::Measurement);
        let (tab, _) = run_monitored(&inst, &mut rng).unwrap();
        for cut in 1..9 {
            assert_eq!(tab.entropy_bits(cut), complement_bits(&tab, cut), "cut {cut}");
        }
    }

    /// Entropy of the complementary block via the rank formula on the high
    /// qubits — the symmetry oracle.
    fn complement_bits(tab: &StabilizerTableau, cut: usize) -> usize {
        let n = tab.n();
        let hi = n - cut;
        let rows: Vec<u128> = (n..2 * n)
            .map(|row| {
                let xr = tab.x[row] >> cut;
                let zr = tab.z[row] >> cut;
                xr as u128 | ((zr as u128) << hi)
            })
            .collect();
        gf2_rank(rows) - hi
    }

    #[test]
    fn bell_pair_entropy_and_measurement_frequencies() {
        let h1 = tag([(2, false), (1, false), (4, false), (8, false)]);
        let cnot = tag([(5, false), (2, false), (4, false), (10, false)]);
        let mut tab = StabilizerTableau::zero_state(2).unwrap();
        tab.apply_gate(&gate_from_tag(h1, 1, 1)).unwrap();
        tab.apply_gate(&gate_from_tag(cnot, 1, 1)).unwrap();
        assert_eq!(tab.entropy_bits(1), 1);
        let mut ones = 0usize;
        let trials = 10_000;
        let mut rng = instance_rng(9, Stream::Measurement);
        for _ in 0..trials {
            let mut t = tab.clone();
            ones += t.measure_qubit(1, &mut rng) as usize;
        }
        let sigma = (0.25f64 / trials as f64).sqrt();
        assert!((ones as f64 / trials as f64 - 0.5).abs() < 4.0 * sigma);
    }

    #[test]
    fn group_elements_stabilize_own_state() {
        let inst = sample_instance(GateSet::Clifford, 6, 6, 0.3, 21).unwrap();
        let mut rng = instance_rng(inst.seed, Stream::Measurement);
        let (tab, _) = run_monitored(&inst, &mut rng).unwrap();
        let state: DenseState<f64> = tab.to_dense(10).unwrap();
        let mut est_rng = instance_rng(inst.seed, Stream::Estimator);
        for _ in 0..50 {
            let g = tab.sample_group_element(&mut est_rng);
            assert!(g.is_hermitian());
            let gv = g.apply_dense(state.amplitudes());
            let expect: f64 = state
                .amplitudes()
                .iter()
                .zip(gv.iter())
                .map(|(a, b)| (a.conj() * b).re)
                .sum();
            assert!((expect - 1.0).abs() < 1e-10);
        }
        let id = tab.subset_product(0);
        assert!(id.is_identity_op());
        assert_eq!(id.phase(), 0);
    }

    #[test]
    fn subset_inclusion_frequencies_uniform() {
        let draws = 100_000usize;
        let mut incl = [0u32; 8];
        let mut est_rng = instance_rng(31, Stream::Estimator);
        for _ in 0..draws {
            let mask: u64 = est_rng.random::<u64>() & 0xff;
            for (q, slot) in incl.iter_mut().enumerate() {
                *slot += (mask >> q & 1) as u32;
            }
        }
        let expect = draws as f64 / 2.0;
        let var = draws as f64 / 4.0;
        let chi2: f64 = incl.iter().map(|&c| (c as f64 - expect).powi(2) / var).sum();
        let dof = 8.0f64;
        assert!((chi2 - dof).abs() < 5.0 * (2.0 * dof).sqrt(), "chi2 {chi2}");
    }

    #[test]
    fn determinism_same_seed_same_record() {
        let inst = sample_instance(GateSet::Clifford, 12, 12, 0.5, 55).unwrap();
        let run = || {
            let mut rng = instance_rng(inst.seed, Stream::Measurement);
            run_monitored(&inst, &mut rng).unwrap().1
        };
        assert_eq!(run(), run());
    }

    #[test]
    fn gf2_rank_small_cases() {
        assert_eq!(gf2_rank(vec![0b01, 0b10, 0b11]), 2);
        assert_eq!(gf2_rank(vec![0, 0]), 0);
        assert_eq!(gf2_rank(vec![0b111]), 1);
    }
}
