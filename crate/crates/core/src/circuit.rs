//! Monitored-circuit instances: brickwork gate layout, gate-set sampling,
//! measurement-site sampling, measurement records, and canonical JSON.
//!
//! Qubits and layers are 1-based throughout, matching the usual chain
//! conventions; dense amplitude indexing is little-endian (qubit 1 is the
//! least significant bit).

use std::collections::BTreeMap;

use ndarray::Array2;
use num_complex::Complex64;
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::clifford::{canonical_phase, CliffordTag, TWO_QUBIT_CLIFFORD_ORDER};
use crate::error::{Error, Result};
use crate::linalg::{qr, unitarity_deviation};
use crate::rng::instance_rng;

/// Gate ensembles supported by the sampler.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum GateSet {
    Haar,
    Clifford,
}

/// A 4x4 unitary in the `|q1 q2>` basis: index = 2 x_{q1} + x_{q2}.
pub type Mat4 = [[Complex64; 4]; 4];

/// One two-qubit gate placed on an adjacent pair of a brickwork layer.
#[derive(Clone, Debug, PartialEq)]
pub struct GateSpec {
    pub layer: usize,
    pub q1: usize,
    pub q2: usize,
    pub matrix: Mat4,
    pub clifford_tag: Option<CliffordTag>,
}

impl GateSpec {
    pub fn unitarity_deviation(&self) -> f64 {
        unitarity_deviation(&mat4_to_array(&self.matrix).view())
    }
}

pub fn mat4_to_array(m: &Mat4) -> Array2<Complex64> {
    Array2::from_shape_fn((4, 4), |(i, j)| m[i][j])
}

pub fn array_to_mat4(a: &Array2<Complex64>) -> Mat4 {
    std::array::from_fn(|i| std::array::from_fn(|j| a[(i, j)]))
}

/// Measured qubit sets, one per layer, each sorted ascending.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct MeasurementLayout {
    per_layer: Vec<Vec<usize>>,
}

impl MeasurementLayout {
    pub fn new(per_layer: Vec<Vec<usize>>) -> Self {
        Self { per_layer }
    }

    pub fn layers(&self) -> usize {
        self.per_layer.len()
    }

    /// Measured qubits of layer `l` (1-based), ascending.
    pub fn sites(&self, layer: usize) -> &[usize] {
        &self.per_layer[layer - 1]
    }

    pub fn contains(&self, layer: usize, q: usize) -> bool {
        self.sites(layer).binary_search(&q).is_ok()
    }

    pub fn as_slices(&self) -> &[Vec<usize>] {
        &self.per_layer
    }

    pub fn total_sites(&self) -> usize {
        self.per_layer.iter().map(Vec::len).sum()
    }
}

/// Classical measurement outcomes keyed by (layer, qubit).
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct MeasurementRecord {
    bits: BTreeMap<(usize, usize), bool>,
}

impl MeasurementRecord {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn insert(&mut self, layer: usize, q: usize, bit: bool) {
        self.bits.insert((layer, q), bit);
    }

    pub fn get(&self, layer: usize, q: usize) -> Option<bool> {
        self.bits.get(&(layer, q)).copied()
    }

    pub fn len(&self) -> usize {
        self.bits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = ((usize, usize), bool)> + '_ {
        self.bits.iter().map(|(&k, &v)| (k, v))
    }

    /// Check the record's domain equals the layout's measured sites.
    pub fn matches_layout(&self, layout: &MeasurementLayout) -> bool {
        if self.len() != layout.total_sites() {
            return false;
        }
        self.bits
            .keys()
            .all(|&(l, q)| l >= 1 && l <= layout.layers() && layout.contains(l, q))
    }
}

/// A full monitored-circuit instance: the (U, M, m) triple plus metadata.
#[derive(Clone, Debug, PartialEq)]
pub struct CircuitInstance {
    pub n: usize,
    pub l: usize,
    pub p: f64,
    pub gate_set: GateSet,
    pub seed: u64,
    pub gates: Vec<GateSpec>,
    pub layout: MeasurementLayout,
    pub record: Option<MeasurementRecord>,
}

/// Ordered brickwork pairs of one layer, in application (snake) order.
///
/// Odd layers pair (1,2), (3,4), ... ascending; even layers start at qubit 2
/// and run descending: (N-2, N-1), ..., (2,3) for even N and
/// (N-1, N), ..., (2,3) for odd N. Unpaired boundary qubits receive only
/// projections.
pub fn brickwork_pairs(n: usize, layer: usize) -> Result<Vec<(usize, usize)>> {
    if n < 2 {
        return Err(Error::InvalidSize(format!("need at least 2 qubits, got {n}")));
    }
    if layer == 0 {
        return Err(Error::InvalidSize("layers are 1-based".into()));
    }
    let mut pairs = Vec::with_capacity(n / 2);
    if layer % 2 == 1 {
        let mut q1 = 1;
        while q1 < n {
            pairs.push((q1, q1 + 1));
            q1 += 2;
        }
    } else {
        let start = if n.is_multiple_of(2) { n.saturating_sub(2) } else { n - 1 };
        let mut q1 = start;
        while q1 >= 2 {
            pairs.push((q1, q1 + 1));
            if q1 < 4 {
                break;
            }
            q1 -= 2;
        }
    }
    Ok(pairs)
}

/// Measured-set size for rate `p`: round-half-to-even of `p * n`.
pub fn measured_count(n: usize, p: f64) -> usize {
    let k = (p * n as f64).round_ties_even();
    (k.max(0.0) as usize).min(n)
}

/// Haar-random element of U(4) via a complex Ginibre draw and QR with the
/// R-diagonal phases absorbed into Q.
pub fn sample_haar_gate(rng: &mut impl Rng) -> Mat4 {
    let g = Array2::from_shape_fn((4, 4), |_| {
        let re: f64 = rng.sample(StandardNormal);
        let im: f64 = rng.sample(StandardNormal);
        Complex64::new(re, im) * std::f64::consts::FRAC_1_SQRT_2
    });
    let (q, r) = qr(&g.view());
    let mut u = q;
    for j in 0..4 {
        let d = r[(j, j)];
        let phase = if d.norm() > 0.0 { d / d.norm() } else { Complex64::new(1.0, 0.0) };
        for i in 0..4 {
            u[(i, j)] *= phase;
        }
    }
    array_to_mat4(&u)
}

/// Uniform two-qubit Clifford gate (mod phase), with its tableau.
pub fn sample_clifford_gate(rng: &mut impl Rng) -> (Mat4, CliffordTag) {
    let idx = rng.random_range(0..TWO_QUBIT_CLIFFORD_ORDER);
    let tag = CliffordTag::from_index(idx);
    let mut u = tag.matrix();
    canonical_phase(&mut u);
    (array_to_mat4(&u), tag)
}

/// Uniform size-`round(p n)` measured subsets, independent across layers.
pub fn sample_layout(n: usize, l: usize, p: f64, rng: &mut impl Rng) -> MeasurementLayout {
    let k = measured_count(n, p);
    let mut per_layer = Vec::with_capacity(l);
    for _ in 0..l {
        let mut pool: Vec<usize> = (1..=n).collect();
        for i in 0..k {
            let j = rng.random_range(i..n);
            pool.swap(i, j);
        }
        let mut sites = pool[..k].to_vec();
        sites.sort_unstable();
        per_layer.push(sites);
    }
    MeasurementLayout::new(per_layer)
}

/// Sample a full instance. RNG consumption is canonical: per layer, gates in
/// brickwork order, then the layer's measured set.
pub fn sample_instance(gate_set: GateSet, n: usize, l: usize, p: f64, seed: u64) -> Result<CircuitInstance> {
    if n < 2 {
        return Err(Error::InvalidSize(format!("need at least 2 qubits, got {n}")));
    }
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::Invalid(format!("measurement rate {p} outside [0, 1]")));
    }
    let mut rng = instance_rng(seed, crate::rng::Stream::Circuit);
    let mut gates = Vec::new();
    let mut per_layer = Vec::with_capacity(l);
    for layer in 1..=l {
        for (q1, q2) in brickwork_pairs(n, layer)? {
            let (matrix, clifford_tag) = match gate_set {
                GateSet::Haar => (sample_haar_gate(&mut rng), None),
                GateSet::Clifford => {
                    let (m, t) = sample_clifford_gate(&mut rng);
                    (m, Some(t))
                }
            };
            gates.push(GateSpec { layer, q1, q2, matrix, clifford_tag });
        }
        per_layer.push(sample_layout_one(n, p, &mut rng));
    }
    Ok(CircuitInstance {
        n,
        l,
        p,
        gate_set,
        seed,
        gates,
        layout: MeasurementLayout::new(per_layer),
        record: None,
    })
}

fn sample_layout_one(n: usize, p: f64, rng: &mut impl Rng) -> Vec<usize> {
    let k = measured_count(n, p);
    let mut pool: Vec<usize> = (1..=n).collect();
    for i in 0..k {
        let j = rng.random_range(i..n);
        pool.swap(i, j);
    }
    let mut sites = pool[..k].to_vec();
    sites.sort_unstable();
    sites
}

/// Dedicated RNG stream for sampling measurement outcomes of an instance.
pub fn measurement_rng(instance: &CircuitInstance) -> ChaCha8Rng {
    instance_rng(instance.seed, crate::rng::Stream::Measurement)
}

impl CircuitInstance {
    /// Structural validation: unitarity, brickwork conformance, layout and
    /// record domains, Clifford tags consistent with their matrices.
    pub fn validate(&self) -> Result<()> {
        if self.layout.layers() != self.l {
            return Err(Error::Invalid(format!(
                "layout has {} layers, expected {}",
                self.layout.layers(),
                self.l
            )));
        }
        let expected_k = measured_count(self.n, self.p);
        for layer in 1..=self.l {
            let sites = self.layout.sites(layer);
            if sites.len() != expected_k {
                return Err(Error::Invalid(format!(
                    "layer {layer} measures {} qubits, expected {expected_k}",
                    sites.len()
                )));
            }
            if sites.windows(2).any(|w| w[0] >= w[1]) {
                return Err(Error::Invalid(format!("layer {layer} sites not strictly ascending")));
            }
            if sites.iter().any(|&q| q < 1 || q > self.n) {
                return Err(Error::Invalid(format!("layer {layer} has out-of-range sites")));
            }
        }
        let mut cursor = 0usize;
        for layer in 1..=self.l {
            for (q1, q2) in brickwork_pairs(self.n, layer)? {
                let g = self.gates.get(cursor).ok_or_else(|| {
                    Error::Invalid(format!("missing gate for layer {layer} pair ({q1},{q2})"))
                })?;
                if g.layer != layer || g.q1 != q1 || g.q2 != q2 {
                    return Err(Error::Invalid(format!(
                        "gate {cursor} is (layer {}, {},{}) but brickwork expects (layer {layer}, {q1},{q2})",
                        g.layer, g.q1, g.q2
                    )));
                }
                let dev = g.unitarity_deviation();
                if dev > 1e-12 {
                    return Err(Error::NonUnitary { deviation: dev });
                }
                match (self.gate_set, &g.clifford_tag) {
                    (GateSet::Clifford, Some(tag)) => {
                        let expect = CliffordTag::from_matrix(&mat4_to_array(&g.matrix))?;
                        if expect != *tag {
                            return Err(Error::Invalid(format!(
                                "gate {cursor}: Clifford tableau disagrees with matrix"
                            )));
                        }
                    }
                    (GateSet::Clifford, None) => {
                        return Err(Error::MissingCliffordTag { layer, q1, q2 })
                    }
                    (GateSet::Haar, _) => {}
                }
                cursor += 1;
            }
        }
        if cursor != self.gates.len() {
            return Err(Error::Invalid(format!(
                "{} extra gates beyond the brickwork layout",
                self.gates.len() - cursor
            )));
        }
        if let Some(rec) = &self.record {
            if !rec.matches_layout(&self.layout) {
                return Err(Error::Invalid("record domain differs from layout".into()));
            }
        }
        Ok(())
    }

    /// Gates of one layer, in application order.
    pub fn layer_gates(&self, layer: usize) -> impl Iterator<Item = &GateSpec> {
        self.gates.iter().filter(move |g| g.layer == layer)
    }
}

// ---------------------------------------------------------------------------
// Canonical JSON wire format
// ---------------------------------------------------------------------------

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct CircuitJson {
    version: u32,
    n: usize,
    l: usize,
    p: f64,
    gate_set: GateSet,
    seed: u64,
    gates: Vec<GateJson>,
    layout: Vec<Vec<usize>>,
    record: Option<Vec<(usize, usize, u8)>>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct GateJson {
    layer: usize,
    q1: usize,
    q2: usize,
    matrix: Vec<Vec<[f64; 2]>>,
}

impl CircuitInstance {
    /// Canonical JSON text. Complex entries are `[re, im]` pairs; field and
    /// element order is fixed, so equal instances serialize byte-identically.
    pub fn to_json(&self) -> String {
        let wire = CircuitJson {
            version: 1,
            n: self.n,
            l: self.l,
            p: self.p,
            gate_set: self.gate_set,
            seed: self.seed,
            gates: self
                .gates
                .iter()
                .map(|g| GateJson {
                    layer: g.layer,
                    q1: g.q1,
                    q2: g.q2,
                    matrix: g
                        .matrix
                        .iter()
                        .map(|row| row.iter().map(|z| [z.re, z.im]).collect())
                        .collect(),
                })
                .collect(),
            layout: self.layout.as_slices().to_vec(),
            record: self.record.as_ref().map(|r| {
                r.iter().map(|((l, q), bit)| (l, q, bit as u8)).collect()
            }),
        };
        serde_json::to_string(&wire).expect("circuit serialization cannot fail")
    }

    /// Parse and validate canonical JSON. Clifford tableaus are reconstructed
    /// from the gate matrices.
    pub fn from_json(text: &str) -> Result<Self> {
        let wire: CircuitJson = serde_json::from_str(text)?;
        if wire.version != 1 {
            return Err(Error::Invalid(format!("unsupported version {}", wire.version)));
        }
        let mut gates = Vec::with_capacity(wire.gates.len());
        for (k, g) in wire.gates.into_iter().enumerate() {
            if g.matrix.len() != 4 || g.matrix.iter().any(|r| r.len() != 4) {
                return Err(Error::Invalid(format!("gate {k}: matrix is not 4x4")));
            }
            let matrix: Mat4 = std::array::from_fn(|i| {
                std::array::from_fn(|j| Complex64::new(g.matrix[i][j][0], g.matrix[i][j][1]))
            });
            let clifford_tag = match wire.gate_set {
                GateSet::Clifford => Some(CliffordTag::from_matrix(&mat4_to_array(&matrix))?),
                GateSet::Haar => None,
            };
            gates.push(GateSpec { layer: g.layer, q1: g.q1, q2: g.q2, matrix, clifford_tag });
        }
        let record = match wire.record {
            None => None,
            Some(entries) => {
                let mut rec = MeasurementRecord::new();
                for (l, q, bit) in entries {
                    if bit > 1 {
                        return Err(Error::Invalid(format!(
                            "record entry ({l},{q}) has non-bit value {bit}"
                        )));
                    }
                    rec.insert(l, q, bit == 1);
                }
                Some(rec)
            }
        };
        let instance = CircuitInstance {
            n: wire.n,
            l: wire.l,
            p: wire.p,
            gate_set: wire.gate_set,
            seed: wire.seed,
            gates,
            layout: MeasurementLayout::new(wire.layout),
            record,
        };
        instance.validate()?;
        Ok(instance)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;

    #[test]
    fn brickwork_examples() {
        assert_eq!(brickwork_pairs(4, 1).unwrap(), vec![(1, 2), (3, 4)]);
        assert_eq!(brickwork_pairs(4, 2).unwrap(), vec![(2, 3)]);
        assert_eq!(brickwork_pairs(5, 2).unwrap(), vec![(4, 5), (2, 3)]);
        assert_eq!(brickwork_pairs(5, 1).unwrap(), vec![(1, 2), (3, 4)]);
        assert_eq!(brickwork_pairs(2, 2).unwrap(), vec![]);
        assert!(brickwork_pairs(1, 1).is_err());
    }

    #[test]
    fn brickwork_pairs_disjoint_adjacent_and_covering() {
        for n in 2..=17 {
            let mut bonds = std::collections::HashSet::new();
            for layer in 1..=2 {
                let pairs = brickwork_pairs(n, layer).unwrap();
                let mut used = std::collections::HashSet::new();
                for (q1, q2) in pairs {
                    assert_eq!(q2, q1 + 1);
                    assert!(q1 >= 1 && q2 <= n);
                    assert!(used.insert(q1) && used.insert(q2), "overlap at n={n} l={layer}");
                    bonds.insert(q1);
                }
            }
            let expected: std::collections::HashSet<usize> = (1..n).collect();
            assert_eq!(bonds, expected, "bond coverage at n={n}");
        }
    }

    #[test]
    fn measured_count_rounds_half_to_even() {
        assert_eq!(measured_count(10, 0.25), 2); // 2.5 -> 2
        assert_eq!(measured_count(10, 0.35), 4); // 3.5 -> 4
        assert_eq!(measured_count(10, 0.0), 0);
        assert_eq!(measured_count(10, 1.0), 10);
    }

    #[test]
    fn haar_gate_is_unitary() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..25 {
            let g = sample_haar_gate(&mut rng);
            let a = mat4_to_array(&g);
            assert!(unitarity_deviation(&a.view()) < 1e-12);
            let det = det4(&a);
            assert!((det.norm() - 1.0).abs() < 1e-12);
        }
    }

    fn det4(a: &Array2<Complex64>) -> Complex64 {
        // Laplace expansion is fine at 4x4.
        fn det(m: &[Vec<Complex64>]) -> Complex64 {
            let n = m.len();
            if n == 1 {
                return m[0][0];
            }
            let mut acc = Complex64::new(0.0, 0.0);
            for j in 0..n {
                let minor: Vec<Vec<Complex64>> = (1..n)
                    .map(|i| (0..n).filter(|&c| c != j).map(|c| m[i][c]).collect())
                    .collect();
                let sign = if j % 2 == 0 { 1.0 } else { -1.0 };
                acc += m[0][j] * det(&minor) * sign;
            }
            acc
        }
        let rows: Vec<Vec<Complex64>> =
            (0..4).map(|i| (0..4).map(|j| a[(i, j)]).collect()).collect();
        det(&rows)
    }

    #[test]
    fn layout_edge_rates() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let empty = sample_layout(8, 5, 0.0, &mut rng);
        assert!(empty.as_slices().iter().all(|s| s.is_empty()));
        let full = sample_layout(8, 5, 1.0, &mut rng);
        assert!(full.as_slices().iter().all(|s| *s == (1..=8).collect::<Vec<_>>()));
    }

    #[test]
    fn equal_seeds_are_bit_identical() {
        let a = sample_instance(GateSet::Haar, 6, 4, 0.3, 99).unwrap();
        let b = sample_instance(GateSet::Haar, 6, 4, 0.3, 99).unwrap();
        assert_eq!(a, b);
        let c = sample_instance(GateSet::Clifford, 6, 4, 0.3, 99).unwrap();
        let d = sample_instance(GateSet::Clifford, 6, 4, 0.3, 99).unwrap();
        assert_eq!(c, d);
        assert_eq!(c.to_json(), d.to_json());
    }

    #[test]
    fn sampled_instances_validate() {
        for seed in 0..5 {
            sample_instance(GateSet::Haar, 5, 3, 0.4, seed).unwrap().validate().unwrap();
            sample_instance(GateSet::Clifford, 6, 3, 0.5, seed).unwrap().validate().unwrap();
        }
    }

    #[test]
    fn json_roundtrip_identity() {
        for seed in 0..20 {
            let gate_set = if seed % 2 == 0 { GateSet::Haar } else { GateSet::Clifford };
            let mut inst = sample_instance(gate_set, 4 + (seed as usize % 3), 3, 0.5, seed).unwrap();
            if seed % 3 == 0 {
                let mut rec = MeasurementRecord::new();
                for layer in 1..=inst.l {
                    for &q in inst.layout.sites(layer) {
                        rec.insert(layer, q, (seed as usize + q) % 2 == 1);
                    }
                }
                inst.record = Some(rec);
            }
            let text = inst.to_json();
            let back = CircuitInstance::from_json(&text).unwrap();
            assert_eq!(inst, back, "seed {seed}");
            assert_eq!(text, back.to_json());
        }
    }

    #[test]
    fn unknown_field_is_rejected_by_name() {
        let inst = sample_instance(GateSet::Haar, 4, 1, 0.0, 7).unwrap();
        let mut v: serde_json::Value = serde_json::from_str(&inst.to_json()).unwrap();
        v.as_object_mut().unwrap().insert("bogus_field".into(), 1.into());
        let err = CircuitInstance::from_json(&v.to_string()).unwrap_err();
        assert!(err.to_string().contains("bogus_field"), "{err}");
    }

    #[test]
    fn clifford_frequencies_uniform_chi_square() {
        // 10^6 draws over 11520 canonical forms; chi-square within 5 sigma.
        let mut rng = ChaCha8Rng::seed_from_u64(12345);
        let draws = 1_000_000usize;
        let mut counts = vec![0u32; TWO_QUBIT_CLIFFORD_ORDER];
        for _ in 0..draws {
            let idx = rng.random_range(0..TWO_QUBIT_CLIFFORD_ORDER);
            counts[idx] += 1;
        }
        let expect = draws as f64 / TWO_QUBIT_CLIFFORD_ORDER as f64;
        let chi2: f64 = counts.iter().map(|&c| {
            let d = c as f64 - expect;
            d * d / expect
        }).sum();
        let dof = (TWO_QUBIT_CLIFFORD_ORDER - 1) as f64;
        let sigma = (2.0 * dof).sqrt();
        assert!((chi2 - dof).abs() < 5.0 * sigma, "chi2 {chi2} dof {dof}");
    }

    #[test]
    fn haar_eigenphases_uniform_ks() {
        // Pooled eigenphases of Haar draws are uniform on [-pi, pi); compare
        // the empirical CDF against the uniform CDF (KS statistic).
        let mut rng = ChaCha8Rng::seed_from_u64(4242);
        let draws = 10_000;
        let mut phases = Vec::with_capacity(4 * draws);
        for _ in 0..draws {
            let u = mat4_to_array(&sample_haar_gate(&mut rng));
            for root in eigenvalues4(&u) {
                phases.push(root.arg());
            }
        }
        phases.sort_by(|a, b| a.partial_cmp(b).unwrap());
        let n = phases.len() as f64;
        let mut ks: f64 = 0.0;
        for (i, &phi) in phases.iter().enumerate() {
            let cdf = (phi + std::f64::consts::PI) / (2.0 * std::f64::consts::PI);
            let lo = i as f64 / n;
            let hi = (i + 1) as f64 / n;
            ks = ks.max((cdf - lo).abs()).max((hi - cdf).abs());
        }
        assert!(ks < 0.02, "KS statistic {ks}");
    }

    /// Eigenvalues of a 4x4 matrix: characteristic polynomial via Newton's
    /// identities, roots via Durand-Kerner. Test-only oracle.
    fn eigenvalues4(a: &Array2<Complex64>) -> [Complex64; 4] {
        let mut pow = a.clone();
        let mut traces = [Complex64::new(0.0, 0.0); 4];
        for t in 0..4 {
            traces[t] = (0..4).map(|i| pow[(i, i)]).sum();
            if t < 3 {
                pow = pow.dot(a);
            }
        }
        let e1 = traces[0];
        let e2 = (e1 * traces[0] - traces[1]) / 2.0;
        let e3 = (e2 * traces[0] - e1 * traces[1] + traces[2]) / 3.0;
        let e4 = (e3 * traces[0] - e2 * traces[1] + e1 * traces[2] - traces[3]) / 4.0;
        // p(x) = x^4 - e1 x^3 + e2 x^2 - e3 x + e4
        let coeffs = [e4, -e3, e2, -e1];
        let eval = |x: Complex64| {
            let mut acc = Complex64::new(1.0, 0.0);
            for c in [-e1, e2, -e3, e4] {
                acc = acc * x + c;
            }
            acc
        };
        let _ = coeffs;
        let seed = Complex64::new(0.4, 0.9);
        let mut roots = [seed, seed * seed, seed * seed * seed, seed * seed * seed * seed];
        for _ in 0..200 {
            let old = roots;
            for i in 0..4 {
                let mut denom = Complex64::new(1.0, 0.0);
                for j in 0..4 {
                    if i != j {
                        denom *= old[i] - old[j];
                    }
                }
                roots[i] = old[i] - eval(old[i]) / denom;
            }
        }
        roots
    }
}
