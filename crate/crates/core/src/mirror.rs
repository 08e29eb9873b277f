//! Unitary mirror circuits: convert a mixed-canonical MPS into a sequence of
//! multi-qubit unitaries whose action on `|0...0>` reproduces the state.
//!
//! With `n_D = ceil(log2 max_bond)`, the center tensor becomes one
//! `(2 n_D + 1)`-qubit gate whose `|0..0>` column holds the tensor; interior
//! tensors become `(n_D + 1)`-qubit gates embedding their isometries (right
//! sites consume a left input register, left sites a right one); the
//! outermost `n_D + 1` sites on each side aggregate into edge gates. Gates
//! apply center-first, alternating outward. Bond indices embed into the
//! registers in natural binary order, zero-padded up to `2^{n_D}`; the free
//! columns of each unitary come from a deterministic orthonormal completion.

use ndarray::{s, Array2};
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::dense::DenseState;
use crate::error::{Error, Result};
use crate::linalg::{complete_unitary, dagger, unitarity_deviation};
use crate::mps::Mps;
use crate::scalar::{Real, C};

/// Placement of a gate within the mirror layout.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum GateRole {
    Center,
    Left,
    Right,
    LeftEdge,
    RightEdge,
}

/// One multi-qubit unitary on a contiguous span of the chain.
#[derive(Clone, Debug, PartialEq)]
pub struct MirrorGate<T: Real> {
    /// First qubit of the span (1-based).
    pub start: usize,
    /// Number of qubits spanned.
    pub qubits: usize,
    pub role: GateRole,
    pub matrix: Array2<C<T>>,
}

impl<T: Real> MirrorGate<T> {
    pub fn span(&self) -> (usize, usize) {
        (self.start, self.start + self.qubits - 1)
    }
}

/// The mirror circuit `C_D` with `C_D |0^n> = |psi_D>`; gates are stored in
/// application order (center first, alternating outward).
#[derive(Clone, Debug, PartialEq)]
pub struct MirrorCircuit<T: Real> {
    pub n: usize,
    pub d: usize,
    pub n_d: usize,
    pub n_c: usize,
    pub gates: Vec<MirrorGate<T>>,
}

/// Build the mirror of an MPS. The register width comes from the largest
/// actual bond dimension; the general layout needs `n >= 2 n_D + 3` so both
/// edge gates have room, otherwise the whole state becomes a single gate.
pub fn build_mirror<T: Real>(mps: &Mps<T>) -> Result<MirrorCircuit<T>> {
    mps.audit_canonical(1e-8)?;
    let n = mps.n();
    let max_bond = mps.bond_dims().into_iter().max().unwrap_or(1);
    let n_d = max_bond.next_power_of_two().trailing_zeros() as usize;

    if n < 2 * n_d + 3 {
        // Degenerate small chain: one gate preparing the state directly.
        let dense = mps.to_dense(usize::MAX)?;
        let col: Vec<C<T>> = dense.amplitudes().to_vec();
        let u = complete_unitary(1 << n, &[(0, col)])?;
        return Ok(MirrorCircuit {
            n,
            d: mps.bond_cap(),
            n_d,
            n_c: mps.center(),
            gates: vec![MirrorGate { start: 1, qubits: n, role: GateRole::Center, matrix: u }],
        });
    }

    let n_c = mps.center().clamp(n_d + 2, n - n_d - 1);
    let mut work = mps.clone();
    work.move_center(n_c);

    // Center: |0^(2nD+1)> -> sum A[i,x,j] |i>|x>|j>, register i on the low
    // bits of the span, x in the middle, j on the high bits.
    let center_gate = {
        let a = work.tensor(n_c);
        let (l, _, r) = a.dim();
        let dim = 1usize << (2 * n_d + 1);
        let mut col = vec![C::new(T::zero(), T::zero()); dim];
        for i in 0..l {
            for x in 0..2 {
                for j in 0..r {
                    col[i + (x << n_d) + (j << (n_d + 1))] = a[(i, x, j)];
                }
            }
        }
        MirrorGate {
            start: n_c - n_d,
            qubits: 2 * n_d + 1,
            role: GateRole::Center,
            matrix: complete_unitary(dim, &[(0, col)])?,
        }
    };

    // Right interior at site m: |i>|0> -> sum_{x,j} A[i,x,j] |x>|j>.
    let right_interior = |m: usize| -> Result<MirrorGate<T>> {
        let a = work.tensor(m);
        let (l, _, r) = a.dim();
        let dim = 1usize << (n_d + 1);
        let mut cols = Vec::with_capacity(l);
        for i in 0..l {
            let mut col = vec![C::new(T::zero(), T::zero()); dim];
            for x in 0..2 {
                for j in 0..r {
                    col[x + (j << 1)] = a[(i, x, j)];
                }
            }
            cols.push((i, col));
        }
        Ok(MirrorGate {
            start: m,
            qubits: n_d + 1,
            role: GateRole::Right,
            matrix: complete_unitary(dim, &cols)?,
        })
    };

    // Left interior at site m: |0>|j> -> sum_{i,x} A[i,x,j] |i>|x>, with the
    // register j on the high bits of the span (input column j << 1).
    let left_interior = |m: usize| -> Result<MirrorGate<T>> {
        let a = work.tensor(m);
        let (l, _, r) = a.dim();
        let dim = 1usize << (n_d + 1);
        let mut cols = Vec::with_capacity(r);
        for j in 0..r {
            let mut col = vec![C::new(T::zero(), T::zero()); dim];
            for i in 0..l {
                for x in 0..2 {
                    col[i + (x << n_d)] = a[(i, x, j)];
                }
            }
            cols.push((j << 1, col));
        }
        Ok(MirrorGate {
            start: m - n_d,
            qubits: n_d + 1,
            role: GateRole::Left,
            matrix: complete_unitary(dim, &cols)?,
        })
    };

    // Right edge: contract sites n-nD..n; |i>|0> -> sum (A...A) |x_0..x_nD>.
    let right_edge = {
        let first = n - n_d;
        let a0 = work.tensor(first);
        let (l0, _, r0) = a0.dim();
        // acc rows are (i * 2^t + xs); xs is little-endian within the span.
        let mut acc = Array2::from_elem((l0 * 2, r0), C::new(T::zero(), T::zero()));
        for i in 0..l0 {
            for x in 0..2 {
                for j in 0..r0 {
                    acc[(i * 2 + x, j)] = a0[(i, x, j)];
                }
            }
        }
        let mut width = 2usize;
        for site in first + 1..=n {
            let a = work.tensor(site);
            let (_, _, r2) = a.dim();
            let rows = acc.nrows();
            let mut next = Array2::from_elem((rows * 2, r2), C::new(T::zero(), T::zero()));
            for x in 0..2 {
                let block = acc.dot(&a.slice(s![.., x, ..]));
                for row in 0..rows {
                    let i = row / width;
                    let xs = row % width;
                    for j in 0..r2 {
                        next[(i * (2 * width) + x * width + xs, j)] = block[(row, j)];
                    }
                }
            }
            acc = next;
            width *= 2;
        }
        debug_assert_eq!(acc.ncols(), 1);
        let dim = 1usize << (n_d + 1);
        let mut cols = Vec::with_capacity(l0);
        for i in 0..l0 {
            let col: Vec<C<T>> = (0..dim).map(|xs| acc[(i * dim + xs, 0)]).collect();
            cols.push((i, col));
        }
        MirrorGate {
            start: first,
            qubits: n_d + 1,
            role: GateRole::RightEdge,
            matrix: complete_unitary(dim, &cols)?,
        }
    };

    // Left edge: contract sites 1..nD+1; |0>|j> -> sum (A...A) |x_1..x_last>.
    let left_edge = {
        let last = n_d + 1;
        let mut acc = Array2::from_elem((1, 1), C::new(T::one(), T::zero()));
        for site in 1..=last {
            let a = work.tensor(site);
            let (_, _, r) = a.dim();
            let rows = acc.nrows();
            let mut next = Array2::from_elem((rows * 2, r), C::new(T::zero(), T::zero()));
            for x in 0..2 {
                let block = acc.dot(&a.slice(s![.., x, ..]));
                for row in 0..rows {
                    for j in 0..r {
                        next[(row + rows * x, j)] = block[(row, j)];
                    }
                }
            }
            acc = next;
        }
        let r_last = acc.ncols();
        let dim = 1usize << (n_d + 1);
        let mut cols = Vec::with_capacity(r_last);
        for j in 0..r_last {
            let col: Vec<C<T>> = (0..dim).map(|xs| acc[(xs, j)]).collect();
            cols.push((j << 1, col));
        }
        MirrorGate {
            start: 1,
            qubits: n_d + 1,
            role: GateRole::LeftEdge,
            matrix: complete_unitary(dim, &cols)?,
        }
    };

    let mut right_gates: Vec<MirrorGate<T>> = Vec::new();
    for m in n_c + 1..=n - n_d - 1 {
        right_gates.push(right_interior(m)?);
    }
    right_gates.push(right_edge);
    let mut left_gates: Vec<MirrorGate<T>> = Vec::new();
    for m in (n_d + 2..=n_c - 1).rev() {
        left_gates.push(left_interior(m)?);
    }
    left_gates.push(left_edge);

    let mut gates = vec![center_gate];
    let steps = right_gates.len().max(left_gates.len());
    let mut right_iter = right_gates.into_iter();
    let mut left_iter = left_gates.into_iter();
    for _ in 0..steps {
        if let Some(g) = right_iter.next() {
            gates.push(g);
        }
        if let Some(g) = left_iter.next() {
            gates.push(g);
        }
    }
    Ok(MirrorCircuit { n, d: mps.bond_cap(), n_d, n_c, gates })
}

impl<T: Real> MirrorCircuit<T> {
    /// `C_D |0^n>` as a dense state.
    pub fn apply_to_zero(&self, limit: usize) -> Result<DenseState<T>> {
        if self.n > limit {
            return Err(Error::Capacity { n: self.n, limit });
        }
        let mut state = DenseState::zero(self.n);
        for g in &self.gates {
            state.apply_contiguous(g.start, g.qubits, &g.matrix);
        }
        Ok(state)
    }

    /// The inverse circuit: daggered gates in reverse order (outermost first,
    /// working inward).
    pub fn inverted(&self) -> MirrorCircuit<T> {
        let gates = self
            .gates
            .iter()
            .rev()
            .map(|g| MirrorGate {
                start: g.start,
                qubits: g.qubits,
                role: g.role,
                matrix: dagger(&g.matrix.view()),
            })
            .collect();
        MirrorCircuit { n: self.n, d: self.d, n_d: self.n_d, n_c: self.n_c, gates }
    }

    /// Apply this circuit's gates, in stored order, to an arbitrary state.
    pub fn apply_to(&self, state: &mut DenseState<T>) -> Result<()> {
        if state.n() != self.n {
            return Err(Error::SizeMismatch(state.n(), self.n));
        }
        for g in &self.gates {
            state.apply_contiguous(g.start, g.qubits, &g.matrix);
        }
        Ok(())
    }

    /// Largest unitarity deviation among the gates.
    pub fn worst_gate_deviation(&self) -> T {
        self.gates
            .iter()
            .map(|g| unitarity_deviation(&g.matrix.view()))
            .fold(T::zero(), |a, b| a.max(b))
    }

    /// Mirror fidelity `F = |<0^n| C_D^dag |psi>|^2`.
    pub fn fidelity(&self, psi: &DenseState<T>) -> Result<f64> {
        let mut state = psi.clone();
        self.inverted().apply_to(&mut state)?;
        Ok(crate::scalar::norm_sqr(state.amplitudes()[0]).as_f64())
    }

    /// Binomial estimate of the fidelity from `shots` all-zeros measurements
    /// of `C_D^dag |psi>`. Returns `(estimate, standard error)`.
    pub fn fidelity_shots(
        &self,
        psi: &DenseState<T>,
        shots: usize,
        rng: &mut impl Rng,
    ) -> Result<(f64, f64)> {
        if shots == 0 {
            return Err(Error::Invalid("fidelity_shots needs at least one shot".into()));
        }
        let p0 = self.fidelity(psi)?;
        let hits = if p0 < crate::outcome::DETERMINISTIC_TOL {
            0
        } else if p0 > 1.0 - crate::outcome::DETERMINISTIC_TOL {
            shots
        } else {
            (0..shots).filter(|_| rng.random::<f64>() < p0).count()
        };
        let est = hits as f64 / shots as f64;
        let se = (est * (1.0 - est) / shots as f64).sqrt();
        Ok((est, se))
    }

    /// JSON gate list `{span, role, matrix}` for downstream transpilers.
    pub fn to_json(&self) -> String {
        let wire = MirrorJson {
            version: 1,
            n: self.n,
            d: self.d,
            n_d: self.n_d,
            n_c: self.n_c,
            gates: self
                .gates
                .iter()
                .map(|g| MirrorGateJson {
                    span: [g.start, g.start + g.qubits - 1],
                    role: g.role,
                    matrix: (0..g.matrix.nrows())
                        .map(|i| {
                            (0..g.matrix.ncols())
                                .map(|j| {
                                    let z = g.matrix[(i, j)];
                                    [z.re.as_f64(), z.im.as_f64()]
                                })
                                .collect()
                        })
                        .collect(),
                })
                .collect(),
        };
        serde_json::to_string(&wire).expect("mirror serialization cannot fail")
    }
}

#[derive(Serialize, Deserialize)]
struct MirrorJson {
    version: u32,
    n: usize,
    d: usize,
    n_d: usize,
    n_c: usize,
    gates: Vec<MirrorGateJson>,
}

#[derive(Serialize, Deserialize)]
struct MirrorGateJson {
    span: [usize; 2],
    role: GateRole,
    matrix: Vec<Vec<[f64; 2]>>,
}
