//! The two-qubit Clifford group: uniform sampling, exhaustive enumeration,
//! and synthesis of the 4x4 unitary from its tableau.
//!
//! An element is identified (mod global phase) by the images of the four
//! generators X1, Z1, X2, Z2 under conjugation: a symplectic transform of
//! GF(2)^4 together with one sign bit per generator. The symplectic group
//! Sp(4,2) has 720 elements, so the group mod phase has 720 * 16 = 11520.

use ndarray::Array2;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg::kron;
use crate::pauli::{sigma_matrix, PauliString};

/// Number of two-qubit Clifford elements modulo global phase.
pub const TWO_QUBIT_CLIFFORD_ORDER: usize = 11520;

const SP4_ORDER: usize = 720;

/// A signed two-qubit Pauli. `bits` packs (x1, z1, x2, z2) into bits 0..4.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Pauli2 {
    pub bits: u8,
    pub neg: bool,
}

impl Pauli2 {
    pub fn x1(self) -> bool {
        self.bits & 1 != 0
    }
    pub fn z1(self) -> bool {
        self.bits & 2 != 0
    }
    pub fn x2(self) -> bool {
        self.bits & 4 != 0
    }
    pub fn z2(self) -> bool {
        self.bits & 8 != 0
    }

    fn to_string_op(self) -> PauliString {
        let mut p = PauliString::identity(2);
        p.set_site(1, self.x1(), self.z1());
        p.set_site(2, self.x2(), self.z2());
        if self.neg {
            p.mul_assign(&PauliString::from_words(2, vec![0], vec![0], 2));
        }
        p
    }

    /// Dense 4x4 matrix in the `|q1 q2>` basis (q1 = most significant label,
    /// index = 2*x_{q1} + x_{q2}).
    pub fn matrix(self) -> Array2<Complex64> {
        let s1 = array2_from(sigma_matrix::<f64>(self.x1(), self.z1()));
        let s2 = array2_from(sigma_matrix::<f64>(self.x2(), self.z2()));
        let mut m = kron(&s1.view(), &s2.view());
        if self.neg {
            m.mapv_inplace(|z| -z);
        }
        m
    }
}

fn array2_from(m: [[Complex64; 2]; 2]) -> Array2<Complex64> {
    Array2::from_shape_fn((2, 2), |(i, j)| m[i][j])
}

/// Tableau of a two-qubit Clifford gate: images of X1, Z1, X2, Z2.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct CliffordTag {
    pub images: [Pauli2; 4],
}

/// Symplectic product on GF(2)^4 vectors packed as (x1, z1, x2, z2).
fn sp(u: u8, v: u8) -> u8 {
    let w = ((u & (v >> 1)) ^ ((u >> 1) & v)) & 0b0101;
    (w.count_ones() & 1) as u8
}

impl CliffordTag {
    /// Element `index` of the group (mod phase), `index < 11520`.
    ///
    /// The low factor enumerates a symplectic basis (f1, g1, f2, g2) of
    /// GF(2)^4 in a fixed nested order; the high four bits choose the signs.
    pub fn from_index(index: usize) -> Self {
        assert!(index < TWO_QUBIT_CLIFFORD_ORDER);
        let sym = index % SP4_ORDER;
        let signs = index / SP4_ORDER;
        let f1_choices: Vec<u8> = (1u8..16).collect();
        let f1 = f1_choices[sym % 15];
        let mut rem = sym / 15;
        let g1_choices: Vec<u8> = (0u8..16).filter(|&v| sp(f1, v) == 1).collect();
        debug_assert_eq!(g1_choices.len(), 8);
        let g1 = g1_choices[rem % 8];
        rem /= 8;
        let compl: Vec<u8> =
            (1u8..16).filter(|&v| sp(f1, v) == 0 && sp(g1, v) == 0).collect();
        debug_assert_eq!(compl.len(), 3);
        let f2 = compl[rem % 3];
        rem /= 3;
        let g2_choices: Vec<u8> = compl.iter().copied().filter(|&v| sp(f2, v) == 1).collect();
        debug_assert_eq!(g2_choices.len(), 2);
        let g2 = g2_choices[rem % 2];
        let vecs = [f1, g1, f2, g2];
        let images = std::array::from_fn(|k| Pauli2 {
            bits: vecs[k],
            neg: (signs >> k) & 1 == 1,
        });
        Self { images }
    }

    /// Image of an unsigned two-qubit Pauli (sigma form) under conjugation.
    /// Returns the resulting Pauli string on 2 qubits; its phase is 0 or 2.
    pub fn image_of(&self, bits: u8) -> PauliString {
        let x1 = bits & 1 != 0;
        let z1 = bits & 2 != 0;
        let x2 = bits & 4 != 0;
        let z2 = bits & 8 != 0;
        // sigma(x1,z1) ⊗ sigma(x2,z2) = i^{x1 z1 + x2 z2} X1^x1 Z1^z1 X2^x2 Z2^z2
        let lead = ((x1 && z1) as u8 + (x2 && z2) as u8) % 4;
        let mut acc = PauliString::from_words(2, vec![0], vec![0], lead);
        let gens = [x1, z1, x2, z2];
        for (k, &on) in gens.iter().enumerate() {
            if on {
                acc.mul_assign(&self.images[k].to_string_op());
            }
        }
        debug_assert!(acc.is_hermitian());
        acc
    }

    /// Canonical packed form, used for distinctness counting.
    pub fn canonical_key(&self) -> u32 {
        self.images.iter().enumerate().fold(0u32, |acc, (k, p)| {
            acc | ((p.bits as u32 | ((p.neg as u32) << 4)) << (5 * k))
        })
    }

    /// Synthesize the 4x4 unitary realizing this tableau, with the global
    /// phase fixed so the first nonzero entry (row-major) is real positive.
    pub fn matrix(&self) -> Array2<Complex64> {
        let img_z1 = self.images[1].matrix();
        let img_z2 = self.images[3].matrix();
        let img_x1 = self.images[0].matrix();
        let img_x2 = self.images[2].matrix();
        // Column 0 = U|00>, the state stabilized by the images of Z1 and Z2:
        // project a basis vector through (1 + img_Z1)/2 (1 + img_Z2)/2.
        let mut col0 = None;
        for k in 0..4 {
            let mut v = vec![Complex64::new(0.0, 0.0); 4];
            v[k] = Complex64::new(1.0, 0.0);
            let v = project_plus(&img_z1, &project_plus(&img_z2, &v));
            let norm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
            if norm > 0.3 {
                col0 = Some(v.iter().map(|z| z / norm).collect::<Vec<_>>());
                break;
            }
        }
        let col0 = col0.expect("stabilizer projector has a basis overlap >= 1/2");
        let mut u = Array2::from_elem((4, 4), Complex64::new(0.0, 0.0));
        for b in 0..4usize {
            let xq1 = b >> 1 & 1;
            let xq2 = b & 1;
            let mut col = col0.clone();
            if xq2 == 1 {
                col = matvec(&img_x2, &col);
            }
            if xq1 == 1 {
                col = matvec(&img_x1, &col);
            }
            for i in 0..4 {
                u[(i, b)] = col[i];
            }
        }
        canonical_phase(&mut u);
        u
    }

    /// Recover the tableau of a 4x4 Clifford unitary by conjugating the four
    /// generators and matching against the signed Pauli set.
    pub fn from_matrix(u: &Array2<Complex64>) -> Result<Self> {
        let udag = u.t().map(|z| z.conj());
        let mut images = [Pauli2 { bits: 0, neg: false }; 4];
        for (k, bits) in [1u8, 2, 4, 8].into_iter().enumerate() {
            let gen = (Pauli2 { bits, neg: false }).matrix();
            let conj = u.dot(&gen).dot(&udag);
            let mut found = None;
            'outer: for cand_bits in 1u8..16 {
                for neg in [false, true] {
                    let cand = Pauli2 { bits: cand_bits, neg };
                    let m = cand.matrix();
                    let dev = conj
                        .iter()
                        .zip(m.iter())
                        .map(|(a, b)| (a - b).norm())
                        .fold(0.0, f64::max);
                    if dev < 1e-8 {
                        found = Some(cand);
                        break 'outer;
                    }
                }
            }
            images[k] = found.ok_or_else(|| {
                Error::Invalid(format!(
                    "matrix does not conjugate generator {k} to a signed Pauli"
                ))
            })?;
        }
        Ok(Self { images })
    }
}

fn project_plus(g: &Array2<Complex64>, v: &[Complex64]) -> Vec<Complex64> {
    let gv = matvec(g, v);
    v.iter().zip(gv).map(|(a, b)| (a + b) * 0.5).collect()
}

fn matvec(m: &Array2<Complex64>, v: &[Complex64]) -> Vec<Complex64> {
    (0..m.nrows())
        .map(|i| (0..m.ncols()).map(|j| m[(i, j)] * v[j]).sum())
        .collect()
}

/// Rescale so the first entry with modulus above 1e-9 (row-major) is real
/// positive.
pub fn canonical_phase(u: &mut Array2<Complex64>) {
    for i in 0..u.nrows() {
        for j in 0..u.ncols() {
            let z = u[(i, j)];
            if z.norm() > 1e-9 {
                let phase = z / z.norm();
                let fix = phase.conj();
                u.mapv_inplace(|w| w * fix);
                return;
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::HashSet;

    #[test]
    fn enumeration_is_distinct_and_complete() {
        let mut seen = HashSet::new();
        for idx in 0..TWO_QUBIT_CLIFFORD_ORDER {
            let tag = CliffordTag::from_index(idx);
            assert!(seen.insert(tag.canonical_key()), "duplicate at {idx}");
        }
        assert_eq!(seen.len(), TWO_QUBIT_CLIFFORD_ORDER);
    }

    /// Independent oracle: the closure of {H1, H2, S1, S2, CNOT} tableaus
    /// under composition must have exactly 11520 elements and coincide with
    /// the enumerated set.
    #[test]
    fn enumeration_matches_generator_closure() {
        // Generator tableaus, written down directly from conjugation rules.
        let h1 = tag(&[(2, false), (1, false), (4, false), (8, false)]); // X1<->Z1
        let h2 = tag(&[(1, false), (2, false), (8, false), (4, false)]);
        let s1 = tag(&[(3, false), (2, false), (4, false), (8, false)]); // X1->Y1
        let s2 = tag(&[(1, false), (2, false), (12, false), (8, false)]);
        // CNOT (control 1, target 2): X1->X1X2, Z2->Z1Z2
        let cx = tag(&[(5, false), (2, false), (4, false), (10, false)]);
        let gens = [h1, h2, s1, s2, cx];

        let id = tag(&[(1, false), (2, false), (4, false), (8, false)]);
        let mut seen: HashSet<u32> = HashSet::new();
        seen.insert(id.canonical_key());
        let mut frontier = vec![id];
        while let Some(t) = frontier.pop() {
            for g in &gens {
                let comp = compose(g, &t);
                if seen.insert(comp.canonical_key()) {
                    frontier.push(comp);
                }
            }
        }
        assert_eq!(seen.len(), TWO_QUBIT_CLIFFORD_ORDER);
        for idx in 0..TWO_QUBIT_CLIFFORD_ORDER {
            assert!(seen.contains(&CliffordTag::from_index(idx).canonical_key()));
        }
    }

    fn tag(entries: &[(u8, bool)]) -> CliffordTag {
        CliffordTag {
            images: std::array::from_fn(|k| Pauli2 { bits: entries[k].0, neg: entries[k].1 }),
        }
    }

    /// Tableau of `a ∘ b` (apply b, then a).
    fn compose(a: &CliffordTag, b: &CliffordTag) -> CliffordTag {
        let images = std::array::from_fn(|k| {
            let mid = b.images[k];
            let img = a.image_of(mid.bits);
            let (x1, z1) = img.site(1);
            let (x2, z2) = img.site(2);
            let bits = x1 as u8 | (z1 as u8) << 1 | (x2 as u8) << 2 | (z2 as u8) << 3;
            let neg = (img.sign() < 0) ^ mid.neg;
            Pauli2 { bits, neg }
        });
        CliffordTag { images }
    }

    #[test]
    fn synthesis_matches_tableau_on_all_paulis() {
        for idx in (0..TWO_QUBIT_CLIFFORD_ORDER).step_by(397) {
            let t = CliffordTag::from_index(idx);
            let u = t.matrix();
            let udag = u.t().map(|z| z.conj());
            for bits in 1u8..16 {
                let p = (Pauli2 { bits, neg: false }).matrix();
                let conj = u.dot(&p).dot(&udag);
                let img = t.image_of(bits);
                let (x1, z1) = img.site(1);
                let (x2, z2) = img.site(2);
                let ibits = x1 as u8 | (z1 as u8) << 1 | (x2 as u8) << 2 | (z2 as u8) << 3;
                let expect = (Pauli2 { bits: ibits, neg: img.sign() < 0 }).matrix();
                let dev = conj
                    .iter()
                    .zip(expect.iter())
                    .map(|(a, b)| (a - b).norm())
                    .fold(0.0, f64::max);
                assert!(dev < 1e-10, "idx {idx} bits {bits} dev {dev}");
            }
        }
    }

    #[test]
    fn roundtrip_matrix_to_tag() {
        for idx in (0..TWO_QUBIT_CLIFFORD_ORDER).step_by(611) {
            let t = CliffordTag::from_index(idx);
            let u = t.matrix();
            let back = CliffordTag::from_matrix(&u).unwrap();
            assert_eq!(t, back, "idx {idx}");
        }
    }
}
