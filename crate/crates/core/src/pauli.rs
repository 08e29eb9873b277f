//! Signed Pauli strings over bit-packed GF(2) symplectic coordinates.
//!
//! A string is stored in "sigma form": the operator is
//! `i^phase · ⊗_q sigma(x_q, z_q)` with `sigma(1,1) = Y`. Hermitian strings
//! have an even phase exponent. Conversions to the `X^x Z^z` normal form
//! (`Y = i X Z`) happen inside the product so that sign tracking is exact.

use crate::scalar::{Real, C};

/// Phase increment (mod 4, sigma form) picked up when multiplying two Pauli
/// words `a * b` restricted to one 64-qubit block, excluding the operands'
/// own phases.
pub fn word_product_phase(xa: u64, za: u64, xb: u64, zb: u64) -> u8 {
    let wa = (xa & za).count_ones();
    let wb = (xb & zb).count_ones();
    let anti = (za & xb).count_ones();
    let wab = ((xa ^ xb) & (za ^ zb)).count_ones();
    (((wa + wb + 2 * anti) as i64 - wab as i64).rem_euclid(4)) as u8
}

/// A signed multi-qubit Pauli string. Qubits are 1-based.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PauliString {
    n: usize,
    x: Vec<u64>,
    z: Vec<u64>,
    /// Power of `i` in the sigma-form prefactor, mod 4.
    phase: u8,
}

impl PauliString {
    pub fn identity(n: usize) -> Self {
        let words = n.div_ceil(64);
        Self { n, x: vec![0; words], z: vec![0; words], phase: 0 }
    }

    pub fn from_words(n: usize, x: Vec<u64>, z: Vec<u64>, phase: u8) -> Self {
        assert_eq!(x.len(), n.div_ceil(64));
        assert_eq!(z.len(), x.len());
        Self { n, x, z, phase: phase % 4 }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn phase(&self) -> u8 {
        self.phase
    }

    pub fn is_hermitian(&self) -> bool {
        self.phase.is_multiple_of(2)
    }

    /// +1 / -1 prefactor of a Hermitian string.
    pub fn sign(&self) -> i8 {
        debug_assert!(self.is_hermitian());
        if self.phase == 0 {
            1
        } else {
            -1
        }
    }

    pub fn is_identity_op(&self) -> bool {
        self.x.iter().all(|&w| w == 0) && self.z.iter().all(|&w| w == 0)
    }

    /// `(x, z)` bits of qubit `q` (1-based).
    pub fn site(&self, q: usize) -> (bool, bool) {
        let idx = q - 1;
        let w = idx / 64;
        let b = idx % 64;
        ((self.x[w] >> b) & 1 == 1, (self.z[w] >> b) & 1 == 1)
    }

    pub fn set_site(&mut self, q: usize, x: bool, z: bool) {
        let idx = q - 1;
        let (w, b) = (idx / 64, idx % 64);
        self.x[w] = (self.x[w] & !(1 << b)) | ((x as u64) << b);
        self.z[w] = (self.z[w] & !(1 << b)) | ((z as u64) << b);
    }

    /// In-place product `self <- self * rhs`.
    pub fn mul_assign(&mut self, rhs: &PauliString) {
        assert_eq!(self.n, rhs.n);
        let mut phase = self.phase + rhs.phase;
        for w in 0..self.x.len() {
            phase = (phase + word_product_phase(self.x[w], self.z[w], rhs.x[w], rhs.z[w])) % 4;
            self.x[w] ^= rhs.x[w];
            self.z[w] ^= rhs.z[w];
        }
        self.phase = phase % 4;
    }

    /// Apply to a little-endian dense amplitude vector.
    ///
    /// `g |k> = i^{phase + |x&z|} (-1)^{|z & k|} |k ^ x>`.
    pub fn apply_dense<T: Real>(&self, amps: &[C<T>]) -> Vec<C<T>> {
        assert_eq!(amps.len(), 1usize << self.n);
        let xz = self
            .x
            .iter()
            .zip(self.z.iter())
            .map(|(a, b)| (a & b).count_ones())
            .sum::<u32>();
        let global = phase_value::<T>((self.phase as u32 + xz) % 4);
        let mut out = vec![C::new(T::zero(), T::zero()); amps.len()];
        // Single-word fast path: n <= 64 always holds for the backends here.
        let xm = self.x[0];
        let zm = self.z[0];
        for (k, &a) in amps.iter().enumerate() {
            let target = k ^ xm as usize;
            let neg = ((k as u64 & zm).count_ones() & 1) == 1;
            let mut v = global * a;
            if neg {
                v = -v;
            }
            out[target] = v;
        }
        out
    }

    /// Single-qubit factor at `q` as a 2x2 matrix (sigma form, no phase).
    pub fn site_matrix<T: Real>(&self, q: usize) -> [[C<T>; 2]; 2] {
        let (x, z) = self.site(q);
        sigma_matrix(x, z)
    }

    /// Scalar `i^{phase}` prefactor of the whole string.
    pub fn phase_factor<T: Real>(&self) -> C<T> {
        phase_value::<T>(self.phase as u32)
    }
}

fn phase_value<T: Real>(p: u32) -> C<T> {
    match p % 4 {
        0 => C::new(T::one(), T::zero()),
        1 => C::new(T::zero(), T::one()),
        2 => C::new(-T::one(), T::zero()),
        _ => C::new(T::zero(), -T::one()),
    }
}

/// 2x2 matrix of `sigma(x, z)`: I, X, Z, or Y.
pub fn sigma_matrix<T: Real>(x: bool, z: bool) -> [[C<T>; 2]; 2] {
    let zero = C::new(T::zero(), T::zero());
    let one = C::new(T::one(), T::zero());
    match (x, z) {
        (false, false) => [[one, zero], [zero, one]],
        (true, false) => [[zero, one], [one, zero]],
        (false, true) => [[one, zero], [zero, -one]],
        (true, true) => [[zero, C::new(T::zero(), -T::one())], [C::new(T::zero(), T::one()), zero]],
    }
}
