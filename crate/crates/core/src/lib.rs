//! Classical emulation of monitored random circuits with MPS mirrors.
//!
//! The crate samples brickwork monitored circuits, simulates them exactly
//! (dense amplitudes or stabilizer tableau), rebuilds each trajectory as a
//! bond-limited matrix product state, converts the MPS into a unitary-only
//! mirror circuit, and turns the measured mirror fidelity and Schmidt errors
//! into rigorous entanglement-entropy bounds.
//!
//! Numeric kernels are generic over the real scalar ([`scalar::Real`]);
//! concrete `f64` aliases are exported below.

pub mod bounds;
pub mod circuit;
pub mod clifford;
pub mod dense;
pub mod error;
pub mod linalg;
pub mod mirror;
pub mod mps;
pub mod outcome;
pub mod pauli;
pub mod rng;
pub mod scalar;
pub mod stab;

pub use error::{Error, Result};
pub use scalar::Real;

/// Complex double — the default amplitude type.
pub type C64 = num_complex::Complex64;

/// Dense state in double precision.
pub type DenseState64 = dense::DenseState<f64>;

/// Schmidt spectrum in double precision.
pub type SchmidtSpectrum64 = dense::SchmidtSpectrum<f64>;

/// Matrix product state in double precision.
pub type Mps64 = mps::Mps<f64>;

/// Mirror circuit in double precision.
pub type MirrorCircuit64 = mirror::MirrorCircuit<f64>;
