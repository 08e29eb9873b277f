//! Shared outcome-decision convention for projective measurements.
//!
//! Every backend decides measurement outcomes the same way so that records
//! are comparable across backends under a common RNG stream:
//!
//! * branch probabilities within `1e-12` of 0 or 1 are deterministic and
//!   consume no randomness;
//! * a probability within `1e-9` of 1/2 is snapped to exactly 1/2, which
//!   removes float noise from the Clifford case where the true value is
//!   exactly one half;
//! * otherwise exactly one uniform draw is consumed and the outcome is 1
//!   iff the draw is below P(1).

use rand::Rng;

/// Probabilities closer than this to 0 or 1 are treated as deterministic.
pub const DETERMINISTIC_TOL: f64 = 1e-12;

/// Probabilities this close to 1/2 are snapped to exactly 1/2.
pub const HALF_SNAP_TOL: f64 = 1e-9;

/// Decide a measurement outcome from P(outcome = 1).
pub fn decide_outcome(p1: f64, rng: &mut (impl Rng + ?Sized)) -> bool {
    if p1 < DETERMINISTIC_TOL {
        return false;
    }
    if p1 > 1.0 - DETERMINISTIC_TOL {
        return true;
    }
    let p1 = if (p1 - 0.5).abs() < HALF_SNAP_TOL { 0.5 } else { p1 };
    rng.random::<f64>() < p1
}
