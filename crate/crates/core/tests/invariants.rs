//! Property tests for the structural invariants of the circuit model, the
//! spectrum arithmetic, and the canonical-form contract.

use mirror_core::bounds::binary_entropy;
use mirror_core::circuit::{brickwork_pairs, measured_count, sample_instance, GateSet};
use mirror_core::dense::SchmidtSpectrum;
use mirror_core::mps::Mps;
use mirror_core::pauli::PauliString;
use mirror_core::rng::{instance_rng, Stream};
use proptest::prelude::*;

fn normalized_spectrum(len: usize, raw: Vec<f64>) -> SchmidtSpectrum<f64> {
    let mut values: Vec<f64> = raw.into_iter().take(len).map(|x| x.abs() + 1e-12).collect();
    let total: f64 = values.iter().sum();
    for v in values.iter_mut() {
        *v /= total;
    }
    values.sort_by(|a, b| b.partial_cmp(a).unwrap());
    SchmidtSpectrum { cut: 1, values }
}

proptest! {
    #[test]
    fn schmidt_error_is_complement_of_top_weight(
        raw in prop::collection::vec(0.0f64..1.0, 1..40),
        d in 0usize..45,
    ) {
        let len = raw.len();
        let spec = normalized_spectrum(len, raw);
        let direct: f64 = spec.values.iter().skip(d).sum();
        let complement = 1.0 - spec.values.iter().take(d).sum::<f64>();
        prop_assert!((spec.schmidt_error(d) - direct).abs() < 1e-12);
        prop_assert!((spec.schmidt_error(d) - complement).abs() < 1e-12);
    }

    #[test]
    fn entropy_matches_naive_summation(raw in prop::collection::vec(0.0f64..1.0, 1..60)) {
        let len = raw.len();
        let spec = normalized_spectrum(len, raw);
        let naive: f64 = spec.values.iter().map(|&mu| if mu > 0.0 { -mu * mu.ln() } else { 0.0 }).sum();
        prop_assert!((spec.entropy() - naive).abs() < 1e-12);
    }

    #[test]
    fn brickwork_pairs_are_disjoint_adjacent_and_cover_bonds(n in 2usize..40) {
        let mut bonds = std::collections::HashSet::new();
        for layer in [1usize, 2] {
            let pairs = brickwork_pairs(n, layer).unwrap();
            let mut used = std::collections::HashSet::new();
            for (q1, q2) in pairs {
                prop_assert_eq!(q2, q1 + 1);
                prop_assert!(q1 >= 1 && q2 <= n);
                prop_assert!(used.insert(q1));
                prop_assert!(used.insert(q2));
                bonds.insert(q1);
            }
        }
        prop_assert_eq!(bonds.len(), n - 1);
    }

    #[test]
    fn measured_count_follows_round_half_even(n in 1usize..64, p in 0.0f64..=1.0) {
        let k = measured_count(n, p);
        prop_assert!(k <= n);
        prop_assert_eq!(k as f64, (p * n as f64).round_ties_even().min(n as f64));
    }

    #[test]
    fn binary_entropy_is_symmetric(eps in 0.0f64..=1.0) {
        let a = binary_entropy(eps).unwrap();
        let b = binary_entropy(1.0 - eps).unwrap();
        prop_assert!((a - b).abs() < 1e-12);
        prop_assert!((0.0..=std::f64::consts::LN_2 + 1e-12).contains(&a));
    }

    #[test]
    fn canonical_form_survives_random_operation_sequences(
        seed in 0u64..500,
        ops in prop::collection::vec((0usize..3, 0usize..8), 1..12),
    ) {
        let n = 6;
        let mut rng = instance_rng(seed, Stream::Circuit);
        let mut mps = Mps::<f64>::random(n, 4, &mut rng).unwrap();
        for (kind, site) in ops {
            let q = 1 + site % n;
            match kind {
                0 => mps.move_center(q),
                1 => {
                    let q1 = 1 + site % (n - 1);
                    let gate = mirror_core::circuit::GateSpec {
                        layer: 1,
                        q1,
                        q2: q1 + 1,
                        matrix: mirror_core::circuit::sample_haar_gate(&mut rng),
                        clifford_tag: None,
                    };
                    mps.apply_projected_gate(&gate, None, None).unwrap();
                }
                _ => {
                    let p1 = mps.prob_one(q);
                    let bit = p1 > 0.5;
                    let _ = mps.project_site(q, bit);
                }
            }
            prop_assert!(mps.audit_canonical(1e-8).is_ok());
            prop_assert!((mps.norm() - 1.0).abs() < 1e-9);
        }
    }

    #[test]
    fn pauli_expectation_is_gauge_invariant(seed in 0u64..300, center in 1usize..=8) {
        let mut rng = instance_rng(seed, Stream::Circuit);
        let mut mps = Mps::<f64>::random(8, 4, &mut rng).unwrap();
        let mut g = PauliString::identity(8);
        let mut bits = seed.wrapping_mul(0x9e3779b97f4a7c15);
        for q in 1..=8 {
            g.set_site(q, bits & 1 == 1, bits & 2 == 2);
            bits >>= 2;
        }
        let before = mps.pauli_expectation(&g);
        mps.move_center(center);
        let after = mps.pauli_expectation(&g);
        prop_assert!((before - after).abs() < 1e-10);
    }

    #[test]
    fn instances_serialize_canonically(seed in 0u64..200) {
        let gate_set = if seed % 2 == 0 { GateSet::Haar } else { GateSet::Clifford };
        let inst = sample_instance(gate_set, 4, 2, 0.5, seed).unwrap();
        let text = inst.to_json();
        let back = mirror_core::circuit::CircuitInstance::from_json(&text).unwrap();
        prop_assert_eq!(&inst, &back);
        prop_assert_eq!(text, back.to_json());
    }
}
