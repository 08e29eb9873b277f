//! Frozen canonical circuit JSON: sampling with a fixed seed must reproduce
//! the committed bytes, and the bytes must parse back to the same instance.

use mirror_core::circuit::{sample_instance, CircuitInstance, GateSet};

#[test]
fn canonical_circuit_json_is_frozen() {
    let expected = include_str!("fixtures/circuit_n2_l1_seed7.json");
    let inst = sample_instance(GateSet::Haar, 2, 1, 0.5, 7).unwrap();
    assert_eq!(inst.to_json(), expected);
    let parsed = CircuitInstance::from_json(expected).unwrap();
    assert_eq!(parsed, inst);
}
