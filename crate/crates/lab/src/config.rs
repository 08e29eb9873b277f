//! Sweep configuration: the JSON schema consumed by the CLI, plus cell
//! enumeration.

use mirror_core::circuit::GateSet;
use mirror_core::error::{Error, Result};
use serde::{Deserialize, Serialize};

/// Bond dimension entry: a fixed value or the symbolic `"N"` (D = N).
#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub enum DSpec {
    Fixed(usize),
    EqualN,
}

impl Serialize for DSpec {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            DSpec::Fixed(d) => s.serialize_u64(*d as u64),
            DSpec::EqualN => s.serialize_str("N"),
        }
    }
}

impl<'de> Deserialize<'de> for DSpec {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let v = serde_json::Value::deserialize(d)?;
        match &v {
            serde_json::Value::Number(n) => n
                .as_u64()
                .filter(|&x| x >= 1)
                .map(|x| DSpec::Fixed(x as usize))
                .ok_or_else(|| D::Error::custom("bond dimension must be a positive integer")),
            serde_json::Value::String(s) if s.eq_ignore_ascii_case("n") => Ok(DSpec::EqualN),
            _ => Err(D::Error::custom("bond dimension must be an integer or \"N\"")),
        }
    }
}

impl DSpec {
    pub fn resolve(self, n: usize) -> usize {
        match self {
            DSpec::Fixed(d) => d,
            DSpec::EqualN => n,
        }
    }
}

/// Which exact backend generates the measurement record and the reference
/// state. `Auto`: stabilizer for Clifford circuits, dense for Haar within
/// the dense limit, full-bond MPS beyond it.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum BackendPolicy {
    Auto,
    Dense,
    Stabilizer,
    MpsFull,
}

/// How the mirror fidelity is obtained.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum FidelityMethodSpec {
    Auto,
    ExactOverlap,
    MirrorDense,
    McStabilizer,
    Shots,
}

fn default_samples() -> usize {
    1
}
fn default_dense_limit() -> usize {
    mirror_core::dense::DEFAULT_DENSE_LIMIT
}
fn default_mc_samples() -> usize {
    4096
}
fn default_shots() -> usize {
    4096
}
fn default_true() -> bool {
    true
}
fn default_backend() -> BackendPolicy {
    BackendPolicy::Auto
}
fn default_fidelity() -> FidelityMethodSpec {
    FidelityMethodSpec::Auto
}
fn default_eps_threshold() -> f64 {
    mirror_core::bounds::DEFAULT_EPS_THRESHOLD
}
fn default_output_dir() -> String {
    "out".into()
}

/// Sweep configuration. Lists are swept in nested order n -> d -> p; layer
/// count defaults to `L = n`.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub gate_set: GateSet,
    pub n: Vec<usize>,
    pub d: Vec<DSpec>,
    pub p: Vec<f64>,
    #[serde(default)]
    pub layers: Option<usize>,
    #[serde(default = "default_samples")]
    pub samples: usize,
    pub master_seed: u64,
    #[serde(default = "default_backend")]
    pub backend: BackendPolicy,
    #[serde(default = "default_fidelity")]
    pub fidelity: FidelityMethodSpec,
    #[serde(default = "default_mc_samples")]
    pub mc_samples: usize,
    #[serde(default = "default_shots")]
    pub shots: usize,
    #[serde(default = "default_dense_limit")]
    pub dense_limit: usize,
    /// When false, `wall_ms` is reported as 0 so output is byte-reproducible.
    #[serde(default = "default_true")]
    pub record_timing: bool,
    #[serde(default = "default_eps_threshold")]
    pub eps_threshold: f64,
    /// Optional reference critical point drawn as a vertical marker.
    #[serde(default)]
    pub pc_reference: Option<f64>,
    #[serde(default = "default_output_dir")]
    pub output_dir: String,
}

/// One grid cell of a sweep.
#[derive(Copy, Clone, Debug, PartialEq)]
pub struct Cell {
    pub index: usize,
    pub gate_set: GateSet,
    pub n: usize,
    pub l: usize,
    pub p: f64,
    pub d: usize,
}

impl ExperimentConfig {
    pub fn from_json(text: &str) -> Result<Self> {
        let cfg: ExperimentConfig = serde_json::from_str(text)?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        if self.n.is_empty() || self.d.is_empty() || self.p.is_empty() {
            return Err(Error::Invalid("n, d, and p grids must be nonempty".into()));
        }
        if self.samples == 0 {
            return Err(Error::Invalid("samples must be at least 1".into()));
        }
        if self.p.iter().any(|&p| !(0.0..=1.0).contains(&p)) {
            return Err(Error::Invalid("measurement rates must lie in [0, 1]".into()));
        }
        if self.backend == BackendPolicy::Stabilizer && self.gate_set != GateSet::Clifford {
            return Err(Error::Invalid(
                "the stabilizer backend requires the clifford gate set".into(),
            ));
        }
        if (self.fidelity == FidelityMethodSpec::McStabilizer)
            && self.gate_set != GateSet::Clifford
        {
            return Err(Error::Invalid(
                "mc-stabilizer fidelity requires the clifford gate set".into(),
            ));
        }
        Ok(())
    }

    /// All sweep cells, enumerated n -> d -> p.
    pub fn cells(&self) -> Vec<Cell> {
        let mut out = Vec::new();
        let mut index = 0usize;
        for &n in &self.n {
            let l = self.layers.unwrap_or(n);
            for &d in &self.d {
                for &p in &self.p {
                    out.push(Cell { index, gate_set: self.gate_set, n, l, p, d: d.resolve(n) });
                    index += 1;
                }
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_minimal_config() {
        let text = r#"{
            "gate_set": "clifford",
            "n": [8],
            "d": [2, "N"],
            "p": [0.1, 0.3],
            "samples": 5,
            "master_seed": 7
        }"#;
        let cfg = ExperimentConfig::from_json(text).unwrap();
        assert_eq!(cfg.samples, 5);
        assert_eq!(cfg.dense_limit, 20);
        let cells = cfg.cells();
        assert_eq!(cells.len(), 4);
        assert_eq!(cells[0].d, 2);
        assert_eq!(cells[2].d, 8); // "N" resolves per n
        assert_eq!(cells[3].index, 3);
        assert_eq!(cells[0].l, 8); // L defaults to n
    }

    #[test]
    fn rejects_bad_configs() {
        let bad = r#"{"gate_set":"haar","n":[],"d":[1],"p":[0.1],"master_seed":0}"#;
        assert!(ExperimentConfig::from_json(bad).is_err());
        let bad = r#"{"gate_set":"haar","n":[4],"d":[1],"p":[0.1],"master_seed":0,"backend":"stabilizer"}"#;
        assert!(ExperimentConfig::from_json(bad).is_err());
        let bad = r#"{"gate_set":"haar","n":[4],"d":[1],"p":[1.5],"master_seed":0}"#;
        assert!(ExperimentConfig::from_json(bad).is_err());
        let bad = r#"{"gate_set":"haar","n":[4],"d":[1],"p":[0.1],"master_seed":0,"unknown_knob":1}"#;
        let err = ExperimentConfig::from_json(bad).unwrap_err();
        assert!(err.to_string().contains("unknown_knob"));
    }
}
