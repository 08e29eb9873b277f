//! CSV emission and loading for sweep results.
//!
//! Floats are written with Rust's shortest round-trip formatting, so a file
//! written from the same rows is byte-identical and loads back exactly.

use std::io::Write;
use std::path::Path;

use mirror_core::error::{Error, Result};

use crate::pipeline::ResultRow;

pub const CSV_HEADER: &str =
    "gate_set,N,L,p,D,sample,seed,F,F_err,method,eps_max,S_ub_F,S_ub_eps,S_lb_eps,S_exact,wall_ms";

fn gate_set_label(gs: mirror_core::circuit::GateSet) -> &'static str {
    match gs {
        mirror_core::circuit::GateSet::Haar => "haar",
        mirror_core::circuit::GateSet::Clifford => "clifford",
    }
}

/// Render rows as CSV text.
pub fn to_csv(rows: &[ResultRow]) -> String {
    let mut out = String::with_capacity(64 * (rows.len() + 1));
    out.push_str(CSV_HEADER);
    out.push('\n');
    for r in rows {
        let f_err = r.f_err.map(|e| e.to_string()).unwrap_or_default();
        out.push_str(&format!(
            "{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{}\n",
            gate_set_label(r.cell.gate_set),
            r.cell.n,
            r.cell.l,
            r.cell.p,
            r.cell.d,
            r.sample,
            r.seed,
            r.f,
            f_err,
            r.method,
            r.eps_max,
            r.s_ub_f,
            r.s_ub_eps_half,
            r.s_lb_eps_half,
            r.s_exact_half,
            r.wall_ms,
        ));
    }
    out
}

pub fn write_csv(rows: &[ResultRow], path: &Path) -> Result<()> {
    let mut file = std::fs::File::create(path)?;
    file.write_all(to_csv(rows).as_bytes())?;
    Ok(())
}

/// A parsed CSV row; enough to recompute any aggregate.
#[derive(Clone, Debug, PartialEq)]
pub struct LoadedRow {
    pub gate_set: String,
    pub n: usize,
    pub l: usize,
    pub p: f64,
    pub d: usize,
    pub sample: usize,
    pub seed: u64,
    pub f: f64,
    pub f_err: Option<f64>,
    pub method: String,
    pub eps_max: f64,
    pub s_ub_f: f64,
    pub s_ub_eps: f64,
    pub s_lb_eps: f64,
    pub s_exact: f64,
    pub wall_ms: u64,
}

pub fn parse_csv(text: &str) -> Result<Vec<LoadedRow>> {
    let mut lines = text.lines();
    let header = lines.next().ok_or_else(|| Error::Invalid("empty CSV".into()))?;
    if header != CSV_HEADER {
        return Err(Error::Invalid(format!("unexpected CSV header: {header}")));
    }
    let mut rows = Vec::new();
    for (lineno, line) in lines.enumerate() {
        if line.is_empty() {
            continue;
        }
        let parts: Vec<&str> = line.split(',').collect();
        if parts.len() != 16 {
            return Err(Error::Invalid(format!(
                "line {}: expected 16 fields, got {}",
                lineno + 2,
                parts.len()
            )));
        }
        let field = |i: usize| -> &str { parts[i] };
        let parse_err = |name: &str, v: &str| {
            Error::Invalid(format!("line {}: bad {name}: {v:?}", lineno + 2))
        };
        rows.push(LoadedRow {
            gate_set: field(0).to_string(),
            n: field(1).parse().map_err(|_| parse_err("N", field(1)))?,
            l: field(2).parse().map_err(|_| parse_err("L", field(2)))?,
            p: field(3).parse().map_err(|_| parse_err("p", field(3)))?,
            d: field(4).parse().map_err(|_| parse_err("D", field(4)))?,
            sample: field(5).parse().map_err(|_| parse_err("sample", field(5)))?,
            seed: field(6).parse().map_err(|_| parse_err("seed", field(6)))?,
            f: field(7).parse().map_err(|_| parse_err("F", field(7)))?,
            f_err: if field(8).is_empty() {
                None
            } else {
                Some(field(8).parse().map_err(|_| parse_err("F_err", field(8)))?)
            },
            method: field(9).to_string(),
            eps_max: field(10).parse().map_err(|_| parse_err("eps_max", field(10)))?,
            s_ub_f: field(11).parse().map_err(|_| parse_err("S_ub_F", field(11)))?,
            s_ub_eps: field(12).parse().map_err(|_| parse_err("S_ub_eps", field(12)))?,
            s_lb_eps: field(13).parse().map_err(|_| parse_err("S_lb_eps", field(13)))?,
            s_exact: field(14).parse().map_err(|_| parse_err("S_exact", field(14)))?,
            wall_ms: field(15).parse().map_err(|_| parse_err("wall_ms", field(15)))?,
        });
    }
    Ok(rows)
}

pub fn load_csv(path: &Path) -> Result<Vec<LoadedRow>> {
    parse_csv(&std::fs::read_to_string(path)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::{BackendPolicy, DSpec, ExperimentConfig, FidelityMethodSpec};
    use crate::sweep::run_sweep;
    use mirror_core::circuit::GateSet;

    #[test]
    fn csv_roundtrips_exactly() {
        let cfg = ExperimentConfig {
            gate_set: GateSet::Haar,
            n: vec![5],
            d: vec![DSpec::Fixed(2)],
            p: vec![0.25],
            layers: None,
            samples: 4,
            master_seed: 13,
            backend: BackendPolicy::Auto,
            fidelity: FidelityMethodSpec::Auto,
            mc_samples: 64,
            shots: 64,
            dense_limit: 20,
            record_timing: false,
            eps_threshold: 0.05,
            pc_reference: None,
            output_dir: "out".into(),
        };
        let res = run_sweep(&cfg).unwrap();
        let text = to_csv(&res.rows);
        let loaded = parse_csv(&text).unwrap();
        assert_eq!(loaded.len(), res.rows.len());
        for (raw, parsed) in res.rows.iter().zip(loaded.iter()) {
            assert_eq!(parsed.f, raw.f);
            assert_eq!(parsed.s_ub_f, raw.s_ub_f);
            assert_eq!(parsed.seed, raw.seed);
            assert_eq!(parsed.eps_max, raw.eps_max);
        }
        // identical aggregate after a write/load cycle
        let mean_raw: f64 =
            res.rows.iter().map(|r| r.f).sum::<f64>() / res.rows.len() as f64;
        let mean_loaded: f64 =
            loaded.iter().map(|r| r.f).sum::<f64>() / loaded.len() as f64;
        assert_eq!(mean_raw, mean_loaded);
    }

    #[test]
    fn bad_csv_is_rejected_with_position() {
        assert!(parse_csv("").is_err());
        let text = format!("{CSV_HEADER}\nhaar,4,4,0.1,2,0,1,bogus,,exact-overlap,0,0,0,0,0,0\n");
        let err = parse_csv(&text).unwrap_err();
        assert!(err.to_string().contains("line 2"));
        assert!(err.to_string().contains("bad F"));
    }
}
