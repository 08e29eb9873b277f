//! Command-line driver: sample circuits, run single instances, sweep grids,
//! convert MPS files into mirror circuits, and run the acceptance suites.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use mirror_core::circuit::{sample_instance, CircuitInstance, GateSet};
use mirror_core::error::Result;
use mirror_core::mirror::build_mirror;
use mirror_core::mps::Mps;

use mirror_lab::config::{DSpec, ExperimentConfig};
use mirror_lab::csvio::write_csv;

use mirror_lab::plot::write_plots;
use mirror_lab::sweep::{bound_curves, fidelity_curves, run_sweep};
use mirror_lab::verify::run_suites;

/// Environment variable overriding the output root directory.
const OUTPUT_ENV: &str = "MIRROR_LAB_OUT";

#[derive(Parser)]
#[command(name = "mirror-lab", version, about = "Monitored-circuit mirror experiments")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Sample a monitored-circuit instance and emit its canonical JSON.
    Sample {
        #[arg(long, value_parser = parse_gate_set)]
        gate_set: GateSet,
        #[arg(short, long)]
        n: usize,
        #[arg(short, long)]
        l: usize,
        #[arg(short, long)]
        p: f64,
        #[arg(long)]
        seed: u64,
        /// Output file; stdout when omitted.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run the full pipeline on one instance and print its report as JSON.
    Run {
        /// Circuit JSON produced by `sample`; when omitted an instance is
        /// sampled from the other flags.
        #[arg(long)]
        circuit: Option<PathBuf>,
        #[arg(long, value_parser = parse_gate_set, default_value = "haar")]
        gate_set: GateSet,
        #[arg(short, long, default_value_t = 8)]
        n: usize,
        #[arg(short, long)]
        l: Option<usize>,
        #[arg(short, long, default_value_t = 0.2)]
        p: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Bond dimension of the approximating MPS.
        #[arg(short, long, default_value_t = 4)]
        d: usize,
        /// Fidelity method: auto, exact-overlap, mirror-dense, mc-stabilizer, shots.
        #[arg(long, default_value = "auto")]
        fidelity: String,
        /// Also write the truncated MPS in the export format (header + blob).
        #[arg(long)]
        export_mps: Option<PathBuf>,
    },
    /// Run a sweep from a config file and write CSV plus SVG plots.
    Sweep {
        #[arg(long)]
        config: PathBuf,
        /// Override the output directory from the config file.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Override the sample count per grid cell.
        #[arg(long)]
        samples: Option<usize>,
        /// Override the master seed.
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Convert an exported MPS file into a mirror-circuit JSON gate list.
    Mirror {
        #[arg(long)]
        mps: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run acceptance suites (mirror, tebd, bounds, p1, backends, mc,
    /// extremal, sweep, determinism, all).
    Verify {
        #[arg(default_value = "all")]
        suite: String,
    },
}

fn parse_gate_set(s: &str) -> std::result::Result<GateSet, String> {
    match s.to_ascii_lowercase().as_str() {
        "haar" => Ok(GateSet::Haar),
        "clifford" => Ok(GateSet::Clifford),
        other => Err(format!("unknown gate set {other:?} (expected haar or clifford)")),
    }
}

fn output_root(cli_choice: Option<PathBuf>, config_dir: &str) -> PathBuf {
    cli_choice
        .or_else(|| std::env::var_os(OUTPUT_ENV).map(PathBuf::from))
        .unwrap_or_else(|| PathBuf::from(config_dir))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match dispatch(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}

fn dispatch(cli: Cli) -> Result<ExitCode> {
    match cli.command {
        Command::Sample { gate_set, n, l, p, seed, out } => {
            let instance = sample_instance(gate_set, n, l, p, seed)?;
            let text = instance.to_json();
            match out {
                Some(path) => std::fs::write(path, text)?,
                None => println!("{text}"),
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Run { circuit, gate_set, n, l, p, seed, d, fidelity, export_mps } => {
            let instance = match circuit {
                Some(path) => CircuitInstance::from_json(&std::fs::read_to_string(path)?)?,
                None => sample_instance(gate_set, n, l.unwrap_or(n), p, seed)?,
            };
            let cfg = ExperimentConfig {
                gate_set: instance.gate_set,
                n: vec![instance.n],
                d: vec![DSpec::Fixed(d)],
                p: vec![instance.p],
                layers: Some(instance.l),
                samples: 1,
                master_seed: instance.seed,
                backend: mirror_lab::config::BackendPolicy::Auto,
                fidelity: parse_fidelity(&fidelity)?,
                mc_samples: 4096,
                shots: 4096,
                dense_limit: mirror_core::dense::DEFAULT_DENSE_LIMIT,
                record_timing: true,
                eps_threshold: mirror_core::bounds::DEFAULT_EPS_THRESHOLD,
                pc_reference: None,
                output_dir: "out".into(),
            };
            let (row, mps) = mirror_lab::pipeline::run_loaded_instance(&cfg, instance, d)?;
            if let Some(path) = export_mps {
                let mut file = std::fs::File::create(path)?;
                mps.export(&mut file)?;
            }
            println!("{}", serde_json::to_string_pretty(&row.report)?);
            Ok(ExitCode::SUCCESS)
        }
        Command::Sweep { config, out, samples, seed } => {
            let mut cfg = ExperimentConfig::from_json(&std::fs::read_to_string(config)?)?;
            if let Some(s) = samples {
                cfg.samples = s;
            }
            if let Some(s) = seed {
                cfg.master_seed = s;
            }
            let dir = output_root(out, &cfg.output_dir);
            std::fs::create_dir_all(&dir)?;
            let sweep = run_sweep(&cfg)?;
            if !sweep.failures.is_empty() {
                eprintln!("{} cell(s) failed:", sweep.failures.len());
                for (cell, sample, msg) in &sweep.failures {
                    eprintln!(
                        "  n={} d={} p={} sample {}: {}",
                        cell.n, cell.d, cell.p, sample, msg
                    );
                }
            }
            let csv_path = dir.join("results.csv");
            write_csv(&sweep.rows, &csv_path)?;
            let bounds = bound_curves(&sweep.stats);
            let (f_path, b_path) =
                write_plots(&fidelity_curves(&sweep.stats), &bounds, &dir, cfg.pc_reference)?;
            // eps-test estimate of the critical point per curve
            for curve in &bounds {
                let pc = mirror_core::bounds::epsilon_test_pc(curve, cfg.eps_threshold)?;
                println!(
                    "eps-test (threshold {} nats/qubit) N={} D={}: pc_bar = {}",
                    cfg.eps_threshold,
                    curve.n,
                    curve.d,
                    pc.map(|p| p.to_string()).unwrap_or_else(|| "none-found".into())
                );
            }
            println!("{}", csv_path.display());
            println!("{}", f_path.display());
            println!("{}", b_path.display());
            Ok(if sweep.failures.is_empty() { ExitCode::SUCCESS } else { ExitCode::from(1) })
        }
        Command::Mirror { mps, out } => {
            let data = std::fs::read(mps)?;
            let state: Mps<f64> = Mps::import(&data)?;
            let mirror = build_mirror(&state)?;
            let text = mirror.to_json();
            match out {
                Some(path) => std::fs::write(path, text)?,
                None => println!("{text}"),
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Verify { suite } => {
            let outcomes = run_suites(&suite)?;
            let mut all_ok = true;
            for outcome in &outcomes {
                outcome.print();
                all_ok &= outcome.passed;
            }
            Ok(if all_ok { ExitCode::SUCCESS } else { ExitCode::from(1) })
        }
    }
}

fn parse_fidelity(s: &str) -> Result<mirror_lab::config::FidelityMethodSpec> {
    use mirror_lab::config::FidelityMethodSpec as F;
    Ok(match s.to_ascii_lowercase().as_str() {
        "auto" => F::Auto,
        "exact-overlap" => F::ExactOverlap,
        "mirror-dense" => F::MirrorDense,
        "mc-stabilizer" => F::McStabilizer,
        "shots" => F::Shots,
        other => {
            return Err(mirror_core::error::Error::Invalid(format!(
                "unknown fidelity method {other:?}"
            )))
        }
    })
}
