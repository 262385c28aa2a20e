//! `divlab` command line: sample sections, mesh their zero curves, measure
//! them, compute discriminant degrees and run Monte Carlo experiments.

use std::fs;
use std::path::PathBuf;

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand};
use divlab::chern::{discriminant_degree, BundleData, CohomologyPolynomial};
use divlab::ensemble::{sample_section, KostlanSection, SamplingMode};
use divlab::geometry::predicted_scales;
use divlab::harness::{observe_section, run_trials, ADRule, ExperimentConfig, Observable};
use divlab::zeroset::{build_mesh, choose_pencil, DEFAULT_RESOLUTION};

#[derive(Parser)]
#[command(name = "divlab", version, about = "Random algebraic curves: sampling, meshing and geometry")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Sample a random section and print it as JSON.
    Sample {
        #[arg(long, default_value_t = 2)]
        n: usize,
        #[arg(long)]
        d: usize,
        #[arg(long, default_value_t = 1)]
        r: usize,
        #[arg(long)]
        seed: u64,
        #[arg(long, default_value = "gaussian")]
        mode: SamplingMode,
        /// Write to this file instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Triangulate the zero curve of a section (JSON) and print OFF.
    Mesh {
        section: PathBuf,
        #[arg(long, default_value_t = DEFAULT_RESOLUTION)]
        resolution: usize,
        /// Seed of the pencil choice.
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Measure the observables of a section (JSON) and print them as JSON.
    Observables {
        section: PathBuf,
        #[arg(long, default_value_t = DEFAULT_RESOLUTION)]
        resolution: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Comma-separated subset of the observables (default: all).
        #[arg(long, value_delimiter = ',')]
        observables: Vec<Observable>,
    },
    /// Exact degree of the discriminant for `E ⊗ O(line)^d` on `CP^n`.
    DiscriminantDegree {
        #[arg(long, default_value_t = 2)]
        n: usize,
        #[arg(long, default_value_t = 1)]
        r: usize,
        #[arg(long)]
        d: i64,
        /// Total Chern class of E as integer coefficients of 1, h, h², …
        /// (default: trivial).
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        e_chern: Vec<i64>,
        /// L = O(line).
        #[arg(long, default_value_t = 1)]
        line: i64,
    },
    /// Run a Monte Carlo experiment and write CSV rows and JSON aggregates.
    Experiment {
        /// TOML file with flat `key = value` settings; flags override it.
        #[arg(long)]
        config: Option<PathBuf>,
        #[arg(long)]
        seed: u64,
        #[arg(long, value_delimiter = ',')]
        degrees: Option<Vec<usize>>,
        #[arg(long)]
        trials: Option<usize>,
        #[arg(long)]
        resolution: Option<usize>,
        #[arg(long)]
        mode: Option<SamplingMode>,
        #[arg(long)]
        a_d: Option<String>,
        #[arg(long, value_delimiter = ',')]
        observables: Option<Vec<Observable>>,
        #[arg(long)]
        csv: Option<PathBuf>,
        #[arg(long)]
        json: Option<PathBuf>,
    },
    /// Print the predicted scales (constants set to 1) as a table.
    Scales {
        #[arg(long, default_value_t = 2)]
        n: usize,
        #[arg(long, default_value_t = 1)]
        r: usize,
        #[arg(long, value_delimiter = ',', default_value = "2,4,8,16,32")]
        degrees: Vec<usize>,
        #[arg(long, default_value = "inv_log")]
        a_d: ADRule,
    },
}

fn emit(text: &str, out: Option<PathBuf>) -> Result<()> {
    match out {
        Some(p) => fs::write(&p, text).with_context(|| format!("writing {}", p.display())),
        None => {
            println!("{text}");
            Ok(())
        }
    }
}

fn read_section(path: &PathBuf) -> Result<KostlanSection> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    Ok(KostlanSection::from_json(&text)?)
}

fn experiment_config(
    config: Option<PathBuf>,
    seed: u64,
    overrides: Vec<(&str, Option<toml::Value>)>,
) -> Result<ExperimentConfig> {
    let mut table: toml::Table = match config {
        Some(p) => fs::read_to_string(&p).with_context(|| format!("reading {}", p.display()))?.parse()?,
        None => toml::Table::new(),
    };
    for (key, value) in overrides {
        if let Some(v) = value {
            table.insert(key.to_string(), v);
        }
    }
    table.insert("seed".into(), toml::Value::Integer(i64::try_from(seed).context("seed must fit in a signed 64-bit TOML integer")?));
    let cfg: ExperimentConfig = toml::Value::Table(table).try_into()?;
    cfg.validate()?;
    Ok(cfg)
}

fn main() -> Result<()> {
    match Cli::parse().command {
        Command::Sample { n, d, r, seed, mode, out } => {
            let s = sample_section(n, d, r, seed, mode)?;
            emit(&s.to_json(), out)
        }
        Command::Mesh { section, resolution, seed, out } => {
            let s = read_section(&section)?;
            let pencil = choose_pencil(&s, seed)?;
            let mesh = build_mesh(&s, &pencil, resolution)?;
            emit(&mesh.to_off(), out)
        }
        Command::Observables { section, resolution, seed, observables } => {
            let s = read_section(&section)?;
            let mut cfg = ExperimentConfig::new(vec![s.d], 1, seed);
            cfg.resolution = resolution;
            if !observables.is_empty() {
                cfg.observables = observables;
            }
            let rec = observe_section(&cfg, &s, seed);
            if let Some(f) = &rec.failure {
                bail!("measurement failed: {f}");
            }
            emit(&serde_json::to_string_pretty(&rec)?, None)
        }
        Command::DiscriminantDegree { n, r, d, e_chern, line } => {
            let e = if e_chern.is_empty() {
                BundleData::trivial(n, r)
            } else {
                BundleData::new(r, CohomologyPolynomial::from_integers(n, &e_chern))?
            };
            let l = BundleData::line(n, line).chern.component(1);
            let deg = discriminant_degree(n, r, d, &BundleData::cotangent_projective(n), &e, &l)?;
            let poly: Vec<String> = deg.polynomial.iter().map(|c| c.to_string()).collect();
            let out = serde_json::json!({ "degree": deg.degree.to_string(), "polynomial": poly });
            emit(&serde_json::to_string_pretty(&out)?, None)
        }
        Command::Experiment { config, seed, degrees, trials, resolution, mode, a_d, observables, csv, json } => {
            use toml::Value;
            let list = |v: Vec<usize>| Value::Array(v.into_iter().map(|x| Value::Integer(x as i64)).collect());
            let cfg = experiment_config(
                config,
                seed,
                vec![
                    ("degrees", degrees.map(list)),
                    ("trials", trials.map(|t| Value::Integer(t as i64))),
                    ("resolution", resolution.map(|t| Value::Integer(t as i64))),
                    ("mode", mode.map(|m| Value::String(m.to_string()))),
                    ("a_d", a_d.map(Value::String)),
                    ("observables", observables.map(|o| Value::Array(o.into_iter().map(|x| Value::String(x.to_string())).collect()))),
                    ("output_csv", csv.map(|p| Value::String(p.display().to_string()))),
                    ("output_json", json.map(|p| Value::String(p.display().to_string()))),
                ],
            )?;
            let report = run_trials(&cfg)?;
            let csv_path = cfg.output_csv.clone().unwrap_or_else(|| "experiment.csv".into());
            let json_path = cfg.output_json.clone().unwrap_or_else(|| "experiment.json".into());
            report.write_files(&csv_path, &json_path)?;
            for s in &report.summaries {
                eprintln!("d={} retained {}/{} chi_consistent={}", s.d, s.retained, s.trials, s.chi_consistent);
                for e in &s.events {
                    if let Some(f) = e.frequency {
                        eprintln!("  {}: {:.3} [{:.3}, {:.3}]", e.event.name, f.rate, f.ci_low, f.ci_high);
                    }
                }
            }
            eprintln!("wrote {} and {} (config {})", csv_path.display(), json_path.display(), report.config_hash);
            Ok(())
        }
        Command::Scales { n, r, degrees, a_d } => {
            println!("{:>5} {:>10} {:>12} {:>12} {:>12} {:>12} {:>12} {:>12}", "d", "a_d", "rho_d", "d^-4", "curvature", "injectivity", "lambda1_exp", "diameter");
            for d in degrees {
                let a = a_d.value(d);
                let p = predicted_scales(n, d, a, r)?;
                println!(
                    "{:>5} {:>10.4} {:>12.4e} {:>12.4e} {:>12.4e} {:>12.4e} {:>12.4e} {:>12.4e}",
                    d, a, p.rho, p.systole_threshold, p.curvature, p.injectivity, p.lambda1_exponent, p.diameter
                );
            }
            Ok(())
        }
    }
}
