mod commands;
mod report;
mod spec;

use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Args, Parser, Subcommand};
use resonant_core::{Complex64, GaussianRational};
use serde_json::{json, Map, Value};

use commands::{exit_code_for, Command, Outcome, Settings};
use spec::{CliScalar, FieldSpec, Problem};

/// Analyze resonant holomorphic vector fields ξ = Σ λ_j z_j ∂_j + Σ a z^m ∂_j.
#[derive(Parser, Debug)]
#[command(name = "resonant", version)]
struct Cli {
    /// Print the machine-readable JSON report instead of text.
    #[arg(long, global = true)]
    json: bool,
    /// Force exact rational arithmetic.
    #[arg(long, global = true)]
    exact: bool,
    /// Resonance tolerance in float mode.
    #[arg(long, global = true)]
    tol: Option<f64>,
    #[command(subcommand)]
    command: Sub,
}

#[derive(Args, Debug)]
struct Input {
    /// Field specification (JSON).
    path: PathBuf,
}

#[derive(Subcommand, Debug)]
enum Sub {
    /// Poincaré certificate, resonances and versal space.
    Analyze(Input),
    /// Poincaré certificate and resonance list.
    Resonances(Input),
    /// Versal space of a resonant field.
    Versal(Input),
    /// Poincaré–Dulac normal form up to a degree.
    NormalForm {
        #[command(flatten)]
        input: Input,
        #[arg(long)]
        degree: Option<u32>,
    },
    /// Closed-form flow compared against RK4.
    Flow {
        #[command(flatten)]
        input: Input,
        /// Initial point, comma-separated (e.g. `1,1/2+i`). Defaults to all ones.
        #[arg(long)]
        z0: Option<String>,
        /// Complex time.
        #[arg(long, default_value = "1")]
        t: String,
    },
    /// Sampled transversality check on a sphere.
    Scan {
        #[command(flatten)]
        input: Input,
        #[arg(long)]
        radius: Option<f64>,
        #[arg(long)]
        samples: Option<usize>,
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Laurent and polynomial cohomology probes.
    Probe {
        #[command(flatten)]
        input: Input,
        #[arg(long)]
        depth: Option<u32>,
        #[arg(long)]
        degree: Option<u32>,
    },
}

impl Sub {
    fn parts(&self) -> (Command, &Input) {
        match self {
            Sub::Analyze(i) => (Command::Analyze, i),
            Sub::Resonances(i) => (Command::Resonances, i),
            Sub::Versal(i) => (Command::Versal, i),
            Sub::NormalForm { input, .. } => (Command::NormalForm, input),
            Sub::Flow { input, .. } => (Command::Flow, input),
            Sub::Scan { input, .. } => (Command::Scan, input),
            Sub::Probe { input, .. } => (Command::Probe, input),
        }
    }

    fn settings(&self, spec: &FieldSpec) -> Settings {
        let o = &spec.options;
        let mut s = Settings {
            degree: o.degree.unwrap_or(4),
            depth: o.depth.unwrap_or(2),
            radius: o.radius.unwrap_or(1.0),
            samples: o.samples.unwrap_or(10_000),
            seed: o.seed.unwrap_or(0),
            z0: None,
            t: "1".into(),
        };
        match self {
            Sub::NormalForm { degree, .. } => s.degree = degree.unwrap_or(s.degree),
            Sub::Flow { z0, t, .. } => {
                s.z0 = z0.clone();
                s.t = t.clone();
            }
            Sub::Scan { radius, samples, seed, .. } => {
                s.radius = radius.unwrap_or(s.radius);
                s.samples = samples.unwrap_or(s.samples);
                s.seed = seed.unwrap_or(s.seed);
            }
            Sub::Probe { depth, degree, .. } => {
                s.depth = depth.unwrap_or(s.depth);
                s.degree = degree.unwrap_or(s.degree);
            }
            _ => {}
        }
        s
    }
}

fn execute<S: CliScalar>(cmd: Command, spec: &FieldSpec, cli: &Cli) -> Result<Outcome> {
    let problem = Problem::<S>::build(spec, cli.tol)?;
    commands::run(cmd, &problem, &cli.command.settings(spec))
}

fn header(cmd: Command, mode: &str, spec: Option<&FieldSpec>) -> Map<String, Value> {
    let mut m = Map::new();
    m.insert("tool".into(), json!(env!("CARGO_PKG_NAME")));
    m.insert("version".into(), json!(env!("CARGO_PKG_VERSION")));
    m.insert("command".into(), json!(cmd.name()));
    m.insert("mode".into(), json!(mode));
    if let Some(s) = spec {
        m.insert("input".into(), serde_json::to_value(s).unwrap_or(Value::Null));
    }
    m
}

fn load(path: &PathBuf) -> Result<FieldSpec> {
    let text = std::fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))?;
    FieldSpec::from_json(&text)
}

fn emit_error(cli: &Cli, mut doc: Map<String, Value>, e: &anyhow::Error) -> ExitCode {
    let code = exit_code_for(e);
    if cli.json {
        doc.insert("error".into(), json!(format!("{e:#}")));
        doc.insert("exit_code".into(), json!(code));
        println!("{}", serde_json::to_string_pretty(&Value::Object(doc)).expect("serializable report"));
    }
    eprintln!("error: {e:#}");
    ExitCode::from(code as u8)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (cmd, input) = cli.command.parts();
    let spec = match load(&input.path) {
        Ok(s) => s,
        Err(e) => return emit_error(&cli, header(cmd, "unknown", None), &e),
    };
    let exact = spec.wants_exact(cli.exact);
    let mode = if exact { "exact" } else { "float" };
    let mut doc = header(cmd, mode, Some(&spec));
    let result = if exact {
        execute::<GaussianRational>(cmd, &spec, &cli)
    } else {
        execute::<Complex64>(cmd, &spec, &cli)
    };
    let out = match result {
        Ok(out) => out,
        Err(e) => return emit_error(&cli, doc, &e),
    };
    if cli.json {
        doc.extend(out.sections);
        doc.insert("notes".into(), json!(out.notes));
        doc.insert("exit_code".into(), json!(out.code));
        println!("{}", serde_json::to_string_pretty(&Value::Object(doc)).expect("serializable report"));
    } else {
        println!("mode: {mode}");
        for l in &out.lines {
            println!("{l}");
        }
        for n in &out.notes {
            println!("note: {n}");
        }
    }
    ExitCode::from(out.code as u8)
}
