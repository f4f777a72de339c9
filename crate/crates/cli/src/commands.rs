//! Subcommand bodies, generic over the scalar mode.

use anyhow::{anyhow, Result};
use resonant_core::flow::closed_form_flow;
use resonant_core::resonance::near_misses;
use resonant_core::scan::transversality_scan;
use resonant_core::{
    enumerate_resonances, gperp_injectivity, h0_sigma_structure, neg_laurent_matrix_sigma, neg_laurent_matrix_theta,
    numeric_flow, poincare_check, poincare_dulac_normalize, resonant_basis, split_resonant, versal_space, Complex64,
    Error, PoincareCertificate,
};
use serde_json::{json, Map, Value};

use crate::report;
use crate::spec::{CliScalar, Problem};

pub const EXIT_OK: i32 = 0;
pub const EXIT_INPUT: i32 = 1;
pub const EXIT_NOT_POINCARE: i32 = 2;
pub const EXIT_NUMERIC: i32 = 3;

/// Settings resolved from flags and the input's `options`.
#[derive(Clone, Debug)]
pub struct Settings {
    pub degree: u32,
    pub depth: u32,
    pub radius: f64,
    pub samples: usize,
    pub seed: u64,
    pub z0: Option<String>,
    pub t: String,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Command {
    Analyze,
    Resonances,
    Versal,
    NormalForm,
    Flow,
    Scan,
    Probe,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::Analyze => "analyze",
            Command::Resonances => "resonances",
            Command::Versal => "versal",
            Command::NormalForm => "normal-form",
            Command::Flow => "flow",
            Command::Scan => "scan",
            Command::Probe => "probe",
        }
    }

    fn needs_domain(self) -> bool {
        !matches!(self, Command::Flow | Command::Scan)
    }
}

/// Report sections plus human-readable lines and the exit code.
pub struct Outcome {
    pub sections: Map<String, Value>,
    pub lines: Vec<String>,
    pub notes: Vec<String>,
    pub code: i32,
}

impl Outcome {
    fn new() -> Self {
        Self {
            sections: Map::new(),
            lines: Vec::new(),
            notes: Vec::new(),
            code: EXIT_OK,
        }
    }

    fn set(&mut self, key: &str, v: Value) {
        self.sections.insert(key.to_string(), v);
    }

    fn hazard(&mut self, note: String) {
        self.notes.push(note);
        self.code = self.code.max(EXIT_NUMERIC);
    }
}

/// Library errors mapped to exit codes.
pub fn exit_code_for(e: &anyhow::Error) -> i32 {
    match e.downcast_ref::<Error>() {
        Some(Error::SmallDivisor { .. }) => EXIT_NUMERIC,
        Some(Error::NotInPoincareDomain) => EXIT_NOT_POINCARE,
        _ => EXIT_INPUT,
    }
}

fn certificate_lines<S: CliScalar>(c: &PoincareCertificate<S>) -> String {
    match c.bound_c {
        Some(b) => format!("Poincaré domain: yes (delta = {}, C = {b})", c.delta),
        None => format!("Poincaré domain: no (delta = {})", c.delta),
    }
}

pub fn run<S: CliScalar>(cmd: Command, p: &Problem<S>, set: &Settings) -> Result<Outcome> {
    let mut out = Outcome::new();
    let cert = poincare_check(&p.spectrum);
    out.set("certificate", report::certificate(&cert));
    out.lines.push(certificate_lines(&cert));
    out.lines.push(format!("field: {}", p.field));
    if cmd.needs_domain() && !cert.in_domain {
        out.notes.push("eigenvalues are not in the Poincaré domain; nothing further computed".into());
        out.code = EXIT_NOT_POINCARE;
        return Ok(out);
    }
    match cmd {
        Command::Analyze => {
            resonances(p, &mut out)?;
            versal(p, &mut out, false)?;
        }
        Command::Resonances => resonances(p, &mut out)?,
        Command::Versal => versal(p, &mut out, true)?,
        Command::NormalForm => normal_form(p, set, &mut out)?,
        Command::Flow => flow(p, set, &mut out)?,
        Command::Scan => scan(p, set, &mut out)?,
        Command::Probe => probe(p, set, &mut out)?,
    }
    Ok(out)
}

fn resonances<S: CliScalar>(p: &Problem<S>, out: &mut Outcome) -> Result<()> {
    let res = enumerate_resonances(&p.spectrum, true)?;
    let dim_g = resonant_basis(&p.spectrum)?.len();
    out.lines.push(format!("dim g_lambda = {dim_g}"));
    for r in res.iter().filter(|r| !r.trivial) {
        out.lines.push(format!("  resonance: λ_{} = (m, λ) at m = {}", r.s + 1, r.m));
    }
    out.set("resonances", Value::Array(res.iter().map(report::resonance).collect()));
    out.set("dim_g", json!(dim_g));
    if !S::EXACT {
        let near = near_misses(&p.spectrum)?;
        for (s, m, rel) in &near {
            out.notes.push(format!(
                "near-resonance: relative divisor {rel:e} for z^{m}∂{} (small-divisor hazard)",
                s + 1
            ));
        }
        out.set(
            "near_misses",
            Value::Array(
                near.iter()
                    .map(|(s, m, rel)| json!({"s": s + 1, "m": report::index(m), "relative_divisor": rel}))
                    .collect(),
            ),
        );
    }
    Ok(())
}

fn versal<S: CliScalar>(p: &Problem<S>, out: &mut Outcome, strict: bool) -> Result<()> {
    let (_, nr) = split_resonant(&p.field, &p.spectrum)?;
    if !nr.is_zero() {
        let msg = format!("field has non-resonant terms ({nr}); run normal-form first");
        if strict {
            return Err(anyhow!(msg));
        }
        out.notes.push(format!("versal space skipped: {msg}"));
        out.set("versal", Value::Null);
        return Ok(());
    }
    let v = versal_space(&p.field, &p.spectrum)?;
    out.lines.push(format!(
        "versal space: dim S = {} (dim g = {}, rank V = {}, dim ker L = {})",
        v.dim_s(),
        v.dim_g,
        v.rank_v,
        v.kernel_dim
    ));
    for c in &v.complement_basis {
        out.lines.push(format!("  parameter direction: {c}"));
    }
    for w in &v.warnings {
        out.hazard(w.clone());
    }
    out.set(
        "versal",
        json!({
            "dim_g": v.dim_g,
            "rank_V": v.rank_v,
            "dim_S": v.dim_s(),
            "kernel_dim": v.kernel_dim,
            "monomial_complement": v.monomial_complement,
            "complement": v.complement_basis.iter().map(report::field).collect::<Vec<_>>(),
            "rank": report::rank(&v.rank_report),
            "warnings": v.warnings,
        }),
    );
    Ok(())
}

fn normal_form<S: CliScalar>(p: &Problem<S>, set: &Settings, out: &mut Outcome) -> Result<()> {
    let r = poincare_dulac_normalize(&p.field, &p.spectrum, set.degree)?;
    out.lines.push(format!("normal form through degree {}: {}", r.degree, r.normal_form));
    let log: Vec<Value> = r
        .degree_log
        .iter()
        .map(|rec| {
            json!({
                "degree": rec.degree,
                "removed": rec.divisions.iter().map(|d| json!({
                    "j": d.j + 1,
                    "m": report::index(&d.m),
                    "a": d.coeff.to_json(),
                    "divisor": d.divisor.to_json(),
                })).collect::<Vec<_>>(),
                "warnings": rec.warnings,
            })
        })
        .collect();
    for w in r.warnings() {
        out.notes.push(w.clone());
    }
    out.set(
        "normal_form",
        json!({
            "degree": r.degree,
            "field": report::field(&r.normal_form),
            "transform": report::poly_map(&r.transform),
            "log": log,
        }),
    );
    Ok(())
}

fn flow<S: CliScalar>(p: &Problem<S>, set: &Settings, out: &mut Outcome) -> Result<()> {
    let n = p.spectrum.n();
    let z0: Vec<S> = match &set.z0 {
        Some(text) => text.split(',').map(S::parse_complex_text).collect::<Result<_>>()?,
        None => vec![S::one(); n],
    };
    if z0.len() != n {
        return Err(anyhow!("--z0: expected {n} coordinates, found {}", z0.len()));
    }
    let t = Complex64::parse_complex_text(&set.t)?;
    let sol = closed_form_flow(&p.field, &z0)?;
    let zt = sol.evaluate(t);
    let z0f: Vec<Complex64> = z0.iter().map(|v| v.to_c64()).collect();
    let rk4 = numeric_flow(&p.field.to_float(), &z0f, t, 10_000)?;
    let scale = zt.iter().map(|c| c.norm()).fold(f64::MIN_POSITIVE, f64::max);
    let dev = zt.iter().zip(&rk4).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max) / scale;
    out.lines.push(format!(
        "z(t) at t = {t}: [{}]",
        zt.iter().map(|c| format!("{c}")).collect::<Vec<_>>().join(", ")
    ));
    out.lines.push(format!("RK4 (10000 steps) relative deviation: {dev:e}"));
    out.set(
        "flow",
        json!({
            "t": report::c64(&t),
            "z0": z0.iter().map(|v| v.to_json()).collect::<Vec<_>>(),
            "z_t": report::point(&zt),
            "closed_form": report::flow(&sol),
            "rk4_relative_deviation": dev,
        }),
    );
    Ok(())
}

fn scan<S: CliScalar>(p: &Problem<S>, set: &Settings, out: &mut Outcome) -> Result<()> {
    let r = transversality_scan(&p.field, set.radius, set.samples, set.seed)?;
    out.lines.push(format!(
        "sphere r = {}: min |<xi(z), z>| = {:e}, min margin = {:e}; {}",
        r.radius,
        r.min_pairing,
        r.min_margin,
        r.verdict()
    ));
    out.set("scan", report::transversality(&r));
    Ok(())
}

fn probe<S: CliScalar>(p: &Problem<S>, set: &Settings, out: &mut Outcome) -> Result<()> {
    let verdict = |b: bool| if b { "injective" } else { "not injective" };
    let sigma = neg_laurent_matrix_sigma(&p.field, &p.spectrum, set.depth)?;
    let theta = neg_laurent_matrix_theta(&p.field, &p.spectrum, set.depth)?;
    let h0 = h0_sigma_structure(&p.field, &p.spectrum, set.degree)?;
    let gperp = gperp_injectivity(&p.field, &p.spectrum, set.degree)?;
    for (name, pr) in [("sigma", &sigma.injective), ("theta", &theta.injective), ("gperp", &gperp.injective)] {
        out.lines.push(format!("{name}: {}", verdict(*pr)));
    }
    out.lines.push(format!(
        "h0: kernel dim {} ({}), constant 1 {}",
        h0.kernel.len(),
        if h0.kernel_is_constants { "constants" } else { "not only constants" },
        if h0.constant_unreachable { "unreachable" } else { "reachable" }
    ));
    for r in [&sigma.rank, &theta.rank, &h0.rank, &gperp.rank] {
        if r.ambiguous {
            out.hazard("rank decision is numerically ambiguous".into());
        }
    }
    let neg = |injective: bool, bij: Option<bool>, rank: &resonant_core::RankReport, discarded: usize| {
        json!({
            "verdict": verdict(injective),
            "injective": injective,
            "square_bijective": bij,
            "rank": report::rank(rank),
            "discarded_terms": discarded,
        })
    };
    out.set(
        "probe",
        json!({
            "depth": set.depth,
            "degree": set.degree,
            "sigma": neg(sigma.injective, sigma.square_bijective, &sigma.rank, sigma.discarded.len()),
            "theta": neg(theta.injective, theta.square_bijective, &theta.rank, theta.discarded.len()),
            "gperp": neg(gperp.injective, None, &gperp.rank, gperp.discarded.len()),
            "h0": {
                "kernel_dim": h0.kernel.len(),
                "kernel_is_constants": h0.kernel_is_constants,
                "constant_unreachable": h0.constant_unreachable,
                "codomain_degree": h0.codomain_degree,
                "rank": report::rank(&h0.rank),
            },
        }),
    );
    Ok(())
}
