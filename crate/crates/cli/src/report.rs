//! JSON encodings of library results. Keys come out sorted (serde_json's
//! default map), which keeps the machine report byte-stable.

use resonant_core::flow::FlowSolution;
use resonant_core::linalg::RankReport;
use resonant_core::scan::TransversalityReport;
use resonant_core::{Complex64, MultiIndex, PoincareCertificate, PolyMap, PolyVectorField, Resonance};
use serde_json::{json, Value};

use crate::spec::CliScalar;

pub fn index(m: &MultiIndex) -> Value {
    json!(m.entries())
}

pub fn field<S: CliScalar>(x: &PolyVectorField<S>) -> Value {
    json!({
        "text": x.to_string(),
        "terms": x
            .terms()
            .iter()
            .map(|((j, m), c)| json!({"j": j + 1, "m": index(m), "a": c.to_json()}))
            .collect::<Vec<_>>(),
    })
}

pub fn poly_map<S: CliScalar>(p: &PolyMap<S>) -> Value {
    json!({
        "degree": p.degree(),
        "near_identity": p.is_near_identity(),
        "components": p.components().iter().map(|c| c.to_string()).collect::<Vec<_>>(),
    })
}

pub fn certificate<S: CliScalar>(c: &PoincareCertificate<S>) -> Value {
    json!({
        "in_domain": c.in_domain,
        "delta": c.delta,
        "delta_squared": S::real_to_json(&c.delta_squared),
        "bound_C": c.bound_c,
        "hull": c.hull.iter().map(|h| h.to_json()).collect::<Vec<_>>(),
    })
}

pub fn resonance(r: &Resonance) -> Value {
    json!({"s": r.s + 1, "m": index(&r.m), "trivial": r.trivial})
}

pub fn rank(r: &RankReport) -> Value {
    json!({
        "rank": r.rank,
        "rows": r.nrows,
        "cols": r.ncols,
        "tolerance": r.tolerance,
        "ambiguous": r.ambiguous,
    })
}

pub fn c64(z: &Complex64) -> Value {
    json!([z.re, z.im])
}

pub fn point(z: &[Complex64]) -> Value {
    Value::Array(z.iter().map(c64).collect())
}

pub fn transversality(r: &TransversalityReport) -> Value {
    json!({
        "radius": r.radius,
        "samples": r.samples,
        "seed": r.seed,
        "min_pairing": r.min_pairing,
        "min_margin": r.min_margin,
        "worst_point": point(&r.worst_point),
        "threshold": r.threshold,
        "violation": r.violation,
        "verdict": r.verdict(),
    })
}

pub fn flow<S: CliScalar>(f: &FlowSolution<S>) -> Value {
    json!({
        "lambda": f.lambda.iter().map(|l| l.to_json()).collect::<Vec<_>>(),
        "polynomials": f
            .polys
            .iter()
            .map(|p| p.iter().map(|c| c.to_json()).collect::<Vec<_>>())
            .collect::<Vec<_>>(),
        "degrees": f.degrees(),
    })
}
