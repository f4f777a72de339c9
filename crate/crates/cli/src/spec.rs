//! The input document: `{n, lambda, terms, options}`.

use anyhow::{anyhow, bail, Context, Result};
use resonant_core::scalar::parse_rational;
use resonant_core::{Complex64, GaussianRational, MultiIndex, PolyVectorField, Scalar, Spectrum};
use serde::{Deserialize, Serialize};

/// A real number as written in the input: a JSON number or an exact string.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum RealText {
    Number(serde_json::Number),
    Text(String),
}

/// A complex number: `[re, im]` or a bare real.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ComplexText {
    Pair([RealText; 2]),
    Real(RealText),
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TermSpec {
    /// 1-based component.
    pub j: usize,
    pub m: Vec<i32>,
    pub a: ComplexText,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Options {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub exact: Option<bool>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tol: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub degree: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub depth: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub radius: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub samples: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FieldSpec {
    pub n: usize,
    pub lambda: Vec<ComplexText>,
    #[serde(default)]
    pub terms: Vec<TermSpec>,
    #[serde(default, skip_serializing_if = "is_default")]
    pub options: Options,
}

fn is_default(o: &Options) -> bool {
    *o == Options::default()
}

impl FieldSpec {
    pub fn from_json(text: &str) -> Result<Self> {
        let spec: FieldSpec = serde_json::from_str(text).map_err(|e| anyhow!("invalid field specification: {e}"))?;
        spec.validate()?;
        Ok(spec)
    }

    fn validate(&self) -> Result<()> {
        if self.n < 2 {
            bail!("key \"n\": ambient dimension must be at least 2, got {}", self.n);
        }
        if self.lambda.len() != self.n {
            bail!("key \"lambda\": expected {} eigenvalues, found {}", self.n, self.lambda.len());
        }
        for (i, t) in self.terms.iter().enumerate() {
            if t.j < 1 || t.j > self.n {
                bail!("key \"terms[{i}].j\": component {} outside 1..={}", t.j, self.n);
            }
            if t.m.len() != self.n {
                bail!("key \"terms[{i}].m\": expected {} entries, found {}", self.n, t.m.len());
            }
            if t.m.iter().any(|&e| e < 0) {
                bail!("key \"terms[{i}].m\": exponents must be non-negative");
            }
        }
        Ok(())
    }

    fn values(&self) -> impl Iterator<Item = &RealText> {
        self.lambda
            .iter()
            .chain(self.terms.iter().map(|t| &t.a))
            .flat_map(|c| match c {
                ComplexText::Pair([a, b]) => vec![a, b],
                ComplexText::Real(a) => vec![a],
            })
    }

    /// Exact unless some value is a non-integer JSON number and exact mode
    /// was not requested.
    pub fn wants_exact(&self, force_exact: bool) -> bool {
        force_exact
            || self.options.exact == Some(true)
            || self.values().all(|v| match v {
                RealText::Number(n) => n.is_i64() || n.is_u64(),
                RealText::Text(_) => true,
            })
    }
}

/// Scalars the CLI can read from and write to JSON.
pub trait CliScalar: Scalar {
    fn parse_real(v: &RealText, key: &str) -> Result<Self::Real>;

    /// `a`, `bi`, `a+bi`, `a-bi` with rational or decimal parts.
    fn parse_complex_text(text: &str) -> Result<Self>;

    fn to_json(&self) -> serde_json::Value;

    fn real_to_json(r: &Self::Real) -> serde_json::Value;

    fn parse_complex(v: &ComplexText, key: &str) -> Result<Self> {
        match v {
            ComplexText::Pair([a, b]) => Ok(Self::from_parts(
                Self::parse_real(a, &format!("{key}[0]"))?,
                Self::parse_real(b, &format!("{key}[1]"))?,
            )),
            ComplexText::Real(a) => Ok(Self::from_real(Self::parse_real(a, key)?)),
        }
    }
}

fn split_complex(text: &str) -> Result<(String, String)> {
    let s: String = text.chars().filter(|c| !c.is_whitespace()).collect();
    if s.is_empty() {
        bail!("empty complex number");
    }
    let Some(body) = s.strip_suffix('i') else {
        return Ok((s, "0".into()));
    };
    let bytes = body.as_bytes();
    let mut cut = None;
    for k in (1..bytes.len()).rev() {
        if (bytes[k] == b'+' || bytes[k] == b'-') && !matches!(bytes[k - 1], b'e' | b'E') {
            cut = Some(k);
            break;
        }
    }
    let (re, im) = match cut {
        Some(k) => (body[..k].to_string(), body[k..].to_string()),
        None => ("0".to_string(), body.to_string()),
    };
    let im = match im.as_str() {
        "" | "+" => "1".to_string(),
        "-" => "-1".to_string(),
        _ => im.trim_start_matches('+').to_string(),
    };
    Ok((re, im))
}

impl CliScalar for GaussianRational {
    fn parse_real(v: &RealText, key: &str) -> Result<Self::Real> {
        let text = match v {
            RealText::Number(n) => n.to_string(),
            RealText::Text(t) => t.clone(),
        };
        parse_rational(&text).ok_or_else(|| anyhow!("key \"{key}\": cannot read {text:?} as a rational number"))
    }

    fn parse_complex_text(text: &str) -> Result<Self> {
        let (re, im) = split_complex(text)?;
        let p = |s: &str| parse_rational(s).ok_or_else(|| anyhow!("cannot read {text:?} as a complex number"));
        Ok(GaussianRational::new(p(&re)?, p(&im)?))
    }

    fn to_json(&self) -> serde_json::Value {
        serde_json::json!([Self::real_to_json(&self.re), Self::real_to_json(&self.im)])
    }

    fn real_to_json(r: &Self::Real) -> serde_json::Value {
        serde_json::Value::String(resonant_core::scalar::format_rational(r))
    }
}

fn real_f64(text: &str) -> Option<f64> {
    text.parse::<f64>()
        .ok()
        .or_else(|| parse_rational(text).map(|r| resonant_core::scalar::ratio_to_f64(&r)))
}

impl CliScalar for Complex64 {
    fn parse_real(v: &RealText, key: &str) -> Result<f64> {
        match v {
            RealText::Number(n) => n.as_f64().ok_or_else(|| anyhow!("key \"{key}\": number out of range")),
            RealText::Text(t) => real_f64(t).ok_or_else(|| anyhow!("key \"{key}\": cannot read {t:?} as a number")),
        }
    }

    fn parse_complex_text(text: &str) -> Result<Self> {
        let (re, im) = split_complex(text)?;
        let p = |s: &str| real_f64(s).ok_or_else(|| anyhow!("cannot read {text:?} as a complex number"));
        Ok(Complex64::new(p(&re)?, p(&im)?))
    }

    fn to_json(&self) -> serde_json::Value {
        serde_json::json!([Self::real_to_json(&self.re), Self::real_to_json(&self.im)])
    }

    fn real_to_json(r: &f64) -> serde_json::Value {
        serde_json::Number::from_f64(*r).map_or(serde_json::Value::Null, serde_json::Value::Number)
    }
}

/// The spectrum and the field `ξ₀ + Σ a z^m ∂_j` in the chosen mode.
pub struct Problem<S: CliScalar> {
    pub spectrum: Spectrum<S>,
    pub field: PolyVectorField<S>,
}

impl<S: CliScalar> Problem<S> {
    pub fn build(spec: &FieldSpec, tol: Option<f64>) -> Result<Self> {
        let lambda = spec
            .lambda
            .iter()
            .enumerate()
            .map(|(i, c)| S::parse_complex(c, &format!("lambda[{i}]")))
            .collect::<Result<Vec<_>>>()?;
        let spectrum = match tol.or(spec.options.tol) {
            Some(t) => Spectrum::with_tolerance(lambda, t),
            None => Spectrum::new(lambda),
        }
        .context("key \"lambda\"")?;
        let mut terms = Vec::with_capacity(spec.terms.len());
        for (i, t) in spec.terms.iter().enumerate() {
            terms.push((t.j - 1, MultiIndex::new(t.m.clone()), S::parse_complex(&t.a, &format!("terms[{i}].a"))?));
        }
        let extra = PolyVectorField::from_terms(spec.n, terms).context("key \"terms\"")?;
        let field = spectrum.diagonal_field().add(&extra)?;
        Ok(Self { spectrum, field })
    }
}
