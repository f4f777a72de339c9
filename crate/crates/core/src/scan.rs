//! Sampling diagnostics on spheres: the transversality pairing and
//! non-vanishing of perturbed fields.
//!
//! These scans can only find violations. A clean report means "no violation
//! found at N samples", not that the property holds.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::poly::PolyVectorField;
use crate::scalar::Scalar;

/// Default normalized-margin cut below which a transversality sample counts as a violation.
pub const DEFAULT_MARGIN_THRESHOLD: f64 = 1e-2;
/// Default absolute cut for `‖(ξ + X)(z)‖`.
pub const DEFAULT_NORM_THRESHOLD: f64 = 1e-10;

const PRIMES: [u32; 24] = [
    2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59, 61, 67, 71, 73, 79, 83, 89,
];

fn radical_inverse(mut i: u64, base: u32) -> f64 {
    let b = base as u64;
    let inv = 1.0 / base as f64;
    let mut acc = 0.0;
    let mut f = inv;
    while i > 0 {
        acc += (i % b) as f64 * f;
        i /= b;
        f *= inv;
    }
    acc
}

/// `2n` coordinate points `r·e_k`, `r·i·e_k`, followed by `samples` points
/// from a randomly shifted Halton sequence mapped to the sphere of radius `r`
/// through Box–Muller normals.
pub fn sphere_points(n: usize, r: f64, samples: usize, seed: u64) -> Result<Vec<Vec<Complex64>>> {
    if 2 * n > PRIMES.len() {
        return Err(Error::InvalidParameter(format!("sphere sampling supports n ≤ {}", PRIMES.len() / 2)));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let shift: Vec<f64> = (0..2 * n).map(|_| rng.gen::<f64>()).collect();
    let mut pts = Vec::with_capacity(2 * n + samples);
    for k in 0..n {
        for unit in [Complex64::new(r, 0.0), Complex64::new(0.0, r)] {
            let mut p = vec![Complex64::new(0.0, 0.0); n];
            p[k] = unit;
            pts.push(p);
        }
    }
    for i in 1..=samples as u64 {
        let u: Vec<f64> = (0..2 * n)
            .map(|d| (radical_inverse(i, PRIMES[d]) + shift[d]).fract())
            .collect();
        let p: Vec<Complex64> = (0..n)
            .map(|k| {
                let rad = (-2.0 * (1.0 - u[2 * k]).ln()).sqrt();
                let ang = 2.0 * std::f64::consts::PI * u[2 * k + 1];
                Complex64::from_polar(rad, ang)
            })
            .collect();
        let norm = p.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
        if norm == 0.0 {
            continue;
        }
        pts.push(p.into_iter().map(|c| c * (r / norm)).collect());
    }
    Ok(pts)
}

fn norm(v: &[Complex64]) -> f64 {
    v.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt()
}

/// `⟨ξ(z), z⟩ = Σ ξ_j(z)·conj(z_j)`.
pub fn pairing(xi_z: &[Complex64], z: &[Complex64]) -> Complex64 {
    xi_z.iter().zip(z).map(|(a, b)| a * b.conj()).sum()
}

#[derive(Clone, Debug, PartialEq)]
pub struct TransversalityReport {
    pub radius: f64,
    pub samples: usize,
    pub seed: u64,
    pub min_pairing: f64,
    /// `min |⟨ξ(z),z⟩| / (‖ξ(z)‖·‖z‖)`, in `[0, 1]`.
    pub min_margin: f64,
    pub worst_point: Vec<Complex64>,
    pub threshold: f64,
    pub violation: bool,
}

impl TransversalityReport {
    pub fn verdict(&self) -> String {
        if self.violation {
            format!(
                "violation found: normalized margin {:e} at or below {:e}",
                self.min_margin, self.threshold
            )
        } else {
            format!("no violation found at {} samples", self.samples)
        }
    }
}

pub fn transversality_scan<S: Scalar>(
    xi: &PolyVectorField<S>,
    r: f64,
    samples: usize,
    seed: u64,
) -> Result<TransversalityReport> {
    transversality_scan_with(xi, r, samples, seed, DEFAULT_MARGIN_THRESHOLD)
}

pub fn transversality_scan_with<S: Scalar>(
    xi: &PolyVectorField<S>,
    r: f64,
    samples: usize,
    seed: u64,
    threshold: f64,
) -> Result<TransversalityReport> {
    if r.is_nan() || r <= 0.0 {
        return Err(Error::InvalidParameter(format!("radius must be positive, got {r}")));
    }
    let f = xi.to_float();
    let pts = sphere_points(xi.n(), r, samples, seed)?;
    let values: Vec<(f64, f64)> = pts
        .par_iter()
        .map(|z| {
            let v = f.evaluate_c64(z).expect("dimension checked");
            let p = pairing(&v, z).norm();
            let denom = norm(&v) * norm(z);
            let margin = if denom > 0.0 { (p / denom).min(1.0) } else { 0.0 };
            (p, margin)
        })
        .collect();
    let mut worst = 0;
    for (i, v) in values.iter().enumerate() {
        if v.1 < values[worst].1 {
            worst = i;
        }
    }
    let min_pairing = values.iter().map(|v| v.0).fold(f64::INFINITY, f64::min);
    let min_margin = values[worst].1;
    Ok(TransversalityReport {
        radius: r,
        samples: pts.len(),
        seed,
        min_pairing,
        min_margin,
        worst_point: pts[worst].clone(),
        threshold,
        violation: min_margin <= threshold,
    })
}

#[derive(Clone, Debug, PartialEq)]
pub struct ShellReport {
    pub radius: f64,
    pub min_norm: f64,
    pub worst_point: Vec<Complex64>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct SafetyReport {
    pub shells: Vec<ShellReport>,
    pub pairings: Vec<TransversalityReport>,
    pub threshold: f64,
    /// Some shell sample has `‖(ξ+X)(z)‖` below the threshold.
    pub flagged: bool,
}

const SHELLS: usize = 5;

/// Scans `ξ + X` on geometrically spaced shells between `r_inner` and
/// `r_outer` for near-zeros, and its sphere pairing at `r_inner`, 1, `r_outer`.
pub fn perturbation_safety_scan<S: Scalar>(
    xi: &PolyVectorField<S>,
    x: &PolyVectorField<S>,
    r_inner: f64,
    r_outer: f64,
    samples: usize,
    seed: u64,
    threshold: f64,
) -> Result<SafetyReport> {
    if !(0.0 < r_inner && r_inner < r_outer) {
        return Err(Error::InvalidParameter(format!(
            "need 0 < r_inner < r_outer, got {r_inner}, {r_outer}"
        )));
    }
    let total = xi.add(x)?;
    let f = total.to_float();
    let ratio = (r_outer / r_inner).powf(1.0 / (SHELLS - 1) as f64);
    let mut shells = Vec::new();
    for k in 0..SHELLS {
        let radius = if k + 1 == SHELLS { r_outer } else { r_inner * ratio.powi(k as i32) };
        let pts = sphere_points(xi.n(), radius, samples, seed)?;
        let norms: Vec<f64> = pts
            .par_iter()
            .map(|z| norm(&f.evaluate_c64(z).expect("dimension checked")))
            .collect();
        let mut worst = 0;
        for (i, v) in norms.iter().enumerate() {
            if *v < norms[worst] {
                worst = i;
            }
        }
        shells.push(ShellReport {
            radius,
            min_norm: norms[worst],
            worst_point: pts[worst].clone(),
        });
    }
    let mut radii = vec![r_inner, 1.0, r_outer];
    radii.sort_by(f64::total_cmp);
    radii.dedup();
    let pairings = radii
        .into_iter()
        .map(|r| transversality_scan(&total, r, samples, seed))
        .collect::<Result<Vec<_>>>()?;
    let flagged = shells.iter().any(|s| s.min_norm <= threshold);
    Ok(SafetyReport {
        shells,
        pairings,
        threshold,
        flagged,
    })
}
