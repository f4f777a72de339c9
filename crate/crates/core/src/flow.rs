//! Exponential-polynomial flows of triangular resonant fields and an RK4 oracle.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::multi_index::MultiIndex;
use crate::poly::{check_n, PolyVectorField};
use crate::resonance::Spectrum;
use crate::normal_form::check_triangular_support;
use crate::scalar::Scalar;

/// Univariate polynomial in `t`, coefficients ascending.
pub type TPoly<S> = Vec<S>;

fn tpoly_mul<S: Scalar>(a: &[S], b: &[S]) -> TPoly<S> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![S::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (k, y) in b.iter().enumerate() {
            out[i + k] = out[i + k].clone() + x.clone() * y.clone();
        }
    }
    trim(out)
}

fn trim<S: Scalar>(mut p: TPoly<S>) -> TPoly<S> {
    while p.last().is_some_and(|c| c.is_zero()) {
        p.pop();
    }
    p
}

fn tpoly_eval(p: &[Complex64], t: Complex64) -> Complex64 {
    p.iter().rev().fold(Complex64::new(0.0, 0.0), |acc, c| acc * t + c)
}

/// `z_j(t) = e^{λ_j t}·P_j(t)` for each component.
#[derive(Clone, Debug, PartialEq)]
pub struct FlowSolution<S: Scalar> {
    pub lambda: Vec<S>,
    pub polys: Vec<TPoly<S>>,
}

impl<S: Scalar> FlowSolution<S> {
    pub fn n(&self) -> usize {
        self.lambda.len()
    }

    /// Degree of each `P_j` (0 for a constant, including the zero polynomial).
    pub fn degrees(&self) -> Vec<usize> {
        self.polys.iter().map(|p| p.len().saturating_sub(1)).collect()
    }

    pub fn evaluate(&self, t: Complex64) -> Vec<Complex64> {
        self.lambda
            .iter()
            .zip(&self.polys)
            .map(|(l, p)| {
                let pc: Vec<Complex64> = p.iter().map(|c| c.to_c64()).collect();
                (l.to_c64() * t).exp() * tpoly_eval(&pc, t)
            })
            .collect()
    }

    /// `ż(t) = e^{λ t}(λ P(t) + P′(t))`.
    pub fn derivative(&self, t: Complex64) -> Vec<Complex64> {
        self.lambda
            .iter()
            .zip(&self.polys)
            .map(|(l, p)| {
                let l = l.to_c64();
                let pc: Vec<Complex64> = p.iter().map(|c| c.to_c64()).collect();
                let dp: Vec<Complex64> = pc.iter().enumerate().skip(1).map(|(k, c)| c * k as f64).collect();
                (l * t).exp() * (l * tpoly_eval(&pc, t) + tpoly_eval(&dp, t))
            })
            .collect()
    }

    /// `P_j` evaluated in the scalar mode of the solution.
    pub fn poly_at(&self, j: usize, t: &S) -> S {
        self.polys[j]
            .iter()
            .rev()
            .fold(S::zero(), |acc, c| acc * t.clone() + c.clone())
    }
}

/// Diagonal `λ` read off the linear part of `xi`.
fn diagonal_of<S: Scalar>(xi: &PolyVectorField<S>) -> Vec<S> {
    let n = xi.n();
    (0..n).map(|j| xi.coeff(j, &MultiIndex::unit(n, j))).collect()
}

/// Closed-form flow of a field `ξ₀ + Σ a_{j,m} z^m ∂_j` whose non-linear
/// terms are resonant and triangular (`m` only involves `z_k`, `k < j`).
///
/// Resonance turns each forcing term into `e^{λ_j t}·(polynomial)`, so
/// `P_j = z_j(0) + ∫₀ᵗ Σ a_{j,m} Π_k P_k^{m_k}` solved in increasing `j`.
pub fn closed_form_flow<S: Scalar>(xi: &PolyVectorField<S>, z0: &[S]) -> Result<FlowSolution<S>> {
    check_n(xi.n(), z0.len())?;
    let lambda = diagonal_of(xi);
    let spec = Spectrum::new(lambda.clone())?;
    check_triangular_support(xi, &spec)?;
    let n = xi.n();
    let mut polys: Vec<TPoly<S>> = Vec::with_capacity(n);
    for j in 0..n {
        let mut rhs: TPoly<S> = Vec::new();
        for ((jj, m), a) in xi.terms() {
            if *jj != j || m.is_unit() == Some(j) {
                continue;
            }
            let mut term = vec![a.clone()];
            for (k, &e) in m.entries().iter().enumerate() {
                for _ in 0..e {
                    term = tpoly_mul(&term, &polys[k]);
                }
            }
            if rhs.len() < term.len() {
                rhs.resize(term.len(), S::zero());
            }
            for (i, c) in term.into_iter().enumerate() {
                rhs[i] = rhs[i].clone() + c;
            }
        }
        let mut p = vec![z0[j].clone()];
        for (i, c) in trim(rhs).into_iter().enumerate() {
            p.push(c / S::from_i64(i as i64 + 1));
        }
        polys.push(trim(p));
    }
    Ok(FlowSolution { lambda, polys })
}

/// Degree bound for each `P_j` from the support of `ξ` alone:
/// `deg_j = max over (j, m) of (Σ_k m_k·deg_k) + 1`.
pub fn predicted_degrees<S: Scalar>(xi: &PolyVectorField<S>) -> Vec<usize> {
    let n = xi.n();
    let mut deg = vec![0usize; n];
    for j in 0..n {
        for (jj, m) in xi.terms().keys() {
            if *jj != j || m.is_unit() == Some(j) {
                continue;
            }
            let d: usize = m
                .entries()
                .iter()
                .enumerate()
                .map(|(k, &e)| e as usize * deg[k])
                .sum();
            deg[j] = deg[j].max(d + 1);
        }
    }
    deg
}

/// Classical RK4 for `ż = ξ(z)` along the straight complex-time segment `0 → t`.
pub fn numeric_flow(
    xi: &PolyVectorField<Complex64>,
    z0: &[Complex64],
    t: Complex64,
    steps: usize,
) -> Result<Vec<Complex64>> {
    check_n(xi.n(), z0.len())?;
    if steps == 0 {
        return Err(Error::InvalidParameter("numeric_flow needs at least one step".into()));
    }
    let h = t / steps as f64;
    let f = |z: &[Complex64]| -> Result<Vec<Complex64>> {
        Ok(xi.evaluate_c64(z)?.into_iter().map(|v| v * h).collect())
    };
    let axpy = |z: &[Complex64], k: &[Complex64], s: f64| -> Vec<Complex64> {
        z.iter().zip(k).map(|(a, b)| a + b * s).collect()
    };
    let mut z = z0.to_vec();
    for _ in 0..steps {
        let k1 = f(&z)?;
        let k2 = f(&axpy(&z, &k1, 0.5))?;
        let k3 = f(&axpy(&z, &k2, 0.5))?;
        let k4 = f(&axpy(&z, &k3, 1.0))?;
        for i in 0..z.len() {
            z[i] += (k1[i] + k2[i] * 2.0 + k3[i] * 2.0 + k4[i]) / 6.0;
        }
    }
    Ok(z)
}
