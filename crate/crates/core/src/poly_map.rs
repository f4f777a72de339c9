//! Polynomial maps ℂⁿ → ℂⁿ truncated at a fixed degree.

use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::linalg::solve_square;
use crate::multi_index::MultiIndex;
use crate::poly::{check_n, lie_derivative_function, PolyFunction, PolyVectorField};
use crate::scalar::Scalar;

/// `n` component polynomials with no term above `degree`.
#[derive(Clone, Debug, PartialEq)]
pub struct PolyMap<S: Scalar> {
    components: Vec<PolyFunction<S>>,
    degree: i64,
}

impl<S: Scalar> PolyMap<S> {
    /// Builds a map, dropping any term of degree above `degree`.
    pub fn new(components: Vec<PolyFunction<S>>, degree: i64) -> Result<Self> {
        let n = components.len();
        for c in &components {
            check_n(n, c.n())?;
        }
        let components = components.into_iter().map(|c| c.truncated(degree)).collect();
        Ok(Self { components, degree })
    }

    pub fn identity(n: usize, degree: i64) -> Self {
        Self {
            components: (0..n).map(|k| PolyFunction::coordinate(n, k)).collect(),
            degree,
        }
    }

    /// `id + h` where `h` is read component-wise from a field.
    pub fn identity_plus(field: &PolyVectorField<S>, degree: i64) -> Result<Self> {
        let n = field.n();
        let comps = (0..n)
            .map(|k| PolyFunction::coordinate(n, k).add(&field.component(k)))
            .collect::<Result<Vec<_>>>()?;
        Self::new(comps, degree)
    }

    pub fn n(&self) -> usize {
        self.components.len()
    }

    pub fn degree(&self) -> i64 {
        self.degree
    }

    pub fn components(&self) -> &[PolyFunction<S>] {
        &self.components
    }

    pub fn component(&self, i: usize) -> &PolyFunction<S> {
        &self.components[i]
    }

    /// Row-major linear part: `a[i][k]` is the coefficient of `z_k` in component `i`.
    pub fn linear_part(&self) -> Vec<Vec<S>> {
        let n = self.n();
        self.components
            .iter()
            .map(|c| (0..n).map(|k| c.coeff(&MultiIndex::unit(n, k))).collect())
            .collect()
    }

    pub fn has_constant_term(&self) -> bool {
        let zero = MultiIndex::zero(self.n());
        self.components.iter().any(|c| !c.coeff(&zero).is_zero())
    }

    /// No constant term and linear part exactly the identity.
    pub fn is_near_identity(&self) -> bool {
        if self.has_constant_term() {
            return false;
        }
        self.linear_part().iter().enumerate().all(|(i, row)| {
            row.iter().enumerate().all(|(k, v)| {
                if i == k {
                    *v == S::one()
                } else {
                    v.is_zero()
                }
            })
        })
    }

    pub fn evaluate(&self, z: &[S]) -> Result<Vec<S>> {
        self.components.iter().map(|c| c.evaluate(z)).collect()
    }

    pub fn to_field(&self) -> Result<PolyVectorField<S>> {
        PolyVectorField::from_components(&self.components)
    }
}

/// `f ∘ q`, keeping terms of degree ≤ `max_degree`.
pub fn compose_function<S: Scalar>(
    f: &PolyFunction<S>,
    q: &PolyMap<S>,
    max_degree: i64,
) -> Result<PolyFunction<S>> {
    check_n(f.n(), q.n())?;
    let n = f.n();
    let mut cache: HashMap<(usize, i32), PolyFunction<S>> = HashMap::new();
    let mut acc = PolyFunction::zero(n);
    for (m, c) in f.terms() {
        let mut term = PolyFunction::constant(n, c.clone());
        for (k, &e) in m.entries().iter().enumerate() {
            if e == 0 {
                continue;
            }
            let p = power(&mut cache, q.component(k), k, e, max_degree)?;
            term = term.mul_truncated(&p, max_degree)?;
            if term.is_zero() {
                break;
            }
        }
        acc = acc.add(&term)?;
    }
    Ok(acc.truncated(max_degree))
}

fn power<S: Scalar>(
    cache: &mut HashMap<(usize, i32), PolyFunction<S>>,
    base: &PolyFunction<S>,
    k: usize,
    e: i32,
    max_degree: i64,
) -> Result<PolyFunction<S>> {
    if let Some(p) = cache.get(&(k, e)) {
        return Ok(p.clone());
    }
    let p = if e == 1 {
        base.truncated(max_degree)
    } else {
        let prev = power(cache, base, k, e - 1, max_degree)?;
        prev.mul_truncated(base, max_degree)?
    };
    cache.insert((k, e), p.clone());
    Ok(p)
}

/// `p ∘ q` truncated at degree `max_degree`.
pub fn compose_truncated<S: Scalar>(
    p: &PolyMap<S>,
    q: &PolyMap<S>,
    max_degree: i64,
) -> Result<PolyMap<S>> {
    check_n(p.n(), q.n())?;
    let comps = p
        .components()
        .iter()
        .map(|f| compose_function(f, q, max_degree))
        .collect::<Result<Vec<_>>>()?;
    PolyMap::new(comps, max_degree)
}

fn apply_linear<S: Scalar>(a: &[Vec<S>], f: &[PolyFunction<S>]) -> Result<Vec<PolyFunction<S>>> {
    let n = f.len();
    a.iter()
        .map(|row| {
            let mut acc = PolyFunction::zero(n);
            for (k, coeff) in row.iter().enumerate() {
                if !coeff.is_zero() {
                    acc = acc.add(&f[k].scale(coeff))?;
                }
            }
            Ok(acc)
        })
        .collect()
}

/// Compositional inverse up to degree `max_degree`.
///
/// Writes `p = A·w + r(w)` with `r` of order ≥ 2 and iterates
/// `q ← A⁻¹(w − r∘q)`; each pass fixes one more degree.
pub fn invert_truncated<S: Scalar>(p: &PolyMap<S>, max_degree: i64) -> Result<PolyMap<S>> {
    if p.has_constant_term() {
        return Err(Error::NonZeroConstantTerm);
    }
    let n = p.n();
    let a = p.linear_part();
    let a_cols: Vec<Vec<S>> = (0..n).map(|k| a.iter().map(|row| row[k].clone()).collect()).collect();
    // columns of A⁻¹ solve A x = e_k
    let mut inv_cols = Vec::with_capacity(n);
    for k in 0..n {
        let mut e = vec![S::zero(); n];
        e[k] = S::one();
        inv_cols.push(solve_square(&a_cols, &e).ok_or(Error::SingularLinearPart)?);
    }
    let a_inv: Vec<Vec<S>> = (0..n)
        .map(|i| (0..n).map(|k| inv_cols[k][i].clone()).collect())
        .collect();

    let coords: Vec<PolyFunction<S>> = (0..n).map(|k| PolyFunction::coordinate(n, k)).collect();
    let nonlinear: Vec<PolyFunction<S>> = p
        .components()
        .iter()
        .map(|c| c.homogeneous_part(1).scale(&-S::one()).add(c))
        .collect::<Result<_>>()?;
    let nonlinear = PolyMap::new(nonlinear, max_degree)?;

    let mut q = PolyMap::new(apply_linear(&a_inv, &coords)?, max_degree)?;
    for _ in 1..max_degree.max(1) {
        let r_of_q = compose_truncated(&nonlinear, &q, max_degree)?;
        let rhs = coords
            .iter()
            .zip(r_of_q.components())
            .map(|(w, r)| w.sub(r))
            .collect::<Result<Vec<_>>>()?;
        q = PolyMap::new(apply_linear(&a_inv, &rhs)?, max_degree)?;
    }
    Ok(q)
}

/// Push-forward `Φ_*X = (dΦ·X) ∘ Φ⁻¹`, everything truncated at `max_degree`.
pub fn pushforward_truncated<S: Scalar>(
    phi: &PolyMap<S>,
    x: &PolyVectorField<S>,
    max_degree: i64,
) -> Result<PolyVectorField<S>> {
    check_n(phi.n(), x.n())?;
    let phi_inv = invert_truncated(phi, max_degree)?;
    let comps = phi
        .components()
        .iter()
        .map(|phi_i| {
            let d = lie_derivative_function(x, phi_i)?;
            compose_function(&d, &phi_inv, max_degree)
        })
        .collect::<Result<Vec<_>>>()?;
    PolyVectorField::from_components(&comps)
}
