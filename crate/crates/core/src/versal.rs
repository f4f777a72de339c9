//! `L_ξ` on `g_λ`, the versal parameter space `S` and Kodaira–Spencer classes.

use std::collections::BTreeMap;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::linalg::{solve_square, RankReport};
use crate::multi_index::{indices_up_to, MultiIndex};
use crate::operator::OperatorMatrix;
use crate::poly::{bracket_terms, check_n, PolyVectorField};
use crate::resonance::{
    check_linear_part, poincare_check, require_resonant, resonance_bound, resonant_basis, split_resonant,
    ResonantBasis, Spectrum,
};
use crate::scalar::Scalar;

pub type FieldKey = (usize, MultiIndex);

/// All `(j, m)` with `0 ≤ |m| ≤ d`, component-major.
pub fn field_keys_up_to(n: usize, d: u32) -> Vec<FieldKey> {
    let ms = indices_up_to(n, 0, d);
    (0..n).flat_map(|j| ms.iter().map(move |m| (j, m.clone()))).collect()
}

fn monomial_terms<S: Scalar>(key: &FieldKey) -> BTreeMap<FieldKey, S> {
    BTreeMap::from([(key.clone(), S::one())])
}

/// Images `[ξ, z^m ∂_j]` of the given keys, computed in parallel.
pub(crate) fn bracket_images<S: Scalar>(xi: &PolyVectorField<S>, keys: &[FieldKey]) -> Vec<BTreeMap<FieldKey, S>> {
    keys.par_iter()
        .map(|k| bracket_terms(xi.terms(), &monomial_terms(k)))
        .collect()
}

/// Square matrix of `L_ξ` on `g_λ` in the resonant basis.
pub fn l_xi_matrix_on_g<S: Scalar>(
    xi: &PolyVectorField<S>,
    basis: &ResonantBasis,
    spec: &Spectrum<S>,
) -> Result<OperatorMatrix<S, FieldKey>> {
    check_n(basis.n(), xi.n())?;
    require_resonant(xi, spec)?;
    let keys = basis.elements().to_vec();
    let images = bracket_images(xi, &keys);
    for img in &images {
        if let Some((s, m)) = img.keys().find(|(s, m)| !basis.contains(*s, m)) {
            return Err(Error::BracketEscapedAlgebra {
                component: s + 1,
                index: m.clone(),
            });
        }
    }
    let columns = images
        .iter()
        .map(|img| {
            let mut col = vec![S::zero(); keys.len()];
            for ((s, m), v) in img {
                col[basis.position(*s, m).expect("checked above")] = v.clone();
            }
            col
        })
        .collect();
    Ok(OperatorMatrix::from_parts(keys.clone(), keys, columns))
}

/// The versal space `S`: a complement of `span(ξ) + L_ξ(g_λ)` inside `g_λ`.
#[derive(Clone, Debug, PartialEq)]
pub struct VersalResult<S: Scalar> {
    pub dim_g: usize,
    pub rank_v: usize,
    pub kernel_dim: usize,
    pub basis: ResonantBasis,
    /// Complement vectors as coordinates over `basis`.
    pub complement_coords: Vec<Vec<S>>,
    pub complement_basis: Vec<PolyVectorField<S>>,
    /// Independent columns of `[ξ | L_ξ]`, as coordinates over `basis`.
    pub v_basis: Vec<Vec<S>>,
    /// True when every complement vector is a basis monomial.
    pub monomial_complement: bool,
    pub rank_report: RankReport,
    pub warnings: Vec<String>,
}

pub fn versal_space<S: Scalar>(xi: &PolyVectorField<S>, spec: &Spectrum<S>) -> Result<VersalResult<S>> {
    check_n(spec.n(), xi.n())?;
    let cert = poincare_check(spec);
    resonance_bound(&cert)?;
    require_resonant(xi, spec)?;
    check_linear_part(xi, spec)?;

    let basis = resonant_basis(spec)?;
    let dim_g = basis.len();
    let l = l_xi_matrix_on_g(xi, &basis, spec)?;
    let xi_coords = basis
        .coordinates(xi)
        .ok_or_else(|| Error::Complement("ξ has a term outside the resonant basis".into()))?;

    let mut v_cols = vec![xi_coords];
    v_cols.extend(l.columns().iter().cloned());
    let n_v = v_cols.len();
    let mut warnings = Vec::new();

    let l_report = l.rank();
    let kernel_dim = dim_g - l_report.rank;
    if l_report.ambiguous {
        warnings.push("rank of L_ξ on g_λ is numerically ambiguous".to_string());
    }

    // unit directions are tried from the top of the basis down, so that
    // non-linear resonant monomials are preferred as deformation parameters
    let mut candidates = v_cols.clone();
    for k in (0..dim_g).rev() {
        let mut e = vec![S::zero(); dim_g];
        e[k] = S::one();
        candidates.push(e);
    }
    let (picked, report) = S::independent_columns(&candidates, dim_g);
    if report.ambiguous {
        warnings.push("rank of span(ξ) + L_ξ(g_λ) is numerically ambiguous".to_string());
    }
    let v_idx: Vec<usize> = picked.iter().copied().filter(|&i| i < n_v).collect();
    let rank_v = v_idx.len();
    let v_basis: Vec<Vec<S>> = v_idx.iter().map(|&i| v_cols[i].clone()).collect();
    let mut complement_coords: Vec<Vec<S>> = picked
        .iter()
        .rev()
        .filter(|&&i| i >= n_v)
        .map(|&i| candidates[i].clone())
        .collect();
    let mut monomial_complement = true;

    if rank_v + complement_coords.len() != dim_g {
        // fall back to the orthogonal complement of V
        monomial_complement = false;
        warnings.push("monomial complement selection failed; using orthogonal complement".to_string());
        let vh: Vec<Vec<S>> = (0..dim_g)
            .map(|i| v_basis.iter().map(|v| v[i].conj()).collect())
            .collect();
        let (ker, _) = S::kernel_of(&vh, v_basis.len());
        if rank_v + ker.len() != dim_g {
            return Err(Error::Complement(format!(
                "dim g = {dim_g}, rank V = {rank_v}, complement found {}",
                ker.len()
            )));
        }
        complement_coords = ker;
    }

    let complement_basis = complement_coords.iter().map(|c| basis.from_coordinates(c)).collect();
    Ok(VersalResult {
        dim_g,
        rank_v,
        kernel_dim,
        basis,
        complement_coords,
        complement_basis,
        v_basis,
        monomial_complement,
        rank_report: report,
        warnings,
    })
}

impl<S: Scalar> VersalResult<S> {
    pub fn dim_s(&self) -> usize {
        self.complement_coords.len()
    }
}

/// Class of `x` in `g_λ / (span(ξ) + L_ξ(g_λ))`, as coordinates over the
/// complement basis. The non-resonant part of `x` is discarded first.
///
/// The global sign of the Kodaira–Spencer map is dropped; only its
/// isomorphy matters for versality.
pub fn kodaira_spencer_class<S: Scalar>(
    x: &PolyVectorField<S>,
    result: &VersalResult<S>,
    spec: &Spectrum<S>,
) -> Result<Vec<S>> {
    let (xr, _) = split_resonant(x, spec)?;
    let coords = result
        .basis
        .coordinates(&xr)
        .ok_or_else(|| Error::Complement("resonant part outside the basis".into()))?;
    let mut cols = result.v_basis.clone();
    cols.extend(result.complement_coords.iter().cloned());
    let sol = solve_square(&cols, &coords)
        .ok_or_else(|| Error::Complement("V and the complement do not span g_λ".into()))?;
    Ok(sol[result.v_basis.len()..].to_vec())
}

/// Matrix of `L_ξ` from fields of degree ≤ `d` into the exact codomain.
pub fn l_xi_matrix_up_to<S: Scalar>(xi: &PolyVectorField<S>, d: u32) -> OperatorMatrix<S, FieldKey> {
    let keys = field_keys_up_to(xi.n(), d);
    let images = bracket_images(xi, &keys);
    OperatorMatrix::from_images(keys, &images, std::iter::empty())
}

#[derive(Clone, Debug, PartialEq)]
pub struct DirectSumReport {
    pub holds: bool,
    pub rank_l: usize,
    pub rank_augmented: usize,
    pub domain_dim: usize,
    pub codomain_dim: usize,
    /// Largest degree occurring in the codomain.
    pub codomain_degree: i64,
    pub ambiguous: bool,
}

/// `span(ξ) ∩ L_ξ(fields of degree ≤ d) = 0`, tested by ranks in the
/// uncompressed codomain.
pub fn direct_sum_check<S: Scalar>(xi: &PolyVectorField<S>, spec: &Spectrum<S>, d: u32) -> Result<DirectSumReport> {
    check_n(spec.n(), xi.n())?;
    require_resonant(xi, spec)?;
    let keys = field_keys_up_to(xi.n(), d);
    let images = bracket_images(xi, &keys);
    let l = OperatorMatrix::from_images(keys, &images, xi.terms().keys().cloned());
    let xi_col = l.dense_column(xi.terms());
    let rank_l = l.rank();
    let mut aug = vec![xi_col];
    aug.extend(l.columns().iter().cloned());
    let rank_aug = S::rank_of(&aug, l.nrows());
    Ok(DirectSumReport {
        holds: rank_aug.rank == 1 + rank_l.rank,
        rank_l: rank_l.rank,
        rank_augmented: rank_aug.rank,
        domain_dim: l.ncols(),
        codomain_dim: l.nrows(),
        codomain_degree: l.row_labels().iter().map(|(_, m)| m.degree()).max().unwrap_or(0),
        ambiguous: rank_l.ambiguous || rank_aug.ambiguous,
    })
}

/// Basis of `ker L_ξ` on fields of degree ≤ `d`.
pub fn commuting_kernel<S: Scalar>(
    xi: &PolyVectorField<S>,
    spec: &Spectrum<S>,
    d: u32,
) -> Result<Vec<PolyVectorField<S>>> {
    check_n(spec.n(), xi.n())?;
    require_resonant(xi, spec)?;
    let l = l_xi_matrix_up_to(xi, d);
    let (ker, _) = l.kernel();
    let n = xi.n();
    ker.iter()
        .map(|v| {
            PolyVectorField::from_terms(
                n,
                l.col_labels().iter().zip(v).map(|((j, m), c)| (*j, m.clone(), c.clone())),
            )
        })
        .collect()
}
