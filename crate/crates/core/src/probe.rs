//! Exact finite-truncation probes of `L_ξ` on cohomology models: the
//! negative-Laurent model of top cohomology, `H⁰`, and the non-resonant
//! complement `g_λ^⊥`.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::laurent::{LaurentBox, LaurentFunction, LaurentVectorField};
use crate::linalg::RankReport;
use crate::multi_index::{indices_up_to, MultiIndex};
use crate::operator::OperatorMatrix;
use crate::poly::{check_n, derive_terms, PolyFunction, PolyVectorField};
use crate::resonance::{poincare_check, require_resonant, resonance_bound, Spectrum};
use crate::scalar::Scalar;
use crate::versal::{bracket_images, field_keys_up_to, FieldKey};

/// `[−d, −1]ⁿ`.
pub fn neg_box(n: usize, d: u32) -> Result<LaurentBox> {
    if d == 0 {
        return Err(Error::InvalidParameter("negative box depth must be ≥ 1".into()));
    }
    LaurentBox::cube(n, -(d as i32), -1)
}

/// One dropped output term: `(domain key, output key, coefficient)`.
pub type Discarded<S, K> = (K, K, S);

#[derive(Clone, Debug, PartialEq)]
pub struct ProbeResult<S: Scalar, K: Ord + Clone> {
    pub matrix: OperatorMatrix<S, K>,
    pub rank: RankReport,
    pub injective: bool,
    /// For diagonal `ξ`: whether the operator maps the domain box onto itself
    /// by an invertible diagonal matrix. `None` otherwise.
    pub square_bijective: Option<bool>,
    /// Output terms outside the all-negative codomain (coboundaries).
    pub discarded: Vec<Discarded<S, K>>,
}

fn is_diagonal<S: Scalar>(xi: &PolyVectorField<S>) -> bool {
    xi.terms().keys().all(|(j, m)| m.is_unit() == Some(*j))
}

type Split<S, K> = (Vec<BTreeMap<K, S>>, Vec<Discarded<S, K>>);

fn split_images<S: Scalar, K: Ord + Clone>(cols: &[K], images: Vec<BTreeMap<K, S>>, keep: impl Fn(&K) -> bool) -> Split<S, K> {
    let mut discarded = Vec::new();
    let kept = images
        .into_iter()
        .zip(cols)
        .map(|(img, col)| {
            let mut out = BTreeMap::new();
            for (k, v) in img {
                if keep(&k) {
                    out.insert(k, v);
                } else {
                    discarded.push((col.clone(), k, v));
                }
            }
            out
        })
        .collect();
    (kept, discarded)
}

fn finish<S: Scalar, K: Ord + Clone>(
    cols: Vec<K>,
    kept: Vec<BTreeMap<K, S>>,
    codomain: Vec<K>,
    discarded: Vec<Discarded<S, K>>,
    diagonal: bool,
) -> ProbeResult<S, K> {
    let square_bijective = diagonal.then(|| OperatorMatrix::from_images(cols.clone(), &kept, cols.iter().cloned()).is_invertible_diagonal());
    let matrix = OperatorMatrix::from_images(cols, &kept, codomain);
    let rank = matrix.rank();
    ProbeResult {
        injective: rank.full_column_rank(),
        rank,
        matrix,
        square_bijective,
        discarded,
    }
}

/// `L_ξ` on functions supported in `[−d,−1]ⁿ`, projected onto all-negative
/// exponents. The codomain is `[−(d+1), −1]ⁿ`, which holds every projected
/// output exactly.
pub fn neg_laurent_matrix_sigma<S: Scalar>(
    xi: &PolyVectorField<S>,
    spec: &Spectrum<S>,
    d: u32,
) -> Result<ProbeResult<S, MultiIndex>> {
    check_n(spec.n(), xi.n())?;
    require_resonant(xi, spec)?;
    let n = xi.n();
    let dom = neg_box(n, d)?;
    let cod = neg_box(n, d + 1)?;
    let cols = dom.indices();
    let images = cols
        .iter()
        .map(|m| LaurentFunction::from_terms(dom.clone(), [(m.clone(), S::one())])?.derive_by(xi))
        .collect::<Result<Vec<_>>>()?;
    let (kept, discarded) = split_images(&cols, images, |m: &MultiIndex| m.is_all_negative());
    if let Some(bad) = kept.iter().flat_map(|img| img.keys()).find(|m| !cod.contains(m)) {
        return Err(Error::OutsideBox { index: bad.clone() });
    }
    Ok(finish(cols, kept, cod.indices(), discarded, is_diagonal(xi)))
}

/// `L_ξ` on vector fields `z^m ∂_s` with `m ∈ [−d,−1]ⁿ`, projected onto
/// all-negative exponents, codomain `[−(d+1), −1]ⁿ` in every component.
pub fn neg_laurent_matrix_theta<S: Scalar>(
    xi: &PolyVectorField<S>,
    spec: &Spectrum<S>,
    d: u32,
) -> Result<ProbeResult<S, FieldKey>> {
    check_n(spec.n(), xi.n())?;
    require_resonant(xi, spec)?;
    let n = xi.n();
    let dom = neg_box(n, d)?;
    let cod = neg_box(n, d + 1)?;
    let ms = dom.indices();
    let cols: Vec<FieldKey> = (0..n).flat_map(|s| ms.iter().map(move |m| (s, m.clone()))).collect();
    let images = cols
        .iter()
        .map(|(s, m)| LaurentVectorField::from_terms(dom.clone(), [(*s, m.clone(), S::one())])?.bracket_with(xi))
        .collect::<Result<Vec<_>>>()?;
    let (kept, discarded) = split_images(&cols, images, |(_, m): &FieldKey| m.is_all_negative());
    if let Some((_, bad)) = kept.iter().flat_map(|img| img.keys()).find(|(_, m)| !cod.contains(m)) {
        return Err(Error::OutsideBox { index: bad.clone() });
    }
    let cod_ms = cod.indices();
    let codomain: Vec<FieldKey> = (0..n).flat_map(|s| cod_ms.iter().map(move |m| (s, m.clone()))).collect();
    Ok(finish(cols, kept, codomain, discarded, is_diagonal(xi)))
}

#[derive(Clone, Debug, PartialEq)]
pub struct H0Report<S: Scalar> {
    pub kernel: Vec<PolyFunction<S>>,
    /// The kernel is exactly `span{1}`.
    pub kernel_is_constants: bool,
    /// The constant function 1 is not in the image.
    pub constant_unreachable: bool,
    pub rank: RankReport,
    pub domain_dim: usize,
    pub codomain_dim: usize,
    pub codomain_degree: i64,
}

/// `L_ξ` on functions of degree ≤ `d` into the uncompressed codomain.
pub fn h0_sigma_structure<S: Scalar>(xi: &PolyVectorField<S>, spec: &Spectrum<S>, d: u32) -> Result<H0Report<S>> {
    check_n(spec.n(), xi.n())?;
    require_resonant(xi, spec)?;
    let bound = resonance_bound(&poincare_check(spec))? as i64;
    let n = xi.n();
    let cols = indices_up_to(n, 0, d);
    let zero = MultiIndex::zero(n);
    let images: Vec<BTreeMap<MultiIndex, S>> = cols
        .iter()
        .map(|m| derive_terms(xi.terms(), &BTreeMap::from([(m.clone(), S::one())])))
        .collect();
    let l = OperatorMatrix::from_images(cols.clone(), &images, [zero.clone()]);
    let codomain_degree = l.row_labels().iter().map(|m| m.degree()).max().unwrap_or(0);
    if codomain_degree > d as i64 + bound {
        return Err(Error::InvalidParameter(format!(
            "codomain degree {codomain_degree} exceeds {d} + {bound}"
        )));
    }
    let (ker, rank) = l.kernel();
    let kernel: Vec<PolyFunction<S>> = ker
        .iter()
        .map(|v| PolyFunction::from_terms(n, cols.iter().cloned().zip(v.iter().cloned())))
        .collect::<Result<_>>()?;
    let kernel_is_constants = kernel.len() == 1 && kernel[0].terms().keys().all(|m| *m == zero);
    let mut aug = l.columns().to_vec();
    aug.push(l.dense_column(&BTreeMap::from([(zero, S::one())])));
    let aug_rank = S::rank_of(&aug, l.nrows());
    Ok(H0Report {
        kernel,
        kernel_is_constants,
        constant_unreachable: aug_rank.rank > rank.rank,
        domain_dim: l.ncols(),
        codomain_dim: l.nrows(),
        codomain_degree,
        rank,
    })
}

/// `L_ξ` on non-resonant fields of degree ≤ `d`, output projected onto its
/// non-resonant part (resonant output parts are logged in `discarded`).
pub fn gperp_injectivity<S: Scalar>(
    xi: &PolyVectorField<S>,
    spec: &Spectrum<S>,
    d: u32,
) -> Result<ProbeResult<S, FieldKey>> {
    check_n(spec.n(), xi.n())?;
    require_resonant(xi, spec)?;
    let cols: Vec<FieldKey> = field_keys_up_to(xi.n(), d)
        .into_iter()
        .filter(|(s, m)| !spec.is_resonant(*s, m))
        .collect();
    let images = bracket_images(xi, &cols);
    let (kept, discarded) = split_images(&cols, images, |(s, m): &FieldKey| !spec.is_resonant(*s, m));
    let matrix = OperatorMatrix::from_images(cols, &kept, std::iter::empty());
    let rank = matrix.rank();
    Ok(ProbeResult {
        injective: rank.full_column_rank(),
        rank,
        matrix,
        square_bijective: None,
        discarded,
    })
}
