//! Rank, kernels and independent-column selection for column matrices.
//!
//! Exact mode uses sparse fraction-exact echelon insertion; float mode uses a
//! complex SVD with the relative cut `1e-10 · σ_max`.

use std::collections::{BTreeMap, HashMap};

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::scalar::Scalar;

/// Relative singular-value cut below which a direction counts as zero.
pub const RANK_REL_TOL: f64 = 1e-10;
/// Singular values within `[τ, RANK_WARN_FACTOR·τ]` make a rank decision ambiguous.
pub const RANK_WARN_FACTOR: f64 = 1e3;

#[derive(Clone, Debug, PartialEq)]
pub struct RankReport {
    pub rank: usize,
    pub nrows: usize,
    pub ncols: usize,
    /// Absolute cut used (float mode only).
    pub tolerance: Option<f64>,
    pub sigma_max: Option<f64>,
    /// Smallest singular value kept above the cut (float mode only).
    pub sigma_min_kept: Option<f64>,
    /// A singular value fell into the warning band just above the cut.
    pub ambiguous: bool,
}

impl RankReport {
    fn exact(rank: usize, nrows: usize, ncols: usize) -> Self {
        Self {
            rank,
            nrows,
            ncols,
            tolerance: None,
            sigma_max: None,
            sigma_min_kept: None,
            ambiguous: false,
        }
    }

    pub fn full_column_rank(&self) -> bool {
        self.rank == self.ncols
    }
}

/// Solves the square system `a · x = b`, `a` given by columns. `None` when singular.
pub fn solve_square<S: Scalar>(cols: &[Vec<S>], rhs: &[S]) -> Option<Vec<S>> {
    let n = rhs.len();
    if cols.len() != n || cols.iter().any(|c| c.len() != n) {
        return None;
    }
    // row-major augmented copy
    let mut a: Vec<Vec<S>> = (0..n)
        .map(|i| {
            let mut row: Vec<S> = cols.iter().map(|c| c[i].clone()).collect();
            row.push(rhs[i].clone());
            row
        })
        .collect();
    let scale = a
        .iter()
        .flat_map(|r| r[..n].iter().map(|v| v.abs()))
        .fold(0.0, f64::max);
    for k in 0..n {
        let pivot = (k..n)
            .filter(|&i| !a[i][k].is_zero())
            .max_by(|&i, &j| a[i][k].abs().total_cmp(&a[j][k].abs()))?;
        if !S::EXACT && a[pivot][k].abs() <= 1e-14 * scale {
            return None;
        }
        a.swap(k, pivot);
        let inv = S::one() / a[k][k].clone();
        for j in k..=n {
            a[k][j] = a[k][j].clone() * inv.clone();
        }
        for i in 0..n {
            if i != k && !a[i][k].is_zero() {
                let f = a[i][k].clone();
                for j in k..=n {
                    let v = a[k][j].clone();
                    a[i][j] = a[i][j].clone() - f.clone() * v;
                }
            }
        }
    }
    Some(a.into_iter().map(|mut r| r.pop().unwrap()).collect())
}

pub(crate) mod exact {
    use super::*;

    type SparseVec<S> = BTreeMap<usize, S>;

    /// Incrementally built row-echelon basis of a column space.
    pub(crate) struct Echelon<S: Scalar> {
        // (reduced vector with leading entry 1, combination of original columns)
        basis: Vec<(SparseVec<S>, SparseVec<S>)>,
        by_pivot: HashMap<usize, usize>,
    }

    impl<S: Scalar> Echelon<S> {
        pub(crate) fn new() -> Self {
            Self {
                basis: Vec::new(),
                by_pivot: HashMap::new(),
            }
        }

        pub(crate) fn rank(&self) -> usize {
            self.basis.len()
        }

        /// Inserts column `index`; returns its combination when it reduces to zero.
        pub(crate) fn insert(&mut self, index: usize, col: &[S]) -> Option<SparseVec<S>> {
            let mut v: SparseVec<S> = col
                .iter()
                .enumerate()
                .filter(|(_, x)| !x.is_zero())
                .map(|(i, x)| (i, x.clone()))
                .collect();
            let mut comb: SparseVec<S> = BTreeMap::new();
            comb.insert(index, S::one());
            loop {
                let Some((&lead, lead_val)) = v.iter().next() else {
                    return Some(comb);
                };
                match self.by_pivot.get(&lead) {
                    Some(&b) => {
                        let factor = lead_val.clone();
                        let (bv, bc) = &self.basis[b];
                        axpy(&mut v, &factor, bv);
                        axpy(&mut comb, &factor, bc);
                    }
                    None => {
                        let inv = S::one() / lead_val.clone();
                        for x in v.values_mut() {
                            *x = x.clone() * inv.clone();
                        }
                        for x in comb.values_mut() {
                            *x = x.clone() * inv.clone();
                        }
                        self.by_pivot.insert(lead, self.basis.len());
                        self.basis.push((v, comb));
                        return None;
                    }
                }
            }
        }
    }

    /// `v -= f · w`, dropping exact zeros.
    fn axpy<S: Scalar>(v: &mut SparseVec<S>, f: &S, w: &SparseVec<S>) {
        for (i, x) in w {
            let delta = f.clone() * x.clone();
            let entry = v.entry(*i).or_insert_with(S::zero);
            *entry = entry.clone() - delta;
            if entry.is_zero() {
                v.remove(i);
            }
        }
    }

    pub(crate) fn rank<S: Scalar>(cols: &[Vec<S>], nrows: usize) -> RankReport {
        let mut ech = Echelon::new();
        for (i, c) in cols.iter().enumerate() {
            ech.insert(i, c);
        }
        RankReport::exact(ech.rank(), nrows, cols.len())
    }

    pub(crate) fn kernel<S: Scalar>(cols: &[Vec<S>], nrows: usize) -> (Vec<Vec<S>>, RankReport) {
        let mut ech = Echelon::new();
        let mut kernel = Vec::new();
        for (i, c) in cols.iter().enumerate() {
            if let Some(comb) = ech.insert(i, c) {
                let mut dense = vec![S::zero(); cols.len()];
                for (j, x) in comb {
                    dense[j] = x;
                }
                kernel.push(dense);
            }
        }
        let rank = ech.rank();
        (kernel, RankReport::exact(rank, nrows, cols.len()))
    }

    pub(crate) fn independent_columns<S: Scalar>(
        cols: &[Vec<S>],
        nrows: usize,
    ) -> (Vec<usize>, RankReport) {
        let mut ech = Echelon::new();
        let picked: Vec<usize> = cols
            .iter()
            .enumerate()
            .filter_map(|(i, c)| ech.insert(i, c).is_none().then_some(i))
            .collect();
        let rank = picked.len();
        (picked, RankReport::exact(rank, nrows, cols.len()))
    }
}

pub(crate) mod float {
    use super::*;

    fn to_matrix(cols: &[Vec<Complex64>], nrows: usize, min_rows: usize) -> DMatrix<Complex64> {
        let rows = nrows.max(min_rows);
        DMatrix::from_fn(rows, cols.len(), |i, j| {
            if i < nrows {
                cols[j][i]
            } else {
                Complex64::new(0.0, 0.0)
            }
        })
    }

    fn report_from_sigma(sigma: &[f64], nrows: usize, ncols: usize) -> RankReport {
        let sigma_max = sigma.iter().cloned().fold(0.0, f64::max);
        let tol = RANK_REL_TOL * sigma_max;
        let kept: Vec<f64> = sigma.iter().cloned().filter(|&s| s > tol && s > 0.0).collect();
        let ambiguous = sigma_max > 0.0
            && sigma
                .iter()
                .any(|&s| s >= tol && s <= RANK_WARN_FACTOR * tol);
        RankReport {
            rank: kept.len(),
            nrows,
            ncols,
            tolerance: Some(tol),
            sigma_max: Some(sigma_max),
            sigma_min_kept: kept.iter().cloned().reduce(f64::min),
            ambiguous,
        }
    }

    pub(crate) fn rank(cols: &[Vec<Complex64>], nrows: usize) -> RankReport {
        if cols.is_empty() || nrows == 0 {
            return report_from_sigma(&[], nrows, cols.len());
        }
        let m = to_matrix(cols, nrows, 0);
        let sigma = m.singular_values();
        report_from_sigma(sigma.as_slice(), nrows, cols.len())
    }

    pub(crate) fn kernel(
        cols: &[Vec<Complex64>],
        nrows: usize,
    ) -> (Vec<Vec<Complex64>>, RankReport) {
        let ncols = cols.len();
        if ncols == 0 {
            return (Vec::new(), report_from_sigma(&[], nrows, 0));
        }
        let m = to_matrix(cols, nrows, ncols);
        let svd = m.svd(false, true);
        let v_t = svd.v_t.expect("requested V");
        let sigma: Vec<f64> = svd.singular_values.iter().cloned().collect();
        let report = report_from_sigma(&sigma, nrows, ncols);
        let tol = report.tolerance.unwrap_or(0.0);
        let kernel = sigma
            .iter()
            .enumerate()
            .filter(|(_, &s)| s <= tol || s == 0.0)
            .map(|(i, _)| (0..ncols).map(|j| v_t[(i, j)].conj()).collect())
            .collect();
        (kernel, report)
    }

    pub(crate) fn independent_columns(
        cols: &[Vec<Complex64>],
        nrows: usize,
    ) -> (Vec<usize>, RankReport) {
        let mut picked: Vec<usize> = Vec::new();
        let mut ambiguous = false;
        for i in 0..cols.len() {
            let mut trial: Vec<Vec<Complex64>> = picked.iter().map(|&p| cols[p].clone()).collect();
            trial.push(cols[i].clone());
            let r = rank(&trial, nrows);
            ambiguous |= r.ambiguous;
            if r.rank > picked.len() {
                picked.push(i);
            }
        }
        let mut report = rank(cols, nrows);
        report.ambiguous |= ambiguous;
        (picked, report)
    }
}
