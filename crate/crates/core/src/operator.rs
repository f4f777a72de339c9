//! Finite matrices of linear operators between monomial bases.

use std::collections::{BTreeMap, BTreeSet};

use crate::linalg::RankReport;
use crate::scalar::Scalar;

/// Dense column-major matrix with basis labels on rows and columns.
#[derive(Clone, Debug, PartialEq)]
pub struct OperatorMatrix<S: Scalar, K: Ord + Clone> {
    rows: Vec<K>,
    cols: Vec<K>,
    columns: Vec<Vec<S>>,
}

impl<S: Scalar, K: Ord + Clone> OperatorMatrix<S, K> {
    /// Builds the matrix from sparse image columns. The row basis is the
    /// given `rows` merged with every key that occurs in an image, sorted.
    pub fn from_images(cols: Vec<K>, images: &[BTreeMap<K, S>], rows: impl IntoIterator<Item = K>) -> Self {
        let mut row_set: BTreeSet<K> = rows.into_iter().collect();
        for img in images {
            row_set.extend(img.keys().cloned());
        }
        let rows: Vec<K> = row_set.into_iter().collect();
        let index: BTreeMap<&K, usize> = rows.iter().enumerate().map(|(i, k)| (k, i)).collect();
        let columns = images
            .iter()
            .map(|img| {
                let mut col = vec![S::zero(); rows.len()];
                for (k, v) in img {
                    col[index[k]] = v.clone();
                }
                col
            })
            .collect();
        Self { rows, cols, columns }
    }

    pub(crate) fn from_parts(rows: Vec<K>, cols: Vec<K>, columns: Vec<Vec<S>>) -> Self {
        Self { rows, cols, columns }
    }

    pub fn nrows(&self) -> usize {
        self.rows.len()
    }

    pub fn ncols(&self) -> usize {
        self.cols.len()
    }

    pub fn row_labels(&self) -> &[K] {
        &self.rows
    }

    pub fn col_labels(&self) -> &[K] {
        &self.cols
    }

    pub fn columns(&self) -> &[Vec<S>] {
        &self.columns
    }

    pub fn entry(&self, i: usize, k: usize) -> &S {
        &self.columns[k][i]
    }

    pub fn is_zero(&self) -> bool {
        self.columns.iter().all(|c| c.iter().all(|v| v.is_zero()))
    }

    pub fn rank(&self) -> RankReport {
        S::rank_of(&self.columns, self.nrows())
    }

    /// Null-space basis, as coordinate vectors over the column labels.
    pub fn kernel(&self) -> (Vec<Vec<S>>, RankReport) {
        S::kernel_of(&self.columns, self.nrows())
    }

    /// Column of `rhs` expressed over the row labels (missing keys are zero;
    /// keys outside the row basis are ignored).
    pub fn dense_column(&self, rhs: &BTreeMap<K, S>) -> Vec<S> {
        self.rows
            .iter()
            .map(|k| rhs.get(k).cloned().unwrap_or_else(S::zero))
            .collect()
    }

    /// Square and diagonal with every diagonal entry non-zero, rows and
    /// columns carrying the same labels.
    pub fn is_invertible_diagonal(&self) -> bool {
        self.rows == self.cols
            && self.columns.iter().enumerate().all(|(k, col)| {
                col.iter()
                    .enumerate()
                    .all(|(i, v)| if i == k { !v.is_zero() } else { v.is_zero() })
            })
    }
}
