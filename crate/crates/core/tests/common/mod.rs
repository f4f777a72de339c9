#![allow(dead_code)]

use proptest::prelude::*;
use resonant_core::{
    poincare_check, resonant_basis, GaussianRational as Q, MultiIndex, PolyFunction, PolyVectorField, Scalar,
    Spectrum,
};

pub fn q(v: i64) -> Q {
    Q::from_i64(v)
}

pub fn small_rational() -> impl Strategy<Value = Q> {
    (-4i64..=4, 1i64..=3).prop_map(|(p, d)| Q::from_ratio(p, d))
}

pub fn small_gaussian() -> impl Strategy<Value = Q> {
    (-3i64..=3, 1i64..=2, -3i64..=3, 1i64..=2).prop_map(|(a, b, c, d)| Q::from_ratios((a, b), (c, d)))
}

pub fn multi_index(n: usize, max_deg: i32) -> impl Strategy<Value = MultiIndex> {
    proptest::collection::vec(0..=max_deg, n)
        .prop_filter("degree bound", move |v| v.iter().sum::<i32>() <= max_deg)
        .prop_map(MultiIndex::new)
}

pub fn monomial_field(n: usize, max_deg: i32) -> impl Strategy<Value = PolyVectorField<Q>> {
    (0..n, multi_index(n, max_deg), small_gaussian())
        .prop_map(move |(j, m, c)| PolyVectorField::monomial(n, j, m, c).unwrap())
}

pub fn poly_field(n: usize, max_deg: i32, max_terms: usize) -> impl Strategy<Value = PolyVectorField<Q>> {
    proptest::collection::vec((0..n, multi_index(n, max_deg), small_gaussian()), 0..=max_terms)
        .prop_map(move |t| PolyVectorField::from_terms(n, t).unwrap())
}

pub fn poly_function(n: usize, max_deg: i32, max_terms: usize) -> impl Strategy<Value = PolyFunction<Q>> {
    proptest::collection::vec((multi_index(n, max_deg), small_gaussian()), 0..=max_terms)
        .prop_map(move |t| PolyFunction::from_terms(n, t).unwrap())
}

const ROTATIONS: [(i64, i64, i64, i64); 6] = [(1, 1, 0, 1), (0, 1, 1, 1), (-1, 1, 0, 1), (0, 1, -1, 1), (3, 5, 4, 5), (1, 1, 1, 1)];

/// Gaussian-rational spectra in the Poincaré domain with `C ≤ max_c`.
///
/// Values are drawn in the right half plane and rotated, with an optional
/// injected relation `λ_k = λ_a + λ_b` or `2λ_a` so resonances are common.
pub fn poincare_spectrum(n_range: std::ops::RangeInclusive<usize>, max_c: u32) -> impl Strategy<Value = Spectrum<Q>> {
    n_range
        .prop_flat_map(|n| {
            (
                proptest::collection::vec((1i64..=4, 1i64..=2, -3i64..=3, 1i64..=2), n),
                0usize..ROTATIONS.len(),
                proptest::option::of((0..n, 0..n, 0..n)),
            )
        })
        .prop_filter_map("outside domain or bound too large", move |(raw, rot, inject)| {
            let (a, b, c, d) = ROTATIONS[rot];
            let u = Q::from_ratios((a, b), (c, d));
            let mut lambda: Vec<Q> = raw
                .iter()
                .map(|&(p, pd, r, rd)| Q::from_ratios((p, pd), (r, rd)) * u.clone())
                .collect();
            if let Some((k, i, j)) = inject {
                if k != i && k != j {
                    lambda[k] = lambda[i].clone() + lambda[j].clone();
                }
            }
            let spec = Spectrum::new(lambda).ok()?;
            let c = poincare_check(&spec).bound_c?;
            (c <= max_c).then_some(spec)
        })
}

/// A resonant field `ξ₀ + Σ c·(basis monomial)` with small rational coefficients.
pub fn resonant_field(spec: &Spectrum<Q>, picks: &[(usize, i64, i64)]) -> PolyVectorField<Q> {
    let basis = resonant_basis(spec).unwrap();
    let mut x = spec.diagonal_field();
    for &(k, p, d) in picks {
        let k = k % basis.len();
        let (s, m) = &basis.elements()[k];
        if m.degree() >= 2 {
            x = x
                .add(&PolyVectorField::monomial(spec.n(), *s, m.clone(), Q::from_ratio(p, d)).unwrap())
                .unwrap();
        }
    }
    x
}

/// `(m, λ)` by direct summation of real and imaginary parts.
pub fn dot_oracle(lambda: &[Q], m: &[i32]) -> Q {
    let mut re = Q::zero().re;
    let mut im = Q::zero().im;
    for (l, &e) in lambda.iter().zip(m) {
        let e = num_rational::BigRational::from_integer(e.into());
        re += l.re.clone() * e.clone();
        im += l.im.clone() * e;
    }
    Q::new(re, im)
}

/// Every `m ∈ ℕⁿ` with `1 ≤ |m| ≤ k`, by an odometer over `[0, k]ⁿ`.
pub fn brute_indices(n: usize, k: i32) -> Vec<Vec<i32>> {
    let mut out = Vec::new();
    let mut cur = vec![0i32; n];
    loop {
        let s: i32 = cur.iter().sum();
        if (1..=k).contains(&s) {
            out.push(cur.clone());
        }
        let mut i = 0;
        loop {
            if i == n {
                return out;
            }
            cur[i] += 1;
            if cur[i] > k {
                cur[i] = 0;
                i += 1;
            } else {
                break;
            }
        }
    }
}
