//! Acceptance suite: one test per criterion, each printing a PASS/FAIL line.
//! Run with `cargo test -p resonant-cli --test acceptance -- --nocapture`.

use std::collections::BTreeSet;
use std::process::Command;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use resonant_core::flow::closed_form_flow;
use resonant_core::normal_form::rescale_coefficients_exact;
use resonant_core::scalar::parse_rational;
use resonant_core::versal::l_xi_matrix_up_to;
use resonant_core::{
    conjugacy_residual, direct_sum_check, enumerate_resonances, gperp_injectivity, h0_sigma_structure,
    neg_laurent_matrix_sigma, neg_laurent_matrix_theta, numeric_flow, poincare_check, poincare_dulac_normalize,
    poincare_dulac_support, predicted_degrees, rescale_exponent, resonance_bound, resonant_basis, transversality_scan,
    versal_space, Complex64, GaussianRational as Q, MultiIndex, PolyVectorField, Scalar, Spectrum,
};

fn verdict(id: u32, name: &str, pass: bool, detail: String) {
    println!("criterion {id:>2} [{name}]: {} ({detail})", if pass { "PASS" } else { "FAIL" });
    assert!(pass, "criterion {id} failed: {detail}");
}

fn ints(v: &[i64]) -> Vec<Q> {
    v.iter().map(|&x| Q::from_i64(x)).collect()
}

fn spectrum(v: &[i64]) -> Spectrum<Q> {
    Spectrum::new(ints(v)).unwrap()
}

fn rat(rng: &mut ChaCha8Rng, num: i64, den: i64) -> Q {
    Q::from_ratios((rng.gen_range(-num..=num), rng.gen_range(1..=den)), (rng.gen_range(-num..=num), rng.gen_range(1..=den)))
}

const ROTATIONS: [((i64, i64), (i64, i64)); 6] =
    [((1, 1), (0, 1)), ((0, 1), (1, 1)), ((-1, 1), (0, 1)), ((0, 1), (-1, 1)), ((3, 5), (4, 5)), ((1, 1), (1, 1))];

/// Gaussian-rational λ in the open right half-plane, rotated, with an
/// occasional injected relation `λ_k = λ_i + λ_j`. Rejects anything outside
/// the Poincaré domain or with bound above `max_c`.
fn random_spectrum(rng: &mut ChaCha8Rng, n_lo: usize, n_hi: usize, max_c: u32) -> Spectrum<Q> {
    loop {
        let n = rng.gen_range(n_lo..=n_hi);
        let (re, im) = ROTATIONS[rng.gen_range(0..ROTATIONS.len())];
        let u = Q::from_ratios(re, im);
        let mut lambda: Vec<Q> = (0..n)
            .map(|_| {
                Q::from_ratios((rng.gen_range(1..=4), rng.gen_range(1..=2)), (rng.gen_range(-3..=3), rng.gen_range(1..=2)))
                    * u.clone()
            })
            .collect();
        if rng.gen_bool(0.6) {
            let (k, i, j) = (rng.gen_range(0..n), rng.gen_range(0..n), rng.gen_range(0..n));
            if k != i && k != j {
                lambda[k] = lambda[i].clone() + lambda[j].clone();
            }
        }
        let Ok(spec) = Spectrum::new(lambda) else { continue };
        match poincare_check(&spec).bound_c {
            Some(c) if c <= max_c => return spec,
            _ => continue,
        }
    }
}

/// `Σ m_k λ_k` by repeated addition.
fn dot_oracle(lambda: &[Q], m: &[i32]) -> Q {
    let mut acc = Q::zero();
    for (l, &k) in lambda.iter().zip(m) {
        for _ in 0..k {
            acc = acc + l.clone();
        }
    }
    acc
}

/// All `m ∈ ℕⁿ` with `lo ≤ |m| ≤ hi`, by plain recursion.
fn brute_indices(n: usize, lo: u32, hi: u32) -> Vec<Vec<i32>> {
    fn go(n: usize, left: i32, cur: &mut Vec<i32>, out: &mut Vec<Vec<i32>>) {
        if cur.len() == n - 1 {
            cur.push(left);
            out.push(cur.clone());
            cur.pop();
            return;
        }
        for v in 0..=left {
            cur.push(v);
            go(n, left - v, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    for d in lo..=hi {
        go(n, d as i32, &mut Vec::new(), &mut out);
    }
    out
}

fn is_resonant_oracle(lambda: &[Q], s: usize, m: &[i32]) -> bool {
    dot_oracle(lambda, m) == lambda[s]
}

fn all_resonant(x: &PolyVectorField<Q>, lambda: &[Q]) -> bool {
    x.terms().keys().all(|(s, m)| is_resonant_oracle(lambda, *s, m.entries()))
}

fn none_resonant(x: &PolyVectorField<Q>, lambda: &[Q]) -> bool {
    x.terms().keys().all(|(s, m)| !is_resonant_oracle(lambda, *s, m.entries()))
}

fn monomial(n: usize, s: usize, m: &[i32], c: Q) -> PolyVectorField<Q> {
    PolyVectorField::monomial(n, s, MultiIndex::new(m.to_vec()), c).unwrap()
}

/// `ξ₀` plus random multiples of the non-linear resonant basis fields.
fn random_resonant_field(rng: &mut ChaCha8Rng, spec: &Spectrum<Q>) -> PolyVectorField<Q> {
    let basis = resonant_basis(spec).unwrap();
    let mut x = spec.diagonal_field();
    for (s, m) in basis.elements() {
        if m.degree() >= 2 && rng.gen_bool(0.7) {
            x = x.add(&monomial(spec.n(), *s, m.entries(), rat(rng, 3, 3))).unwrap();
        }
    }
    x
}

#[test]
fn criterion_01_resonance_completeness() {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let mut discrepancies = 0;
    let mut nontrivial = 0;
    for _ in 0..200 {
        let spec = random_spectrum(&mut rng, 2, 4, 6);
        let c = resonance_bound(&poincare_check(&spec)).unwrap();
        let lambda = spec.lambda();
        let mut brute = BTreeSet::new();
        for m in brute_indices(spec.n(), 1, 2 * c) {
            for s in 0..spec.n() {
                if is_resonant_oracle(lambda, s, &m) {
                    brute.insert((s, m.clone()));
                }
            }
        }
        let got: BTreeSet<(usize, Vec<i32>)> = enumerate_resonances(&spec, true)
            .unwrap()
            .into_iter()
            .map(|r| (r.s, r.m.entries().to_vec()))
            .collect();
        nontrivial += brute.iter().filter(|(_, m)| m.iter().sum::<i32>() > 1).count();
        if got != brute {
            discrepancies += 1;
        }
    }
    verdict(
        1,
        "resonance completeness",
        discrepancies == 0,
        format!("200 spectra, {nontrivial} non-trivial resonances, {discrepancies} discrepancies"),
    );
}

type Case = (&'static [i64], Option<(usize, [i32; 2])>, usize, usize);

#[test]
fn criterion_02_worked_dimensions() {
    // (λ, optional extra unit term (j, m), dim g, dim S)
    let cases: [Case; 4] = [
        (&[1, 2], None, 3, 2),
        (&[1, 2], Some((1, [2, 0])), 3, 1),
        (&[1, 1], None, 4, 3),
        (&[1, 2, 3], None, 6, 5),
    ];
    let mut log = Vec::new();
    let mut ok = true;
    for (lambda, extra, want_g, want_s) in &cases {
        let spec = spectrum(lambda);
        let mut xi = spec.diagonal_field();
        if let Some((s, m)) = extra {
            xi = xi.add(&monomial(2, *s, m, Q::one())).unwrap();
        }
        let dim_g = resonant_basis(&spec).unwrap().len();
        // independent count of resonant monomial fields up to the bound
        let c = resonance_bound(&poincare_check(&spec)).unwrap();
        let counted: usize = brute_indices(lambda.len(), 1, c)
            .iter()
            .map(|m| (0..lambda.len()).filter(|&s| is_resonant_oracle(spec.lambda(), s, m)).count())
            .sum();
        let v = versal_space(&xi, &spec).unwrap();
        ok &= dim_g == *want_g && counted == *want_g && v.dim_s() == *want_s;
        log.push(format!("{lambda:?}: dim g = {dim_g}, dim S = {}", v.dim_s()));
    }
    verdict(2, "worked dimensions", ok, log.join("; "));
}

#[test]
fn criterion_03_commutant_identity() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let mut failures = 0;
    for _ in 0..50 {
        let spec = random_spectrum(&mut rng, 2, 4, 4);
        let c = resonance_bound(&poincare_check(&spec)).unwrap();
        let xi0 = spec.diagonal_field();
        let l = l_xi_matrix_up_to(&xi0, c);
        let (kernel, _) = l.kernel();
        let basis = resonant_basis(&spec).unwrap();
        let supported = kernel.iter().all(|v| {
            v.iter()
                .zip(l.col_labels())
                .all(|(x, (s, m))| x.is_zero() || basis.contains(*s, m))
        });
        let annihilated = (0..basis.len()).all(|k| xi0.bracket(&basis.field::<Q>(k)).unwrap().is_zero());
        if !(supported && annihilated && kernel.len() == basis.len()) {
            failures += 1;
        }
    }
    verdict(3, "commutant identity", failures == 0, format!("50 spectra, {failures} mismatches"));
}

#[test]
fn criterion_04_bracket_closure() {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let (mut rr_bad, mut rn_bad, mut pairs) = (0, 0, 0);
    while pairs < 1000 {
        let spec = random_spectrum(&mut rng, 2, 4, 5);
        let n = spec.n();
        let lambda = spec.lambda().to_vec();
        let basis = resonant_basis(&spec).unwrap();
        let c = resonance_bound(&poincare_check(&spec)).unwrap();
        let nonres: Vec<(usize, Vec<i32>)> = brute_indices(n, 0, c + 2)
            .into_iter()
            .flat_map(|m| (0..n).map(move |s| (s, m.clone())))
            .filter(|(s, m)| !is_resonant_oracle(&lambda, *s, m))
            .collect();
        let random_g = |rng: &mut ChaCha8Rng| {
            let mut y = PolyVectorField::zero(n);
            for _ in 0..rng.gen_range(1..=3) {
                let (s, m) = &basis.elements()[rng.gen_range(0..basis.len())];
                y = y.add(&monomial(n, *s, m.entries(), rat(rng, 4, 3))).unwrap();
            }
            y
        };
        for _ in 0..50 {
            let a = random_g(&mut rng);
            let b = random_g(&mut rng);
            if !all_resonant(&a.bracket(&b).unwrap(), &lambda) {
                rr_bad += 1;
            }
            let (s, m) = &nonres[rng.gen_range(0..nonres.len())];
            let x = monomial(n, *s, m, rat(&mut rng, 4, 3));
            if !none_resonant(&a.bracket(&x).unwrap(), &lambda) {
                rn_bad += 1;
            }
            pairs += 1;
        }
    }
    verdict(
        4,
        "bracket closure",
        rr_bad == 0 && rn_bad == 0,
        format!("{pairs} resonant pairs ({rr_bad} escaped), {pairs} mixed pairs ({rn_bad} with resonant part)"),
    );
}

#[test]
fn criterion_05_direct_sum() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let mut failures = Vec::new();
    for trial in 0..50 {
        let spec = random_spectrum(&mut rng, 2, 3, 4);
        let xi = random_resonant_field(&mut rng, &spec);
        let r = direct_sum_check(&xi, &spec, 4).unwrap();
        if !(r.holds && r.rank_augmented == r.rank_l + 1) {
            failures.push(trial);
        }
    }
    verdict(5, "direct sum", failures.is_empty(), format!("50 fields, failures at {failures:?}"));
}

fn unit_directions(n: usize) -> Vec<Vec<Q>> {
    let q = |a: i64, b: i64, c: i64, d: i64| Q::from_ratios((a, b), (c, d));
    if n == 2 {
        vec![
            vec![q(3, 5, 0, 1), q(4, 5, 0, 1)],
            vec![q(3, 5, 0, 1), q(0, 1, 4, 5)],
            vec![q(0, 1, -4, 5), q(3, 5, 0, 1)],
        ]
    } else {
        vec![
            vec![q(1, 3, 0, 1), q(2, 3, 0, 1), q(2, 3, 0, 1)],
            vec![q(2, 3, 0, 1), q(0, 1, -1, 3), q(2, 3, 0, 1)],
            vec![q(0, 1, 2, 3), q(2, 3, 0, 1), q(-1, 3, 0, 1)],
        ]
    }
}

fn residual_size(x: &PolyVectorField<Q>, res: &resonant_core::NormalFormResult<Q>, r: &Q) -> f64 {
    unit_directions(x.n())
        .iter()
        .map(|u| {
            let w: Vec<Q> = u.iter().map(|c| c.clone() * r.clone()).collect();
            conjugacy_residual(x, res, &w)
                .unwrap()
                .iter()
                .map(|c| c.to_c64().norm_sqr())
                .sum::<f64>()
                .sqrt()
        })
        .fold(0.0, f64::max)
}

#[test]
fn criterion_06_normal_form() {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let threshold = 2f64.powf(4.5);
    let (r1, r2) = (Q::from_ratio(1, 100), Q::from_ratio(1, 200));
    let mut worst = f64::INFINITY;
    let mut non_resonant = 0;
    for trial in 0..25 {
        let spec = if trial % 2 == 0 { spectrum(&[1, 2]) } else { spectrum(&[1, 2, 3]) };
        let n = spec.n();
        let lambda = spec.lambda().to_vec();
        let candidates: Vec<(usize, Vec<i32>)> = brute_indices(n, 2, 3)
            .into_iter()
            .flat_map(|m| (0..n).map(move |s| (s, m.clone())))
            .filter(|(s, m)| !is_resonant_oracle(&lambda, *s, m))
            .collect();
        let mut x = spec.diagonal_field();
        for _ in 0..rng.gen_range(1..=4) {
            let (s, m) = &candidates[rng.gen_range(0..candidates.len())];
            // |a| ≤ 0.1
            let a = Q::from_ratios((rng.gen_range(-7..=7), 100), (rng.gen_range(-7..=7), 100));
            x = x.add(&monomial(n, *s, m, a)).unwrap();
        }
        let res = poincare_dulac_normalize(&x, &spec, 4).unwrap();
        if !all_resonant(&res.normal_form.truncated(4), &lambda) {
            non_resonant += 1;
        }
        let (e1, e2) = (residual_size(&x, &res, &r1), residual_size(&x, &res, &r2));
        let ratio = if e1 == 0.0 && e2 == 0.0 { f64::INFINITY } else { e1 / e2 };
        worst = worst.min(ratio);
    }
    verdict(
        6,
        "normal form",
        non_resonant == 0 && worst >= threshold,
        format!("25 perturbations, {non_resonant} non-resonant outputs, worst residual ratio {worst:.3} (need ≥ {threshold:.3})"),
    );
}

fn lagrange(nodes: &[Complex64], values: &[Complex64], t: Complex64) -> Complex64 {
    let mut acc = Complex64::new(0.0, 0.0);
    for (i, (ti, vi)) in nodes.iter().zip(values).enumerate() {
        let mut w = Complex64::new(1.0, 0.0);
        for (k, tk) in nodes.iter().enumerate() {
            if k != i {
                w *= (t - tk) / (ti - tk);
            }
        }
        acc += w * vi;
    }
    acc
}

#[test]
fn criterion_07_flow() {
    let spectra: [&[i64]; 6] = [&[1, 2], &[1, 3], &[1, 1], &[1, 2, 3], &[1, 2, 4], &[2, 4, 5]];
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let (mut worst_flow, mut worst_interp) = (0.0f64, 0.0f64);
    let mut degree_ok = true;
    for trial in 0..100 {
        let mut lambda = ints(spectra[trial % spectra.len()]);
        if trial % 3 == 0 {
            let (re, im) = ROTATIONS[rng.gen_range(0..ROTATIONS.len())];
            lambda = lambda.into_iter().map(|l| l * Q::from_ratios(re, im)).collect();
        }
        let spec = Spectrum::new(lambda).unwrap();
        let n = spec.n();
        let mut xi = spec.diagonal_field();
        for (j, m) in poincare_dulac_support(&spec).unwrap().triangular {
            if rng.gen_bool(0.8) {
                xi = xi.add(&monomial(n, j, m.entries(), rat(&mut rng, 3, 2))).unwrap();
            }
        }
        let z0: Vec<Q> = (0..n).map(|_| Q::from_ratios((rng.gen_range(-4..=4), 5), (rng.gen_range(-3..=3), 5))).collect();
        let theta: f64 = rng.gen_range(0.0..std::f64::consts::TAU);
        let t = Complex64::from_polar(rng.gen_range(0.1..=1.0), theta);
        let sol = closed_form_flow(&xi, &z0).unwrap();
        let xf = xi.to_float();
        let z0f: Vec<Complex64> = z0.iter().map(|c| c.to_c64()).collect();
        let exact = sol.evaluate(t);
        let rk4 = numeric_flow(&xf, &z0f, t, 10_000).unwrap();
        let scale = exact.iter().map(|c| c.norm()).fold(f64::MIN_POSITIVE, f64::max);
        let err = exact.iter().zip(&rk4).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max) / scale;
        worst_flow = worst_flow.max(err);

        let predicted = predicted_degrees(&xi);
        degree_ok &= sol.degrees().iter().zip(&predicted).all(|(d, p)| d <= p);
        // e^{−λ_j t}·z_j(t) sampled by RK4 along the ray is a polynomial of
        // the predicted degree: interpolate and extrapolate to t
        let dmax = *predicted.iter().max().unwrap();
        let nodes: Vec<Complex64> = (0..=dmax).map(|k| t * (k as f64 / (dmax + 2) as f64)).collect();
        let states: Vec<Vec<Complex64>> = nodes
            .iter()
            .map(|&tk| numeric_flow(&xf, &z0f, tk, 10_000).unwrap())
            .collect();
        for j in 0..n {
            let lj = spec.lambda()[j].to_c64();
            let d = predicted[j];
            let vals: Vec<Complex64> = (0..=d).map(|k| (-lj * nodes[k]).exp() * states[k][j]).collect();
            let at_t = lagrange(&nodes[..=d], &vals, t);
            let target = (-lj * t).exp() * rk4[j];
            worst_interp = worst_interp.max((at_t - target).norm() / target.norm().max(1.0));
        }
    }
    verdict(
        7,
        "flow",
        worst_flow <= 1e-6 && worst_interp <= 1e-6 && degree_ok,
        format!("100 fields, worst RK4 deviation {worst_flow:.2e}, worst interpolation deviation {worst_interp:.2e}, degrees within prediction: {degree_ok}"),
    );
}

#[test]
fn criterion_08_transversality() {
    let good = transversality_scan(&spectrum(&[1, 2]).diagonal_field(), 1.0, 10_000, 0).unwrap();
    let bad = transversality_scan(&spectrum(&[1, -1]).diagonal_field(), 1.0, 10_000, 0).unwrap();
    verdict(
        8,
        "transversality",
        good.min_pairing >= 1.0 - 1e-9 && !good.violation && bad.violation && bad.min_margin <= 1e-2,
        format!(
            "λ=(1,2): min pairing {:.12}; λ=(1,−1): min margin {:.3e}, {}",
            good.min_pairing,
            bad.min_margin,
            bad.verdict()
        ),
    );
}

#[test]
fn criterion_09_cohomology_probes() {
    let tenth = Q::from_ratio(1, 10);
    let tenth_i = Q::from_ratios((0, 1), (1, 10));
    let cases: Vec<(&str, Spectrum<Q>, PolyVectorField<Q>, bool)> = {
        let s2 = spectrum(&[1, 2]);
        let s3 = spectrum(&[1, 2, 3]);
        let p2 = s2.diagonal_field().add(&monomial(2, 1, &[2, 0], tenth.clone())).unwrap();
        let p3 = s3
            .diagonal_field()
            .add(&monomial(3, 1, &[2, 0, 0], tenth.clone()))
            .unwrap()
            .add(&monomial(3, 2, &[1, 1, 0], tenth_i))
            .unwrap()
            .add(&monomial(3, 2, &[3, 0, 0], tenth))
            .unwrap();
        vec![
            ("(1,2) ξ₀", s2.clone(), s2.diagonal_field(), true),
            ("(1,2) perturbed", s2, p2, false),
            ("(1,2,3) ξ₀", s3.clone(), s3.diagonal_field(), true),
            ("(1,2,3) perturbed", s3, p3, false),
        ]
    };
    let mut failures = Vec::new();
    for (name, spec, xi, diagonal) in &cases {
        for depth in 1..=4 {
            let sigma = neg_laurent_matrix_sigma(xi, spec, depth).unwrap();
            let theta = neg_laurent_matrix_theta(xi, spec, depth).unwrap();
            let square_ok =
                !diagonal || (sigma.square_bijective == Some(true) && theta.square_bijective == Some(true));
            if !(sigma.injective && theta.injective && square_ok) {
                failures.push(format!("{name} laurent depth {depth}"));
            }
        }
        for degree in 1..=6 {
            let h0 = h0_sigma_structure(xi, spec, degree).unwrap();
            let gperp = gperp_injectivity(xi, spec, degree).unwrap();
            if !(h0.kernel_is_constants && h0.constant_unreachable && gperp.injective) {
                failures.push(format!("{name} degree {degree}"));
            }
        }
    }
    verdict(
        9,
        "cohomology probes",
        failures.is_empty(),
        format!("4 fields, depth 1..=4, degree 1..=6, failures: {failures:?}"),
    );
}

#[test]
fn criterion_10_rescaling() {
    let spec = spectrum(&[1, 2]);
    let x = spec.diagonal_field().add(&monomial(2, 1, &[2, 0], Q::one())).unwrap();
    let four = parse_rational("4").unwrap();
    let scaled = rescale_coefficients_exact(&x, &spec, &four).unwrap().unwrap();
    let factor = scaled.coeff(1, &MultiIndex::new(vec![2, 0]));
    let exact_ok = factor == Q::from_ratio(1, 8) && scaled.coeff(0, &MultiIndex::unit(2, 0)) == Q::one();

    // every triangular-shape (j, m) up to degree 8 in up to 5 variables, and
    // every supported pair of a few spectra, has a negative exponent
    let mut checked = 0;
    let mut bad = Vec::new();
    for n in 2..=5usize {
        for m in brute_indices(n, 2, 8) {
            for j in 1..n {
                if m[j..].iter().all(|&e| e == 0) {
                    checked += 1;
                    let e = rescale_exponent(j, &MultiIndex::new(m.clone()));
                    if *e.numer() >= 0 {
                        bad.push((j, m.clone()));
                    }
                }
            }
        }
    }
    for lambda in [&[1i64, 2][..], &[1, 2, 3], &[1, 2, 4], &[1, 3, 5, 7]] {
        for (j, m) in poincare_dulac_support(&spectrum(lambda)).unwrap().triangular {
            checked += 1;
            if *rescale_exponent(j, &m).numer() >= 0 {
                bad.push((j, m.entries().to_vec()));
            }
        }
    }
    verdict(
        10,
        "rescaling",
        exact_ok && bad.is_empty(),
        format!("A=4 factor on (2,(2,0)) = {factor}; {checked} exponents checked, {} non-negative", bad.len()),
    );
}

#[test]
fn criterion_11_cli_determinism() {
    let samples = [("xi0.json", 0), ("xi0_plus_z1sq.json", 0), ("saddle.json", 2)];
    let mut log = Vec::new();
    let mut ok = true;
    for (file, want) in samples {
        let path = format!("{}/samples/{file}", env!("CARGO_MANIFEST_DIR"));
        let run = || {
            Command::new(env!("CARGO_BIN_EXE_resonant"))
                .args(["--json", "analyze", &path])
                .output()
                .unwrap()
        };
        let (a, b) = (run(), run());
        let same = a.stdout == b.stdout && !a.stdout.is_empty();
        let code = a.status.code();
        ok &= same && code == Some(want) && b.status.code() == Some(want);
        log.push(format!("{file}: identical={same}, exit={code:?}"));
    }
    verdict(11, "CLI determinism", ok, log.join("; "));
}
