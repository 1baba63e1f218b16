use std::f64::consts::PI;

use num::complex::Complex64;
use stgo_core::bfun::*;
use stgo_core::harmonics::{LMIndex, Vec3};
use stgo_core::oracles::{fd_apply_operator, hankel_radial_ft, minus_i_pow, momentum_convolution, FDScheme, QuadratureGrid};
use stgo_core::stgo::{apply_to_tensor, hobson_harmonic, operator_polynomial, RadialProfile};

fn rel(a: Complex64, b: Complex64) -> f64 {
    (a - b).norm() / a.norm().max(b.norm()).max(1e-300)
}

#[test]
fn value_examples() {
    let alpha = 0.7;
    let r = Vec3::new(0.3, 1.1, -0.4);
    let rho = r.norm();
    let b = b_value(&BIndex::of(0, 0, 0, alpha), r).unwrap();
    let want = (-alpha * rho).exp() / ((4.0 * PI).sqrt() * alpha * rho);
    assert!((b.re - want).abs() < 1e-15 * want);

    let b = b_value(&BIndex::of(1, 0, 0, 1.0), Vec3::new(0.0, 0.6, 0.8)).unwrap();
    let want = (-1.0f64).exp() / (2.0 * (4.0 * PI).sqrt());
    assert!((b.re - want).abs() < 1e-16);

    // scaling covariance: B(α, ηr) = B(αη, r)
    let idx = BIndex::of(2, 3, -1, 0.9);
    let eta = 1.7;
    let a = b_value(&idx, r.scale(eta)).unwrap();
    let c = b_value(&BIndex::of(2, 3, -1, 0.9 * eta), r).unwrap();
    assert!(rel(a, c) < 1e-14);
}

#[test]
fn origin_and_domain_behaviour() {
    let o = Vec3::ZERO;
    // (2n−3)!!/(2^n n!) Y00
    let v = b_value(&BIndex::of(3, 0, 0, 1.3), o).unwrap();
    assert!((v.re - 3.0 / 48.0 * 0.5 / PI.sqrt()).abs() < 1e-16);
    assert_eq!(b_value(&BIndex::of(1, 2, 1, 1.0), o).unwrap(), Complex64::new(0.0, 0.0));
    assert_eq!(b_value(&BIndex::of(-1, 4, 0, 1.0), o).unwrap(), Complex64::new(0.0, 0.0));
    assert_eq!(b_value(&BIndex::of(0, 0, 0, 1.0), o).unwrap_err().kind(), "singularity");
    assert_eq!(b_value(&BIndex::of(-1, 1, 0, 1.0), o).unwrap_err().kind(), "singularity");
    assert_eq!(b_value(&BIndex::of(-2, 1, 0, 1.0), Vec3::new(1.0, 0.0, 0.0)).unwrap_err().kind(), "distributional");
    assert!(BIndex::new(1, 1, 2, 1.0).is_err());
    assert!(BIndex::new(1, 1, 0, 0.0).is_err());
}

#[test]
fn fourier_examples() {
    let alpha = 1.4;
    let p = Vec3::new(0.2, -0.5, 0.9);
    let f = b_fourier(&BIndex::of(0, 0, 0, alpha), p);
    let want = 1.0 / ((2.0 * PI * PI).sqrt() * alpha * (alpha * alpha + p.norm2()));
    assert!((f.re - want).abs() < 1e-15 * want && f.im == 0.0);
    let f = b_fourier(&BIndex::of(-1, 0, 0, alpha), p);
    assert!((f.re - alpha.powi(-3) / (2.0 * PI * PI).sqrt()).abs() < 1e-15);
    assert_eq!(b_fourier(&BIndex::of(1, 2, 1, alpha), Vec3::ZERO).norm(), 0.0);
}

#[test]
fn fourier_matches_hankel_oracle() {
    for n in 0..=2 {
        for l in 0..=3 {
            for &alpha in &[0.7, 1.0, 2.0] {
                let idx = BIndex::of(n, l, 0, alpha);
                let f = idx.radial_expr().unwrap();
                let r_max = 60.0 / alpha;
                for &p in &[0.2, 1.0, 4.0] {
                    let h = hankel_radial_ft(&|r| f.evaluate(r), l as u32, p, r_max, 24);
                    let want = minus_i_pow(l as u32)
                        * (2.0 / PI).sqrt()
                        * alpha.powi(2 * n + l - 1)
                        * p.powi(l)
                        / (alpha * alpha + p * p).powi(n + l + 1);
                    assert!(rel(h.value, want) < 1e-8, "n={n} l={l} α={alpha} p={p}: {} vs {want}", h.value);
                    assert!(!h.tail_warning);
                }
            }
        }
    }
}

#[test]
fn ladder_and_laplacian_powers() {
    let e = helmholtz_ladder(&BIndex::of(2, 1, 1, 1.0));
    assert_eq!(e.terms.len(), 1);
    assert_eq!(e.terms[0].index, BIndex::of(1, 1, 1, 1.0));
    let twice = helmholtz_ladder(&helmholtz_ladder(&BIndex::of(1, 0, 0, 1.0)).terms[0].index);
    assert_eq!(twice.terms[0].index.n, -1);
    assert!(twice.distributional);

    // [1 − α^{−2}∇²] B_{2,0} = B_{1,0}, radial second differences at r = 1.5
    let b = |n: i32, r: f64| b_value(&BIndex::of(n, 0, 0, 1.0), Vec3::new(0.0, 0.0, r)).unwrap().re;
    let (r, h) = (1.5, 1e-3);
    let lap = (b(2, r + h) - 2.0 * b(2, r) + b(2, r - h)) / (h * h) + (b(2, r + h) - b(2, r - h)) / (h * r);
    assert!(((b(2, r) - lap) - b(1, r)).abs() < 1e-6 * b(1, r));

    assert_eq!(laplacian_power(&BIndex::of(3, 0, 0, 1.0), 0).terms.len(), 1);
    let e = laplacian_power(&BIndex::of(3, 1, 0, 1.0), 1);
    let got: Vec<(i32, f64)> = e.terms.iter().map(|t| (t.index.n, t.coeff)).collect();
    assert_eq!(got, vec![(3, 1.0), (2, -1.0)]);
    let e = laplacian_power(&BIndex::of(3, 0, 0, 1.0), 2);
    let got: Vec<(i32, f64)> = e.terms.iter().map(|t| (t.index.n, t.coeff)).collect();
    assert_eq!(got, vec![(3, 1.0), (2, -2.0), (1, 1.0)]);
    // ∇⁴ B_{3,0} by iterated radial Laplacian at r = 1
    let lap_f = |f: &dyn Fn(f64) -> f64, r: f64| {
        let h = 1e-2;
        let (a, b, c, d, e) = (f(r - 2.0 * h), f(r - h), f(r), f(r + h), f(r + 2.0 * h));
        (-a + 16.0 * b - 30.0 * c + 16.0 * d - e) / (12.0 * h * h) + 2.0 * (a - 8.0 * b + 8.0 * d - e) / (12.0 * h * r)
    };
    let f3 = |r: f64| b(3, r);
    let l1 = |r: f64| lap_f(&f3, r);
    let l2 = lap_f(&l1, 1.0);
    let want = e.evaluate(Vec3::new(0.0, 0.0, 1.0)).unwrap().re;
    assert!((l2 - want).abs() < 1e-5 * want.abs());
}

#[test]
fn ladder_composition_matches_binomial_expansion() {
    for nu in 0..=6u32 {
        let idx = BIndex::of(2, 1, 0, 1.0);
        // (1 − L)^ν with L the ladder: expand term by term
        let mut acc = vec![(idx, 1i64)];
        let mut total: Vec<(i32, i64)> = Vec::new();
        for t in 0..=nu as i32 {
            let sign = if t % 2 == 0 { 1 } else { -1 };
            let c = (0..t).fold(1i64, |c, j| c * (nu as i64 - j as i64) / (j as i64 + 1));
            total.push((acc[0].0.n, sign * c));
            acc = vec![(helmholtz_ladder(&acc[0].0).terms[0].index, 1)];
        }
        let e = laplacian_power(&idx, nu);
        let got: Vec<(i32, i64)> = e.terms.iter().map(|t| (t.index.n, t.coeff as i64)).collect();
        assert_eq!(got, total);
        assert!(e.terms.iter().all(|t| t.coeff.fract() == 0.0));
    }
}

#[test]
fn stgo_on_scalar_b_examples() {
    let img = stgo_on_scalar_b(LMIndex::of(0, 0), 2, 1.0).unwrap();
    assert_eq!(img.index, BIndex::of(2, 0, 0, 1.0));
    assert!((img.coeff - 0.5 / PI.sqrt()).abs() < 1e-16);
    let img = stgo_on_scalar_b(LMIndex::of(3, -2), 3, 1.2).unwrap();
    assert_eq!(img.index, BIndex::of(0, 3, -2, 1.2));
    // 𝒴_1^0(∇) B_{2,0}^0 via Hobson with the k̂_{3/2} profile
    let alpha = 1.3;
    let e = hobson_harmonic(LMIndex::of(1, 0), &RadialProfile::ReducedBesselHalf { n: 2, alpha }).unwrap();
    let norm = 1.0 / 8.0 / (4.0 * PI).sqrt(); // B_{2,0}^0 = k̂_{3/2}(αr)/(4·2!) · Y00
    let img = stgo_on_scalar_b(LMIndex::of(1, 0), 2, alpha).unwrap();
    for at in [Vec3::new(0.3, 0.2, 0.9), Vec3::new(-1.0, 0.5, 0.1)] {
        let lhs = e.evaluate(at) * norm;
        let rhs = img.coeff * b_value(&img.index, at).unwrap();
        assert!(rel(lhs, rhs) < 1e-9);
    }
}

fn sample_points() -> Vec<Vec3> {
    vec![
        Vec3::new(0.5, 0.0, 0.0),
        Vec3::new(0.3, -0.4, 0.6),
        Vec3::new(-0.2, 0.9, 0.4),
        Vec3::new(1.0, 1.0, -0.8),
        Vec3::new(0.1, -1.5, 1.1),
    ]
}

#[test]
fn stgo_on_b_examples_and_oracle() {
    let t = BIndex::of(2, 1, 0, 1.0);
    let e = stgo_on_b(LMIndex::of(0, 0), &t).unwrap();
    assert_eq!(e.terms.len(), 1);
    assert!((e.terms[0].coeff - 0.5 / PI.sqrt()).abs() < 1e-15);

    let e = stgo_on_b(LMIndex::of(1, 0), &BIndex::of(2, 0, 0, 1.0)).unwrap();
    let img = stgo_on_scalar_b(LMIndex::of(1, 0), 2, 1.0).unwrap();
    assert_eq!(e.terms.len(), 1);
    assert_eq!(e.terms[0].index, img.index);
    assert!((e.terms[0].coeff - img.coeff).abs() < 1e-15);

    let e = stgo_on_b(LMIndex::of(1, 1), &t).unwrap();
    let mut ls: Vec<i32> = e.terms.iter().map(|t| t.index.l).collect();
    ls.sort();
    ls.dedup();
    assert_eq!(ls, vec![2]); // |m1+m2| = 1 excludes l = 0
    let e0 = stgo_on_b(LMIndex::of(1, 0), &t).unwrap();
    let mut ls: Vec<i32> = e0.terms.iter().map(|t| t.index.l).collect();
    ls.sort();
    ls.dedup();
    assert_eq!(ls, vec![0, 2]);
    for (op, exp) in [(LMIndex::of(1, 1), &e), (LMIndex::of(1, 0), &e0)] {
        let f = |v: Vec3| b_value(&t, v).unwrap();
        for at in sample_points() {
            let want = fd_apply_operator(&operator_polynomial(op), &f, at, FDScheme::new(4, 0.02).unwrap()).unwrap().value;
            assert!(rel(exp.evaluate(at).unwrap(), want) < 1e-6, "{op:?} at {at}");
        }
    }
}

#[test]
fn stgo_on_b_matches_tensor_route() {
    for l1 in 0..=3 {
        for l2 in 0..=3 {
            for (m1, m2) in [(0, 0), (l1, -l2), (-l1, l2)] {
                let target = BIndex::of(l1 + 2, l2, m2, 0.9);
                let op = LMIndex::of(l1, m1);
                let closed = stgo_on_b(op, &target).unwrap();
                let route = apply_to_tensor(op, &target.tensor_term().unwrap()).unwrap();
                for &r in &[0.5, 1.0, 2.0] {
                    let at = Vec3::new(0.48, -0.6, 0.64).scale(r);
                    let (a, b) = (closed.evaluate(at).unwrap(), route.evaluate(at));
                    assert!(rel(a, b) < 1e-8, "({l1},{m1}) on ({l2},{m2}) r={r}: {a} vs {b}");
                }
            }
        }
    }
}

#[test]
fn convolution_examples() {
    let a = BIndex::of(0, 0, 0, 1.0);
    let e = convolve(&a, &a).unwrap();
    assert_eq!(e.terms.len(), 1);
    assert_eq!(e.terms[0].index, BIndex::of(1, 0, 0, 1.0));
    assert!((e.terms[0].coeff - 4.0 * PI * 0.5 / PI.sqrt()).abs() < 1e-14);

    let e = convolve(&BIndex::of(1, 0, 0, 1.0), &BIndex::of(1, 2, 1, 1.0)).unwrap();
    assert!(e.terms.iter().all(|t| t.index.l == 2 && t.index.n == 1 + 1 + 2 - 2 + 1));

    let e = convolve(&BIndex::of(1, 1, 1, 1.0), &BIndex::of(1, 1, -1, 1.0)).unwrap();
    let mut ls: Vec<i32> = e.terms.iter().map(|t| t.index.l).collect();
    ls.sort();
    ls.dedup();
    assert_eq!(ls, vec![0, 2]);

    assert_eq!(convolve(&BIndex::of(1, 0, 0, 1.0), &BIndex::of(1, 0, 0, 2.0)).unwrap_err().kind(), "unsupported");
}

#[test]
fn convolution_matches_momentum_quadrature() {
    let grid = QuadratureGrid::lebedev(110).unwrap();
    let alpha = 1.2;
    let mut worst: f64 = 0.0;
    for la in 0..=2 {
        for lb in 0..=2 {
            for na in 0..=2 {
                for nb in [0, 2] {
                    let a = BIndex::of(na, la, la.min(1), alpha);
                    let b = BIndex::of(nb, lb, -lb, alpha);
                    let e = convolve(&a, &b).unwrap();
                    for at in [Vec3::new(0.3, 0.4, -0.5), Vec3::new(-1.2, 0.7, 1.9)] {
                        let want = momentum_convolution(&a, &b, at, &grid).unwrap();
                        let got = e.evaluate(at).unwrap();
                        let err = rel(got, want);
                        worst = worst.max(err);
                        assert!(err < 1e-7, "{a:?} * {b:?} at {at}: {got} vs {want}");
                    }
                }
            }
        }
    }
    println!("worst convolution relative error {worst:e}");
}

#[test]
fn functional_equations_hold() {
    for n in -2..=4 {
        for l in 0..=3 {
            for m in [-l, 0, l] {
                for &pn in &[0.3, 1.0, 5.0] {
                    let p = Vec3::new(0.36, -0.48, 0.8).scale(pn);
                    let res = b_fourier_functional_check(&BIndex::of(n, l, m, 1.3), p);
                    assert!(res.max() < 1e-12, "n={n} l={l} m={m} p={pn}: {res:?}");
                }
            }
        }
    }
    let res = b_fourier_functional_check(&BIndex::of(-1, 0, 0, 0.8), Vec3::new(3.0, 0.0, 0.0));
    assert_eq!(res.delta, 0.0);
    let res = b_fourier_functional_check(&BIndex::of(1, 2, 0, 0.8), Vec3::ZERO);
    assert_eq!(res.generator, 0.0);
}

#[test]
fn yukawa_limit_approaches_irregular_harmonic() {
    let r = Vec3::new(0.4, -0.3, 0.7);
    for l in 0..=3 {
        let d2 = yukawa_limit_deviation(l, l.min(1), 1e-2, r).unwrap();
        let d3 = yukawa_limit_deviation(l, l.min(1), 1e-3, r).unwrap();
        // observed order from the two step sizes
        let order = (d2 / d3).log10();
        assert!(d3 < d2 && order >= 0.9, "l={l}: {d2:e} {d3:e} order {order}");
        assert!(d3 < 2e-3, "l={l}");
    }
}
