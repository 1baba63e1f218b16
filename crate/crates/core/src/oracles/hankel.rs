use std::f64::consts::PI;

use num::complex::Complex64;
use serde::Serialize;

use super::quadrature::{gauss_legendre, integrate_panels};
use crate::core_math::spherical_bessel_j;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct HankelResult {
    pub value: Complex64,
    /// Set when the integrand at the cutoff is not negligible.
    pub tail_warning: bool,
}

/// (−i)^l.
pub fn minus_i_pow(l: u32) -> Complex64 {
    match l % 4 {
        0 => Complex64::new(1.0, 0.0),
        1 => Complex64::new(0.0, -1.0),
        2 => Complex64::new(-1.0, 0.0),
        _ => Complex64::new(0.0, 1.0),
    }
}

/// Radial Fourier transform of f_l(r) Y_l^m: (−i)^l (2/π)^{1/2} ∫_0^{r_max} r² j_l(pr) f_l(r) dr,
/// the same as (−i)^l p^{−1/2} ∫ r^{3/2} J_{l+1/2}(pr) f_l(r) dr.
///
/// Gauss–Legendre panels of `n` nodes, each no wider than π/(2p).
pub fn hankel_radial_ft(f_l: &dyn Fn(f64) -> f64, l: u32, p: f64, r_max: f64, n: usize) -> HankelResult {
    let width = if p > 0.0 { (PI / (2.0 * p)).min(0.5) } else { 0.5 };
    let panels = (r_max / width).ceil().max(1.0) as usize;
    let rule = gauss_legendre(n);
    let integral = integrate_panels(
        |r| r * r * spherical_bessel_j(l, p * r) * f_l(r),
        0.0,
        r_max,
        panels,
        &rule,
    );
    let edge = (r_max * r_max * f_l(r_max)).abs();
    let tail_warning = edge > 1e-12 * integral.abs().max(1e-300) && edge > 1e-300;
    HankelResult {
        value: minus_i_pow(l) * (2.0 / PI).sqrt() * integral,
        tail_warning,
    }
}

/// Wynn's epsilon algorithm applied to a sequence of partial sums.
pub fn wynn_epsilon(sums: &[f64]) -> f64 {
    let n = sums.len();
    if n < 3 {
        return *sums.last().unwrap_or(&0.0);
    }
    let mut prev = vec![0.0; n + 1];
    let mut cur = sums.to_vec();
    let mut best = sums[n - 1];
    let mut best_err = (sums[n - 1] - sums[n - 2]).abs();
    let mut k = 0;
    while cur.len() > 1 {
        let mut next = Vec::with_capacity(cur.len() - 1);
        for i in 0..cur.len() - 1 {
            let d = cur[i + 1] - cur[i];
            if d == 0.0 {
                return if k % 2 == 0 { cur[i + 1] } else { best };
            }
            next.push(prev[i + 1] + 1.0 / d);
        }
        k += 1;
        if k % 2 == 0 && next.len() >= 2 {
            let m = next.len();
            let err = (next[m - 1] - next[m - 2]).abs();
            if err < best_err {
                best_err = err;
                best = next[m - 1];
            }
        }
        prev = cur;
        cur = next;
    }
    best
}

/// ∫_0^∞ g(p) j_l(p r) dp for smooth g with algebraic decay; `scale` is
/// the width of g's non-asymptotic region.
///
/// The finite part is integrated by panels; the oscillatory tail is summed
/// over half periods and accelerated with Wynn's epsilon algorithm.
pub fn oscillatory_radial_integral(g: &dyn Fn(f64) -> f64, l: u32, r: f64, scale: f64) -> f64 {
    let rule = gauss_legendre(24);
    if r == 0.0 {
        if l != 0 {
            return 0.0;
        }
        // p = scale·tan θ maps the algebraic tail onto a finite interval
        return integrate_panels(
            |t| {
                let c = t.cos();
                if c <= 0.0 {
                    return 0.0;
                }
                let p = scale * t.tan();
                g(p) * scale / (c * c)
            },
            0.0,
            PI / 2.0,
            64,
            &rule,
        );
    }
    let half = PI / r;
    let shift = l as f64 * PI / (2.0 * r);
    let p0 = 40.0 * scale + shift;
    let k0 = ((p0 - shift) / half).ceil();
    let a = shift + k0 * half;
    let width = (0.5 * half).min(0.25 * scale).max(1e-3);
    let panels = (a / width).ceil() as usize;
    let f = |p: f64| g(p) * spherical_bessel_j(l, p * r);
    let head = integrate_panels(f, 0.0, a, panels, &rule);
    let mut sums = Vec::with_capacity(41);
    let mut acc = head;
    sums.push(acc);
    for k in 0..40 {
        let lo = a + k as f64 * half;
        acc += integrate_panels(f, lo, lo + half, 1, &rule);
        sums.push(acc);
    }
    wynn_epsilon(&sums)
}

/// Inverse radial transform f_l(r) = i^l (2/π)^{1/2} ∫_0^∞ p² j_l(pr) f̄_l(p) dp.
pub fn inverse_hankel_radial(fbar: &dyn Fn(f64) -> Complex64, l: u32, r: f64, scale: f64) -> Complex64 {
    let re = oscillatory_radial_integral(&|p| p * p * fbar(p).re, l, r, scale);
    let im = oscillatory_radial_integral(&|p| p * p * fbar(p).im, l, r, scale);
    minus_i_pow(l).conj() * (2.0 / PI).sqrt() * Complex64::new(re, im)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn yukawa_transform() {
        let f = |r: f64| (-r).exp() / r;
        for &p in &[0.0, 0.2, 1.0, 4.0] {
            let got = hankel_radial_ft(&f, 0, p, 45.0, 20);
            let want = (2.0 / PI).sqrt() / (1.0 + p * p);
            assert!((got.value.re - want).abs() < 1e-12 * want, "p={p}");
            assert!(!got.tail_warning);
        }
    }

    #[test]
    fn gaussian_tensor_transform() {
        // ∫ r² j_1(pr) r e^{−r²} dr = (√π/8) p e^{−p²/4}
        let f = |r: f64| r * (-r * r).exp();
        for &p in &[0.3, 1.0, 3.0] {
            let got = hankel_radial_ft(&f, 1, p, 12.0, 20);
            let want = minus_i_pow(1) * (2.0 / PI).sqrt() * (PI.sqrt() / 8.0) * p * (-p * p / 4.0).exp();
            assert!((got.value - want).norm() < 1e-12 * want.norm(), "p={p}");
        }
        assert_eq!(hankel_radial_ft(&f, 1, 0.0, 12.0, 20).value.norm(), 0.0);
    }

    #[test]
    fn tail_warning_fires_on_truncated_integrand() {
        let f = |r: f64| (-0.1 * r).exp();
        assert!(hankel_radial_ft(&f, 0, 1.0, 10.0, 16).tail_warning);
    }

    #[test]
    fn wynn_accelerates_alternating_series() {
        // ln 2 = 1 − 1/2 + 1/3 − …
        let mut s = 0.0;
        let sums: Vec<f64> = (1..=20)
            .map(|k| {
                s += if k % 2 == 1 { 1.0 } else { -1.0 } / k as f64;
                s
            })
            .collect();
        assert!((wynn_epsilon(&sums) - 2f64.ln()).abs() < 1e-12);
    }

    #[test]
    fn round_trip_recovers_radials() {
        let yuk = |r: f64| (-r).exp() / r;
        let yuk_bar = |p: f64| Complex64::new((2.0 / PI).sqrt() / (1.0 + p * p), 0.0);
        let gauss = |r: f64| r * (-r * r).exp();
        let gauss_bar = |p: f64| hankel_radial_ft(&gauss, 1, p, 12.0, 16).value;
        for &r in &[0.5, 1.0, 2.0] {
            let got = inverse_hankel_radial(&yuk_bar, 0, r, 1.0);
            assert!((got.re - yuk(r)).abs() < 1e-6 * yuk(r), "yukawa r={r}: {got}");
            let got = inverse_hankel_radial(&gauss_bar, 1, r, 1.0);
            assert!((got.re - gauss(r)).abs() < 1e-6 * gauss(r), "gauss r={r}: {got}");
        }
    }
}
