use std::collections::HashMap;

use num::complex::Complex64;
use serde::Serialize;

use crate::core_math::KahanSum;
use crate::error::{Error, Result};
use crate::harmonics::{HarmonicPolynomial, Vec3};

/// Central-difference scheme; `order` is the accuracy order (2 or 4).
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FDScheme {
    pub order: u32,
    pub step: f64,
}

impl FDScheme {
    pub fn new(order: u32, step: f64) -> Result<Self> {
        if order != 2 && order != 4 {
            return Err(Error::Domain(format!("finite-difference order {order} (use 2 or 4)")));
        }
        if !(step > 0.0) {
            return Err(Error::Domain(format!("finite-difference step {step}")));
        }
        Ok(Self { order, step })
    }
}

impl Default for FDScheme {
    fn default() -> Self {
        Self { order: 4, step: 0.04 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FdResult {
    /// Richardson-extrapolated value from steps h and h/2.
    pub value: Complex64,
    pub coarse: Complex64,
    pub fine: Complex64,
    /// Set when the two steps disagree by more than 10%.
    pub unreliable: bool,
}

/// Fornberg's finite-difference weights for derivatives 0..=m at x0.
pub fn fornberg_weights(x0: f64, nodes: &[f64], m: usize) -> Vec<Vec<f64>> {
    let n = nodes.len();
    let mut c = vec![vec![0.0; n]; m + 1];
    c[0][0] = 1.0;
    let mut c1 = 1.0;
    let mut c4 = nodes[0] - x0;
    for i in 1..n {
        let mn = i.min(m);
        let mut c2 = 1.0;
        let c5 = c4;
        c4 = nodes[i] - x0;
        for j in 0..i {
            let c3 = nodes[i] - nodes[j];
            c2 *= c3;
            if j == i - 1 {
                for k in (1..=mn).rev() {
                    c[k][i] = c1 * (k as f64 * c[k - 1][i - 1] - c5 * c[k][i - 1]) / c2;
                }
                c[0][i] = -c1 * c5 * c[0][i - 1] / c2;
            }
            for k in (1..=mn).rev() {
                c[k][j] = (c4 * c[k][j] - k as f64 * c[k - 1][j]) / c3;
            }
            c[0][j] = c4 * c[0][j] / c3;
        }
        c1 = c2;
    }
    c
}

/// Central stencil (offset, weight) for the d-th derivative with unit spacing.
pub fn central_weights(d: u32, order: u32) -> Vec<(i32, f64)> {
    if d == 0 {
        return vec![(0, 1.0)];
    }
    let p = ((d + 1) / 2 + order / 2 - 1) as i32;
    let nodes: Vec<f64> = (-p..=p).map(f64::from).collect();
    let w = fornberg_weights(0.0, &nodes, d as usize);
    (-p..=p)
        .zip(w[d as usize].iter())
        .filter(|(_, w)| w.abs() > 1e-15)
        .map(|(o, w)| (o, *w))
        .collect()
}

fn apply_once(
    p: &HarmonicPolynomial,
    f: &dyn Fn(Vec3) -> Complex64,
    at: Vec3,
    order: u32,
    h: f64,
) -> Complex64 {
    let mut cache: HashMap<(i32, i32, i32), Complex64> = HashMap::new();
    let mut re = KahanSum::new();
    let mut im = KahanSum::new();
    for (e, coeff) in p.terms() {
        let [wa, wb, wc] = [e[0], e[1], e[2]].map(|d| central_weights(d, order));
        let mut mre = KahanSum::new();
        let mut mim = KahanSum::new();
        for (i, a) in &wa {
            for (j, b) in &wb {
                for (k, c) in &wc {
                    let v = *cache.entry((*i, *j, *k)).or_insert_with(|| {
                        f(at + Vec3::new(*i as f64 * h, *j as f64 * h, *k as f64 * h))
                    });
                    let w = a * b * c;
                    mre.add(w * v.re);
                    mim.add(w * v.im);
                }
            }
        }
        let scale = h.powi(-((e[0] + e[1] + e[2]) as i32));
        let m = Complex64::new(mre.value(), mim.value()) * scale * coeff;
        re.add(m.re);
        im.add(m.im);
    }
    Complex64::new(re.value(), im.value())
}

/// Applies the differential operator p(∂x, ∂y, ∂z) to f at a point by
/// tensor-product central differences, with one Richardson step.
pub fn fd_apply_operator(
    p: &HarmonicPolynomial,
    f: &dyn Fn(Vec3) -> Complex64,
    at: Vec3,
    scheme: FDScheme,
) -> Result<FdResult> {
    if p.degree() > 8 {
        return Err(Error::Capability(format!(
            "finite differences of total order {} are not viable in double precision",
            p.degree()
        )));
    }
    let coarse = apply_once(p, f, at, scheme.order, scheme.step);
    let fine = apply_once(p, f, at, scheme.order, scheme.step / 2.0);
    let k = 2f64.powi(scheme.order as i32);
    let value = (fine * k - coarse) / (k - 1.0);
    let unreliable = (coarse - fine).norm() > 0.1 * value.norm() && value.norm() > 1e-300;
    Ok(FdResult { value, coarse, fine, unreliable })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::harmonics::{regular_solid_poly, LMIndex};
    use std::f64::consts::PI;

    #[test]
    fn classic_stencils() {
        assert_eq!(central_weights(2, 2), vec![(-1, 1.0), (0, -2.0), (1, 1.0)]);
        let w = central_weights(1, 4);
        let want = [(-2, 1.0 / 12.0), (-1, -2.0 / 3.0), (1, 2.0 / 3.0), (2, -1.0 / 12.0)];
        for ((o, v), (wo, wv)) in w.iter().zip(want) {
            assert_eq!(*o, wo);
            assert!((v - wv).abs() < 1e-15);
        }
    }

    #[test]
    fn constant_operator_scales_the_function() {
        let p = regular_solid_poly(LMIndex::of(0, 0));
        let f = |r: Vec3| Complex64::new((-r.norm2()).exp(), 0.0);
        let at = Vec3::new(0.2, 0.3, -0.4);
        let got = fd_apply_operator(&p, &f, at, FDScheme::default()).unwrap();
        assert!((got.value - f(at) / (4.0 * PI).sqrt()).norm() < 1e-15);
    }

    #[test]
    fn first_derivative_of_gaussian() {
        let p = regular_solid_poly(LMIndex::of(1, 0));
        let f = |r: Vec3| Complex64::new((-r.norm2()).exp(), 0.0);
        let got = fd_apply_operator(&p, &f, Vec3::new(0.0, 0.0, 1.0), FDScheme::default()).unwrap();
        let want = (3.0 / (4.0 * PI)).sqrt() * -2.0 * (-1.0f64).exp();
        assert!((got.value.re - want).abs() < 1e-9 * want.abs());
        assert!(!got.unreliable);
    }

    #[test]
    fn richardson_pair_converges_at_scheme_order() {
        let p = HarmonicPolynomial::from_monomials(2, &[([1, 1, 0], 1, 0)]).unwrap();
        let f = |r: Vec3| Complex64::new((r.x * 0.7).sin() * (r.y * 1.3).cos() + r.z, 0.0);
        let at = Vec3::new(0.3, 0.2, 0.1);
        let exact = -0.7 * 1.3 * (0.21f64).cos() * (0.26f64).sin();
        for order in [2u32, 4] {
            let r1 = fd_apply_operator(&p, &f, at, FDScheme::new(order, 0.1).unwrap()).unwrap();
            let e_coarse = (r1.coarse.re - exact).abs();
            let e_fine = (r1.fine.re - exact).abs();
            let observed = (e_coarse / e_fine).log2();
            assert!((observed - order as f64).abs() < 0.3, "order {order}: {observed}");
            assert!((r1.value.re - exact).abs() < e_fine);
        }
    }
}
