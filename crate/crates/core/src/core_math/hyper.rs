use num::{One, Zero};

use super::rational::{pochhammer_rational, Rational};
use super::KahanSum;
use crate::error::{Error, Result};

const MAX_TERMS: usize = 200_000;

/// Parameter set of a generalized hypergeometric series pFq.
#[derive(Debug, Clone, PartialEq)]
pub struct HypergeometricParams {
    pub upper: Vec<f64>,
    pub lower: Vec<f64>,
    pub argument: f64,
}

impl HypergeometricParams {
    pub fn evaluate(&self) -> Result<f64> {
        match (self.upper.as_slice(), self.lower.as_slice()) {
            ([a], [b]) if is_nonpositive_int(*a) => {
                hyp1f1_terminating((-a.round()) as u32, *b, self.argument)
            }
            ([a, b], [c]) => hyp2f1(*a, *b, *c, self.argument),
            _ => Err(Error::Unsupported(format!(
                "{}F{} series",
                self.upper.len(),
                self.lower.len()
            ))),
        }
    }
}

fn is_nonpositive_int(x: f64) -> bool {
    x <= 0.0 && x == x.round()
}

/// 1F1(-n; b; z), a finite sum of n+1 terms.
///
/// The coefficient ratio (-n+k)/(b+k) is applied as a running product, so
/// b = -2n never forms 0/0.
pub fn hyp1f1_terminating(n: u32, b: f64, z: f64) -> Result<f64> {
    if is_nonpositive_int(b) && -b < n as f64 {
        return Err(Error::Domain(format!(
            "1F1(-{n}; {b}; z) hits a zero denominator before terminating"
        )));
    }
    let mut term = 1.0;
    let mut sum = KahanSum::new();
    sum.add(term);
    for k in 0..n {
        let k = k as f64;
        term *= (-(n as f64) + k) / (b + k) * z / (k + 1.0);
        sum.add(term);
    }
    Ok(sum.value())
}

/// Gauss hypergeometric function 2F1(a, b; c; x).
pub fn hyp2f1(a: f64, b: f64, c: f64, x: f64) -> Result<f64> {
    let term_a = is_nonpositive_int(a).then(|| (-a) as u64);
    let term_b = is_nonpositive_int(b).then(|| (-b) as u64);
    let degree = match (term_a, term_b) {
        (Some(p), Some(q)) => Some(p.min(q)),
        (p, q) => p.or(q),
    };
    if is_nonpositive_int(c) {
        let rescued = matches!(degree, Some(d) if (d as f64) <= -c);
        if !rescued {
            return Err(Error::Domain(format!("2F1 lower parameter c = {c}")));
        }
    }
    if let Some(d) = degree {
        return Ok(gauss_series(a, b, c, x, Some(d))?.0);
    }
    if !(x.abs() < 1.0) {
        return Err(Error::Domain(format!("2F1 argument {x} outside (-1, 1)")));
    }
    if x < -0.5 {
        // Pfaff: maps (-1, -1/2) onto (1/3, 1/2).
        let y = x / (x - 1.0);
        let s = gauss_series(a, c - b, c, y, None)?.0;
        return Ok((1.0 - x).powf(-a) * s);
    }
    Ok(gauss_series(a, b, c, x, None)?.0)
}

fn gauss_series(a: f64, b: f64, c: f64, x: f64, degree: Option<u64>) -> Result<(f64, usize)> {
    let mut term = 1.0;
    let mut sum = KahanSum::new();
    sum.add(term);
    let limit = degree.map(|d| d as usize).unwrap_or(MAX_TERMS);
    for k in 0..limit {
        let kf = k as f64;
        let ratio = (a + kf) * (b + kf) / ((c + kf) * (kf + 1.0)) * x;
        term *= ratio;
        sum.add(term);
        if degree.is_none() && ratio.abs() < 1.0 {
            let r = ratio.abs().max(x.abs());
            let tail = term.abs() * r / (1.0 - r);
            if tail <= 1e-16 * sum.value().abs() || term == 0.0 {
                return Ok((sum.value(), k + 1));
            }
        }
    }
    if degree.is_some() {
        Ok((sum.value(), limit))
    } else {
        Err(Error::Convergence(format!(
            "2F1({a}, {b}; {c}; {x}) not converged after {MAX_TERMS} terms"
        )))
    }
}

/// Exact coefficients of Θ_n(z) = 2^n (1/2)_n 1F1(-n; -2n; 2z), lowest power first.
pub fn bessel_polynomial_coeffs(n: u32) -> Vec<Rational> {
    let half = Rational::new(1.into(), 2.into());
    let lead = pochhammer_rational(&half, n) * Rational::from_integer(num::BigInt::one() << n);
    let mut out = Vec::with_capacity(n as usize + 1);
    let mut c = lead;
    out.push(c.clone());
    let nn = Rational::from_integer((n as i64).into());
    for k in 0..n {
        let k = Rational::from_integer((k as i64).into());
        let num = (&k - &nn) * Rational::from_integer(2.into());
        let den = (&k - &nn - &nn) * (&k + Rational::one());
        if den.is_zero() {
            break;
        }
        c = c * num / den;
        out.push(c.clone());
    }
    out
}

/// Θ_n(z) = e^z k̂_{n+1/2}(z), a polynomial of degree n.
pub fn bessel_polynomial_theta(n: u32, z: f64) -> f64 {
    let mut c = (1..=n).fold(1.0, |acc, k| acc * (2 * k - 1) as f64);
    let mut coeffs = Vec::with_capacity(n as usize + 1);
    coeffs.push(c);
    let nf = n as f64;
    for k in 0..n {
        let k = k as f64;
        c *= (k - nf) / (k - 2.0 * nf) * 2.0 / (k + 1.0);
        coeffs.push(c);
    }
    coeffs.iter().rev().fold(0.0, |acc, &ck| acc * z + ck)
}

/// Taylor coefficients of Θ_n(z/2)/Θ_n(−z/2) through z^order, exact. The
/// ratio is the [n/n] Padé approximant of e^z.
pub fn bessel_pade_exp_taylor(n: u32, order: usize) -> Vec<Rational> {
    let theta = bessel_polynomial_coeffs(n);
    let half = Rational::new(1.into(), 2.into());
    let mut scale = Rational::one();
    let mut num_c = Vec::with_capacity(theta.len());
    let mut den_c = Vec::with_capacity(theta.len());
    for (k, c) in theta.iter().enumerate() {
        let t = c * &scale;
        den_c.push(if k % 2 == 0 { t.clone() } else { -t.clone() });
        num_c.push(t);
        scale = scale * &half;
    }
    let mut out: Vec<Rational> = Vec::with_capacity(order + 1);
    for j in 0..=order {
        let mut acc = num_c.get(j).cloned().unwrap_or_else(Rational::zero);
        for i in 1..=j.min(den_c.len() - 1) {
            acc -= &den_c[i] * &out[j - i];
        }
        out.push(acc / &den_c[0]);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::core_math::rational_to_f64;

    #[test]
    fn bessel_pade_matches_exponential_through_twice_the_degree() {
        for n in 0..=5u32 {
            let t = bessel_pade_exp_taylor(n, 2 * n as usize + 1);
            let mut fact = 1.0;
            for (k, c) in t.iter().enumerate() {
                if k > 0 {
                    fact *= k as f64;
                }
                let err = (rational_to_f64(c) * fact - 1.0).abs();
                if k <= 2 * n as usize {
                    assert!(err < 1e-12, "n={n} k={k}");
                } else {
                    assert!(err > 1e-6, "n={n}: order {k} should differ");
                }
            }
        }
    }

    #[test]
    fn hyp1f1_examples() {
        assert_eq!(hyp1f1_terminating(0, 0.0, 2.0).unwrap(), 1.0);
        assert_eq!(hyp1f1_terminating(1, -2.0, 2.0).unwrap(), 2.0);
        // brute force: 1 + (-2)/(-4)·2 + (-2)(-1)/((-4)(-3))·4/2
        let direct = 1.0 + 0.5 * 2.0 + (2.0 / 12.0) * 2.0;
        assert!((hyp1f1_terminating(2, -4.0, 2.0).unwrap() - direct).abs() < 1e-15);
        assert!(hyp1f1_terminating(3, -1.0, 1.0).is_err());
    }

    #[test]
    fn hyp2f1_closed_forms() {
        assert_eq!(hyp2f1(2.3, 0.0, 1.7, 0.4).unwrap(), 1.0);
        assert_eq!(hyp2f1(3.5, 0.0, 4.5, 0.9).unwrap(), 1.0);
        let x: f64 = 0.5;
        let want = -(1.0 - x).ln() / x;
        let mut brute = 0.0;
        for k in 0..10000 {
            brute += x.powi(k) / (k as f64 + 1.0);
        }
        assert!((brute - want).abs() < 1e-14);
        assert!((hyp2f1(1.0, 1.0, 2.0, x).unwrap() - want).abs() < 1e-15);
    }

    #[test]
    fn hyp2f1_negative_and_near_one_arguments() {
        for &x in &[-0.9, -0.6, -0.3, 0.7, 0.9] {
            let want = -(1.0f64 - x).ln() / x;
            let got = hyp2f1(1.0, 1.0, 2.0, x).unwrap();
            assert!((got - want).abs() < 1e-14 * want.abs(), "x={x}");
            // (1-x)^{-a} = 2F1(a, b; b; x)
            let got = hyp2f1(0.7, 1.3, 1.3, x).unwrap();
            assert!((got - (1.0 - x).powf(-0.7)).abs() < 1e-14);
        }
    }

    #[test]
    fn hyp2f1_terminates_as_polynomial() {
        for k in 0..=8u32 {
            let (a, c, x) = (1.3, 2.7, 0.8);
            let b = -(k as f64);
            let mut direct = 0.0;
            let mut term = 1.0;
            for j in 0..=k {
                direct += term;
                let jf = j as f64;
                term *= (a + jf) * (b + jf) / ((c + jf) * (jf + 1.0)) * x;
            }
            assert!((hyp2f1(a, b, c, x).unwrap() - direct).abs() <= 1e-15 * direct.abs().max(1.0));
        }
        assert!(hyp2f1(1.0, 1.0, -2.0, 0.1).is_err());
        assert!(hyp2f1(1.0, -2.0, -2.0, 0.1).is_ok());
    }

    #[test]
    fn theta_values() {
        assert_eq!(bessel_polynomial_theta(0, 3.3), 1.0);
        assert_eq!(bessel_polynomial_theta(1, 3.0), 4.0);
        for n in 0..8 {
            let want: f64 = (1..=n).map(|k| (2 * k - 1) as f64).product();
            assert_eq!(bessel_polynomial_theta(n, 0.0), want);
        }
    }

    #[test]
    fn theta_coefficients_match_factorial_form() {
        // Θ_n(z) = Σ_k (n+k)! / (2^k k! (n-k)!) z^{n-k}
        for n in 0..10u32 {
            let c = bessel_polynomial_coeffs(n);
            assert_eq!(c.len(), n as usize + 1);
            for k in 0..=n {
                let f = |j: u32| (1..=j).fold(1.0f64, |a, i| a * i as f64);
                let want = f(n + k) / (2f64.powi(k as i32) * f(k) * f(n - k));
                let got = rational_to_f64(&c[(n - k) as usize]);
                assert!((got - want).abs() <= 1e-13 * want);
            }
        }
    }
}
