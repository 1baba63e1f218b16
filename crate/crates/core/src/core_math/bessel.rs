use std::f64::consts::PI;

use super::hyper::bessel_polynomial_theta;
use crate::error::{Error, Result};

/// k̂_{j+1/2}(z) for any integer j, from the Bessel polynomial closed form.
///
/// Negative orders use k̂_{-ν}(z) = z^{-2ν} k̂_ν(z).
pub fn khat_half(j: i64, z: f64) -> f64 {
    if j >= 0 {
        (-z).exp() * bessel_polynomial_theta(j as u32, z)
    } else {
        let mu = (-j - 1) as u32;
        z.powi(2 * j as i32 + 1) * (-z).exp() * bessel_polynomial_theta(mu, z)
    }
}

/// Reduced Bessel function k̂_ν(z) = (2/π)^{1/2} z^ν K_ν(z).
pub fn khat(nu: f64, z: f64) -> Result<f64> {
    if !(z > 0.0) {
        return Err(Error::Domain(format!("khat argument {z} must be positive")));
    }
    let twice = 2.0 * nu;
    if twice == twice.round() && (twice.round() as i64).rem_euclid(2) == 1 {
        let j = (nu - 0.5).round() as i64;
        return Ok(khat_half(j, z));
    }
    let k = bessel_k(nu.abs(), z)?;
    Ok((2.0 / PI).sqrt() * z.powf(nu) * k)
}

// Taylor coefficients of 1/Γ(z) about 0, coefficient of z^k at index k-1.
const RGAMMA: [f64; 26] = [
    1.0,
    0.5772156649015329,
    -0.6558780715202538,
    -0.0420026350340952,
    0.1665386113822915,
    -0.0421977345555443,
    -0.0096219715278770,
    0.0072189432466630,
    -0.0011651675918591,
    -0.0002152416741149,
    0.0001280502823882,
    -0.0000201348547807,
    -0.0000012504934821,
    0.0000011330272320,
    -0.0000002056338417,
    0.0000000061160950,
    0.0000000050020075,
    -0.0000000011812746,
    0.0000000001043427,
    0.0000000000077823,
    -0.0000000000036968,
    0.0000000000005100,
    -0.0000000000000206,
    -0.0000000000000054,
    0.0000000000000014,
    0.0000000000000001,
];

/// (gam1, gam2, 1/Γ(1+x), 1/Γ(1-x)) for |x| ≤ 1/2, as used by Temme's method.
fn temme_gammas(x: f64) -> (f64, f64, f64, f64) {
    // 1/Γ(1+x) = Σ_j RGAMMA[j] x^j
    let mut odd = 0.0;
    let mut even = 0.0;
    for (j, &c) in RGAMMA.iter().enumerate().rev() {
        if j % 2 == 1 {
            odd = odd * x * x + c;
        } else {
            even = even * x * x + c;
        }
    }
    // odd holds Σ_{j odd} c_j x^{j-1}, even holds Σ_{j even} c_j x^j
    let gampl = even + odd * x;
    let gammi = even - odd * x;
    (-odd, even, gampl, gammi)
}

/// K_ν(x) for ν ≥ 0 via Temme's series (x < 2) or Steed's continued fraction.
fn bessel_k(nu: f64, x: f64) -> Result<f64> {
    const EPS: f64 = 1e-16;
    const MAXIT: usize = 10_000;
    let nl = (nu + 0.5).floor() as i64;
    let xmu = nu - nl as f64;
    let xmu2 = xmu * xmu;
    let xi = 1.0 / x;
    let xi2 = 2.0 * xi;
    let (mut rkmu, mut rk1);
    if x < 2.0 {
        let x2 = 0.5 * x;
        let pimu = PI * xmu;
        let fact = if pimu.abs() < EPS { 1.0 } else { pimu / pimu.sin() };
        let d = -x2.ln();
        let e = xmu * d;
        let fact2 = if e.abs() < EPS { 1.0 } else { e.sinh() / e };
        let (gam1, gam2, gampl, gammi) = temme_gammas(xmu);
        let mut ff = fact * (gam1 * e.cosh() + gam2 * fact2 * d);
        let mut sum = ff;
        let ee = e.exp();
        let mut p = 0.5 * ee / gampl;
        let mut q = 0.5 / (ee * gammi);
        let mut c = 1.0;
        let dd = x2 * x2;
        let mut sum1 = p;
        let mut converged = false;
        for i in 1..=MAXIT {
            let fi = i as f64;
            ff = (fi * ff + p + q) / (fi * fi - xmu2);
            c *= dd / fi;
            p /= fi - xmu;
            q /= fi + xmu;
            let del = c * ff;
            sum += del;
            sum1 += c * (p - fi * ff);
            if del.abs() < sum.abs() * EPS {
                converged = true;
                break;
            }
        }
        if !converged {
            return Err(Error::Convergence(format!("K_{nu}({x}) series")));
        }
        rkmu = sum;
        rk1 = sum1 * xi2;
    } else {
        let mut b = 2.0 * (1.0 + x);
        let mut d = 1.0 / b;
        let mut delh = d;
        let mut h = d;
        let mut q1 = 0.0;
        let mut q2 = 1.0;
        let a1 = 0.25 - xmu2;
        let mut q = a1;
        let mut c = a1;
        let mut a = -a1;
        let mut s = 1.0 + q * delh;
        let mut converged = false;
        for i in 2..=MAXIT {
            let fi = i as f64;
            a -= 2.0 * (fi - 1.0);
            c = -a * c / fi;
            let qnew = (q1 - b * q2) / a;
            q1 = q2;
            q2 = qnew;
            q += c * qnew;
            b += 2.0;
            d = 1.0 / (b + a * d);
            delh = (b * d - 1.0) * delh;
            h += delh;
            let dels = q * delh;
            s += dels;
            if (dels / s).abs() < EPS {
                converged = true;
                break;
            }
        }
        if !converged {
            return Err(Error::Convergence(format!("K_{nu}({x}) continued fraction")));
        }
        h *= a1;
        rkmu = (PI / (2.0 * x)).sqrt() * (-x).exp() / s;
        rk1 = rkmu * (xmu + x + 0.5 - h) * xi;
    }
    for i in 1..=nl {
        let next = (xmu + i as f64) * xi2 * rk1 + rkmu;
        rkmu = rk1;
        rk1 = next;
    }
    Ok(rkmu)
}

/// Spherical Bessel function of the first kind j_l(x).
pub fn spherical_bessel_j(l: u32, x: f64) -> f64 {
    let ax = x.abs();
    let sign = if x < 0.0 && l % 2 == 1 { -1.0 } else { 1.0 };
    if ax < 1e-3 || (l > 0 && ax < 0.1 * (l as f64)) {
        return sign * small_argument_series(l, ax);
    }
    let j0 = ax.sin() / ax;
    if l == 0 {
        return sign * j0;
    }
    let j1 = ax.sin() / (ax * ax) - ax.cos() / ax;
    if ax > l as f64 {
        let (mut prev, mut cur) = (j0, j1);
        for k in 1..l {
            let next = (2 * k + 1) as f64 / ax * cur - prev;
            prev = cur;
            cur = next;
        }
        return sign * cur;
    }
    // Miller's downward recurrence, normalized against j0 or j1.
    let start = l as usize + 30 + (4.0 * (l as f64 + 10.0).sqrt()) as usize;
    let mut next = 0.0;
    let mut cur = 1e-300;
    let mut at_l = 0.0;
    let mut f1 = 0.0;
    for k in (1..=start).rev() {
        let prev = (2 * k + 1) as f64 / ax * cur - next;
        next = cur;
        cur = prev;
        if k - 1 == l as usize {
            at_l = cur;
        }
        if k - 1 == 1 {
            f1 = cur;
        }
        if cur.abs() > 1e250 {
            next *= 1e-250;
            cur *= 1e-250;
            at_l *= 1e-250;
            f1 *= 1e-250;
        }
    }
    let scale = if j0.abs() >= j1.abs() { j0 / cur } else { j1 / f1 };
    sign * at_l * scale
}

fn small_argument_series(l: u32, x: f64) -> f64 {
    // j_l(x) = x^l/(2l+1)!! Σ_k (-x²/2)^k / (k! (2l+3)(2l+5)...(2l+2k+1))
    let mut lead = 1.0;
    for k in 1..=l {
        lead *= x / (2 * k + 1) as f64;
    }
    let mut term = 1.0;
    let mut sum = 1.0;
    for k in 1..60 {
        term *= -x * x / (2.0 * k as f64 * (2 * l + 2 * k + 1) as f64);
        sum += term;
        if term.abs() < 1e-17 * sum.abs() {
            break;
        }
    }
    lead * sum
}
