use num::bigint::BigInt;
use num::rational::BigRational;
use num::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

pub type Rational = BigRational;

/// n!! with 0!! = 1!! = (-1)!! = 1.
pub fn double_factorial(n: i64) -> Result<BigInt> {
    if n < -1 {
        return Err(Error::Domain(format!("double factorial of {n}")));
    }
    let mut acc = BigInt::one();
    let mut k = n;
    while k > 1 {
        acc *= k;
        k -= 2;
    }
    Ok(acc)
}

pub fn factorial(n: u32) -> BigInt {
    (2..=n as u64).fold(BigInt::one(), |acc, k| acc * k)
}

pub fn binomial(n: u32, k: u32) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    let k = k.min(n - k) as u64;
    let n = n as u64;
    let mut acc = BigInt::one();
    for i in 0..k {
        acc = acc * (n - i) / (i + 1);
    }
    acc
}

/// Rising factorial (a)_n.
pub fn pochhammer(a: f64, n: u32) -> f64 {
    (0..n).fold(1.0, |acc, k| acc * (a + k as f64))
}

pub fn pochhammer_rational(a: &Rational, n: u32) -> Rational {
    let mut acc = Rational::one();
    let mut x = a.clone();
    for _ in 0..n {
        acc *= &x;
        x += Rational::one();
    }
    acc
}

/// Splits a positive rational into mantissa and binary exponent so that
/// values far outside the f64 range convert without overflow.
fn split_pow2(q: &Rational) -> (f64, i64) {
    let num = q.numer().abs();
    let den = q.denom().clone();
    let e = num.bits() as i64 - den.bits() as i64;
    let scaled = if e >= 0 {
        BigRational::new(num, den << (e as usize))
    } else {
        BigRational::new(num << ((-e) as usize), den)
    };
    (scaled.to_f64().unwrap_or(f64::NAN), e)
}

fn ldexp(m: f64, e: i64) -> f64 {
    let mut m = m;
    let mut e = e;
    while e > 1000 {
        m *= 2f64.powi(1000);
        e -= 1000;
    }
    while e < -1000 {
        m *= 2f64.powi(-1000);
        e += 1000;
    }
    m * 2f64.powi(e as i32)
}

pub fn rational_to_f64(q: &Rational) -> f64 {
    if q.is_zero() {
        return 0.0;
    }
    let (m, e) = split_pow2(q);
    let v = ldexp(m, e);
    if q.is_negative() {
        -v
    } else {
        v
    }
}

/// sign · √|q| for a rational q whose square root is wanted as a float.
pub fn signed_sqrt_to_f64(sign: i32, q: &Rational) -> f64 {
    if q.is_zero() || sign == 0 {
        return 0.0;
    }
    let (mut m, mut e) = split_pow2(q);
    if e % 2 != 0 {
        m *= 2.0;
        e -= 1;
    }
    let v = ldexp(m.sqrt(), e / 2);
    if sign < 0 {
        -v
    } else {
        v
    }
}
