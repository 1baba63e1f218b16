use std::collections::{BTreeMap, HashMap};
use std::f64::consts::PI;
use std::ops::{Add, Mul, Neg};
use std::sync::{Arc, OnceLock, RwLock};

use num::bigint::BigInt;
use num::complex::Complex64;
use num::{One, Zero};
use serde::Serialize;

use super::{LMIndex, Vec3};
use crate::core_math::{binomial, factorial, rational_to_f64, signed_sqrt_to_f64, Rational};

pub type Exponents = [u32; 3];

/// Exact complex rational a + ib.
#[derive(Debug, Clone, PartialEq)]
pub struct GaussianRational {
    pub re: Rational,
    pub im: Rational,
}

impl GaussianRational {
    pub fn new(re: Rational, im: Rational) -> Self {
        Self { re, im }
    }

    pub fn real(re: Rational) -> Self {
        Self { re, im: Rational::zero() }
    }

    pub fn from_ints(re: i64, im: i64) -> Self {
        Self::new(Rational::from_integer(re.into()), Rational::from_integer(im.into()))
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    /// i^n as an exact value.
    pub fn i_pow(n: u32) -> Self {
        match n % 4 {
            0 => Self::from_ints(1, 0),
            1 => Self::from_ints(0, 1),
            2 => Self::from_ints(-1, 0),
            _ => Self::from_ints(0, -1),
        }
    }

    pub fn scale(&self, s: &Rational) -> Self {
        Self::new(&self.re * s, &self.im * s)
    }
}

impl Add for &GaussianRational {
    type Output = GaussianRational;
    fn add(self, o: &GaussianRational) -> GaussianRational {
        GaussianRational::new(&self.re + &o.re, &self.im + &o.im)
    }
}

impl Mul for &GaussianRational {
    type Output = GaussianRational;
    fn mul(self, o: &GaussianRational) -> GaussianRational {
        GaussianRational::new(
            &self.re * &o.re - &self.im * &o.im,
            &self.re * &o.im + &self.im * &o.re,
        )
    }
}

impl Neg for &GaussianRational {
    type Output = GaussianRational;
    fn neg(self) -> GaussianRational {
        GaussianRational::new(-&self.re, -&self.im)
    }
}

/// One monomial of a dumped polynomial: coefficient of x^a y^b z^c.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MonomialValue {
    pub a: u32,
    pub b: u32,
    pub c: u32,
    pub re: f64,
    pub im: f64,
}

/// Homogeneous polynomial in (x, y, z) with exact coefficients.
///
/// The stored value is `√radicand · (4π)^{-1/2 if flagged} · Σ c_abc x^a y^b z^c`
/// with exact Gaussian-rational `c_abc`. The canonical instances are the
/// regular solid harmonics; arbitrary homogeneous polynomials are allowed.
#[derive(Debug, Clone)]
pub struct HarmonicPolynomial {
    degree: u32,
    terms: BTreeMap<Exponents, GaussianRational>,
    radicand: Rational,
    inv_sqrt_four_pi: bool,
    numeric: Vec<(Exponents, Complex64)>,
}

impl PartialEq for HarmonicPolynomial {
    fn eq(&self, o: &Self) -> bool {
        self.degree == o.degree
            && self.terms == o.terms
            && self.radicand == o.radicand
            && self.inv_sqrt_four_pi == o.inv_sqrt_four_pi
    }
}

impl HarmonicPolynomial {
    /// Builds a polynomial; monomials must all have total degree `degree`.
    pub fn from_exact(
        degree: u32,
        terms: impl IntoIterator<Item = (Exponents, GaussianRational)>,
        radicand: Rational,
        inv_sqrt_four_pi: bool,
    ) -> Option<Self> {
        let mut map: BTreeMap<Exponents, GaussianRational> = BTreeMap::new();
        for (e, c) in terms {
            if e.iter().sum::<u32>() != degree {
                return None;
            }
            let slot = map.entry(e).or_insert_with(|| GaussianRational::from_ints(0, 0));
            *slot = &*slot + &c;
        }
        map.retain(|_, c| !c.is_zero());
        let mut p = Self {
            degree,
            terms: map,
            radicand,
            inv_sqrt_four_pi,
            numeric: Vec::new(),
        };
        p.refresh_numeric();
        Some(p)
    }

    /// Integer-coefficient polynomial, e.g. `[([2,0,0],1,0), ([0,2,0],1,0), ([0,0,2],1,0)]` for r².
    pub fn from_monomials(degree: u32, terms: &[(Exponents, i64, i64)]) -> Option<Self> {
        Self::from_exact(
            degree,
            terms.iter().map(|&(e, re, im)| (e, GaussianRational::from_ints(re, im))),
            Rational::one(),
            false,
        )
    }

    fn refresh_numeric(&mut self) {
        let mut scale = signed_sqrt_to_f64(1, &self.radicand);
        if self.inv_sqrt_four_pi {
            scale /= (4.0 * PI).sqrt();
        }
        self.numeric = self
            .terms
            .iter()
            .map(|(e, c)| {
                let re = rational_to_f64(&c.re) * scale;
                let im = rational_to_f64(&c.im) * scale;
                (*e, Complex64::new(re, im))
            })
            .collect();
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn exact_terms(&self) -> &BTreeMap<Exponents, GaussianRational> {
        &self.terms
    }

    /// Floating-point coefficients including the overall scale.
    pub fn terms(&self) -> &[(Exponents, Complex64)] {
        &self.numeric
    }

    /// Formal Laplacian ∂²x + ∂²y + ∂²z, exact.
    pub fn laplacian(&self) -> HarmonicPolynomial {
        let mut out: BTreeMap<Exponents, GaussianRational> = BTreeMap::new();
        for (e, c) in &self.terms {
            for axis in 0..3 {
                let k = e[axis];
                if k < 2 {
                    continue;
                }
                let mut ne = *e;
                ne[axis] -= 2;
                let f = Rational::from_integer(BigInt::from(k * (k - 1)));
                let add = c.scale(&f);
                let slot = out.entry(ne).or_insert_with(|| GaussianRational::from_ints(0, 0));
                *slot = &*slot + &add;
            }
        }
        out.retain(|_, c| !c.is_zero());
        let mut p = Self {
            degree: self.degree.saturating_sub(2),
            terms: out,
            radicand: self.radicand.clone(),
            inv_sqrt_four_pi: self.inv_sqrt_four_pi,
            numeric: Vec::new(),
        };
        p.refresh_numeric();
        p
    }

    /// ∇^{2k} applied formally.
    pub fn laplacian_power(&self, k: u32) -> HarmonicPolynomial {
        (0..k).fold(self.clone(), |p, _| p.laplacian())
    }

    pub fn evaluate(&self, r: Vec3) -> Complex64 {
        let c = [r.x, r.y, r.z].map(|v| Complex64::new(v, 0.0));
        self.evaluate_complex(c)
    }

    /// Evaluation at a complex vector, e.g. 𝒴(−ip) for momentum-space work.
    pub fn evaluate_complex(&self, v: [Complex64; 3]) -> Complex64 {
        let n = self.degree as usize + 1;
        let powers: Vec<Vec<Complex64>> = v
            .iter()
            .map(|&b| {
                let mut p = Vec::with_capacity(n);
                let mut acc = Complex64::one();
                for _ in 0..n {
                    p.push(acc);
                    acc *= b;
                }
                p
            })
            .collect();
        self.numeric.iter().fold(Complex64::zero(), |acc, (e, c)| {
            acc + c * powers[0][e[0] as usize] * powers[1][e[1] as usize] * powers[2][e[2] as usize]
        })
    }

    pub fn dump(&self) -> Vec<MonomialValue> {
        self.numeric
            .iter()
            .map(|(e, c)| MonomialValue { a: e[0], b: e[1], c: e[2], re: c.re, im: c.im })
            .collect()
    }
}

/// True iff the formal Laplacian vanishes identically (exact arithmetic).
pub fn laplacian_check(p: &HarmonicPolynomial) -> bool {
    p.laplacian().is_zero()
}

fn build_regular_solid_poly(idx: LMIndex) -> HarmonicPolynomial {
    let (l, m) = (idx.l, idx.m);
    let mut terms: Vec<(Exponents, GaussianRational)> = Vec::new();
    let k0 = (-m).max(0);
    let mut k = k0;
    while l - m - 2 * k >= 0 {
        let p = (m + k) as u32;
        let q = k as u32;
        let zpow = (l - m - 2 * k) as u32;
        let denom = (BigInt::one() << (p + q) as usize)
            * factorial(p)
            * factorial(q)
            * factorial(zpow);
        let base = Rational::new(if p % 2 == 0 { 1.into() } else { (-1).into() }, denom);
        for j in 0..=p {
            for jp in 0..=q {
                let mag = Rational::from_integer(binomial(p, j) * binomial(q, jp)) * &base;
                let sign = if jp % 2 == 0 { 1 } else { -1 };
                let c = GaussianRational::i_pow(j + jp)
                    .scale(&(mag * Rational::from_integer(sign.into())));
                terms.push(([p - j + q - jp, j + jp, zpow], c));
            }
        }
        k += 1;
    }
    let radicand = Rational::from_integer(
        BigInt::from(2 * l + 1) * factorial((l + m) as u32) * factorial((l - m) as u32),
    );
    HarmonicPolynomial::from_exact(l as u32, terms, radicand, true)
        .expect("solid harmonic monomials are homogeneous")
}

/// Exact monomial expansion of the regular solid harmonic 𝒴_l^m(x, y, z).
///
/// Results are cached process-wide; the cache is append-only.
pub fn regular_solid_poly(idx: LMIndex) -> Arc<HarmonicPolynomial> {
    static CACHE: OnceLock<RwLock<HashMap<LMIndex, Arc<HarmonicPolynomial>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| RwLock::new(HashMap::new()));
    if let Some(p) = cache.read().expect("poly cache poisoned").get(&idx) {
        return Arc::clone(p);
    }
    let p = Arc::new(build_regular_solid_poly(idx));
    let mut w = cache.write().expect("poly cache poisoned");
    Arc::clone(w.entry(idx).or_insert(p))
}
