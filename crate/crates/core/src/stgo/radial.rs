use std::cmp::Ordering;
use std::f64::consts::PI;
use std::fmt;
use std::sync::Arc;

use serde::Serialize;

use crate::core_math::khat_half;
use crate::error::{Error, Result};
use crate::oracles::central_weights;

/// Relative size below which a merged coefficient is treated as an exact zero.
const CANCEL_TOL: f64 = 64.0 * f64::EPSILON;

/// Highest (1/r d/dr) power offered for sampled profiles.
pub const SAMPLED_MAX_ORDER: u32 = 8;

const SAMPLED_STENCIL_ORDER: u32 = 6;

/// k̂_{index+1/2}(β r).
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct KhatFactor {
    pub index: i64,
    pub beta: f64,
}

/// c · r^power · e^{−gauss r²} · Π k̂_{index+1/2}(β r).
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RadialTerm {
    pub coeff: f64,
    pub power: f64,
    pub gauss: f64,
    pub khats: Vec<KhatFactor>,
}

impl RadialTerm {
    fn key_cmp(&self, other: &Self) -> Ordering {
        self.power
            .total_cmp(&other.power)
            .then(self.gauss.total_cmp(&other.gauss))
            .then(self.khats.len().cmp(&other.khats.len()))
            .then_with(|| {
                for (a, b) in self.khats.iter().zip(&other.khats) {
                    let o = a.index.cmp(&b.index).then(a.beta.total_cmp(&b.beta));
                    if o != Ordering::Equal {
                        return o;
                    }
                }
                Ordering::Equal
            })
    }

    fn shape(&self, r: f64) -> f64 {
        let mut v = if r == 0.0 && self.power == 0.0 { 1.0 } else { r.powf(self.power) };
        if self.gauss != 0.0 {
            v *= (-self.gauss * r * r).exp();
        }
        for k in &self.khats {
            v *= khat_half(k.index, k.beta * r);
        }
        v
    }

    pub fn evaluate(&self, r: f64) -> f64 {
        self.coeff * self.shape(r)
    }
}

/// Finite sum of [`RadialTerm`]s, closed under d/dr and products.
#[derive(Debug, Clone, PartialEq, Default, Serialize)]
pub struct RadialExpr {
    terms: Vec<RadialTerm>,
}

impl RadialExpr {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn from_terms(terms: Vec<RadialTerm>) -> Self {
        let mut e = Self { terms };
        e.normalize(None);
        e
    }

    /// c · r^s.
    pub fn power(c: f64, s: f64) -> Self {
        Self::from_terms(vec![RadialTerm { coeff: c, power: s, gauss: 0.0, khats: vec![] }])
    }

    /// e^{−α r²}.
    pub fn gaussian(alpha: f64) -> Self {
        Self::from_terms(vec![RadialTerm { coeff: 1.0, power: 0.0, gauss: alpha, khats: vec![] }])
    }

    /// k̂_{index+1/2}(β r).
    pub fn khat(index: i64, beta: f64) -> Self {
        Self::from_terms(vec![RadialTerm {
            coeff: 1.0,
            power: 0.0,
            gauss: 0.0,
            khats: vec![KhatFactor { index, beta }],
        }])
    }

    pub fn terms(&self) -> &[RadialTerm] {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    fn normalize(&mut self, scale: Option<&[f64]>) {
        for t in &mut self.terms {
            t.khats.sort_by(|a, b| a.index.cmp(&b.index).then(a.beta.total_cmp(&b.beta)));
        }
        let mut idx: Vec<usize> = (0..self.terms.len()).collect();
        idx.sort_by(|&a, &b| self.terms[a].key_cmp(&self.terms[b]));
        let mut out: Vec<RadialTerm> = Vec::with_capacity(self.terms.len());
        let mut mags: Vec<f64> = Vec::with_capacity(self.terms.len());
        for i in idx {
            let t = &self.terms[i];
            let m = scale.map_or(t.coeff.abs(), |s| s[i]);
            match out.last_mut() {
                Some(last) if last.key_cmp(t) == Ordering::Equal => {
                    last.coeff += t.coeff;
                    *mags.last_mut().unwrap() += m;
                }
                _ => {
                    out.push(t.clone());
                    mags.push(m);
                }
            }
        }
        self.terms = out
            .into_iter()
            .zip(mags)
            .filter(|(t, m)| t.coeff != 0.0 && t.coeff.abs() > CANCEL_TOL * m)
            .map(|(t, _)| t)
            .collect();
    }

    fn rebuild(terms: Vec<RadialTerm>, mags: Vec<f64>) -> Self {
        let mut e = Self { terms };
        e.normalize(Some(&mags));
        e
    }

    pub fn scale(&self, c: f64) -> Self {
        if c == 0.0 {
            return Self::zero();
        }
        let terms = self
            .terms
            .iter()
            .map(|t| RadialTerm { coeff: t.coeff * c, ..t.clone() })
            .collect();
        Self { terms }
    }

    pub fn add(&self, other: &Self) -> Self {
        let terms: Vec<RadialTerm> = self.terms.iter().chain(&other.terms).cloned().collect();
        let mags = terms.iter().map(|t| t.coeff.abs()).collect();
        Self::rebuild(terms, mags)
    }

    pub fn sum<'a>(items: impl IntoIterator<Item = &'a RadialExpr>) -> Self {
        let terms: Vec<RadialTerm> = items.into_iter().flat_map(|e| e.terms.iter().cloned()).collect();
        let mags = terms.iter().map(|t| t.coeff.abs()).collect();
        Self::rebuild(terms, mags)
    }

    /// Multiplies by r^s.
    pub fn mul_power(&self, s: f64) -> Self {
        let terms = self
            .terms
            .iter()
            .map(|t| RadialTerm { power: t.power + s, ..t.clone() })
            .collect();
        Self { terms }
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut terms = Vec::with_capacity(self.terms.len() * other.terms.len());
        for a in &self.terms {
            for b in &other.terms {
                let mut khats = a.khats.clone();
                khats.extend_from_slice(&b.khats);
                terms.push(RadialTerm {
                    coeff: a.coeff * b.coeff,
                    power: a.power + b.power,
                    gauss: a.gauss + b.gauss,
                    khats,
                });
            }
        }
        let mags = terms.iter().map(|t| t.coeff.abs()).collect();
        Self::rebuild(terms, mags)
    }

    /// d/dr, using d/dr k̂_{ν}(βr) = −β² r k̂_{ν−1}(βr).
    pub fn ddr(&self) -> Self {
        let mut terms = Vec::new();
        for t in &self.terms {
            if t.power != 0.0 {
                terms.push(RadialTerm { coeff: t.coeff * t.power, power: t.power - 1.0, ..t.clone() });
            }
            if t.gauss != 0.0 {
                terms.push(RadialTerm {
                    coeff: -2.0 * t.gauss * t.coeff,
                    power: t.power + 1.0,
                    ..t.clone()
                });
            }
            for (i, k) in t.khats.iter().enumerate() {
                let mut khats = t.khats.clone();
                khats[i].index -= 1;
                terms.push(RadialTerm {
                    coeff: -k.beta * k.beta * t.coeff,
                    power: t.power + 1.0,
                    gauss: t.gauss,
                    khats,
                });
            }
        }
        let mags = terms.iter().map(|t| t.coeff.abs()).collect();
        Self::rebuild(terms, mags)
    }

    /// (1/r d/dr)^k.
    pub fn inv_r_ddr_pow(&self, k: u32) -> Self {
        let mut e = self.clone();
        for _ in 0..k {
            e = e.ddr().mul_power(-1.0);
        }
        e
    }

    /// ψ ↦ ψ″ + (2l+2)/r ψ′, the action of ∇² on ψ(r) 𝒴_l^m(r).
    pub fn solid_laplacian(&self, l: i32) -> Self {
        let d1 = self.ddr();
        d1.ddr().add(&d1.mul_power(-1.0).scale(2.0 * l as f64 + 2.0))
    }

    pub fn evaluate(&self, r: f64) -> f64 {
        let mut s = crate::core_math::KahanSum::new();
        for t in &self.terms {
            s.add(t.evaluate(r));
        }
        s.value()
    }

    /// Σ |term(r)|, the scale against which cancellation is judged.
    pub fn magnitude(&self, r: f64) -> f64 {
        self.terms.iter().map(|t| t.evaluate(r).abs()).sum()
    }
}

impl fmt::Display for RadialExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, t) in self.terms.iter().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            write!(f, "{}", t.coeff)?;
            if t.power != 0.0 {
                write!(f, "·r^{}", t.power)?;
            }
            if t.gauss != 0.0 {
                write!(f, "·exp(-{}r²)", t.gauss)?;
            }
            for k in &t.khats {
                write!(f, "·k̂[{}+1/2]({}r)", k.index, k.beta)?;
            }
        }
        Ok(())
    }
}

pub type Sampler = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

/// (1/r d/dr)^k f by central differences in u = r², where it equals 2^k d^k/du^k.
pub fn sampled_inv_r_ddr_pow(f: &Sampler, k: u32) -> Result<Sampler> {
    if k == 0 {
        return Ok(f.clone());
    }
    if k > SAMPLED_MAX_ORDER {
        return Err(Error::Capability(format!(
            "sampled profiles support (1/r d/dr)^k only for k <= {SAMPLED_MAX_ORDER}, got {k}"
        )));
    }
    let w = central_weights(k, SAMPLED_STENCIL_ORDER);
    let reach = w.iter().map(|(o, _)| o.unsigned_abs()).max().unwrap_or(1) as f64;
    let f = f.clone();
    Ok(Arc::new(move |r: f64| {
        let u = r * r;
        let h = (f64::EPSILON.powf(1.0 / (k + SAMPLED_STENCIL_ORDER) as f64) * u.max(1e-8)).min(0.5 * u / reach);
        let mut s = crate::core_math::KahanSum::new();
        for (o, c) in &w {
            s.add(c * f((u + *o as f64 * h).sqrt()));
        }
        2f64.powi(k as i32) * s.value() / h.powi(k as i32)
    }))
}

/// Radial factor of a tensor term: exact closed form or a sampled closure.
#[derive(Clone)]
pub enum Radial {
    Expr(RadialExpr),
    Sampled(Sampler),
}

impl fmt::Debug for Radial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Radial::Expr(e) => write!(f, "Expr({e})"),
            Radial::Sampled(_) => write!(f, "Sampled(..)"),
        }
    }
}

impl Radial {
    pub fn evaluate(&self, r: f64) -> f64 {
        match self {
            Radial::Expr(e) => e.evaluate(r),
            Radial::Sampled(f) => f(r),
        }
    }

    pub fn magnitude(&self, r: f64) -> f64 {
        match self {
            Radial::Expr(e) => e.magnitude(r),
            Radial::Sampled(f) => f(r).abs(),
        }
    }

    pub fn is_zero(&self) -> bool {
        matches!(self, Radial::Expr(e) if e.is_zero())
    }

    pub fn as_expr(&self) -> Option<&RadialExpr> {
        match self {
            Radial::Expr(e) => Some(e),
            Radial::Sampled(_) => None,
        }
    }

    pub fn expect_expr(&self, what: &str) -> Result<&RadialExpr> {
        self.as_expr()
            .ok_or_else(|| Error::Capability(format!("{what} requires a closed-form radial profile")))
    }

    pub fn scale(&self, c: f64) -> Self {
        match self {
            Radial::Expr(e) => Radial::Expr(e.scale(c)),
            Radial::Sampled(f) => {
                let f = f.clone();
                Radial::Sampled(Arc::new(move |r| c * f(r)))
            }
        }
    }

    pub fn mul_power(&self, s: f64) -> Self {
        match self {
            Radial::Expr(e) => Radial::Expr(e.mul_power(s)),
            Radial::Sampled(f) => {
                let f = f.clone();
                Radial::Sampled(Arc::new(move |r| r.powf(s) * f(r)))
            }
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        match (self, other) {
            (Radial::Expr(a), Radial::Expr(b)) => Radial::Expr(a.mul(b)),
            _ => {
                let (a, b) = (self.clone(), other.clone());
                Radial::Sampled(Arc::new(move |r| a.evaluate(r) * b.evaluate(r)))
            }
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        match (self, other) {
            (Radial::Expr(a), Radial::Expr(b)) => Radial::Expr(a.add(b)),
            _ => {
                let (a, b) = (self.clone(), other.clone());
                Radial::Sampled(Arc::new(move |r| a.evaluate(r) + b.evaluate(r)))
            }
        }
    }

    pub fn inv_r_ddr_pow(&self, k: u32) -> Result<Self> {
        match self {
            Radial::Expr(e) => Ok(Radial::Expr(e.inv_r_ddr_pow(k))),
            Radial::Sampled(f) => sampled_inv_r_ddr_pow(f, k).map(Radial::Sampled),
        }
    }

    pub fn same_identity(&self, other: &Self) -> bool {
        match (self, other) {
            (Radial::Expr(a), Radial::Expr(b)) => a == b,
            (Radial::Sampled(a), Radial::Sampled(b)) => Arc::ptr_eq(a, b),
            _ => false,
        }
    }
}

/// Scalar radial function φ(r) with a known closed form where possible.
#[derive(Clone)]
pub enum RadialProfile {
    /// r^σ.
    Power(f64),
    /// e^{−α r²}.
    Gaussian(f64),
    /// k̂_{n−1/2}(α r).
    ReducedBesselHalf { n: i64, alpha: f64 },
    /// e^{−α r}/r.
    YukawaLike(f64),
    Custom(Sampler),
}

impl fmt::Debug for RadialProfile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RadialProfile::Power(s) => write!(f, "Power({s})"),
            RadialProfile::Gaussian(a) => write!(f, "Gaussian({a})"),
            RadialProfile::ReducedBesselHalf { n, alpha } => write!(f, "ReducedBesselHalf({n}, {alpha})"),
            RadialProfile::YukawaLike(a) => write!(f, "YukawaLike({a})"),
            RadialProfile::Custom(_) => write!(f, "Custom(..)"),
        }
    }
}

impl RadialProfile {
    pub fn validate(&self) -> Result<()> {
        let positive = |a: f64, what: &str| {
            if a > 0.0 && a.is_finite() {
                Ok(())
            } else {
                Err(Error::Domain(format!("{what} exponent must be positive, got {a}")))
            }
        };
        match self {
            RadialProfile::Power(s) if !s.is_finite() => Err(Error::Domain("power must be finite".into())),
            RadialProfile::Gaussian(a) => positive(*a, "Gaussian"),
            RadialProfile::ReducedBesselHalf { alpha, .. } => positive(*alpha, "reduced Bessel"),
            RadialProfile::YukawaLike(a) => positive(*a, "Yukawa"),
            _ => Ok(()),
        }
    }

    /// Highest supported (1/r d/dr) power.
    pub fn max_derivative_order(&self) -> u32 {
        match self {
            RadialProfile::Custom(_) => SAMPLED_MAX_ORDER,
            _ => u32::MAX,
        }
    }

    pub fn to_radial(&self) -> Result<Radial> {
        self.validate()?;
        Ok(match self {
            RadialProfile::Power(s) => Radial::Expr(RadialExpr::power(1.0, *s)),
            RadialProfile::Gaussian(a) => Radial::Expr(RadialExpr::gaussian(*a)),
            RadialProfile::ReducedBesselHalf { n, alpha } => Radial::Expr(RadialExpr::khat(n - 1, *alpha)),
            // k̂_{−1/2}(z) = e^{−z}/z
            RadialProfile::YukawaLike(a) => Radial::Expr(RadialExpr::khat(-1, *a).scale(*a)),
            RadialProfile::Custom(f) => Radial::Sampled(f.clone()),
        })
    }

    pub fn evaluate(&self, r: f64) -> Result<f64> {
        Ok(self.to_radial()?.evaluate(r))
    }
}

/// 1/√(4π), the constant solid harmonic 𝒴_0^0.
pub fn y00() -> f64 {
    0.5 / PI.sqrt()
}
