//! B functions B_{n,l}^m(α, r) = k̂_{n−1/2}(αr) 𝒴_l^m(αr) / (2^{n+l}(n+l)!):
//! values, Fourier transforms, ladder identities, gradient action and
//! the equal-exponent convolution theorem.

use std::f64::consts::PI;

use num::complex::Complex64;
use serde::Serialize;

use crate::core_math::{binomial, khat_half, rational_to_f64, double_factorial};
use crate::error::{Error, Result};
use crate::harmonics::{regular_solid, regular_solid_poly, LMIndex, Vec3};
use crate::stgo::{Radial, RadialExpr, TensorExpansion, TensorTerm};
use crate::wigner::gaunt_string;

/// Largest n + l for which the normalization 1/(2^{n+l}(n+l)!) is representable.
pub const MAX_NORM_ORDER: i32 = 150;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BIndex {
    pub n: i32,
    pub l: i32,
    pub m: i32,
    pub alpha: f64,
}

impl BIndex {
    pub fn new(n: i32, l: i32, m: i32, alpha: f64) -> Result<Self> {
        if l < 0 || m.abs() > l {
            return Err(Error::Domain(format!("invalid (l, m) = ({l}, {m})")));
        }
        if !(alpha > 0.0 && alpha.is_finite()) {
            return Err(Error::Domain(format!("alpha must be positive, got {alpha}")));
        }
        Ok(Self { n, l, m, alpha })
    }

    /// Panics on invalid input; for literals.
    pub fn of(n: i32, l: i32, m: i32, alpha: f64) -> Self {
        Self::new(n, l, m, alpha).expect("valid B-function index")
    }

    /// Classical (pointwise) function iff n + l ≥ 0.
    pub fn is_classical(&self) -> bool {
        self.n + self.l >= 0
    }

    pub fn is_basis_quality(&self) -> bool {
        self.n >= 1
    }

    pub fn lm(&self) -> LMIndex {
        LMIndex::of(self.l, self.m)
    }

    fn with_n(&self, n: i32) -> Self {
        Self { n, ..*self }
    }

    fn norm(&self) -> Result<f64> {
        let k = self.n + self.l;
        if k > MAX_NORM_ORDER {
            return Err(Error::Domain(format!("n + l = {k} exceeds the supported maximum {MAX_NORM_ORDER}")));
        }
        Ok((1..=k).fold(1.0, |acc, j| acc / (2.0 * j as f64)))
    }

    fn require_classical(&self) -> Result<()> {
        if self.is_classical() {
            Ok(())
        } else {
            Err(Error::Distributional(format!(
                "B_{{{},{}}} with n + l < 0 has no pointwise value",
                self.n, self.l
            )))
        }
    }

    /// Radial part f_l(r) of B = f_l(r) Y_l^m(r̂): k̂_{n−1/2}(αr)(αr)^l / (2^{n+l}(n+l)!).
    pub fn radial_expr(&self) -> Result<RadialExpr> {
        self.require_classical()?;
        let c = self.norm()? * self.alpha.powi(self.l);
        Ok(RadialExpr::khat((self.n - 1) as i64, self.alpha).mul(&RadialExpr::power(c, self.l as f64)))
    }

    pub fn tensor_term(&self) -> Result<TensorTerm> {
        Ok(TensorTerm::new(Complex64::new(1.0, 0.0), Radial::Expr(self.radial_expr()?), self.lm()))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BTerm {
    pub coeff: f64,
    pub index: BIndex,
}

/// Σ coeff · B_{n,l}^m(α, r) over one shared α.
#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct BExpansion {
    pub terms: Vec<BTerm>,
    /// Set when some term has n + l < 0.
    pub distributional: bool,
}

impl BExpansion {
    pub fn push(&mut self, coeff: f64, index: BIndex) {
        if coeff == 0.0 {
            return;
        }
        if let Some(t) = self.terms.iter_mut().find(|t| t.index == index) {
            t.coeff += coeff;
        } else {
            self.terms.push(BTerm { coeff, index });
        }
        self.terms.retain(|t| t.coeff != 0.0);
        self.distributional = self.terms.iter().any(|t| !t.index.is_classical());
    }

    pub fn single(coeff: f64, index: BIndex) -> Self {
        let mut e = Self::default();
        e.push(coeff, index);
        e
    }

    pub fn scale(mut self, c: f64) -> Self {
        for t in &mut self.terms {
            t.coeff *= c;
        }
        self
    }

    pub fn evaluate(&self, r: Vec3) -> Result<Complex64> {
        self.terms.iter().map(|t| Ok(t.coeff * b_value(&t.index, r)?)).sum()
    }

    pub fn fourier(&self, p: Vec3) -> Complex64 {
        self.terms.iter().map(|t| t.coeff * b_fourier(&t.index, p)).sum()
    }

    pub fn to_tensor_expansion(&self) -> Result<TensorExpansion> {
        let mut out = TensorExpansion::new();
        for t in &self.terms {
            let mut term = t.index.tensor_term()?;
            term.coeff *= t.coeff;
            out.push(term);
        }
        Ok(out)
    }
}

/// B_{n,l}^m(α, r).
///
/// At r = 0: l = 0 and n ≥ 1 gives (2n−3)!!/(2^n n!)·Y_0^0; otherwise the
/// value is 0 when k̂_{n−1/2}(z) z^l vanishes there (2n−1+l > 0 or n ≥ 1)
/// and a singularity error when it does not.
pub fn b_value(idx: &BIndex, r: Vec3) -> Result<Complex64> {
    idx.require_classical()?;
    let norm = idx.norm()?;
    let rho = r.norm();
    if rho == 0.0 {
        if idx.l == 0 && idx.n >= 1 {
            let df = rational_to_f64(&double_factorial((2 * idx.n - 3) as i64)?.into());
            return Ok(Complex64::new(norm * df * 0.5 / PI.sqrt(), 0.0));
        }
        if idx.n >= 1 || 2 * idx.n - 1 + idx.l > 0 {
            return Ok(Complex64::new(0.0, 0.0));
        }
        return Err(Error::Singularity(format!(
            "B_{{{},{}}} is singular at the origin",
            idx.n, idx.l
        )));
    }
    let k = khat_half((idx.n - 1) as i64, idx.alpha * rho);
    Ok(norm * k * regular_solid(idx.lm(), r.scale(idx.alpha)))
}

/// 𝒴_l^m(−i p) through the polynomial form.
pub fn solid_at_minus_i(idx: LMIndex, p: Vec3) -> Complex64 {
    let mi = Complex64::new(0.0, -1.0);
    regular_solid_poly(idx).evaluate_complex([mi * p.x, mi * p.y, mi * p.z])
}

/// B̄_{n,l}^m(α, p) = (2/π)^{1/2} α^{2n+l−1} / (α²+p²)^{n+l+1} · 𝒴_l^m(−ip).
pub fn b_fourier(idx: &BIndex, p: Vec3) -> Complex64 {
    let a = idx.alpha;
    let radial = (2.0 / PI).sqrt() * a.powi(2 * idx.n + idx.l - 1) / (a * a + p.norm2()).powi(idx.n + idx.l + 1);
    radial * solid_at_minus_i(idx.lm(), p)
}

/// [1 − α^{−2}∇²] B_{n,l}^m = B_{n−1,l}^m.
pub fn helmholtz_ladder(idx: &BIndex) -> BExpansion {
    BExpansion::single(1.0, idx.with_n(idx.n - 1))
}

fn binom(n: i32, k: i32) -> f64 {
    rational_to_f64(&binomial(n as u32, k as u32).into())
}

/// α^{−2ν} ∇^{2ν} B_{n,l}^m = Σ_t (−1)^t C(ν, t) B_{n−t,l}^m.
pub fn laplacian_power(idx: &BIndex, nu: u32) -> BExpansion {
    let nu = nu as i32;
    let mut e = BExpansion::default();
    for t in 0..=nu {
        let sign = if t % 2 == 0 { 1.0 } else { -1.0 };
        e.push(sign * binom(nu, t), idx.with_n(idx.n - t));
    }
    e
}

/// 𝒴_l^m(∇) B_{n+l,0}^0 = coeff · B_{n,l}^m.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ScalarBImage {
    pub coeff: f64,
    pub index: BIndex,
}

pub fn stgo_on_scalar_b(op: LMIndex, n_plus_l: i32, alpha: f64) -> Result<ScalarBImage> {
    let index = BIndex::new(n_plus_l - op.l, op.l, op.m, alpha)?;
    Ok(ScalarBImage { coeff: (-alpha).powi(op.l) * 0.5 / PI.sqrt(), index })
}

fn coupled_b_sum(
    e: &mut BExpansion,
    prefactor: f64,
    l1: i32,
    m1: i32,
    l2: i32,
    m2: i32,
    alpha: f64,
    n_of: impl Fn(i32, i32) -> i32,
) -> Result<()> {
    for &(l, g) in gaunt_string(l1, m1, l2, m2).iter() {
        if g == 0.0 {
            continue;
        }
        let dl = (l1 + l2 - l) / 2;
        for t in 0..=dl {
            let sign = if t % 2 == 0 { 1.0 } else { -1.0 };
            e.push(prefactor * g * sign * binom(dl, t), BIndex::new(n_of(l, t), l, m1 + m2, alpha)?);
        }
    }
    Ok(())
}

/// 𝒴_{l1}^{m1}(∇) B_{n2,l2}^{m2} = (−α)^{l1} Σ_l ⟨l m1+m2|l1 m1|l2 m2⟩ Σ_t (−1)^t C(Δl, t) B_{n2+l2−l−t, l}^{m1+m2}.
pub fn stgo_on_b(op: LMIndex, target: &BIndex) -> Result<BExpansion> {
    let mut e = BExpansion::default();
    let (n2, l2) = (target.n, target.l);
    coupled_b_sum(&mut e, (-target.alpha).powi(op.l), op.l, op.m, l2, target.m, target.alpha, |l, t| {
        n2 + l2 - l - t
    })?;
    Ok(e)
}

/// ∫ B_a(α, r − r') B_b(α, r') d³r' for equal α.
pub fn convolve(a: &BIndex, b: &BIndex) -> Result<BExpansion> {
    if a.alpha != b.alpha {
        return Err(Error::Unsupported(format!(
            "convolution needs equal exponents, got {} and {}",
            a.alpha, b.alpha
        )));
    }
    let mut e = BExpansion::default();
    let n12 = a.n + b.n + a.l + b.l;
    coupled_b_sum(&mut e, 4.0 * PI / a.alpha.powi(3), a.l, a.m, b.l, b.m, a.alpha, |l, t| n12 - l - t + 1)?;
    Ok(e)
}

/// Relative residuals of the three momentum-space functional equations.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FunctionalResiduals {
    /// B̄_{n,l} against α²/(α²+p²) B̄_{n−1,l}.
    pub ladder: f64,
    /// B̄_{n,l} against (4π)^{1/2} α^{−l} 𝒴_l^m(−ip) B̄_{n+l,0}.
    pub generator: f64,
    /// B̄_{−1,0}^0 against α^{−3}(2π²)^{−1/2}.
    pub delta: f64,
}

impl FunctionalResiduals {
    pub fn max(&self) -> f64 {
        self.ladder.max(self.generator).max(self.delta)
    }
}

fn rel_residual(a: Complex64, b: Complex64) -> f64 {
    let scale = a.norm().max(b.norm());
    if scale == 0.0 {
        0.0
    } else {
        (a - b).norm() / scale
    }
}

pub fn b_fourier_functional_check(idx: &BIndex, p: Vec3) -> FunctionalResiduals {
    let a = idx.alpha;
    let lhs = b_fourier(idx, p);
    let ladder = rel_residual(lhs, a * a / (a * a + p.norm2()) * b_fourier(&idx.with_n(idx.n - 1), p));
    let scalar = BIndex { n: idx.n + idx.l, l: 0, m: 0, alpha: a };
    let gen = (4.0 * PI).sqrt() / a.powi(idx.l) * solid_at_minus_i(idx.lm(), p) * b_fourier(&scalar, p);
    let generator = rel_residual(lhs, gen);
    let d = b_fourier(&BIndex { n: -1, l: 0, m: 0, alpha: a }, p);
    let delta = rel_residual(d, Complex64::new(a.powi(-3) / (2.0 * PI * PI).sqrt(), 0.0));
    FunctionalResiduals { ladder, generator, delta }
}

/// α^{l+1} B_{−l,l}^m(α, r) / ((2l−1)!! 𝒵_l^m(r)) − 1, which vanishes as α → 0.
pub fn yukawa_limit_deviation(l: i32, m: i32, alpha: f64, r: Vec3) -> Result<f64> {
    let idx = BIndex::new(-l, l, m, alpha)?;
    let b = b_value(&idx, r)? * alpha.powi(l + 1);
    let df = rational_to_f64(&double_factorial((2 * l - 1) as i64)?.into());
    let z = crate::harmonics::irregular_solid(LMIndex::of(l, m), r)? * df;
    Ok((b / z - 1.0).norm())
}
