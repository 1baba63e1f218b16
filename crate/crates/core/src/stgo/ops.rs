use num::complex::Complex64;
use serde::Serialize;

use super::gamma::{GammaForm, GammaIndices, GammaRegistry};
use super::radial::{Radial, RadialExpr, RadialProfile};
use super::tensor::{TensorExpansion, TensorTerm};
use crate::core_math::pochhammer;
use crate::error::{Error, Result};
use crate::harmonics::{regular_solid_poly, HarmonicPolynomial, LMIndex, Vec3};
use crate::wigner::{gaunt, gaunt_string, GauntQuery};

/// Σ_ν [radial_ν(r)] · [∇^{2ν} p](x, y, z), the right side of Hobson's theorem.
#[derive(Debug, Clone)]
pub struct HobsonExpansion {
    pub terms: Vec<(Radial, HarmonicPolynomial)>,
}

impl HobsonExpansion {
    pub fn evaluate(&self, at: Vec3) -> Complex64 {
        let r = at.norm();
        self.terms
            .iter()
            .map(|(f, p)| f.evaluate(r) * p.evaluate(at))
            .sum()
    }
}

/// p(∂x, ∂y, ∂z) F(r²) for homogeneous p of degree n, with
/// (d/dr²)^k = 2^{−k} (1/r d/dr)^k.
pub fn hobson_general(p: &HarmonicPolynomial, f: &RadialProfile) -> Result<HobsonExpansion> {
    let n = p.degree();
    if n > f.max_derivative_order() {
        return Err(Error::Capability(format!(
            "profile supports derivatives up to order {}, polynomial degree is {n}",
            f.max_derivative_order()
        )));
    }
    let radial = f.to_radial()?;
    let mut terms = Vec::new();
    let mut lap = p.clone();
    let mut nu_fact = 1.0;
    for nu in 0..=n {
        if nu > 0 {
            lap = lap.laplacian();
            nu_fact *= nu as f64;
        }
        if lap.is_zero() {
            break;
        }
        let c = 2f64.powi(-(nu as i32)) / nu_fact;
        terms.push((radial.inv_r_ddr_pow(n - nu)?.scale(c), lap.clone()));
    }
    Ok(HobsonExpansion { terms })
}

/// 𝒴_l^m(∇) φ(r) = [(1/r d/dr)^l φ] 𝒴_l^m(r).
pub fn hobson_harmonic(idx: LMIndex, phi: &RadialProfile) -> Result<TensorExpansion> {
    hobson_harmonic_radial(idx, &phi.to_radial()?)
}

pub fn hobson_harmonic_radial(idx: LMIndex, phi: &Radial) -> Result<TensorExpansion> {
    let d = phi.inv_r_ddr_pow(idx.l as u32)?;
    Ok(TensorExpansion::single(TensorTerm::solid(d, idx)).prune())
}

/// 𝒴_{l1}^{m1}(∇) applied to one tensor term with the default γ form.
pub fn apply_to_tensor(op: LMIndex, target: &TensorTerm) -> Result<TensorExpansion> {
    apply_to_tensor_with(op, target, GammaRegistry::builtin().default_form())
}

pub fn apply_to_tensor_with(op: LMIndex, target: &TensorTerm, form: &dyn GammaForm) -> Result<TensorExpansion> {
    let t = target.angular;
    let mut out = TensorExpansion::new();
    for &(l, g) in gaunt_string(op.l, op.m, t.l, t.m).iter() {
        if g == 0.0 {
            continue;
        }
        let ix = GammaIndices::new(op.l, t.l, l)?;
        let radial = form.gamma(&ix, &target.radial)?;
        out.push(TensorTerm::new(target.coeff * g, radial, LMIndex::of(l, op.m + t.m)));
    }
    Ok(out.prune())
}

pub fn apply_to_expansion(op: LMIndex, target: &TensorExpansion, form: &dyn GammaForm) -> Result<TensorExpansion> {
    let mut out = TensorExpansion::new();
    for t in &target.terms {
        out.extend(apply_to_tensor_with(op, t, form)?);
    }
    Ok(out.prune())
}

/// One term of 𝒴_{l1}^{m1}(∇) 𝒴_{l2}^{m2}(∇) = Σ ⟨l m1+m2|l1 m1|l2 m2⟩ ∇^{2Δl} 𝒴_l^{m1+m2}(∇).
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LinearizedTerm {
    pub l: i32,
    pub m: i32,
    pub gaunt: f64,
    pub laplacian_power: i32,
}

pub fn stgo_product_linearize(idx1: LMIndex, idx2: LMIndex) -> Vec<LinearizedTerm> {
    gaunt_string(idx1.l, idx1.m, idx2.l, idx2.m)
        .iter()
        .filter(|(_, g)| *g != 0.0)
        .map(|&(l, g)| LinearizedTerm {
            l,
            m: idx1.m + idx2.m,
            gaunt: g,
            laplacian_power: (idx1.l + idx2.l - l) / 2,
        })
        .collect()
}

/// Radial part ψ of ∇^{2n}[(1/r d/dr)^l Φ · 𝒴_l^m], as a factor of 𝒴_l^m.
pub fn laplacian_power_solid(phi: &RadialExpr, l: i32, n: i32) -> RadialExpr {
    let mut psi = phi.inv_r_ddr_pow(l as u32);
    for _ in 0..n {
        psi = psi.solid_laplacian(l);
    }
    psi
}

/// 𝒴_{l1}^{m1}(∇) F with F = 𝒴_{l2}^{m2}(∇) Φ, through the linearized operator product.
pub fn apply_via_generator(op: LMIndex, gen: LMIndex, phi: &RadialProfile) -> Result<TensorExpansion> {
    let radial = phi.to_radial()?;
    let phi = radial.expect_expr("apply_via_generator")?;
    let mut out = TensorExpansion::new();
    for t in stgo_product_linearize(op, gen) {
        let psi = laplacian_power_solid(phi, t.l, t.laplacian_power);
        out.push(TensorTerm::new(
            Complex64::new(t.gaunt, 0.0),
            Radial::Expr(psi.mul_power(t.l as f64)),
            LMIndex::of(t.l, t.m),
        ));
    }
    Ok(out.prune())
}

/// 2π (1/2)_{l+1} / ((1/2)_{λ+1} (1/2)_{l−λ+1}).
pub fn leibniz_weight(l: i32, lambda: i32) -> f64 {
    2.0 * std::f64::consts::PI * pochhammer(0.5, (l + 1) as u32)
        / (pochhammer(0.5, (lambda + 1) as u32) * pochhammer(0.5, (l - lambda + 1) as u32))
}

/// 𝒴_l^m(∇)[f g] = Σ_λ Σ_μ w_λ ⟨l m|λ −μ|l−λ m+μ⟩ [𝒴_λ^{−μ}(∇) f][𝒴_{l−λ}^{m+μ}(∇) g].
pub fn leibniz(idx: LMIndex, f: &TensorExpansion, g: &TensorExpansion) -> Result<TensorExpansion> {
    leibniz_with(idx, f, g, GammaRegistry::builtin().default_form())
}

pub fn leibniz_with(
    idx: LMIndex,
    f: &TensorExpansion,
    g: &TensorExpansion,
    form: &dyn GammaForm,
) -> Result<TensorExpansion> {
    let (l, m) = (idx.l, idx.m);
    let mut out = TensorExpansion::new();
    for lambda in 0..=l {
        let w = leibniz_weight(l, lambda);
        for mu in -lambda..=lambda {
            if (m + mu).abs() > l - lambda {
                continue;
            }
            let c = gaunt(GauntQuery { l1: lambda, m1: -mu, l2: l - lambda, m2: m + mu, l3: l, m3: m });
            if c == 0.0 {
                continue;
            }
            let df = apply_to_expansion(LMIndex::of(lambda, -mu), f, form)?;
            let dg = apply_to_expansion(LMIndex::of(l - lambda, m + mu), g, form)?;
            out.extend(df.product(&dg).scale(Complex64::new(w * c, 0.0)));
        }
    }
    Ok(out.prune())
}

/// The explicit operator polynomial of 𝒴_l^m(∇), for Cartesian oracles.
pub fn operator_polynomial(idx: LMIndex) -> std::sync::Arc<HarmonicPolynomial> {
    regular_solid_poly(idx)
}
