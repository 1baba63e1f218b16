use std::f64::consts::PI;

use num::complex::Complex64;

use super::hankel::oscillatory_radial_integral;
use super::quadrature::{sphere_integrate, QuadratureGrid};
use crate::bfun::BIndex;
use crate::error::{Error, Result};
use crate::harmonics::{ylm_dir, LMIndex, Vec3};

fn i_pow(k: i32) -> Complex64 {
    match k.rem_euclid(4) {
        0 => Complex64::new(1.0, 0.0),
        1 => Complex64::new(0.0, 1.0),
        2 => Complex64::new(-1.0, 0.0),
        _ => Complex64::new(0.0, -1.0),
    }
}

/// ∫ B_a(r − r') B_b(r') d³r' = ∫ e^{ip·r} B̄_a(p) B̄_b(p) d³p, evaluated in
/// momentum space.
///
/// The angular integral is done analytically through the plane-wave
/// expansion, with the coupling of Y_a Y_b onto Y_L taken from spherical
/// quadrature on `grid`; the radial integrals are oscillatory quadratures.
pub fn momentum_convolution(a: &BIndex, b: &BIndex, at: Vec3, grid: &QuadratureGrid) -> Result<Complex64> {
    if a.alpha != b.alpha {
        return Err(Error::Unsupported("momentum convolution oracle needs equal exponents".into()));
    }
    let alpha = a.alpha;
    let (la, lb) = (a.l, b.l);
    let mm = a.m + b.m;
    let power = 2 * a.n + la - 1 + 2 * b.n + lb - 1;
    let denom = a.n + la + b.n + lb + 2;
    let pre = 2.0 / PI * alpha.powi(power);
    let radial = |p: f64| pre * p.powi(2 + la + lb) / (alpha * alpha + p * p).powi(denom);
    let r = at.norm();
    let mut total = Complex64::new(0.0, 0.0);
    for l in (la - lb).abs()..=la + lb {
        if mm.abs() > l || (la + lb + l) % 2 != 0 {
            continue;
        }
        let idx = LMIndex::of(l, mm);
        let (ia, ib) = (LMIndex::of(la, a.m), LMIndex::of(lb, b.m));
        let c = sphere_integrate(|u| ylm_dir(idx, u).conj() * ylm_dir(ia, u) * ylm_dir(ib, u), grid);
        if c.norm() < 1e-14 {
            continue;
        }
        if r == 0.0 && l > 0 {
            continue;
        }
        let angular = if r == 0.0 { Complex64::new(0.5 / PI.sqrt(), 0.0) } else { ylm_dir(idx, at) };
        let integral = oscillatory_radial_integral(&radial, l as u32, r, alpha);
        total += 4.0 * PI * i_pow(l) * i_pow(-(la + lb)) * c * angular * integral;
    }
    Ok(total)
}
