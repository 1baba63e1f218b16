//! Spherical, regular solid and irregular solid harmonics.
//!
//! Phase convention: Y_l^m = i^{m+|m|} N_lm P_l^{|m|}(cos θ) e^{imφ}, where
//! P_l^m carries no (−1)^m factor. For m > 0 this gives the familiar
//! Condon–Shortley sign (−1)^m.

mod polynomial;
mod vec3;

use std::f64::consts::PI;

use num::complex::Complex64;
use serde::{Deserialize, Serialize};

pub use polynomial::{
    laplacian_check, regular_solid_poly, Exponents, GaussianRational, HarmonicPolynomial,
    MonomialValue,
};
pub use vec3::{ParseVec3Error, Vec3};

use crate::error::{Error, Result};

/// Angular momentum pair (l, m) with |m| ≤ l.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct LMIndex {
    pub l: i32,
    pub m: i32,
}

impl LMIndex {
    pub fn new(l: i32, m: i32) -> Result<Self> {
        if l < 0 || m.abs() > l {
            return Err(Error::Domain(format!("invalid (l, m) = ({l}, {m})")));
        }
        Ok(Self { l, m })
    }

    /// Like [`LMIndex::new`] but panics on an invalid pair.
    pub fn of(l: i32, m: i32) -> Self {
        Self::new(l, m).expect("valid (l, m)")
    }

    /// All (l, m) with l ≤ l_max, ordered by l then m.
    pub fn all_up_to(l_max: i32) -> impl Iterator<Item = LMIndex> {
        (0..=l_max).flat_map(|l| (-l..=l).map(move |m| LMIndex { l, m }))
    }
}

/// r^{l−|m|} times the normalized associated Legendre factor, as a
/// polynomial in z and r² (finite at the origin).
fn legendre_solid(l: i32, ma: i32, z: f64, r2: f64) -> f64 {
    let mut pmm = (1.0 / (4.0 * PI)).sqrt();
    for k in 1..=ma {
        pmm *= ((2 * k + 1) as f64 / (2 * k) as f64).sqrt();
    }
    if l == ma {
        return pmm;
    }
    let mut a_prev = ((2 * ma + 3) as f64).sqrt();
    let mut p1 = pmm;
    let mut p2 = z * a_prev * pmm;
    for ll in ma + 2..=l {
        let a = (((4 * ll * ll - 1) as f64) / ((ll * ll - ma * ma) as f64)).sqrt();
        let p = a * (z * p2 - r2 * p1 / a_prev);
        p1 = p2;
        p2 = p;
        a_prev = a;
    }
    p2
}

fn phase(m: i32) -> f64 {
    if m > 0 && m % 2 == 1 {
        -1.0
    } else {
        1.0
    }
}

/// Spherical harmonic Y_l^m(θ, φ).
pub fn ylm(idx: LMIndex, theta: f64, phi: f64) -> Complex64 {
    let ma = idx.m.abs();
    let q = legendre_solid(idx.l, ma, theta.cos(), 1.0);
    let s = theta.sin().abs();
    Complex64::from_polar(phase(idx.m) * q * s.powi(ma), idx.m as f64 * phi)
}

/// Y_l^m at the direction of a nonzero vector.
pub fn ylm_dir(idx: LMIndex, v: Vec3) -> Complex64 {
    regular_solid(idx, v.scale(1.0 / v.norm()))
}

/// Regular solid harmonic 𝒴_l^m(r) = r^l Y_l^m(θ, φ).
pub fn regular_solid(idx: LMIndex, r: Vec3) -> Complex64 {
    let ma = idx.m.abs();
    let q = legendre_solid(idx.l, ma, r.z, r.norm2());
    let w = if idx.m >= 0 {
        Complex64::new(r.x, r.y)
    } else {
        Complex64::new(r.x, -r.y)
    };
    w.powi(ma) * (phase(idx.m) * q)
}

/// Irregular solid harmonic 𝒵_l^m(r) = r^{−l−1} Y_l^m(θ, φ).
pub fn irregular_solid(idx: LMIndex, r: Vec3) -> Result<Complex64> {
    let r2 = r.norm2();
    if r2 == 0.0 {
        return Err(Error::Singularity(format!(
            "irregular solid harmonic ({}, {}) at the origin",
            idx.l, idx.m
        )));
    }
    Ok(regular_solid(idx, r) / r2.powi(idx.l) / r2.sqrt())
}
