use std::f64::consts::PI;

use num::complex::Complex64;

use super::radial::Radial;
use crate::harmonics::{ylm_dir, LMIndex, Vec3};
use crate::wigner::gaunt_string;

/// Relative size below which assembled coefficients are dropped.
pub const PRUNE_TOL: f64 = 1e-14;

/// coeff · radial(r) · Y_l^m(r̂).
#[derive(Debug, Clone)]
pub struct TensorTerm {
    pub coeff: Complex64,
    pub radial: Radial,
    pub angular: LMIndex,
}

impl TensorTerm {
    pub fn new(coeff: Complex64, radial: Radial, angular: LMIndex) -> Self {
        Self { coeff, radial, angular }
    }

    /// f(r) 𝒴_l^m(r) for radial part f, i.e. r^l f(r) Y_l^m.
    pub fn solid(radial: Radial, angular: LMIndex) -> Self {
        Self::new(Complex64::new(1.0, 0.0), radial.mul_power(angular.l as f64), angular)
    }

    pub fn evaluate(&self, at: Vec3) -> Complex64 {
        let r = at.norm();
        let angular = if r == 0.0 {
            if self.angular.l == 0 {
                Complex64::new(0.5 / PI.sqrt(), 0.0)
            } else {
                return Complex64::new(0.0, 0.0);
            }
        } else {
            ylm_dir(self.angular, at)
        };
        self.coeff * self.radial.evaluate(r) * angular
    }
}

/// Finite sum of tensor terms, merged by (angular, radial identity).
#[derive(Debug, Clone, Default)]
pub struct TensorExpansion {
    pub terms: Vec<TensorTerm>,
}

impl TensorExpansion {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn single(term: TensorTerm) -> Self {
        let mut e = Self::new();
        e.push(term);
        e
    }

    pub fn push(&mut self, term: TensorTerm) {
        if term.radial.is_zero() || term.coeff == Complex64::new(0.0, 0.0) {
            return;
        }
        if let Some(t) = self
            .terms
            .iter_mut()
            .find(|t| t.angular == term.angular && t.radial.same_identity(&term.radial))
        {
            t.coeff += term.coeff;
        } else {
            self.terms.push(term);
        }
    }

    pub fn extend(&mut self, other: TensorExpansion) {
        for t in other.terms {
            self.push(t);
        }
    }

    /// Drops terms with |coeff| < PRUNE_TOL · max |coeff|.
    pub fn prune(mut self) -> Self {
        let max = self.terms.iter().map(|t| t.coeff.norm()).fold(0.0, f64::max);
        self.terms.retain(|t| t.coeff.norm() >= PRUNE_TOL * max && !t.radial.is_zero());
        self
    }

    pub fn scale(mut self, c: Complex64) -> Self {
        for t in &mut self.terms {
            t.coeff *= c;
        }
        self
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn evaluate(&self, at: Vec3) -> Complex64 {
        self.terms.iter().map(|t| t.evaluate(at)).sum()
    }

    /// Pointwise product, recoupling Y_a Y_b = Σ_L ⟨L|a|b⟩ Y_L.
    pub fn product(&self, other: &TensorExpansion) -> TensorExpansion {
        let mut out = TensorExpansion::new();
        for a in &self.terms {
            for b in &other.terms {
                let radial = a.radial.mul(&b.radial);
                let (ia, ib) = (a.angular, b.angular);
                for &(l, g) in gaunt_string(ia.l, ia.m, ib.l, ib.m).iter() {
                    if g == 0.0 {
                        continue;
                    }
                    out.push(TensorTerm::new(a.coeff * b.coeff * g, radial.clone(), LMIndex::of(l, ia.m + ib.m)));
                }
            }
        }
        out.prune()
    }
}
