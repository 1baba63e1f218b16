//! Exact combinatorial scalars and scalar special functions.

mod bessel;
mod hyper;
mod rational;

pub use bessel::{khat, khat_half, spherical_bessel_j};
pub use hyper::{
    bessel_pade_exp_taylor, bessel_polynomial_coeffs, bessel_polynomial_theta, hyp1f1_terminating, hyp2f1,
    HypergeometricParams,
};
pub use rational::{
    binomial, double_factorial, factorial, pochhammer, pochhammer_rational, rational_to_f64,
    signed_sqrt_to_f64, Rational,
};

/// Neumaier compensated accumulator.
#[derive(Debug, Clone, Copy, Default)]
pub struct KahanSum {
    sum: f64,
    comp: f64,
}

impl KahanSum {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.comp += (self.sum - t) + x;
        } else {
            self.comp += (x - t) + self.sum;
        }
        self.sum = t;
    }

    pub fn value(&self) -> f64 {
        self.sum + self.comp
    }
}
