//! Wigner 3jm symbols, Gaunt coefficients and the selection-rule ranges
//! used by every coupled sum.

mod memo;

use std::f64::consts::PI;
use std::sync::{Arc, OnceLock};

use num::bigint::BigInt;
use num::{One, Signed, Zero};
use serde::Serialize;

pub use memo::LruMemo;

use crate::core_math::{factorial, signed_sqrt_to_f64, Rational};
use crate::error::{Error, Result};

/// Capacity of the process-wide Gaunt string memo.
pub const GAUNT_MEMO_CAPACITY: usize = 4096;

/// Gaunt coefficient ⟨l3 m3|l2 m2|l1 m1⟩ = ∫ [Y_{l3}^{m3}]* Y_{l2}^{m2} Y_{l1}^{m1} dΩ.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct GauntQuery {
    pub l1: i32,
    pub m1: i32,
    pub l2: i32,
    pub m2: i32,
    pub l3: i32,
    pub m3: i32,
}

/// Values l_min, l_min+2, …, l_max admitted by the selection rules.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct CoupledRange {
    pub l_min: i32,
    pub l_max: i32,
    pub step: i32,
}

impl CoupledRange {
    pub fn iter(&self) -> impl Iterator<Item = i32> {
        (self.l_min..=self.l_max).step_by(self.step as usize)
    }

    pub fn is_empty(&self) -> bool {
        self.l_min > self.l_max
    }

    pub fn contains(&self, l: i32) -> bool {
        l >= self.l_min && l <= self.l_max && (l - self.l_min) % self.step == 0
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct DeltaQuantities {
    pub delta_l: i32,
    pub delta_l1: i32,
    pub delta_l2: i32,
    pub sigma_l: i32,
}

pub fn coupled_range(l1: i32, m1: i32, l2: i32, m2: i32) -> CoupledRange {
    let l_max = l1 + l2;
    let lam = (l1 - l2).abs().max((m1 + m2).abs());
    let l_min = if (l_max + lam) % 2 == 0 { lam } else { lam + 1 };
    CoupledRange { l_min, l_max, step: 2 }
}

/// Δl = (l1+l2−l)/2, Δl1 = (l−l1+l2)/2, Δl2 = (l+l1−l2)/2, σ = (l1+l2+l)/2.
pub fn delta_quantities(l1: i32, l2: i32, l: i32) -> Result<DeltaQuantities> {
    if (l1 + l2 + l) % 2 != 0 {
        return Err(Error::Domain(format!("parity of ({l1}, {l2}, {l}) is odd")));
    }
    let d = DeltaQuantities {
        delta_l: (l1 + l2 - l) / 2,
        delta_l1: (l - l1 + l2) / 2,
        delta_l2: (l + l1 - l2) / 2,
        sigma_l: (l1 + l2 + l) / 2,
    };
    if d.delta_l < 0 || d.delta_l1 < 0 || d.delta_l2 < 0 {
        return Err(Error::Domain(format!("({l1}, {l2}, {l}) violates the triangle rule")));
    }
    Ok(d)
}

fn fact(n: i32) -> BigInt {
    static TABLE: OnceLock<Vec<BigInt>> = OnceLock::new();
    let table = TABLE.get_or_init(|| {
        let mut t = vec![BigInt::one()];
        for k in 1..=256u32 {
            let next = &t[k as usize - 1] * k;
            t.push(next);
        }
        t
    });
    table.get(n as usize).cloned().unwrap_or_else(|| factorial(n as u32))
}

fn selection_ok(l1: i32, l2: i32, l3: i32, m1: i32, m2: i32, m3: i32) -> bool {
    m1 + m2 + m3 == 0
        && m1.abs() <= l1
        && m2.abs() <= l2
        && m3.abs() <= l3
        && l3 >= (l1 - l2).abs()
        && l3 <= l1 + l2
}

/// Exact Racah sum: the 3j symbol is `sign · √square`.
fn racah_exact(l1: i32, l2: i32, l3: i32, m1: i32, m2: i32, m3: i32) -> (i32, Rational) {
    if !selection_ok(l1, l2, l3, m1, m2, m3) {
        return (0, Rational::zero());
    }
    let tri = Rational::new(
        fact(l1 + l2 - l3) * fact(l1 - l2 + l3) * fact(-l1 + l2 + l3),
        fact(l1 + l2 + l3 + 1),
    );
    let pref = tri
        * Rational::from_integer(
            fact(l1 + m1) * fact(l1 - m1) * fact(l2 + m2) * fact(l2 - m2) * fact(l3 + m3) * fact(l3 - m3),
        );
    let kmin = 0.max(l2 - l3 - m1).max(l1 - l3 + m2);
    let kmax = (l1 + l2 - l3).min(l1 - m1).min(l2 + m2);
    let mut sum = Rational::zero();
    for k in kmin..=kmax {
        let den = fact(k)
            * fact(l3 - l2 + k + m1)
            * fact(l3 - l1 + k - m2)
            * fact(l1 + l2 - l3 - k)
            * fact(l1 - k - m1)
            * fact(l2 - k + m2);
        let term = Rational::new(BigInt::one(), den);
        if k % 2 == 0 {
            sum += term;
        } else {
            sum -= term;
        }
    }
    if sum.is_zero() {
        return (0, Rational::zero());
    }
    let mut sign = if (l1 - l2 - m3).rem_euclid(2) == 0 { 1 } else { -1 };
    if sum.is_negative() {
        sign = -sign;
    }
    (sign, pref * &sum * &sum)
}

/// Single 3j symbol from the exact-rational Racah formula; 0 when selection rules fail.
pub fn wigner3j(l1: i32, l2: i32, l3: i32, m1: i32, m2: i32, m3: i32) -> f64 {
    let (sign, sq) = racah_exact(l1, l2, l3, m1, m2, m3);
    signed_sqrt_to_f64(sign, &sq)
}

/// All 3j symbols (l1 l2 l3; −m2−m3 m2 m3) over the admissible l1.
///
/// Uses the Schulten–Gordon three-term recurrence launched from both ends,
/// matched where the downward solution peaks and normalized by the sum rule.
pub fn wigner3j_string(l2: i32, l3: i32, m2: i32, m3: i32) -> Vec<(i32, f64)> {
    let m1 = -m2 - m3;
    if m2.abs() > l2 || m3.abs() > l3 {
        return Vec::new();
    }
    let jmin = (l2 - l3).abs().max(m1.abs());
    let jmax = l2 + l3;
    if jmin > jmax {
        return Vec::new();
    }
    let n = (jmax - jmin + 1) as usize;
    if n <= 2 {
        return (jmin..=jmax)
            .map(|j| (j, wigner3j(j, l2, l3, m1, m2, m3)))
            .collect();
    }
    let (fl2, fl3, fm1, fm2, fm3) = (l2 as f64, l3 as f64, m1 as f64, m2 as f64, m3 as f64);
    let a = |j: i32| -> f64 {
        let j = j as f64;
        ((j * j - (fl2 - fl3).powi(2)) * ((fl2 + fl3 + 1.0).powi(2) - j * j) * (j * j - fm1 * fm1))
            .sqrt()
    };
    let b = |j: i32| -> f64 {
        let jf = j as f64;
        -(2.0 * jf + 1.0)
            * (fl2 * (fl2 + 1.0) * fm1 - fl3 * (fl3 + 1.0) * fm1 - jf * (jf + 1.0) * (fm3 - fm2))
    };
    let at = |j: i32| (j - jmin) as usize;

    // Downward from jmax.
    let mut g = vec![0.0; n];
    g[n - 1] = 1.0;
    g[n - 2] = -b(jmax) / ((jmax + 1) as f64 * a(jmax));
    for j in (jmin + 1..jmax).rev() {
        g[at(j - 1)] = -(b(j) * g[at(j)] + j as f64 * a(j + 1) * g[at(j + 1)]) / ((j + 1) as f64 * a(j));
        if g[at(j - 1)].abs() > 1e200 {
            for v in &mut g[at(j - 1)..] {
                *v *= 1e-200;
            }
        }
    }
    let step = if m1 == 0 && m2 == 0 && m3 == 0 { 2 } else { 1 };
    let mut ib = n - 1;
    while ib >= step && g[ib - step].abs() > g[ib].abs() {
        ib -= step;
    }

    let mut f = g.clone();
    if jmin > 0 && ib > 0 {
        // Upward from jmin, valid through the match point.
        let mut h = vec![0.0; ib + 1];
        h[0] = 1.0;
        h[1] = -b(jmin) / (jmin as f64 * a(jmin + 1));
        for j in jmin + 1..jmin + ib as i32 {
            h[at(j + 1)] =
                -(b(j) * h[at(j)] + (j + 1) as f64 * a(j) * h[at(j - 1)]) / (j as f64 * a(j + 1));
            if h[at(j + 1)].abs() > 1e200 {
                for v in &mut h[..=at(j + 1)] {
                    *v *= 1e-200;
                }
            }
        }
        let scale = h[ib] / g[ib];
        for (i, v) in f.iter_mut().enumerate() {
            *v = if i <= ib { h[i] / scale } else { g[i] };
        }
    }
    let norm: f64 = f
        .iter()
        .enumerate()
        .map(|(i, v)| (2.0 * (jmin + i as i32) as f64 + 1.0) * v * v)
        .sum();
    let want_sign = if (l2 - l3 - m1).rem_euclid(2) == 0 { 1.0 } else { -1.0 };
    let s = want_sign * f[n - 1].signum() / norm.sqrt();
    f.iter()
        .enumerate()
        .map(|(i, v)| (jmin + i as i32, v * s))
        .collect()
}

/// Gaunt coefficient by exact Racah arithmetic, one square root at the end.
pub fn gaunt(q: GauntQuery) -> f64 {
    let GauntQuery { l1, m1, l2, m2, l3, m3 } = q;
    if m3 != m1 + m2 || (l1 + l2 + l3) % 2 != 0 {
        return 0.0;
    }
    let (s0, q0) = racah_exact(l1, l2, l3, 0, 0, 0);
    let (sm, qm) = racah_exact(l1, l2, l3, m1, m2, -m3);
    if s0 == 0 || sm == 0 {
        return 0.0;
    }
    let dims = Rational::from_integer(BigInt::from((2 * l1 + 1) * (2 * l2 + 1) * (2 * l3 + 1)));
    let phase = if m3.rem_euclid(2) == 0 { 1 } else { -1 };
    signed_sqrt_to_f64(phase * s0 * sm, &(dims * q0 * qm)) / (4.0 * PI).sqrt()
}

/// ⟨l m1+m2|l1 m1|l2 m2⟩ for every l in the coupled range, without memoization.
pub fn gaunt_string_uncached(l1: i32, m1: i32, l2: i32, m2: i32) -> Vec<(i32, f64)> {
    if m1.abs() > l1 || m2.abs() > l2 || l1 < 0 || l2 < 0 {
        return Vec::new();
    }
    let range = coupled_range(l1, m1, l2, m2);
    let zero_row = wigner3j_string(l1, l2, 0, 0);
    let m_row = wigner3j_string(l1, l2, m1, m2);
    let lookup = |row: &[(i32, f64)], l: i32| {
        row.iter().find(|(j, _)| *j == l).map(|(_, v)| *v).unwrap_or(0.0)
    };
    let mm = m1 + m2;
    let phase = if mm.rem_euclid(2) == 0 { 1.0 } else { -1.0 };
    let base = ((2 * l1 + 1) as f64 * (2 * l2 + 1) as f64 / (4.0 * PI)).sqrt();
    range
        .iter()
        .map(|l| {
            let v = phase * base * ((2 * l + 1) as f64).sqrt() * lookup(&zero_row, l) * lookup(&m_row, l);
            (l, v)
        })
        .collect()
}

fn gaunt_memo() -> &'static LruMemo<(i32, i32, i32, i32), Vec<(i32, f64)>> {
    static MEMO: OnceLock<LruMemo<(i32, i32, i32, i32), Vec<(i32, f64)>>> = OnceLock::new();
    MEMO.get_or_init(|| LruMemo::new(GAUNT_MEMO_CAPACITY))
}

/// Memoized [`gaunt_string_uncached`].
pub fn gaunt_string(l1: i32, m1: i32, l2: i32, m2: i32) -> Arc<Vec<(i32, f64)>> {
    gaunt_memo().get_or_insert_with((l1, m1, l2, m2), || gaunt_string_uncached(l1, m1, l2, m2))
}

/// Number of memoized Gaunt strings currently held.
pub fn gaunt_memo_len() -> usize {
    gaunt_memo().len()
}
