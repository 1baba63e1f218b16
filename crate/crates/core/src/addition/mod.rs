//! Two-range addition theorems: the solid-harmonic shift, the Laplace
//! expansion, the exponential translation table and the expansion of
//! |r_< + r_>|^ν 𝒴_l^m(r_< + r_>) in harmonics of r_< and r_>.

use std::f64::consts::PI;

use num::complex::Complex64;
use serde::Serialize;

use crate::core_math::{hyp2f1, pochhammer};
use crate::error::{Error, Result};
use crate::harmonics::{irregular_solid, regular_solid, LMIndex, Vec3};
use crate::stgo::leibniz_weight;
use crate::wigner::{gaunt, gaunt_string, GauntQuery};

/// Shells whose magnitude falls below this are treated as converged even
/// when the summed value is zero.
pub const CONVERGENCE_FLOOR: f64 = 1e-300;

/// Pair of vectors ordered by magnitude, |r_lt| < |r_gt|.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SplitPair {
    pub r_lt: Vec3,
    pub r_gt: Vec3,
}

impl SplitPair {
    pub fn new(r: Vec3, rp: Vec3) -> Result<Self> {
        let (a, b) = (r.norm2(), rp.norm2());
        if a == b {
            return Err(Error::Boundary(format!(
                "|r| = |r'| = {}; two-range expansions need strict inequality",
                a.sqrt()
            )));
        }
        Ok(if a < b { Self { r_lt: r, r_gt: rp } } else { Self { r_lt: rp, r_gt: r } })
    }

    /// |r_<| / |r_>|.
    pub fn ratio(&self) -> f64 {
        self.x().sqrt()
    }

    /// r_<² / r_>², from the squared norms.
    pub fn x(&self) -> f64 {
        self.r_lt.norm2() / self.r_gt.norm2()
    }

    pub fn sum(&self) -> Vec3 {
        self.r_lt + self.r_gt
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TruncationSpec {
    pub l_max_outer: u32,
    pub tol: f64,
    /// Cap on the number of (l1, m1, l2) terms evaluated.
    pub max_terms: usize,
}

impl TruncationSpec {
    pub fn new(l_max_outer: u32, tol: f64, max_terms: usize) -> Result<Self> {
        if !(tol > 0.0) {
            return Err(Error::Domain(format!("tolerance must be positive, got {tol}")));
        }
        Ok(Self { l_max_outer, tol, max_terms })
    }

    pub fn with_tol(tol: f64) -> Result<Self> {
        Self::new(Self::default().l_max_outer, tol, Self::default().max_terms)
    }
}

impl Default for TruncationSpec {
    fn default() -> Self {
        Self { l_max_outer: 60, tol: 1e-12, max_terms: 10_000_000 }
    }
}

/// Contribution of one outer shell and the running partial sum.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ShellContribution {
    pub l: u32,
    pub contribution: Complex64,
    pub partial_sum: Complex64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AdditionResult {
    pub value: Complex64,
    pub outer_l_used: u32,
    pub est_error: f64,
    pub converged: bool,
    /// Set when the series is known to terminate at `outer_l_used`.
    pub exact: bool,
    pub shells: Vec<ShellContribution>,
}

impl AdditionResult {
    /// Two-shell error estimate after outer shell `l`, if it was summed.
    pub fn est_error_at(&self, l: u32) -> Option<f64> {
        let i = self.shells.iter().position(|s| s.l == l)?;
        let last = self.shells[i].contribution.norm();
        Some(if i == 0 { last } else { last + self.shells[i - 1].contribution.norm() })
    }
}

/// Sums outer shells 0, 1, … until the last two fall below tol × |value|.
/// `exact_last` marks a series known to vanish identically past that shell.
fn sum_shells(
    trunc: &TruncationSpec,
    exact_last: Option<u32>,
    mut shell: impl FnMut(u32) -> Result<(Complex64, usize)>,
) -> Result<AdditionResult> {
    let mut value = Complex64::new(0.0, 0.0);
    let mut shells = Vec::new();
    let mut terms = 0usize;
    let mut abs_sum = 0.0;
    let last = exact_last.map_or(trunc.l_max_outer, |n| n.min(trunc.l_max_outer));
    for l in 0..=last {
        let (c, n) = shell(l)?;
        terms += n;
        value += c;
        abs_sum += c.norm();
        shells.push(ShellContribution { l, contribution: c, partial_sum: value });
        let est_error =
            c.norm() + if l > 0 { shells[l as usize - 1].contribution.norm() } else { 0.0 };
        let bound = trunc.tol * value.norm().max(CONVERGENCE_FLOOR);
        if exact_last == Some(l) {
            return Ok(AdditionResult {
                value,
                outer_l_used: l,
                est_error: f64::EPSILON * abs_sum,
                converged: true,
                exact: true,
                shells,
            });
        }
        if l > 0 && est_error <= bound {
            return Ok(AdditionResult { value, outer_l_used: l, est_error, converged: true, exact: false, shells });
        }
        if terms >= trunc.max_terms {
            break;
        }
    }
    let l = shells.last().map_or(0, |s| s.l);
    let n = shells.len();
    let est_error = shells[n - 1].contribution.norm() + if n > 1 { shells[n - 2].contribution.norm() } else { 0.0 };
    Ok(AdditionResult { value, outer_l_used: l, est_error, converged: false, exact: false, shells })
}

/// Σ_μ [𝒴_λ^μ(a)]* 𝒵_λ^μ(b).
fn harmonic_contraction(lambda: i32, a: Vec3, b: Vec3) -> Result<Complex64> {
    let mut acc = Complex64::new(0.0, 0.0);
    for mu in -lambda..=lambda {
        let idx = LMIndex::of(lambda, mu);
        acc += regular_solid(idx, a).conj() * irregular_solid(idx, b)?;
    }
    Ok(acc)
}

/// 𝒴_l^m(r + r′) as the finite sum over 𝒴_λ(r) 𝒴_{l−λ}(r′).
pub fn solid_harmonic_shift(idx: LMIndex, r: Vec3, rp: Vec3) -> Complex64 {
    let (l, m) = (idx.l, idx.m);
    let mut acc = Complex64::new(0.0, 0.0);
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
            acc += regular_solid(LMIndex::of(lambda, -mu), r)
                * regular_solid(LMIndex::of(l - lambda, m + mu), rp)
                * (w * c);
        }
    }
    acc
}

/// 1/|r + r′| (sign = +1) or 1/|r − r′| (sign = −1) by the Laplace expansion.
pub fn laplace_expansion(r: Vec3, rp: Vec3, sign: i32, trunc: &TruncationSpec) -> Result<AdditionResult> {
    if sign != 1 && sign != -1 {
        return Err(Error::Domain(format!("sign must be ±1, got {sign}")));
    }
    let pair = SplitPair::new(r, rp)?;
    let phase = -f64::from(sign);
    sum_shells(trunc, None, |l| {
        let lam = l as i32;
        let c = harmonic_contraction(lam, pair.r_lt, pair.r_gt)?;
        Ok((c * (4.0 * PI * phase.powi(lam) / f64::from(2 * lam + 1)), 2 * l as usize + 1))
    })
}

/// ν = 2n with n ≥ 0 integral.
fn even_power(nu: f64) -> Option<u32> {
    (nu >= 0.0 && (nu / 2.0).fract() == 0.0 && nu < 1e6).then(|| (nu / 2.0) as u32)
}

/// |r_< + r_>|^ν by the scalar two-range expansion.
pub fn power_scalar_addition(nu: f64, pair: SplitPair, trunc: &TruncationSpec) -> Result<AdditionResult> {
    let x = pair.x();
    let rg = pair.r_gt.norm();
    let pref = 4.0 * PI * rg.powf(nu + 1.0);
    sum_shells(trunc, even_power(nu), |l| {
        let lam = l as i32;
        let coeff = (-1f64).powi(lam) * pochhammer(-nu / 2.0, l) / pochhammer(1.5, l)
            * hyp2f1((2.0 * f64::from(lam) - nu) / 2.0, (-nu - 1.0) / 2.0, f64::from(lam) + 1.5, x)?;
        if coeff == 0.0 {
            return Ok((Complex64::new(0.0, 0.0), 0));
        }
        let c = harmonic_contraction(lam, pair.r_lt, pair.r_gt)?;
        Ok((c * (pref * coeff), 2 * l as usize + 1))
    })
}

/// How the radial coefficient of the rank-l expansion is obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum SolidAdditionForm {
    /// Closed form with ((ν−2Δl+2)/2)_{Δl2} ((ν−2Δl+3)/2)_{Δl2}; wrong for l ≥ 1,
    /// kept for comparison.
    Alternate,
    /// Closed form with ((ν−2Δl+2)/2)_{Δl2} ((ν+2Δl1+3)/2)_{Δl2}, as the
    /// Laplacian-power step produces it.
    Derived,
    /// The k series before summation to 2F1: translation-table coefficients
    /// times ∇^{2(k+Δl2)} applied to r^σ 𝒴_{l2}.
    Series,
}

impl SolidAdditionForm {
    pub const ALL: [SolidAdditionForm; 3] = [Self::Alternate, Self::Derived, Self::Series];

    pub fn name(self) -> &'static str {
        match self {
            Self::Alternate => "alternate",
            Self::Derived => "derived",
            Self::Series => "series",
        }
    }

    pub fn from_name(name: &str) -> Result<Self> {
        Self::ALL
            .into_iter()
            .find(|f| f.name() == name)
            .ok_or_else(|| Error::Domain(format!("unknown addition form {name:?} (alternate, derived, series)")))
    }
}

fn check_parameter(nu: f64, l: i32) -> Result<()> {
    for j in 0..l {
        if (1.0 + nu / 2.0 + f64::from(j)).abs() < 1e-12 {
            return Err(Error::ParameterSingularity(format!(
                "(1+ν/2)_{l} vanishes at ν = {nu}"
            )));
        }
    }
    Ok(())
}

/// Largest k summed in the series form.
pub const SERIES_K_MAX: u32 = 90;

fn radial_coefficient(form: SolidAdditionForm, nu: f64, l: i32, l1: i32, l2: i32, x: f64) -> Result<f64> {
    let dl = (l1 + l2 - l) / 2;
    let dl1 = (l - l1 + l2) / 2;
    let dl2 = (l + l1 - l2) / 2;
    let (dl_f, dl1_f) = (f64::from(dl), f64::from(dl1));
    let head = (-1f64).powi(l2) * pochhammer(-f64::from(l) - nu / 2.0, l2 as u32);
    if head == 0.0 {
        return Ok(0.0);
    }
    match form {
        SolidAdditionForm::Alternate | SolidAdditionForm::Derived => {
            let second = match form {
                SolidAdditionForm::Alternate => (nu - 2.0 * dl_f + 3.0) / 2.0,
                _ => (nu + 2.0 * dl1_f + 3.0) / 2.0,
            };
            let cluster = pochhammer((nu - 2.0 * dl_f + 2.0) / 2.0, dl2 as u32) * pochhammer(second, dl2 as u32);
            if cluster == 0.0 {
                return Ok(0.0);
            }
            let f = hyp2f1((2.0 * dl_f - nu) / 2.0, (-2.0 * dl1_f - nu - 1.0) / 2.0, f64::from(l1) + 1.5, x)?;
            Ok(head / pochhammer(1.5, l1 as u32) * cluster * f)
        }
        SolidAdditionForm::Series => {
            // The caller applies 4π/(1+ν/2)_l; the series carries 2π 2^{l2−l}.
            let sigma = nu + f64::from(2 * l - 2 * l2);
            let mut acc = 0.0;
            let mut converged = false;
            for k in 0..=SERIES_K_MAX {
                let n = k as i32 + dl2;
                let lap = 4f64.powi(n)
                    * pochhammer(-sigma / 2.0, n as u32)
                    * pochhammer(-(sigma + f64::from(2 * l2) + 1.0) / 2.0, n as u32);
                let t = translation_coefficient(l1 as u32, k) * lap * x.powi(k as i32);
                acc += t;
                if lap == 0.0 || (k > 2 && t.abs() <= 1e-17 * acc.abs()) {
                    converged = true;
                    break;
                }
            }
            if !converged {
                return Err(Error::Convergence(format!(
                    "k series for (l1, l2) = ({l1}, {l2}) at x = {x} needs more than {SERIES_K_MAX} terms"
                )));
            }
            Ok(head * 2f64.powi(l2 - l) * 0.5 * acc)
        }
    }
}

/// One outer shell l1 of the rank-l expansion, with the number of terms used.
pub fn power_solid_shell(
    form: SolidAdditionForm,
    nu: f64,
    idx: LMIndex,
    pair: SplitPair,
    l1: u32,
) -> Result<(Complex64, usize)> {
    check_parameter(nu, idx.l)?;
    let (l, m) = (idx.l, idx.m);
    let l1 = l1 as i32;
    let x = pair.x();
    let rg = pair.r_gt.norm();
    let mut acc = Complex64::new(0.0, 0.0);
    let mut terms = 0;
    for m1 in -l1..=l1 {
        let outer = regular_solid(LMIndex::of(l1, m1), pair.r_lt).conj();
        for &(l2, g) in gaunt_string(l1, m1, l, m).iter() {
            terms += 1;
            if g == 0.0 {
                continue;
            }
            let rc = radial_coefficient(form, nu, l, l1, l2, x)?;
            if rc == 0.0 {
                continue;
            }
            let dl1 = (l - l1 + l2) / 2;
            let inner = irregular_solid(LMIndex::of(l2, m + m1), pair.r_gt)? * rg.powf(nu + f64::from(2 * dl1) + 1.0);
            acc += outer * inner * (g * rc);
        }
    }
    Ok((acc * (4.0 * PI / pochhammer(1.0 + nu / 2.0, l as u32)), terms))
}

/// |r_< + r_>|^ν 𝒴_l^m(r_< + r_>) by the two-range expansion, radial
/// coefficients from `form`.
pub fn power_solid_addition_with(
    form: SolidAdditionForm,
    nu: f64,
    idx: LMIndex,
    pair: SplitPair,
    trunc: &TruncationSpec,
) -> Result<AdditionResult> {
    check_parameter(nu, idx.l)?;
    let exact_last = even_power(nu).map(|n| n + idx.l as u32);
    sum_shells(trunc, exact_last, |l1| power_solid_shell(form, nu, idx, pair, l1))
}

/// [`power_solid_addition_with`] using the derived closed form.
pub fn power_solid_addition(nu: f64, idx: LMIndex, pair: SplitPair, trunc: &TruncationSpec) -> Result<AdditionResult> {
    power_solid_addition_with(SolidAdditionForm::Derived, nu, idx, pair, trunc)
}

/// Direct evaluation of |r|^ν 𝒴_l^m(r).
pub fn power_solid_direct(nu: f64, idx: LMIndex, r: Vec3) -> Complex64 {
    regular_solid(idx, r) * r.norm().powf(nu)
}

/// 1/(2^{l+2k} k! (1/2)_{l+k+1}).
pub fn translation_coefficient(l: u32, k: u32) -> f64 {
    let mut v = 1.0 / pochhammer(0.5, l + k + 1) / 2f64.powi((l + 2 * k) as i32);
    for j in 2..=k {
        v /= f64::from(j);
    }
    v
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TranslationEntry {
    pub l: u32,
    pub k: u32,
    pub coeff: f64,
}

/// Coefficients of e^{a·b} = 2π Σ_{l,m} [𝒴_l^m(a)]* 𝒴_l^m(b) Σ_k (a² b²)^k coeff(l, k).
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TranslationTable {
    pub prefactor: f64,
    pub l_max: u32,
    pub k_max: u32,
    pub entries: Vec<TranslationEntry>,
}

impl TranslationTable {
    pub fn coeff(&self, l: u32, k: u32) -> Option<f64> {
        (l <= self.l_max && k <= self.k_max).then(|| self.entries[(l * (self.k_max + 1) + k) as usize].coeff)
    }

    /// prefactor × coeff(l, k).
    pub fn weight(&self, l: u32, k: u32) -> Option<f64> {
        self.coeff(l, k).map(|c| c * self.prefactor)
    }

    /// e^{a·b} from the table, keeping terms with l + 2k ≤ order.
    pub fn exp_dot(&self, a: Vec3, b: Vec3, order: u32) -> Complex64 {
        let s = a.norm2() * b.norm2();
        let mut acc = Complex64::new(0.0, 0.0);
        for l in 0..=self.l_max.min(order) {
            let mut radial = 0.0;
            for k in 0..=self.k_max {
                if l + 2 * k > order {
                    break;
                }
                radial += self.entries[(l * (self.k_max + 1) + k) as usize].coeff * s.powi(k as i32);
            }
            let li = l as i32;
            let mut ang = Complex64::new(0.0, 0.0);
            for m in -li..=li {
                let idx = LMIndex::of(li, m);
                ang += regular_solid(idx, a).conj() * regular_solid(idx, b);
            }
            acc += ang * radial;
        }
        acc * self.prefactor
    }
}

pub fn translation_tensor_terms(l_max: u32, k_max: u32) -> TranslationTable {
    let mut entries = Vec::with_capacity(((l_max + 1) * (k_max + 1)) as usize);
    for l in 0..=l_max {
        for k in 0..=k_max {
            entries.push(TranslationEntry { l, k, coeff: translation_coefficient(l, k) });
        }
    }
    TranslationTable { prefactor: 2.0 * PI, l_max, k_max, entries }
}
