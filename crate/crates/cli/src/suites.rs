use std::f64::consts::PI;
use std::sync::OnceLock;
use std::time::Instant;

use num::complex::Complex64;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use rayon::prelude::*;

use stgo_core::addition::{
    laplace_expansion, power_solid_addition, power_solid_direct, solid_harmonic_shift, SplitPair,
    TruncationSpec,
};
use stgo_core::bfun::{b_fourier, b_fourier_functional_check, convolve, BIndex};
use stgo_core::core_math::{bessel_pade_exp_taylor, rational_to_f64};
use stgo_core::harmonics::{regular_solid, ylm_dir, LMIndex, Vec3};
use stgo_core::oracles::{
    fd_apply_operator, hankel_radial_ft, momentum_convolution, FDScheme, QuadratureGrid,
};
use stgo_core::stgo::{hobson_harmonic, operator_polynomial, GammaIndices, GammaRegistry, RadialProfile};
use stgo_core::wigner::{gaunt, gaunt_string_uncached, GauntQuery};
use stgo_core::{Error, Result};

use crate::report::{AggregateReport, Case, VerifyReport};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SuiteConfig {
    /// Replaces every case tolerance when set.
    pub tol: Option<f64>,
    pub seed: u64,
    /// Suite-specific angular-momentum limit.
    pub lmax: Option<i32>,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        Self { tol: None, seed: 1, lmax: None }
    }
}

/// A named group of identity checks.
pub trait Suite: Send + Sync {
    fn name(&self) -> &'static str;
    fn description(&self) -> &'static str;
    fn cases(&self, cfg: &SuiteConfig) -> Result<Vec<Case>>;
}

pub fn run_suite(suite: &dyn Suite, cfg: &SuiteConfig) -> Result<VerifyReport> {
    let start = Instant::now();
    let mut cases = suite.cases(cfg)?;
    if let Some(tol) = cfg.tol {
        cases = cases.into_iter().map(|c| c.with_tol(tol)).collect();
    }
    Ok(VerifyReport::new(suite.name(), cases, start.elapsed().as_millis() as u64))
}

pub struct SuiteRegistry {
    suites: Vec<Box<dyn Suite>>,
}

impl SuiteRegistry {
    pub fn builtin() -> &'static SuiteRegistry {
        static REG: OnceLock<SuiteRegistry> = OnceLock::new();
        REG.get_or_init(|| SuiteRegistry {
            suites: vec![
                Box::new(GammaForms),
                Box::new(Hobson),
                Box::new(GauntTriple),
                Box::new(BfunFourier),
                Box::new(Convolution),
                Box::new(Addition),
                Box::new(SolidShift),
                Box::new(Functional),
                Box::new(Pade),
            ],
        })
    }

    pub fn get(&self, name: &str) -> Option<&dyn Suite> {
        self.suites.iter().find(|s| s.name() == name).map(|s| s.as_ref())
    }

    pub fn names(&self) -> Vec<&'static str> {
        self.suites.iter().map(|s| s.name()).collect()
    }

    pub fn suites(&self) -> impl Iterator<Item = &dyn Suite> {
        self.suites.iter().map(|s| s.as_ref())
    }

    /// Runs every suite; reports keep registry order.
    pub fn run_all(&self, cfg: &SuiteConfig) -> Result<AggregateReport> {
        let start = Instant::now();
        let reports = self
            .suites
            .par_iter()
            .map(|s| run_suite(s.as_ref(), cfg))
            .collect::<Result<Vec<_>>>()?;
        Ok(AggregateReport::new(reports, start.elapsed().as_millis() as u64))
    }
}

fn random_direction(rng: &mut StdRng) -> Vec3 {
    let ct: f64 = rng.gen_range(-1.0..=1.0);
    Vec3::from_angles(ct.acos(), rng.gen_range(0.0..2.0 * PI))
}

/// Largest |𝒴_l^m| on the sphere of radius rho.
fn sphere_max(l: i32, rho: f64) -> f64 {
    rho.powi(l) * (f64::from(2 * l + 1) / (4.0 * PI)).sqrt()
}

pub struct GammaForms;

impl Suite for GammaForms {
    fn name(&self) -> &'static str {
        "gamma-forms"
    }

    fn description(&self) -> &'static str {
        "six derivative forms of the gamma radial function agree pairwise"
    }

    fn cases(&self, cfg: &SuiteConfig) -> Result<Vec<Case>> {
        let lmax = cfg.lmax.unwrap_or(5);
        let reg = GammaRegistry::builtin();
        let profiles = [
            ("gaussian(0.7)", RadialProfile::Gaussian(0.7)),
            ("power(-1)", RadialProfile::Power(-1.0)),
            ("power(2.3)", RadialProfile::Power(2.3)),
            ("khat(2,1.3)", RadialProfile::ReducedBesselHalf { n: 2, alpha: 1.3 }),
        ];
        let mut cases = Vec::new();
        for (pname, prof) in &profiles {
            let f = prof.to_radial()?;
            for l1 in 0..=lmax {
                for l2 in 0..=lmax {
                    for l in ((l1 - l2).abs()..=l1 + l2).step_by(2) {
                        let ix = GammaIndices::new(l1, l2, l)?;
                        let radials: Vec<_> = reg
                            .forms()
                            .filter_map(|form| form.gamma(&ix, &f).ok().map(|g| (form.name(), g)))
                            .collect();
                        for r in [0.5, 1.0, 2.3] {
                            let vals: Vec<(&str, f64)> = radials.iter().map(|(n, g)| (*n, g.evaluate(r))).collect();
                            let mut worst: Option<Case> = None;
                            for (i, a) in vals.iter().enumerate() {
                                for b in &vals[i + 1..] {
                                    let id = format!("{pname} l1={l1} l2={l2} l={l} r={r} {}~{}", a.0, b.0);
                                    let c = Case::new(id, a.1, b.1, 1e-10);
                                    if worst.as_ref().map_or(true, |w| c.rel_err > w.rel_err) {
                                        worst = Some(c);
                                    }
                                }
                            }
                            cases.extend(worst);
                        }
                    }
                }
            }
        }
        Ok(cases)
    }
}

pub struct Hobson;

impl Suite for Hobson {
    fn name(&self) -> &'static str {
        "hobson"
    }

    fn description(&self) -> &'static str {
        "closed-form gradient operator on radial functions against Cartesian finite differences"
    }

    fn cases(&self, cfg: &SuiteConfig) -> Result<Vec<Case>> {
        let lmax = cfg.lmax.unwrap_or(4);
        let mut rng = StdRng::seed_from_u64(cfg.seed);
        let profiles = [
            ("gaussian(0.8)", RadialProfile::Gaussian(0.8), 0.04),
            ("yukawa(1.1)", RadialProfile::YukawaLike(1.1), 0.025),
        ];
        let mut jobs = Vec::new();
        for (pi, _) in profiles.iter().enumerate() {
            for idx in LMIndex::all_up_to(lmax) {
                for _ in 0..10 {
                    let r = rng.gen_range(0.6..1.8);
                    jobs.push((pi, idx, random_direction(&mut rng).scale(r)));
                }
            }
        }
        jobs.par_iter()
            .map(|&(pi, idx, at)| {
                let (pname, prof, h) = &profiles[pi];
                let radial = prof.to_radial()?;
                let f = |v: Vec3| Complex64::new(radial.evaluate(v.norm()), 0.0);
                let e = hobson_harmonic(idx, prof)?;
                let scheme = FDScheme::new(4, *h)?;
                let want = fd_apply_operator(&operator_polynomial(idx), &f, at, scheme)?.value;
                let got = e.evaluate(at);
                let rho = at.norm();
                let scale: f64 = e
                    .terms
                    .iter()
                    .map(|t| t.coeff.norm() * t.radial.magnitude(rho) * sphere_max(t.angular.l, 1.0))
                    .sum();
                let id = format!("{pname} l={} m={} at={at}", idx.l, idx.m);
                Ok(Case::scaled(id, got, want, 1e-6, scale))
            })
            .collect()
    }
}

pub struct GauntTriple;

impl Suite for GauntTriple {
    fn name(&self) -> &'static str {
        "gaunt"
    }

    fn description(&self) -> &'static str {
        "recurrence strings against exact Racah sums and Lebedev quadrature"
    }

    fn cases(&self, cfg: &SuiteConfig) -> Result<Vec<Case>> {
        let lmax = cfg.lmax.unwrap_or(25);
        let lq = lmax.min(6);
        let mut rng = StdRng::seed_from_u64(cfg.seed);
        let mut pairs = Vec::new();
        for l1 in 0..=lmax {
            for l2 in 0..=lmax {
                pairs.push((l1, rng.gen_range(-l1..=l1), l2, rng.gen_range(-l2..=l2)));
            }
        }
        let mut cases: Vec<Case> = pairs
            .par_iter()
            .flat_map_iter(|&(l1, m1, l2, m2)| {
                gaunt_string_uncached(l1, m1, l2, m2).into_iter().map(move |(l, v)| {
                    let exact = gaunt(GauntQuery { l1, m1, l2, m2, l3: l, m3: m1 + m2 });
                    Case::new(format!("racah l1={l1} m1={m1} l2={l2} m2={m2} l={l}"), v, exact, 1e-12)
                })
            })
            .collect();

        let grid = QuadratureGrid::lebedev(590)?;
        let table: Vec<Vec<Complex64>> = LMIndex::all_up_to(2 * lq)
            .map(|idx| grid.nodes.iter().map(|(v, _)| ylm_dir(idx, *v)).collect())
            .collect();
        let at = |l: i32, m: i32| &table[(l * l + l + m) as usize];
        let mut quad = Vec::new();
        for a in LMIndex::all_up_to(lq) {
            for b in LMIndex::all_up_to(lq) {
                for (l, v) in gaunt_string_uncached(a.l, a.m, b.l, b.m) {
                    let (ya, yb, yc) = (at(a.l, a.m), at(b.l, b.m), at(l, a.m + b.m));
                    let q: Complex64 = grid
                        .nodes
                        .iter()
                        .enumerate()
                        .map(|(i, (_, w))| yc[i].conj() * yb[i] * ya[i] * *w)
                        .sum();
                    let id = format!("quadrature l1={} m1={} l2={} m2={} l={l}", a.l, a.m, b.l, b.m);
                    quad.push(Case::scaled(id, v, q, 1e-10, 1.0));
                }
            }
        }
        cases.extend(quad);
        Ok(cases)
    }
}

pub struct BfunFourier;

impl Suite for BfunFourier {
    fn name(&self) -> &'static str {
        "bfun-fourier"
    }

    fn description(&self) -> &'static str {
        "closed-form B-function Fourier transform against radial Hankel quadrature"
    }

    fn cases(&self, cfg: &SuiteConfig) -> Result<Vec<Case>> {
        let lmax = cfg.lmax.unwrap_or(3);
        let mut cases = Vec::new();
        for n in 0..=2 {
            for l in 0..=lmax {
                for alpha in [0.7, 1.0, 2.0] {
                    let idx = BIndex::new(n, l, 0, alpha)?;
                    let f = idx.radial_expr()?;
                    let y = ylm_dir(LMIndex::of(l, 0), Vec3::new(0.0, 0.0, 1.0)).re;
                    for p in [0.2, 1.0, 4.0] {
                        let h = hankel_radial_ft(&|r| f.evaluate(r), l as u32, p, 60.0 / alpha, 24);
                        let closed = b_fourier(&idx, Vec3::new(0.0, 0.0, p)) / y;
                        let id = format!("n={n} l={l} alpha={alpha} p={p}");
                        cases.push(Case::new(id, closed, h.value, 1e-8));
                    }
                }
            }
        }
        Ok(cases)
    }
}

pub struct Convolution;

impl Suite for Convolution {
    fn name(&self) -> &'static str {
        "convolution"
    }

    fn description(&self) -> &'static str {
        "equal-exponent B-function convolution against momentum-space quadrature"
    }

    fn cases(&self, cfg: &SuiteConfig) -> Result<Vec<Case>> {
        let lmax = cfg.lmax.unwrap_or(2);
        let alpha = 1.2;
        let grid = QuadratureGrid::lebedev(110)?;
        let mut rng = StdRng::seed_from_u64(cfg.seed);
        let radii = [0.5, 1.3, 2.6];
        let points: Vec<Vec3> = radii.iter().map(|&r| random_direction(&mut rng).scale(r)).collect();
        let mut jobs = Vec::new();
        for la in 0..=lmax {
            for lb in 0..=lmax {
                for na in 0..=2 {
                    for nb in 0..=2 {
                        let ma = rng.gen_range(-la..=la);
                        let mb = rng.gen_range(-lb..=lb);
                        jobs.push((BIndex::new(na, la, ma, alpha)?, BIndex::new(nb, lb, mb, alpha)?));
                    }
                }
            }
        }
        let per_job: Vec<Vec<Case>> = jobs
            .par_iter()
            .map(|(a, b)| {
                let e = convolve(a, b)?;
                points
                    .iter()
                    .map(|&at| {
                        let want = momentum_convolution(a, b, at, &grid)?;
                        let got = e.evaluate(at)?;
                        let id = format!(
                            "a=({},{},{}) b=({},{},{}) |r|={:.1}",
                            a.n, a.l, a.m, b.n, b.l, b.m, at.norm()
                        );
                        Ok(Case::new(id, got, want, 1e-7))
                    })
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<_>>()?;
        Ok(per_job.into_iter().flatten().collect())
    }
}

pub struct Addition;

impl Suite for Addition {
    fn name(&self) -> &'static str {
        "addition"
    }

    fn description(&self) -> &'static str {
        "two-range expansion of |r<+r>|^nu Y_lm against direct evaluation and the Laplace expansion"
    }

    fn cases(&self, cfg: &SuiteConfig) -> Result<Vec<Case>> {
        let lmax = cfg.lmax.unwrap_or(2);
        let mut rng = StdRng::seed_from_u64(cfg.seed);
        let mut cases = Vec::new();
        for trial in 0..2 {
            let pair = SplitPair::new(random_direction(&mut rng).scale(0.4), random_direction(&mut rng))?;
            let s = pair.sum();
            for (nu, tol) in [(-3.0, 1e-8), (-1.0, 1e-8), (1.5, 1e-8), (0.0, 1e-13), (2.0, 1e-13), (4.0, 1e-13)] {
                let trunc = TruncationSpec::new(30, tol * 1e-2, usize::MAX)?;
                for idx in LMIndex::all_up_to(lmax) {
                    let res = power_solid_addition(nu, idx, pair, &trunc)?;
                    let want = power_solid_direct(nu, idx, s);
                    let scale = s.norm().powf(nu) * sphere_max(idx.l, s.norm());
                    let id = format!("pair{trial} nu={nu} l={} m={} shells={}", idx.l, idx.m, res.outer_l_used);
                    cases.push(Case::scaled(id, res.value, want, tol, scale));
                }
            }
            let trunc = TruncationSpec::new(60, 1e-14, usize::MAX)?;
            let solid = power_solid_addition(-1.0, LMIndex::of(0, 0), pair, &trunc)?;
            let laplace = laplace_expansion(pair.r_lt, pair.r_gt, 1, &trunc)?;
            let id = format!("pair{trial} nu=-1 l=0 vs laplace");
            cases.push(Case::new(id, solid.value * (4.0 * PI).sqrt(), laplace.value, 1e-11));
        }
        Ok(cases)
    }
}

pub struct SolidShift;

impl Suite for SolidShift {
    fn name(&self) -> &'static str {
        "solid-shift"
    }

    fn description(&self) -> &'static str {
        "finite addition theorem of regular solid harmonics against direct evaluation"
    }

    fn cases(&self, cfg: &SuiteConfig) -> Result<Vec<Case>> {
        let lmax = cfg.lmax.unwrap_or(6);
        let mut rng = StdRng::seed_from_u64(cfg.seed);
        let mut cases = Vec::new();
        for k in 0..50 {
            let r = random_direction(&mut rng).scale(rng.gen_range(0.1..2.0));
            let rp = random_direction(&mut rng).scale(rng.gen_range(0.1..2.0));
            for idx in LMIndex::all_up_to(lmax) {
                let got = solid_harmonic_shift(idx, r, rp);
                let want = regular_solid(idx, r + rp);
                let id = format!("pair{k:02} l={} m={}", idx.l, idx.m);
                cases.push(Case::scaled(id, got, want, 1e-11, sphere_max(idx.l, (r + rp).norm())));
            }
        }
        Ok(cases)
    }
}

pub struct Functional;

impl Suite for Functional {
    fn name(&self) -> &'static str {
        "functional"
    }

    fn description(&self) -> &'static str {
        "momentum-space functional equations of B-function transforms"
    }

    fn cases(&self, cfg: &SuiteConfig) -> Result<Vec<Case>> {
        let lmax = cfg.lmax.unwrap_or(3);
        let mut rng = StdRng::seed_from_u64(cfg.seed);
        let dir = random_direction(&mut rng);
        let alpha = 1.3;
        let zero = Complex64::new(0.0, 0.0);
        let mut cases = Vec::new();
        for pn in [0.3, 1.0, 5.0] {
            let p = dir.scale(pn);
            for n in -2..=4 {
                for idx in LMIndex::all_up_to(lmax) {
                    let res = b_fourier_functional_check(&BIndex::new(n, idx.l, idx.m, alpha)?, p);
                    let tag = format!("n={n} l={} m={} p={pn}", idx.l, idx.m);
                    cases.push(Case::new(format!("ladder {tag}"), Complex64::new(res.ladder, 0.0), zero, 1e-12));
                    cases.push(Case::new(format!("generator {tag}"), Complex64::new(res.generator, 0.0), zero, 1e-12));
                }
            }
            let res = b_fourier_functional_check(&BIndex::new(-1, 0, 0, alpha)?, p);
            cases.push(Case::new(format!("delta p={pn}"), Complex64::new(res.delta, 0.0), zero, 1e-12));
        }
        Ok(cases)
    }
}

pub struct Pade;

impl Suite for Pade {
    fn name(&self) -> &'static str {
        "pade"
    }

    fn description(&self) -> &'static str {
        "Bessel-polynomial ratio reproduces the exponential series through order 2n"
    }

    fn cases(&self, cfg: &SuiteConfig) -> Result<Vec<Case>> {
        let nmax = cfg.lmax.unwrap_or(5);
        if nmax < 0 {
            return Err(Error::Domain(format!("degree limit {nmax} is negative")));
        }
        let mut cases = Vec::new();
        for n in 0..=nmax as u32 {
            let taylor = bessel_pade_exp_taylor(n, 2 * n as usize);
            let mut inv_fact = 1.0;
            for (k, c) in taylor.iter().enumerate() {
                if k > 0 {
                    inv_fact /= k as f64;
                }
                cases.push(Case::new(format!("n={n} k={k:02}"), rational_to_f64(c), inv_fact, 1e-12));
            }
        }
        Ok(cases)
    }
}
