//! Report-only timing of Gaunt-string generation and addition-theorem
//! summation. Checksums guard against dead-code elimination and make runs
//! with equal seeds comparable.

use std::hint::black_box;
use std::time::Instant;

use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use serde::Serialize;

use crate::addition::{power_solid_addition, SplitPair, TruncationSpec};
use crate::error::{Error, Result};
use crate::harmonics::{LMIndex, Vec3};
use crate::wigner::{gaunt, gaunt_string_uncached, GauntQuery};

pub const GAUNT_BENCH_L_MAX: u32 = 60;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BenchResult {
    pub name: String,
    pub n_items: u64,
    pub total_ns: u64,
    pub ns_per_item: f64,
    pub checksum: f64,
}

impl BenchResult {
    fn new(name: impl Into<String>, n_items: u64, total_ns: u64, checksum: f64) -> Self {
        let ns_per_item = if n_items == 0 { 0.0 } else { total_ns as f64 / n_items as f64 };
        Self { name: name.into(), n_items, total_ns, ns_per_item, checksum }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GauntBench {
    pub recurrence: BenchResult,
    pub racah: BenchResult,
    /// Racah time over recurrence time.
    pub speedup: f64,
}

/// (l1, m1, l2, m2) for every l1, l2 ≤ l_max with seeded random m values.
fn gaunt_cases(l_max: u32, seed: u64) -> Vec<(i32, i32, i32, i32)> {
    let mut rng = StdRng::seed_from_u64(seed);
    let l_max = l_max as i32;
    let mut cases = Vec::new();
    for l1 in 0..=l_max {
        for l2 in 0..=l_max {
            let m1 = rng.gen_range(-l1..=l1);
            let m2 = rng.gen_range(-l2..=l2);
            cases.push((l1, m1, l2, m2));
        }
    }
    cases
}

/// Times whole Gaunt strings by recurrence against the same entries by
/// per-entry exact Racah sums.
pub fn bench_gaunt_strings(l_max: u32, seed: u64) -> Result<GauntBench> {
    if l_max > GAUNT_BENCH_L_MAX {
        return Err(Error::Domain(format!("l_max {l_max} exceeds {GAUNT_BENCH_L_MAX}")));
    }
    let cases = gaunt_cases(l_max, seed);

    let start = Instant::now();
    let mut n = 0u64;
    let mut checksum = 0.0;
    for &(l1, m1, l2, m2) in &cases {
        for (_, v) in black_box(gaunt_string_uncached(l1, m1, l2, m2)) {
            n += 1;
            checksum += v;
        }
    }
    let recurrence = BenchResult::new("gaunt-string-recurrence", n, start.elapsed().as_nanos() as u64, checksum);

    let start = Instant::now();
    let mut n = 0u64;
    let mut checksum = 0.0;
    for &(l1, m1, l2, m2) in &cases {
        let lo = (l1 - l2).abs().max((m1 + m2).abs());
        for l in lo..=l1 + l2 {
            if (l1 + l2 + l) % 2 != 0 {
                continue;
            }
            n += 1;
            checksum += black_box(gaunt(GauntQuery { l1, m1, l2, m2, l3: l, m3: m1 + m2 }));
        }
    }
    let racah = BenchResult::new("gaunt-racah-per-entry", n, start.elapsed().as_nanos() as u64, checksum);

    let speedup = racah.total_ns as f64 / recurrence.total_ns.max(1) as f64;
    Ok(GauntBench { recurrence, racah, speedup })
}

/// Time to tolerance for the rank-l power addition theorem at a fixed
/// off-axis geometry with |r_<|/|r_>| = ratio; items are outer shells.
pub fn bench_addition(nu: f64, l: i32, ratio: f64, tol: f64) -> Result<BenchResult> {
    if !(ratio > 0.0 && ratio < 1.0) {
        return Err(Error::Domain(format!("ratio must lie in (0, 1), got {ratio}")));
    }
    let gt = Vec3::new(0.48, -0.6, 0.64);
    let lt = Vec3::new(-0.36, 0.8, 0.48).scale(ratio);
    let pair = SplitPair::new(lt, gt)?;
    let trunc = TruncationSpec::new(400, tol, usize::MAX)?;
    let idx = LMIndex::new(l, 0)?;
    let start = Instant::now();
    let res = black_box(power_solid_addition(nu, idx, pair, &trunc)?);
    let total = start.elapsed().as_nanos() as u64;
    let name = format!("addition nu={nu} l={l} ratio={ratio} tol={tol:e} converged={}", res.converged);
    Ok(BenchResult::new(name, u64::from(res.outer_l_used) + 1, total, res.value.re))
}
