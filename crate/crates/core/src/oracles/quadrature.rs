use std::f64::consts::PI;
use std::path::PathBuf;

use num::complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::harmonics::Vec3;

/// Environment variable naming a directory of `lebedev_<n>.txt` files.
pub const DATA_DIR_ENV: &str = "STGO_KIT_DATA";

const LEBEDEV_110: &str = include_str!("../../data/lebedev_110.txt");
const LEBEDEV_302: &str = include_str!("../../data/lebedev_302.txt");
const LEBEDEV_590: &str = include_str!("../../data/lebedev_590.txt");

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum GridKind {
    Lebedev { points: usize },
    GaussProduct { n_theta: usize, n_phi: usize },
}

/// Directions on the unit sphere with weights summing to 4π.
#[derive(Debug, Clone)]
pub struct QuadratureGrid {
    pub kind: GridKind,
    pub nodes: Vec<(Vec3, f64)>,
}

fn parse_nodes(text: &str, source: &str) -> Result<Vec<(Vec3, f64)>> {
    let mut nodes = Vec::new();
    for line in text.lines() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let v: Vec<f64> = line
            .split_whitespace()
            .map(str::parse)
            .collect::<std::result::Result<_, _>>()
            .map_err(|e| Error::Domain(format!("{source}: bad line {line:?}: {e}")))?;
        if v.len() != 4 {
            return Err(Error::Domain(format!("{source}: expected 4 columns in {line:?}")));
        }
        nodes.push((Vec3::new(v[0], v[1], v[2]), v[3]));
    }
    Ok(nodes)
}

impl QuadratureGrid {
    /// Lebedev–Laikov grid with 110, 302 or 590 points.
    pub fn lebedev(points: usize) -> Result<Self> {
        let builtin = match points {
            110 => LEBEDEV_110,
            302 => LEBEDEV_302,
            590 => LEBEDEV_590,
            _ => return Err(Error::Domain(format!("no Lebedev grid with {points} points"))),
        };
        let nodes = match std::env::var_os(DATA_DIR_ENV) {
            Some(dir) => {
                let path = PathBuf::from(dir).join(format!("lebedev_{points}.txt"));
                let text = std::fs::read_to_string(&path)
                    .map_err(|e| Error::Domain(format!("{}: {e}", path.display())))?;
                parse_nodes(&text, &path.display().to_string())?
            }
            None => parse_nodes(builtin, "built-in grid")?,
        };
        if nodes.len() != points {
            return Err(Error::Domain(format!(
                "Lebedev file holds {} nodes, expected {points}",
                nodes.len()
            )));
        }
        let grid = Self { kind: GridKind::Lebedev { points }, nodes };
        let total = grid.weight_sum();
        if (total - 4.0 * PI).abs() > 1e-13 {
            return Err(Error::Domain(format!("Lebedev weights sum to {total}, not 4π")));
        }
        Ok(grid)
    }

    /// Gauss–Legendre in cos θ times the trapezoid rule in φ.
    pub fn gauss_product(n_theta: usize, n_phi: usize) -> Self {
        let (x, w) = gauss_legendre(n_theta);
        let mut nodes = Vec::with_capacity(n_theta * n_phi);
        let dphi = 2.0 * PI / n_phi as f64;
        for (ct, wt) in x.iter().zip(&w) {
            let st = (1.0 - ct * ct).max(0.0).sqrt();
            for k in 0..n_phi {
                let phi = k as f64 * dphi;
                nodes.push((Vec3::new(st * phi.cos(), st * phi.sin(), *ct), wt * dphi));
            }
        }
        Self { kind: GridKind::GaussProduct { n_theta, n_phi }, nodes }
    }

    /// Highest total spherical-harmonic degree integrated exactly.
    pub fn exact_degree(&self) -> usize {
        match self.kind {
            GridKind::Lebedev { points: 110 } => 17,
            GridKind::Lebedev { points: 302 } => 29,
            GridKind::Lebedev { .. } => 41,
            GridKind::GaussProduct { n_theta, n_phi } => (2 * n_theta - 1).min(n_phi - 1),
        }
    }

    pub fn weight_sum(&self) -> f64 {
        self.nodes.iter().map(|(_, w)| w).sum()
    }
}

/// Σ w_i f(Ω_i).
pub fn sphere_integrate(f: impl Fn(Vec3) -> Complex64, grid: &QuadratureGrid) -> Complex64 {
    grid.nodes.iter().map(|&(v, w)| f(v) * w).sum()
}

/// Gauss–Legendre nodes and weights on [−1, 1].
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    if n == 1 {
        return (vec![0.0], vec![2.0]);
    }
    let mut x = vec![0.0; n];
    let mut w = vec![0.0; n];
    let m = (n + 1) / 2;
    for i in 0..m {
        let mut z = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, z);
            for k in 2..=n {
                let p2 = ((2 * k - 1) as f64 * z * p1 - (k - 1) as f64 * p0) / k as f64;
                p0 = p1;
                p1 = p2;
            }
            dp = n as f64 * (z * p1 - p0) / (z * z - 1.0);
            let dz = p1 / dp;
            z -= dz;
            if dz.abs() < 1e-16 {
                break;
            }
        }
        x[i] = -z;
        x[n - 1 - i] = z;
        w[i] = 2.0 / ((1.0 - z * z) * dp * dp);
        w[n - 1 - i] = w[i];
    }
    (x, w)
}

/// ∫_a^b f via `panels` equal Gauss–Legendre panels of `n` nodes.
pub fn integrate_panels(f: impl Fn(f64) -> f64, a: f64, b: f64, panels: usize, rule: &(Vec<f64>, Vec<f64>)) -> f64 {
    let h = (b - a) / panels as f64;
    let mut acc = crate::core_math::KahanSum::new();
    for k in 0..panels {
        let lo = a + k as f64 * h;
        let mid = lo + 0.5 * h;
        let part: f64 = rule.0.iter().zip(&rule.1).map(|(x, w)| w * f(mid + 0.5 * h * x)).sum();
        acc.add(part * 0.5 * h);
    }
    acc.value()
}
