use std::sync::OnceLock;

use super::radial::{Radial, RadialExpr, RadialProfile};
use crate::core_math::pochhammer;
use crate::error::{Error, Result};
use crate::wigner::{delta_quantities, DeltaQuantities};

/// Angular indices of γ_{l1 l2}^l with their Δ abbreviations.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GammaIndices {
    pub l1: i32,
    pub l2: i32,
    pub l: i32,
    pub delta: DeltaQuantities,
}

impl GammaIndices {
    pub fn new(l1: i32, l2: i32, l: i32) -> Result<Self> {
        if l1 < 0 || l2 < 0 || l < 0 {
            return Err(Error::Domain(format!("negative angular index in ({l1}, {l2}, {l})")));
        }
        Ok(Self { l1, l2, l, delta: delta_quantities(l1, l2, l)? })
    }
}

/// One closed form of the radial function γ_{l1 l2}^l generated from f_{l2}.
pub trait GammaForm: Send + Sync {
    fn name(&self) -> &'static str;

    fn admissible(&self, _ix: &GammaIndices) -> Result<()> {
        Ok(())
    }

    fn gamma_expr(&self, ix: &GammaIndices, f: &RadialExpr) -> RadialExpr;

    fn gamma(&self, ix: &GammaIndices, f: &Radial) -> Result<Radial> {
        self.admissible(ix)?;
        match f {
            Radial::Expr(e) => Ok(Radial::Expr(self.gamma_expr(ix, e))),
            Radial::Sampled(_) => Err(Error::Capability(format!(
                "gamma {} needs a closed-form radial profile",
                self.name()
            ))),
        }
    }
}

fn d(e: &RadialExpr, k: i32) -> RadialExpr {
    e.inv_r_ddr_pow(k as u32)
}

fn rp(e: &RadialExpr, s: i32) -> RadialExpr {
    e.mul_power(s as f64)
}

/// Σ_q (−Δl)_q (−σ−1/2)_q 2^q / q! · r^{l1+l2−2q} (1/r d/dr)^{l1−q} [f / r^{l2}].
pub struct Form1;

impl Form1 {
    fn coeff(ix: &GammaIndices, q: i32) -> f64 {
        let dq = ix.delta;
        pochhammer(-dq.delta_l as f64, q as u32) * pochhammer(-dq.sigma_l as f64 - 0.5, q as u32)
            * 2f64.powi(q)
            / pochhammer(1.0, q as u32)
    }
}

impl GammaForm for Form1 {
    fn name(&self) -> &'static str {
        "form1"
    }

    fn gamma_expr(&self, ix: &GammaIndices, f: &RadialExpr) -> RadialExpr {
        let g = rp(f, -ix.l2);
        let parts: Vec<RadialExpr> = (0..=ix.delta.delta_l.min(ix.l1))
            .map(|q| rp(&d(&g, ix.l1 - q), ix.l1 + ix.l2 - 2 * q).scale(Self::coeff(ix, q)))
            .collect();
        RadialExpr::sum(&parts)
    }

    fn gamma(&self, ix: &GammaIndices, f: &Radial) -> Result<Radial> {
        if let Radial::Expr(e) = f {
            return Ok(Radial::Expr(self.gamma_expr(ix, e)));
        }
        let g = f.mul_power(-ix.l2 as f64);
        let mut acc: Option<Radial> = None;
        for q in 0..=ix.delta.delta_l.min(ix.l1) {
            let t = g
                .inv_r_ddr_pow((ix.l1 - q) as u32)?
                .mul_power((ix.l1 + ix.l2 - 2 * q) as f64)
                .scale(Self::coeff(ix, q));
            acc = Some(match acc {
                None => t,
                Some(a) => a.add(&t),
            });
        }
        Ok(acc.expect("q = 0 is always present"))
    }
}

/// r^{−l−1} D^{Δl} r^{l1+l2+l+1} D^{Δl2} [f / r^{l2}], D = 1/r d/dr.
pub struct Form2;

impl GammaForm for Form2 {
    fn name(&self) -> &'static str {
        "form2"
    }

    fn gamma_expr(&self, ix: &GammaIndices, f: &RadialExpr) -> RadialExpr {
        let dq = ix.delta;
        let e = d(&rp(f, -ix.l2), dq.delta_l2);
        rp(&d(&rp(&e, ix.l1 + ix.l2 + ix.l + 1), dq.delta_l), -ix.l - 1)
    }
}

/// r^l D^{Δl2} r^{l1−l2−l−1} D^{Δl} [r^{l2+1} f].
pub struct Form3;

impl GammaForm for Form3 {
    fn name(&self) -> &'static str {
        "form3"
    }

    fn gamma_expr(&self, ix: &GammaIndices, f: &RadialExpr) -> RadialExpr {
        let dq = ix.delta;
        let e = d(&rp(f, ix.l2 + 1), dq.delta_l);
        rp(&d(&rp(&e, ix.l1 - ix.l2 - ix.l - 1), dq.delta_l2), ix.l)
    }
}

/// r^{−l−1} D^{Δl2} r^{l1−l2+3l+1} D^{Δl2} r^{−2l−1} D^{l2−l} [r^{l2+1} f], for l2 ≥ l.
pub struct Form4;

impl GammaForm for Form4 {
    fn name(&self) -> &'static str {
        "form4"
    }

    fn admissible(&self, ix: &GammaIndices) -> Result<()> {
        if ix.l2 >= ix.l {
            Ok(())
        } else {
            Err(Error::Domain(format!("form4 requires l2 >= l, got l2 = {}, l = {}", ix.l2, ix.l)))
        }
    }

    fn gamma_expr(&self, ix: &GammaIndices, f: &RadialExpr) -> RadialExpr {
        let dq = ix.delta;
        let e = rp(&d(&rp(f, ix.l2 + 1), ix.l2 - ix.l), -2 * ix.l - 1);
        let e = rp(&d(&e, dq.delta_l2), ix.l1 - ix.l2 + 3 * ix.l + 1);
        rp(&d(&e, dq.delta_l2), -ix.l - 1)
    }
}

/// r^l D^{Δl} r^{l1+l2−3l−1} D^{Δl} r^{2l+1} D^{l−l2} [f / r^{l2}], for l ≥ l2.
pub struct Form5;

impl GammaForm for Form5 {
    fn name(&self) -> &'static str {
        "form5"
    }

    fn admissible(&self, ix: &GammaIndices) -> Result<()> {
        if ix.l >= ix.l2 {
            Ok(())
        } else {
            Err(Error::Domain(format!("form5 requires l >= l2, got l = {}, l2 = {}", ix.l, ix.l2)))
        }
    }

    fn gamma_expr(&self, ix: &GammaIndices, f: &RadialExpr) -> RadialExpr {
        let dq = ix.delta;
        let e = rp(&d(&rp(f, -ix.l2), ix.l - ix.l2), 2 * ix.l + 1);
        let e = rp(&d(&e, dq.delta_l), ix.l1 + ix.l2 - 3 * ix.l - 1);
        rp(&d(&e, dq.delta_l), ix.l)
    }
}

/// Σ_s (−Δl2)_s (Δl1+1/2)_s 2^s / s! · r^{l1−l2−2s−1} D^{l1−s} [r^{l2+1} f].
pub struct Form6;

impl GammaForm for Form6 {
    fn name(&self) -> &'static str {
        "form6"
    }

    fn gamma_expr(&self, ix: &GammaIndices, f: &RadialExpr) -> RadialExpr {
        let dq = ix.delta;
        let g = rp(f, ix.l2 + 1);
        let parts: Vec<RadialExpr> = (0..=dq.delta_l2.min(ix.l1))
            .map(|s| {
                let c = pochhammer(-dq.delta_l2 as f64, s as u32)
                    * pochhammer(dq.delta_l1 as f64 + 0.5, s as u32)
                    * 2f64.powi(s)
                    / pochhammer(1.0, s as u32);
                rp(&d(&g, ix.l1 - s), ix.l1 - ix.l2 - 2 * s - 1).scale(c)
            })
            .collect();
        RadialExpr::sum(&parts)
    }
}

/// Named registry of the γ forms.
pub struct GammaRegistry {
    forms: Vec<Box<dyn GammaForm>>,
}

impl GammaRegistry {
    pub fn builtin() -> &'static GammaRegistry {
        static REG: OnceLock<GammaRegistry> = OnceLock::new();
        REG.get_or_init(|| GammaRegistry {
            forms: vec![
                Box::new(Form1),
                Box::new(Form2),
                Box::new(Form3),
                Box::new(Form4),
                Box::new(Form5),
                Box::new(Form6),
            ],
        })
    }

    pub fn get(&self, name: &str) -> Result<&dyn GammaForm> {
        self.forms
            .iter()
            .find(|f| f.name() == name)
            .map(|f| f.as_ref())
            .ok_or_else(|| Error::Domain(format!("unknown gamma form '{name}' (expected one of {})", self.names().join(", "))))
    }

    pub fn default_form(&self) -> &dyn GammaForm {
        self.forms[0].as_ref()
    }

    pub fn forms(&self) -> impl Iterator<Item = &dyn GammaForm> {
        self.forms.iter().map(|f| f.as_ref())
    }

    pub fn names(&self) -> Vec<&'static str> {
        self.forms.iter().map(|f| f.name()).collect()
    }
}

/// Numbered γ form, 1 through 6.
pub fn gamma_form(number: u32) -> Result<&'static dyn GammaForm> {
    GammaRegistry::builtin().get(&format!("form{number}"))
}

/// γ_{l1 l2}^l(r) for radial part f_{l2} = `f`, by the selected form.
pub fn gamma_radial(form: u32, l1: i32, l2: i32, l: i32, f: &RadialProfile, r: f64) -> Result<f64> {
    if !(r > 0.0) {
        return Err(Error::Domain(format!("gamma_radial needs r > 0, got {r}")));
    }
    let ix = GammaIndices::new(l1, l2, l)?;
    let g = gamma_form(form)?.gamma(&ix, &f.to_radial()?)?;
    Ok(g.evaluate(r))
}
