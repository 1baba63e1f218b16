use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;
use serde_json::{json, Value};

use stgo_core::addition::{power_solid_addition_with, power_solid_direct, SolidAdditionForm, SplitPair, TruncationSpec};
use stgo_core::bench::{bench_addition, bench_gaunt_strings, BenchResult};
use stgo_core::bfun::{b_fourier, b_value, convolve, stgo_on_b, BExpansion, BIndex};
use stgo_core::core_math::khat;
use stgo_core::harmonics::{irregular_solid, regular_solid, regular_solid_poly, ylm, ylm_dir};
use stgo_core::stgo::{apply_to_tensor_with, hobson_harmonic, GammaRegistry, RadialProfile, TensorExpansion, TensorTerm};
use stgo_core::wigner::{gaunt, gaunt_string, GauntQuery};
use stgo_core::{Error, LMIndex, Vec3};

use stgo_kit::report::ComplexValue;
use stgo_kit::suites::{run_suite, SuiteConfig, SuiteRegistry};

/// Spherical tensor gradient operator toolkit: evaluation, tabulation and identity checks.
#[derive(Parser)]
#[command(name = "stgo-kit", version)]
struct Cli {
    /// Write the JSON result to this file and print a one-line summary.
    #[arg(long, global = true)]
    json: Option<PathBuf>,
    /// Tolerance override (verify suites, addition truncation).
    #[arg(long, global = true)]
    tol: Option<f64>,
    /// Seed for randomized cases.
    #[arg(long, global = true, default_value_t = 1)]
    seed: u64,
    /// Worker threads (defaults to all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Evaluate a single function value.
    #[command(subcommand)]
    Eval(EvalCmd),
    /// Gaunt coefficients as CSV: one entry with --l, else the whole string.
    Gaunt {
        #[arg(long)]
        l1: i32,
        #[arg(long, allow_hyphen_values = true)]
        m1: i32,
        #[arg(long)]
        l2: i32,
        #[arg(long, allow_hyphen_values = true)]
        m2: i32,
        #[arg(long)]
        l: Option<i32>,
    },
    /// Apply the operator Y_l^m(grad) to a radial profile times a solid harmonic.
    Apply {
        /// Operator indices as l,m.
        #[arg(long, allow_hyphen_values = true)]
        op: String,
        /// Radial profile: gaussian:a, power:s, khat:n,a or yukawa:a.
        #[arg(long, allow_hyphen_values = true)]
        target: String,
        /// Solid-harmonic indices of the target as l,m (default: scalar target).
        #[arg(long, allow_hyphen_values = true)]
        target_lm: Option<String>,
        #[arg(long, allow_hyphen_values = true)]
        at: Vec3,
        /// Gamma form used for tensor targets.
        #[arg(long, default_value = "form1")]
        gamma_form: String,
    },
    /// B-function values, transforms, convolutions and operator images.
    #[command(subcommand)]
    Bfun(BfunCmd),
    /// Two-range addition theorem for |r+r'|^nu Y_l^m(r+r').
    Addition {
        #[arg(long, allow_hyphen_values = true)]
        nu: f64,
        #[arg(long)]
        l: i32,
        #[arg(long, allow_hyphen_values = true)]
        m: i32,
        #[arg(long, allow_hyphen_values = true)]
        r: Vec3,
        #[arg(long, allow_hyphen_values = true)]
        rp: Vec3,
        #[arg(long, default_value_t = 60)]
        lmax_outer: u32,
        /// alternate, derived or series.
        #[arg(long, default_value = "derived")]
        form: String,
        /// Per-shell convergence table; "-" prints it instead of JSON.
        #[arg(long)]
        csv: Option<PathBuf>,
    },
    /// Run an identity suite, or "all".
    Verify {
        suite: String,
        /// Suite-specific size limit.
        #[arg(long)]
        lmax: Option<i32>,
    },
    /// Report-only timings as CSV.
    #[command(subcommand)]
    Bench(BenchCmd),
}

#[derive(Subcommand)]
enum EvalCmd {
    /// Spherical harmonic at angles or along a vector.
    Ylm {
        #[command(flatten)]
        lm: Lm,
        #[arg(long)]
        theta: Option<f64>,
        #[arg(long)]
        phi: Option<f64>,
        #[arg(long, allow_hyphen_values = true)]
        r: Option<Vec3>,
    },
    /// Regular solid harmonic.
    Rsh {
        #[command(flatten)]
        lm: Lm,
        #[arg(long, allow_hyphen_values = true, default_value = "0,0,0")]
        r: Vec3,
        /// Print the exact monomial expansion instead of a value.
        #[arg(long)]
        dump_poly: bool,
    },
    /// Irregular solid harmonic.
    Zlm {
        #[command(flatten)]
        lm: Lm,
        #[arg(long, allow_hyphen_values = true)]
        r: Vec3,
    },
    /// B function.
    Bfun {
        #[command(flatten)]
        b: BArgs,
        #[arg(long, allow_hyphen_values = true)]
        r: Vec3,
    },
    /// Reduced Bessel function k̂_nu(z).
    Khat {
        #[arg(long, allow_hyphen_values = true)]
        nu: f64,
        #[arg(long)]
        z: f64,
    },
}

#[derive(Args)]
struct Lm {
    #[arg(long)]
    l: i32,
    #[arg(long, allow_hyphen_values = true)]
    m: i32,
}

#[derive(Args)]
struct BArgs {
    #[arg(long, allow_hyphen_values = true)]
    n: i32,
    #[arg(long)]
    l: i32,
    #[arg(long, allow_hyphen_values = true)]
    m: i32,
    #[arg(long)]
    alpha: f64,
}

impl BArgs {
    fn index(&self) -> Result<BIndex, Error> {
        BIndex::new(self.n, self.l, self.m, self.alpha)
    }
}

#[derive(Subcommand)]
enum BfunCmd {
    Value {
        #[command(flatten)]
        b: BArgs,
        #[arg(long, allow_hyphen_values = true)]
        r: Vec3,
    },
    /// Closed-form Fourier transform at momentum p.
    Fourier {
        #[command(flatten)]
        b: BArgs,
        #[arg(long, allow_hyphen_values = true)]
        p: Vec3,
    },
    /// Equal-exponent convolution of two B functions given as n,l,m.
    Convolve {
        #[arg(long, allow_hyphen_values = true)]
        a: String,
        #[arg(long, allow_hyphen_values = true)]
        b: String,
        #[arg(long)]
        alpha: f64,
        /// Optional evaluation point.
        #[arg(long, allow_hyphen_values = true)]
        r: Option<Vec3>,
    },
    /// Image of a B function under Y_l^m(grad).
    Stgo {
        #[arg(long, allow_hyphen_values = true)]
        op: String,
        #[command(flatten)]
        b: BArgs,
    },
}

#[derive(Subcommand)]
enum BenchCmd {
    /// Recurrence strings against per-entry Racah sums.
    Gaunt {
        #[arg(long, default_value_t = 10)]
        lmax: u32,
    },
    /// Time to tolerance of the power addition theorem.
    Addition {
        #[arg(long, allow_hyphen_values = true, default_value_t = -1.0)]
        nu: f64,
        #[arg(long, default_value_t = 0)]
        l: i32,
        #[arg(long, default_value_t = 0.5)]
        ratio: f64,
    },
}

/// Failure with its exit code.
enum Fail {
    Domain(Error),
    Usage(String),
    Io(String),
}

impl From<Error> for Fail {
    fn from(e: Error) -> Self {
        Fail::Domain(e)
    }
}

impl From<std::io::Error> for Fail {
    fn from(e: std::io::Error) -> Self {
        Fail::Io(e.to_string())
    }
}

type CmdResult = Result<bool, Fail>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(n) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
            eprintln!("{e}");
            return ExitCode::from(2);
        }
    }
    match run(&cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(Fail::Domain(e)) => {
            println!("{}", json!({ "error": { "kind": e.kind(), "message": e.to_string() } }));
            ExitCode::from(1)
        }
        Err(Fail::Io(msg)) => {
            println!("{}", json!({ "error": { "kind": "io", "message": msg } }));
            ExitCode::from(1)
        }
        Err(Fail::Usage(msg)) => {
            eprintln!("error: {msg}\n\nFor more information, try '--help'.");
            ExitCode::from(2)
        }
    }
}

fn run(cli: &Cli) -> CmdResult {
    match &cli.cmd {
        Cmd::Eval(e) => emit(cli, &eval(e)?),
        Cmd::Gaunt { l1, m1, l2, m2, l } => {
            let rows: Vec<(i32, f64)> = match l {
                Some(l) => vec![(*l, gaunt(GauntQuery { l1: *l1, m1: *m1, l2: *l2, m2: *m2, l3: *l, m3: m1 + m2 }))],
                None => gaunt_string(*l1, *m1, *l2, *m2).to_vec(),
            };
            let mut out = String::from("l1,m1,l2,m2,l,value\n");
            for (l, v) in rows {
                out.push_str(&format!("{l1},{m1},{l2},{m2},{l},{v:.16e}\n"));
            }
            print!("{out}");
            Ok(true)
        }
        Cmd::Apply { op, target, target_lm, at, gamma_form } => {
            let op = parse_lm(op)?;
            let prof = parse_profile(target)?;
            let e = match target_lm {
                None => hobson_harmonic(op, &prof)?,
                Some(t) => {
                    let form = GammaRegistry::builtin().get(gamma_form)?;
                    apply_to_tensor_with(op, &TensorTerm::solid(prof.to_radial()?, parse_lm(t)?), form)?
                }
            };
            emit(cli, &tensor_json(&e, *at))
        }
        Cmd::Bfun(b) => emit(cli, &bfun(b)?),
        Cmd::Addition { nu, l, m, r, rp, lmax_outer, form, csv } => {
            let form = SolidAdditionForm::from_name(form)
                .map_err(|_| Fail::Usage(format!("unknown addition form '{form}' (expected alternate, derived or series)")))?;
            let idx = LMIndex::new(*l, *m)?;
            let pair = SplitPair::new(*r, *rp)?;
            let trunc = TruncationSpec::new(*lmax_outer, cli.tol.unwrap_or(1e-10), usize::MAX)?;
            let res = power_solid_addition_with(form, *nu, idx, pair, &trunc)?;
            let mut table = String::from("shell_l1,partial_value_re,partial_value_im,shell_contrib,est_error\n");
            for s in &res.shells {
                table.push_str(&format!(
                    "{},{:.16e},{:.16e},{:.16e},{:.16e}\n",
                    s.l,
                    s.partial_sum.re,
                    s.partial_sum.im,
                    s.contribution.norm(),
                    res.est_error_at(s.l).unwrap_or(f64::NAN)
                ));
            }
            let shells: Vec<Value> = res
                .shells
                .iter()
                .map(|s| {
                    json!({
                        "l1": s.l,
                        "contribution": ComplexValue::from(s.contribution),
                        "partial_sum": ComplexValue::from(s.partial_sum),
                        "est_error": res.est_error_at(s.l),
                    })
                })
                .collect();
            let out = json!({
                "nu": nu, "l": l, "m": m, "form": form.name(),
                "value": ComplexValue::from(res.value),
                "direct": ComplexValue::from(power_solid_direct(*nu, idx, pair.sum())),
                "outer_l_used": res.outer_l_used,
                "est_error": res.est_error,
                "converged": res.converged,
                "exact": res.exact,
                "shells": shells,
            });
            match csv.as_deref() {
                Some(p) if p == Path::new("-") => print!("{table}"),
                Some(p) => {
                    fs::write(p, table)?;
                    emit(cli, &out)?;
                }
                None => {
                    emit(cli, &out)?;
                }
            }
            Ok(res.converged)
        }
        Cmd::Verify { suite, lmax } => {
            let cfg = SuiteConfig { tol: cli.tol, seed: cli.seed, lmax: *lmax };
            let reg = SuiteRegistry::builtin();
            let (value, passed, line) = if suite == "all" {
                let r = reg.run_all(&cfg)?;
                let line = summary_line("all", r.summary.passed, r.summary.total, r.summary.max_rel_err, r.runtime_ms);
                (serde_json::to_value(&r), r.passed(), line)
            } else {
                let s = reg.get(suite).ok_or_else(|| {
                    Fail::Usage(format!("unknown suite '{suite}' (expected one of {}, all)", reg.names().join(", ")))
                })?;
                let r = run_suite(s, &cfg)?;
                let line = summary_line(&r.suite, r.summary.passed, r.summary.total, r.summary.max_rel_err, r.runtime_ms);
                (serde_json::to_value(&r), r.passed(), line)
            };
            let value = value.map_err(|e| Fail::Io(e.to_string()))?;
            match &cli.json {
                Some(path) => {
                    fs::write(path, to_pretty(&value))?;
                    println!("{line}");
                }
                None => println!("{}", to_pretty(&value)),
            }
            Ok(passed)
        }
        Cmd::Bench(b) => {
            let rows: Vec<BenchResult> = match b {
                BenchCmd::Gaunt { lmax } => {
                    let g = bench_gaunt_strings(*lmax, cli.seed)?;
                    eprintln!("speedup {:.2}", g.speedup);
                    vec![g.recurrence, g.racah]
                }
                BenchCmd::Addition { nu, l, ratio } => vec![bench_addition(*nu, *l, *ratio, cli.tol.unwrap_or(1e-10))?],
            };
            println!("name,n_items,total_ns,ns_per_item,checksum");
            for r in rows {
                println!("\"{}\",{},{},{:.6},{:.16e}", r.name, r.n_items, r.total_ns, r.ns_per_item, r.checksum);
            }
            Ok(true)
        }
    }
}

fn summary_line(suite: &str, passed: usize, total: usize, max_rel: f64, ms: u64) -> String {
    let verdict = if passed == total { "PASS" } else { "FAIL" };
    format!("{verdict} {suite}: {passed}/{total} cases, max rel err {max_rel:.3e}, {ms} ms")
}

fn to_pretty(v: &Value) -> String {
    serde_json::to_string_pretty(v).expect("JSON values always serialize")
}

/// Prints `v`, or writes it to --json and prints its path.
fn emit(cli: &Cli, v: &impl Serialize) -> CmdResult {
    let v = serde_json::to_value(v).map_err(|e| Fail::Io(e.to_string()))?;
    match &cli.json {
        Some(path) => {
            fs::write(path, to_pretty(&v))?;
            println!("wrote {}", path.display());
        }
        None => println!("{}", to_pretty(&v)),
    }
    Ok(true)
}

fn eval(e: &EvalCmd) -> Result<Value, Fail> {
    let v: ComplexValue = match e {
        EvalCmd::Ylm { lm, theta, phi, r } => {
            let idx = LMIndex::new(lm.l, lm.m)?;
            match (theta, phi, r) {
                (Some(t), Some(p), None) => ylm(idx, *t, *p),
                (None, None, Some(v)) if v.norm() > 0.0 => ylm_dir(idx, *v),
                (None, None, Some(_)) => return Err(Error::Singularity("direction undefined at the origin".into()).into()),
                _ => return Err(Fail::Usage("give either --theta and --phi, or --r".into())),
            }
            .into()
        }
        EvalCmd::Rsh { lm, r, dump_poly } => {
            let idx = LMIndex::new(lm.l, lm.m)?;
            if *dump_poly {
                return Ok(json!(regular_solid_poly(idx).dump()));
            }
            regular_solid(idx, *r).into()
        }
        EvalCmd::Zlm { lm, r } => irregular_solid(LMIndex::new(lm.l, lm.m)?, *r)?.into(),
        EvalCmd::Bfun { b, r } => b_value(&b.index()?, *r)?.into(),
        EvalCmd::Khat { nu, z } => khat(*nu, *z)?.into(),
    };
    Ok(json!(v))
}

fn bfun(b: &BfunCmd) -> Result<Value, Fail> {
    Ok(match b {
        BfunCmd::Value { b, r } => json!({ "value": ComplexValue::from(b_value(&b.index()?, *r)?) }),
        BfunCmd::Fourier { b, p } => json!({ "value": ComplexValue::from(b_fourier(&b.index()?, *p)) }),
        BfunCmd::Convolve { a, b, alpha, r } => {
            let (a, b) = (parse_nlm(a, *alpha)?, parse_nlm(b, *alpha)?);
            let e = convolve(&a, &b)?;
            let mut out = expansion_json(&e);
            if let Some(r) = r {
                out["value"] = json!(ComplexValue::from(e.evaluate(*r)?));
            }
            out
        }
        BfunCmd::Stgo { op, b } => expansion_json(&stgo_on_b(parse_lm(op)?, &b.index()?)?),
    })
}

fn expansion_json(e: &BExpansion) -> Value {
    let terms: Vec<Value> = e
        .terms
        .iter()
        .map(|t| json!({ "coeff": t.coeff, "n": t.index.n, "l": t.index.l, "m": t.index.m, "alpha": t.index.alpha }))
        .collect();
    json!({ "terms": terms, "distributional": e.distributional })
}

fn tensor_json(e: &TensorExpansion, at: Vec3) -> Value {
    let rho = at.norm();
    let terms: Vec<Value> = e
        .terms
        .iter()
        .map(|t| {
            json!({
                "l": t.angular.l, "m": t.angular.m,
                "radial_value": t.radial.evaluate(rho),
                "coeff": ComplexValue::from(t.coeff),
            })
        })
        .collect();
    json!({ "terms": terms, "total": ComplexValue::from(e.evaluate(at)) })
}

fn parse_ints<const N: usize>(s: &str, what: &str) -> Result<[i32; N], Fail> {
    let parts: Vec<i32> = s
        .split(',')
        .map(|p| p.trim().parse::<i32>())
        .collect::<Result<_, _>>()
        .map_err(|_| Fail::Usage(format!("{what} must be {N} comma-separated integers, got '{s}'")))?;
    parts.try_into().map_err(|_| Fail::Usage(format!("{what} must be {N} comma-separated integers, got '{s}'")))
}

fn parse_lm(s: &str) -> Result<LMIndex, Fail> {
    let [l, m] = parse_ints::<2>(s, "l,m")?;
    Ok(LMIndex::new(l, m)?)
}

fn parse_nlm(s: &str, alpha: f64) -> Result<BIndex, Fail> {
    let [n, l, m] = parse_ints::<3>(s, "n,l,m")?;
    Ok(BIndex::new(n, l, m, alpha)?)
}

fn parse_profile(s: &str) -> Result<RadialProfile, Fail> {
    let bad = || Fail::Usage(format!("profile must be gaussian:a, power:s, khat:n,a or yukawa:a, got '{s}'"));
    let (kind, args) = s.split_once(':').ok_or_else(bad)?;
    let nums: Vec<f64> = args.split(',').map(|p| p.trim().parse()).collect::<Result<_, _>>().map_err(|_| bad())?;
    let prof = match (kind, nums.as_slice()) {
        ("gaussian", [a]) => RadialProfile::Gaussian(*a),
        ("power", [s]) => RadialProfile::Power(*s),
        ("yukawa", [a]) => RadialProfile::YukawaLike(*a),
        ("khat", [n, a]) if n.fract() == 0.0 => RadialProfile::ReducedBesselHalf { n: *n as i64, alpha: *a },
        _ => return Err(bad()),
    };
    prof.validate()?;
    Ok(prof)
}
