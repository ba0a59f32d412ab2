//! Command-line front end: argument parsing, orchestration and file output.

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_complex::Complex;
use serde::{de::DeserializeOwned, Deserialize, Serialize};
use std::f64::consts::PI;
use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use crate::charfn::{char_closed, char_det, CharacteristicFunction, GhatFunction, Method};
use crate::config::{Format, RunConfig};
use crate::entire::{cartwright_product, effective_support_width, zero_density, EntireProbe, ZeroSet};
use crate::error::{Error, Result};
use crate::instability::{
    corollary_bound, parseval_bound_with, sine_type_interpolate, theorem32_bound, CorollaryOptions, CorollaryReport,
    ParsevalReport, SineTypeSystem, BoundReport,
};
use crate::model::{fourier_coefficients, Difference, PaleyWiener, Potential};
use crate::spectrum::{
    match_spectra, real_eigenvalues_with, shooting_eigenvalues_with, Matching, ScanOptions, ShootingOptions, Spectrum,
};

type C64 = Complex<f64>;

/// Environment variable capping the worker thread count.
pub const THREADS_ENV: &str = "FROZEN_SPECTRAL_THREADS";

#[derive(Debug, Parser)]
#[command(name = "frozen-spectral", version, about = "Spectral analysis of Sturm-Liouville operators with frozen arguments")]
struct Cli {
    /// Re-read every written file and check it reproduces the in-memory result.
    #[arg(long, global = true)]
    validate: bool,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Debug, Subcommand)]
enum Cmd {
    /// Characteristic function on a grid.
    Charfn {
        #[command(subcommand)]
        op: CharfnOp,
    },
    /// Eigenvalues by root scan, shooting, or both.
    Spectrum(SpectrumArgs),
    /// Spectral-difference function of a pair of potentials.
    Ghat {
        #[command(subcommand)]
        op: GhatOp,
    },
    /// Entire-function diagnostics of Delta (one potential) or Ghat (two).
    Entire {
        #[command(subcommand)]
        op: EntireOp,
    },
    /// Instability bounds for a pair of potentials.
    Bound {
        #[command(subcommand)]
        op: BoundOp,
    },
    /// Cross-checks the two eigenvalue pipelines and the two determinant forms.
    OracleCompare(OracleArgs),
    /// Sampling-series reconstruction of the transform of a potential.
    Interp(InterpArgs),
}

#[derive(Debug, Args)]
struct Common {
    #[arg(long)]
    config: PathBuf,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy)]
struct RhoGrid {
    start: f64,
    stop: f64,
    count: usize,
}

impl RhoGrid {
    fn points(&self) -> Vec<f64> {
        if self.count == 1 {
            return vec![self.start];
        }
        let step = (self.stop - self.start) / (self.count - 1) as f64;
        (0..self.count).map(|j| self.start + step * j as f64).collect()
    }
}

fn parse_grid(s: &str) -> std::result::Result<RhoGrid, String> {
    let parts: Vec<&str> = s.split(':').collect();
    if parts.len() != 3 {
        return Err("expected start:stop:count".into());
    }
    let num = |p: &str| p.trim().parse::<f64>().map_err(|e| format!("`{p}`: {e}"));
    let (start, stop) = (num(parts[0])?, num(parts[1])?);
    let count: usize = parts[2].trim().parse().map_err(|e| format!("`{}`: {e}", parts[2]))?;
    if count == 0 || !start.is_finite() || !stop.is_finite() {
        return Err("count must be positive and the ends finite".into());
    }
    Ok(RhoGrid { start, stop, count })
}

#[derive(Debug, Clone)]
struct FloatList(Vec<f64>);

fn parse_list(s: &str) -> std::result::Result<FloatList, String> {
    s.split(',')
        .map(|p| p.trim().parse::<f64>().map_err(|e| format!("`{p}`: {e}")))
        .collect::<std::result::Result<_, _>>()
        .map(FloatList)
}

#[derive(Debug, Args)]
struct GridArgs {
    #[command(flatten)]
    common: Common,
    #[arg(long = "rho-grid", value_parser = parse_grid, allow_hyphen_values = true)]
    rho_grid: RhoGrid,
    /// Constant imaginary part added to every grid point.
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    imag: f64,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum DetMethod {
    Det,
    Closed,
}

#[derive(Debug, Subcommand)]
enum CharfnOp {
    Eval {
        #[command(flatten)]
        grid: GridArgs,
        #[arg(long, value_enum, default_value_t = DetMethod::Det)]
        method: DetMethod,
        /// Index into `potentials`.
        #[arg(long, default_value_t = 0)]
        potential: usize,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, ValueEnum)]
enum SpecMethod {
    Scan,
    Shoot,
    Both,
}

#[derive(Debug, Args)]
struct SpectrumArgs {
    #[command(flatten)]
    common: Common,
    #[arg(long)]
    count: usize,
    #[arg(long, value_enum, default_value_t = SpecMethod::Scan)]
    method: SpecMethod,
    #[arg(long, default_value_t = 0)]
    potential: usize,
}

#[derive(Debug, Subcommand)]
enum GhatOp {
    Eval(GridArgs),
    /// Both sides of the L2 norm chain.
    Parseval(Common),
}

#[derive(Debug, Subcommand)]
enum EntireOp {
    /// CSV theta,h
    Indicator {
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value_t = 16)]
        thetas: usize,
        #[arg(long = "r-list", value_parser = parse_list, default_value = "10,20,30,40,50,60,70,80,90,100")]
        r_list: FloatList,
    },
    /// CSV r,count
    Density {
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value_t = 50.0)]
        radius: f64,
        #[arg(long, default_value_t = 10.0)]
        height: f64,
        #[arg(long, default_value_t = 10)]
        points: usize,
    },
    /// CSV r,width for the transform of the potential (or of the difference).
    Support {
        #[command(flatten)]
        common: Common,
        #[arg(long = "r-max", default_value_t = 200.0)]
        r_max: f64,
    },
    /// CSV re_rho,im_rho,re_f,im_f,re_prod,im_prod
    Cartwright {
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value_t = 100.0)]
        radius: f64,
        #[arg(long, default_value_t = 10.0)]
        height: f64,
        #[arg(long = "rho-grid", value_parser = parse_grid, allow_hyphen_values = true, default_value = "-10:10:201")]
        rho_grid: RhoGrid,
    },
}

#[derive(Debug, Subcommand)]
enum BoundOp {
    Thm32 {
        #[command(flatten)]
        common: Common,
        /// Defaults to `numeric.h_probe`.
        #[arg(long)]
        h: Option<f64>,
        #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
        x: f64,
    },
    Corollary {
        #[command(flatten)]
        common: Common,
        #[arg(long, value_parser = parse_list, default_value = "1,0.5,0.25")]
        sweep: FloatList,
        #[arg(long)]
        h: Option<f64>,
        #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
        x: f64,
        #[arg(long, default_value_t = 30.0)]
        radius: f64,
        #[arg(long, default_value_t = 10.0)]
        height: f64,
    },
}

#[derive(Debug, Args)]
struct OracleArgs {
    #[command(flatten)]
    common: Common,
    #[arg(long, default_value_t = 15)]
    count: usize,
    #[arg(long = "rho-grid", value_parser = parse_grid, allow_hyphen_values = true, default_value = "0.1:20:200")]
    rho_grid: RhoGrid,
    #[arg(long, default_value_t = 0.5, allow_hyphen_values = true)]
    imag: f64,
    #[arg(long, default_value_t = 0)]
    potential: usize,
}

#[derive(Debug, Args)]
struct InterpArgs {
    #[command(flatten)]
    common: Common,
    /// Truncation `|k| <= k_max`; defaults to `numeric.K_fourier`.
    #[arg(long = "k-max")]
    k_max: Option<usize>,
    #[arg(long = "rho-grid", value_parser = parse_grid, allow_hyphen_values = true, default_value = "-5:5:101")]
    rho_grid: RhoGrid,
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    imag: f64,
    #[arg(long, default_value_t = 0)]
    potential: usize,
}

/// Both eigenvalue pipelines side by side.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpectrumPair {
    pub scan: Spectrum<f64>,
    pub shoot: Spectrum<f64>,
    pub matching: Matching<f64>,
    /// Largest `|lambda_scan - lambda_shoot|` over the common prefix.
    pub max_lambda_gap: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OracleReport {
    pub count: usize,
    pub max_lambda_gap: f64,
    pub max_lambda_gap_index: usize,
    /// `max |det - closed| / max(|det|, |closed|)` over the grid.
    pub det_closed_max_rel: f64,
    pub grid_points: usize,
    pub warnings: Vec<String>,
}

struct Table {
    columns: &'static [&'static str],
    rows: Vec<Vec<f64>>,
    notes: Vec<String>,
}

struct Ctx {
    validate: bool,
}

/// Runs the command line `argv` (program name first) and returns the exit
/// code: 0 on success, 1 on invalid input, 2 on numerical failure.
pub fn run<I, S>(argv: I) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<OsString> + Clone,
{
    let _ = env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).try_init();
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    if let Err(e) = configure_threads() {
        eprintln!("error: {e}");
        return 1;
    }
    let ctx = Ctx { validate: cli.validate };
    match dispatch(&ctx, cli.cmd) {
        Ok(path) => {
            eprintln!("wrote {}", path.display());
            0
        }
        Err(e) => {
            eprintln!("error: {e}");
            if e.is_validation() {
                1
            } else {
                2
            }
        }
    }
}

fn configure_threads() -> Result<()> {
    let Ok(v) = std::env::var(THREADS_ENV) else {
        return Ok(());
    };
    let n: usize = v
        .trim()
        .parse()
        .ok()
        .filter(|&n| n > 0)
        .ok_or_else(|| Error::invalid(THREADS_ENV, format!("expected a positive integer, got `{v}`")))?;
    // a pool built earlier in the same process keeps its size
    let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    Ok(())
}

fn dispatch(ctx: &Ctx, cmd: Cmd) -> Result<PathBuf> {
    match cmd {
        Cmd::Charfn { op: CharfnOp::Eval { grid, method, potential } } => {
            let cfg = RunConfig::load(&grid.common.config)?;
            let q = pick(&cfg, potential)?;
            let m = match method {
                DetMethod::Det => Method::Determinant,
                DetMethod::Closed => Method::ClosedForm,
            };
            let f = CharacteristicFunction::new(q, cfg.problem()?, m).with_order(cfg.numeric.quad_panels);
            let table = grid_table(&grid, &|z| f.eval(z))?;
            emit_csv(ctx, &cfg, &grid.common, "charfn eval", "grid.csv", table)
        }
        Cmd::Spectrum(a) => spectrum(ctx, a),
        Cmd::Ghat { op: GhatOp::Eval(grid) } => {
            let cfg = RunConfig::load(&grid.common.config)?;
            let g = ghat_fn(&cfg)?;
            let table = grid_table(&grid, &|z| g.eval(z))?;
            emit_csv(ctx, &cfg, &grid.common, "ghat eval", "ghat.csv", table)
        }
        Cmd::Ghat { op: GhatOp::Parseval(common) } => {
            let cfg = RunConfig::load(&common.config)?;
            let qs = cfg.expect_potentials(2)?;
            let r: ParsevalReport<f64> =
                parseval_bound_with(&qs[0], &qs[1], &cfg.problem()?, cfg.numeric.k_fourier, cfg.numeric.t_cutoff)?;
            emit_json(ctx, &cfg, &common, "parseval.json", &r)
        }
        Cmd::Entire { op } => entire(ctx, op),
        Cmd::Bound { op } => bound(ctx, op),
        Cmd::OracleCompare(a) => oracle(ctx, a),
        Cmd::Interp(a) => interp(ctx, a),
    }
}

fn pick(cfg: &RunConfig, index: usize) -> Result<Potential<f64>> {
    let mut qs = cfg.build_potentials()?;
    if index >= qs.len() {
        return Err(Error::invalid("--potential", format!("index {index} but only {} potential(s) given", qs.len())));
    }
    Ok(qs.swap_remove(index))
}

fn ghat_fn(cfg: &RunConfig) -> Result<GhatFunction<f64>> {
    let mut qs = cfg.expect_potentials(2)?;
    let q2 = qs.pop().expect("two potentials");
    let q1 = qs.pop().expect("two potentials");
    Ok(GhatFunction::new(q1, q2, cfg.problem()?).with_order(cfg.numeric.quad_panels))
}

/// `Delta` for one potential, `Ghat` for two.
enum Target {
    Delta(CharacteristicFunction<f64>),
    Ghat(GhatFunction<f64>),
}

impl Target {
    fn from_config(cfg: &RunConfig) -> Result<Self> {
        let config = cfg.problem()?;
        let mut qs = cfg.build_potentials()?;
        Ok(if qs.len() == 1 {
            let q = qs.pop().expect("one potential");
            Target::Delta(CharacteristicFunction::new(q, config, Method::Green).with_order(cfg.numeric.quad_panels))
        } else {
            Target::Ghat(ghat_fn(cfg)?)
        })
    }

    fn value(&self, z: C64) -> C64 {
        match self {
            Target::Delta(f) => f.value(z),
            Target::Ghat(g) => g.value(z),
        }
    }

    fn name(&self) -> &'static str {
        match self {
            Target::Delta(_) => "Delta",
            Target::Ghat(_) => "Ghat",
        }
    }
}

fn grid_table(grid: &GridArgs, f: &(dyn Fn(C64) -> Result<C64> + Sync)) -> Result<Table> {
    use rayon::prelude::*;
    let pts = grid.rho_grid.points();
    let vals: Vec<C64> = pts
        .par_iter()
        .map(|&x| f(C64::new(x, grid.imag)))
        .collect::<Result<_>>()?;
    Ok(Table {
        columns: &["re_rho", "im_rho", "re_value", "im_value"],
        rows: pts.iter().zip(&vals).map(|(&x, v)| vec![x, grid.imag, v.re, v.im]).collect(),
        notes: Vec::new(),
    })
}

fn spectrum(ctx: &Ctx, a: SpectrumArgs) -> Result<PathBuf> {
    let cfg = RunConfig::load(&a.common.config)?;
    let q = pick(&cfg, a.potential)?;
    let config = cfg.problem()?;
    let scan = || {
        let opts = ScanOptions { step: cfg.numeric.scan_step, ..ScanOptions::default() };
        real_eigenvalues_with(&q, &config, a.count, &opts)
    };
    let shoot = || {
        let opts = ShootingOptions { max_step: cfg.numeric.rk4_step, scan_step: cfg.numeric.scan_step };
        shooting_eigenvalues_with(&q, &config, a.count, &opts)
    };
    let report = |s: &Spectrum<f64>| {
        for w in &s.warnings {
            log::warn!("{w}");
        }
    };
    match a.method {
        SpecMethod::Scan => {
            let s = scan()?;
            report(&s);
            emit_json(ctx, &cfg, &a.common, "spec.json", &s)
        }
        SpecMethod::Shoot => {
            let s = shoot()?;
            report(&s);
            emit_json(ctx, &cfg, &a.common, "spec.json", &s)
        }
        SpecMethod::Both => {
            let (s1, s2) = (scan()?, shoot()?);
            report(&s1);
            report(&s2);
            let (gap, _) = lambda_gap(&s1, &s2);
            let pair = SpectrumPair { matching: match_spectra(&s1, &s2), scan: s1, shoot: s2, max_lambda_gap: gap };
            emit_json(ctx, &cfg, &a.common, "spec.json", &pair)
        }
    }
}

fn lambda_gap(a: &Spectrum<f64>, b: &Spectrum<f64>) -> (f64, usize) {
    a.lambdas
        .iter()
        .zip(&b.lambdas)
        .map(|(x, y)| (x - y).abs())
        .enumerate()
        .fold((0.0, 0), |(g, k), (i, d)| if d > g { (d, i) } else { (g, k) })
}

fn entire(ctx: &Ctx, op: EntireOp) -> Result<PathBuf> {
    match op {
        EntireOp::Indicator { common, thetas, r_list } => {
            let cfg = RunConfig::load(&common.config)?;
            if thetas == 0 {
                return Err(Error::invalid("--thetas", "must be positive"));
            }
            let t = Target::from_config(&cfg)?;
            let sigma = PI + cfg.problem()?.last_frozen();
            let angles: Vec<f64> = (0..thetas).map(|j| -PI + 2.0 * PI * j as f64 / thetas as f64).collect();
            let probe = EntireProbe::new(|z| t.value(z), r_list.0, angles, sigma)?;
            let fits = probe.indicators()?;
            let table = Table {
                columns: &["theta", "h"],
                rows: fits.iter().map(|f| vec![f.theta, f.h]).collect(),
                notes: vec![format!("function: {}, type estimate {}", t.name(), probe.function_type()?)],
            };
            emit_csv(ctx, &cfg, &common, "entire indicator", "out.csv", table)
        }
        EntireOp::Density { common, radius, height, points } => {
            let cfg = RunConfig::load(&common.config)?;
            if points == 0 {
                return Err(Error::invalid("--points", "must be positive"));
            }
            let t = Target::from_config(&cfg)?;
            let zs = ZeroSet::collect(&|z| t.value(z), radius, height, true)?;
            let rows = (1..=points)
                .map(|j| {
                    let r = radius * j as f64 / points as f64;
                    vec![r, zs.count_within(r) as f64]
                })
                .collect();
            let table = Table {
                columns: &["r", "count"],
                rows,
                notes: vec![format!(
                    "function: {}, strip height {height}, density at r = {radius}: {}",
                    t.name(),
                    zero_density(&zs, radius)?
                )],
            };
            emit_csv(ctx, &cfg, &common, "entire density", "out.csv", table)
        }
        EntireOp::Support { common, r_max } => {
            let cfg = RunConfig::load(&common.config)?;
            let qs = cfg.build_potentials()?;
            let est = if qs.len() == 1 {
                let pw = PaleyWiener::new(&qs[0]);
                effective_support_width(&|z| pw.eval(z), r_max)?
            } else {
                let pw = PaleyWiener::new(Difference { q1: &qs[0], q2: &qs[1] });
                effective_support_width(&|z| pw.eval(z), r_max)?
            };
            let table = Table {
                columns: &["r", "width"],
                rows: est.radii.iter().zip(&est.counts).map(|(&r, &n)| vec![r, PI * n as f64 / r]).collect(),
                notes: vec![format!("extrapolated width {}", est.width)],
            };
            emit_csv(ctx, &cfg, &common, "entire support", "out.csv", table)
        }
        EntireOp::Cartwright { common, radius, height, rho_grid } => {
            let cfg = RunConfig::load(&common.config)?;
            let t = Target::from_config(&cfg)?;
            let f = |z: C64| t.value(z);
            let zs = ZeroSet::collect(&f, radius, height, true)?;
            let c = f(C64::new(0.0, 0.0));
            let mut rows = Vec::with_capacity(rho_grid.count);
            for x in rho_grid.points() {
                let z = C64::new(x, 0.0);
                let (v, p) = (f(z), cartwright_product(&zs, c, z)?);
                rows.push(vec![x, 0.0, v.re, v.im, p.re, p.im]);
            }
            let table = Table {
                columns: &["re_rho", "im_rho", "re_f", "im_f", "re_prod", "im_prod"],
                rows,
                notes: vec![format!("function: {}, {} zeros with |z| <= {radius}", t.name(), zs.len())],
            };
            emit_csv(ctx, &cfg, &common, "entire cartwright", "out.csv", table)
        }
    }
}

fn bound(ctx: &Ctx, op: BoundOp) -> Result<PathBuf> {
    match op {
        BoundOp::Thm32 { common, h, x } => {
            let cfg = RunConfig::load(&common.config)?;
            let qs = cfg.expect_potentials(2)?;
            let h = h.unwrap_or(cfg.numeric.h_probe);
            let r: BoundReport<f64> = theorem32_bound(&qs[0], &qs[1], &cfg.problem()?, h, x, cfg.numeric.k_fourier)?;
            emit_json(ctx, &cfg, &common, "report.json", &r)
        }
        BoundOp::Corollary { common, sweep, h, x, radius, height } => {
            let cfg = RunConfig::load(&common.config)?;
            let qs = cfg.expect_potentials(2)?;
            let h = h.unwrap_or(cfg.numeric.h_probe);
            let opts = CorollaryOptions { sweep: sweep.0, x, radius, height };
            let r: CorollaryReport<f64> =
                corollary_bound(&qs[0], &qs[1], &cfg.problem()?, h, cfg.numeric.k_fourier, &opts)?;
            emit_json(ctx, &cfg, &common, "report.json", &r)
        }
    }
}

fn oracle(ctx: &Ctx, a: OracleArgs) -> Result<PathBuf> {
    use rayon::prelude::*;
    let cfg = RunConfig::load(&a.common.config)?;
    let q = pick(&cfg, a.potential)?;
    let config = cfg.problem()?;
    let scan = real_eigenvalues_with(
        &q,
        &config,
        a.count,
        &ScanOptions { step: cfg.numeric.scan_step, ..ScanOptions::default() },
    )?;
    let shoot = shooting_eigenvalues_with(
        &q,
        &config,
        a.count,
        &ShootingOptions { max_step: cfg.numeric.rk4_step, scan_step: cfg.numeric.scan_step },
    )?;
    let (gap, idx) = lambda_gap(&scan, &shoot);
    let pts = a.rho_grid.points();
    let rel = pts
        .par_iter()
        .map(|&x| {
            let z = C64::new(x, a.imag);
            let (d, c) = (char_det(&q, &config, z)?, char_closed(&q, &config, z)?);
            let scale = d.norm().max(c.norm());
            Ok(if scale == 0.0 { 0.0 } else { (d - c).norm() / scale })
        })
        .collect::<Result<Vec<f64>>>()?
        .into_iter()
        .fold(0.0, f64::max);
    let mut warnings = scan.warnings.clone();
    warnings.extend(shoot.warnings.iter().cloned());
    let report = OracleReport {
        count: a.count,
        max_lambda_gap: gap,
        max_lambda_gap_index: idx,
        det_closed_max_rel: rel,
        grid_points: pts.len(),
        warnings,
    };
    emit_json(ctx, &cfg, &a.common, "oracle.json", &report)
}

fn interp(ctx: &Ctx, a: InterpArgs) -> Result<PathBuf> {
    let cfg = RunConfig::load(&a.common.config)?;
    let q = pick(&cfg, a.potential)?;
    let k_max = a.k_max.unwrap_or(cfg.numeric.k_fourier);
    if k_max == 0 {
        return Err(Error::invalid("--k-max", "must be positive"));
    }
    // F(q)(k) = c_k, so the samples at the zeros of sin(pi z) are the Fourier coefficients
    let coeffs = fourier_coefficients(&q, k_max)?;
    let ks: Vec<i64> = (-(k_max as i64)..=k_max as i64).collect();
    let zeros = ks.iter().map(|&k| C64::new(k as f64, 0.0)).collect();
    let derivs = ks.iter().map(|&k| C64::new(if k % 2 == 0 { PI } else { -PI }, 0.0)).collect();
    let sys = SineTypeSystem::with_derivatives(|z: C64| (z * PI).sin(), zeros, derivs, PI)?;
    let c: Vec<C64> = ks.iter().map(|&k| coeffs.get(k)).collect();
    let pw = PaleyWiener::new(&q);
    let mut rows = Vec::with_capacity(a.rho_grid.count);
    let mut worst: f64 = 0.0;
    for x in a.rho_grid.points() {
        let z = C64::new(x, a.imag);
        let (s, d) = (sine_type_interpolate(&sys, &c, z)?, pw.eval(z));
        worst = worst.max((s - d).norm());
        rows.push(vec![x, a.imag, s.re, s.im, d.re, d.im]);
    }
    let table = Table {
        columns: &["re_rho", "im_rho", "re_interp", "im_interp", "re_direct", "im_direct"],
        rows,
        notes: vec![format!("|k| <= {k_max}, max |interp - direct| = {worst:e}")],
    };
    emit_csv(ctx, &cfg, &a.common, "interp", "interp.csv", table)
}

fn output_path(cfg: &RunConfig, common: &Common, want: Format, default: &str) -> Result<PathBuf> {
    if let Some(out) = &common.out {
        return Ok(out.clone());
    }
    match &cfg.output {
        Some(o) if o.format != want => Err(Error::invalid(
            "output.format",
            format!("this subcommand writes {}", if want == Format::Csv { "csv" } else { "json" }),
        )),
        Some(o) => Ok(PathBuf::from(&o.path)),
        None => Ok(PathBuf::from(default)),
    }
}

/// Writes through a sibling temporary file and renames it into place.
fn write_atomic(path: &Path, bytes: &[u8]) -> Result<()> {
    let dir = path.parent().filter(|p| !p.as_os_str().is_empty()).unwrap_or(Path::new("."));
    let name = path
        .file_name()
        .ok_or_else(|| Error::invalid("--out", format!("`{}` is not a file path", path.display())))?;
    let tmp = dir.join(format!(".{}.{}.tmp", name.to_string_lossy(), std::process::id()));
    let res = (|| {
        let mut f = std::fs::File::create(&tmp)?;
        f.write_all(bytes)?;
        f.sync_all()?;
        std::fs::rename(&tmp, path)
    })();
    if res.is_err() {
        let _ = std::fs::remove_file(&tmp);
    }
    Ok(res?)
}

/// Shortest round-trip text; exponent form outside `[1e-5, 1e16)`.
fn number(v: f64) -> String {
    let a = v.abs();
    if a != 0.0 && a.is_finite() && !(1e-5..1e16).contains(&a) {
        format!("{v:e}")
    } else {
        v.to_string()
    }
}

fn emit_csv(ctx: &Ctx, cfg: &RunConfig, common: &Common, command: &str, default: &str, table: Table) -> Result<PathBuf> {
    let path = output_path(cfg, common, Format::Csv, default)?;
    let mut buf = Vec::new();
    writeln!(buf, "# frozen-spectral {} {command}", env!("CARGO_PKG_VERSION"))?;
    for line in cfg.header_lines().iter().chain(&table.notes) {
        writeln!(buf, "# {line}")?;
    }
    {
        let mut w = csv::Writer::from_writer(&mut buf);
        w.write_record(table.columns)?;
        for row in &table.rows {
            w.write_record(row.iter().map(|&v| number(v)))?;
        }
        w.flush()?;
    }
    write_atomic(&path, &buf)?;
    if ctx.validate {
        validate_csv(&path, &table)?;
    }
    Ok(path)
}

fn emit_json<T: Serialize + DeserializeOwned>(
    ctx: &Ctx,
    cfg: &RunConfig,
    common: &Common,
    default: &str,
    value: &T,
) -> Result<PathBuf> {
    let path = output_path(cfg, common, Format::Json, default)?;
    let mut text = serde_json::to_string_pretty(value)?;
    text.push('\n');
    write_atomic(&path, text.as_bytes())?;
    if ctx.validate {
        let back: T = serde_json::from_str(&std::fs::read_to_string(&path)?)?;
        // compared as JSON trees: fields skipped by serde do not survive the trip
        if serde_json::to_value(&back)? != serde_json::to_value(value)? {
            return Err(mismatch(&path));
        }
    }
    Ok(path)
}

fn mismatch(path: &Path) -> Error {
    Error::invalid("--validate", format!("{} does not reproduce the computed result", path.display()))
}

fn validate_csv(path: &Path, table: &Table) -> Result<()> {
    let mut r = csv::ReaderBuilder::new().comment(Some(b'#')).from_path(path)?;
    if r.headers()?.iter().ne(table.columns.iter().copied()) {
        return Err(mismatch(path));
    }
    let mut n = 0;
    for (rec, row) in r.records().zip(&table.rows) {
        let rec = rec?;
        let same = rec.len() == row.len()
            && rec.iter().zip(row).all(|(s, &v)| s.parse::<f64>().is_ok_and(|p| p == v || (p.is_nan() && v.is_nan())));
        if !same {
            return Err(mismatch(path));
        }
        n += 1;
    }
    if n != table.rows.len() {
        return Err(mismatch(path));
    }
    Ok(())
}
