//! Grid engine, figure presets and serialization.
//!
//! Grid points are independent; they are evaluated in any order (in parallel
//! with the `parallel` feature) and reassembled in row-major order, so output
//! never depends on the schedule.

pub mod config;
pub mod output;
pub mod presets;

use std::collections::{BTreeMap, HashMap};
use std::fs::File;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::gaussian::{
    build_theory, charge_sector_theory, eigen_velocities, exponent_set, stability, stiffness_matrices,
    GaussianTheory, Stability,
};
use crate::hydro::{fp_coupling_smallk, luttinger_from_hubbard, u_bf_from_coupling};
use crate::lattice::{hubbard_from_sites, LatticeSite, LatticeSolver, OpticalSetup};
use crate::phases::{backscattering_amplitude, classify_spinful, classify_spinless, spin_half_exponents, spin_sector};
use crate::warning::{self, Warning};

pub use config::{parse_config_text, Axis, Format, Mode, OutputSpec, ParamSet, SweepConfig};
pub use output::GridResult;
pub use presets::{figure_preset, PRESET_NAMES};

/// How grid points are scheduled. Without the `parallel` feature both
/// variants run sequentially.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Execution {
    Sequential,
    Parallel,
}

impl Default for Execution {
    fn default() -> Self {
        if cfg!(feature = "parallel") {
            Execution::Parallel
        } else {
            Execution::Sequential
        }
    }
}

impl Execution {
    fn map<T: Sync, R: Send>(self, items: &[T], f: impl Fn(&T) -> R + Sync + Send) -> Vec<R> {
        match self {
            #[cfg(feature = "parallel")]
            Execution::Parallel => {
                use rayon::prelude::*;
                items.par_iter().map(f).collect()
            }
            _ => items.iter().map(f).collect(),
        }
    }
}

/// Outcome of one grid point. Numeric columns absent from `values` are
/// undefined and serialize as empty fields.
#[derive(Debug, Clone, PartialEq)]
pub struct PointResult {
    pub axes: Vec<(String, f64)>,
    pub values: BTreeMap<&'static str, f64>,
    pub stability: Option<Stability>,
    pub phase: String,
    pub regime: Option<u8>,
    pub warnings: Vec<Warning>,
    /// Set when the point failed; the rest of the grid is unaffected.
    pub message: Option<String>,
    pub spinful: bool,
}

impl PointResult {
    fn new(axes: Vec<(String, f64)>) -> Self {
        PointResult {
            axes,
            values: BTreeMap::new(),
            stability: None,
            phase: String::new(),
            regime: None,
            warnings: Vec::new(),
            message: None,
            spinful: false,
        }
    }

    pub fn get(&self, column: &str) -> Option<f64> {
        self.values.get(column).copied()
    }

    pub fn is_error(&self) -> bool {
        self.message.is_some()
    }

    fn set(&mut self, column: &'static str, value: f64) {
        self.values.insert(column, value);
    }

    fn set_opt(&mut self, column: &'static str, value: Option<f64>) {
        if let Some(v) = value {
            self.set(column, v);
        }
    }
}

/// Supplies solved lattice sites for a longitudinal depth.
trait SiteSource: Sync {
    fn site(&self, depth: f64) -> Result<Arc<LatticeSite>>;
}

impl SiteSource for LatticeSolver {
    fn site(&self, depth: f64) -> Result<Arc<LatticeSite>> {
        LatticeSolver::site(self, depth).map(Arc::new)
    }
}

/// Sites solved once per distinct depth of a grid. Failed depths are not
/// cached and fall through to the solver so the point reports the error.
struct SiteCache {
    solver: LatticeSolver,
    sites: HashMap<u64, Arc<LatticeSite>>,
}

impl SiteCache {
    fn build(solver: LatticeSolver, depths: &[f64], exec: Execution) -> Self {
        let mut unique: Vec<f64> = depths.to_vec();
        unique.sort_by(f64::total_cmp);
        unique.dedup_by(|a, b| a.to_bits() == b.to_bits());
        let solved = exec.map(&unique, |&d| (d.to_bits(), solver.site(d).ok()));
        let sites = solved
            .into_iter()
            .filter_map(|(k, s)| s.map(|s| (k, Arc::new(s))))
            .collect();
        SiteCache { solver, sites }
    }
}

impl SiteSource for SiteCache {
    fn site(&self, depth: f64) -> Result<Arc<LatticeSite>> {
        match self.sites.get(&depth.to_bits()) {
            Some(s) => Ok(Arc::clone(s)),
            None => SiteSource::site(&self.solver, depth),
        }
    }
}

fn require(params: &ParamSet, name: &str) -> Result<f64> {
    params
        .get(name)
        .copied()
        .ok_or_else(|| Error::param(name, "missing"))
}

fn require_positive(params: &ParamSet, name: &str) -> Result<f64> {
    let v = require(params, name)?;
    if v > 0.0 {
        Ok(v)
    } else {
        Err(Error::param(name, format!("must be > 0, got {v}")))
    }
}

/// Effective-theory inputs shared by all modes.
struct Effective {
    v_f: f64,
    v_b: f64,
    k_b: f64,
    u_bf: f64,
    big_g: f64,
    u_updown: Option<f64>,
}

fn effective_from_params(params: &ParamSet, spinful: bool) -> Result<Effective> {
    let v_f = require_positive(params, "v_f")?;
    let v_b = require_positive(params, "v_b")?;
    let k_b = require_positive(params, "K_b")?;
    let big_g = require(params, "G")?;
    if big_g < 0.0 {
        return Err(Error::param("G", format!("must be >= 0, got {big_g}")));
    }
    let u_bf = match (params.get("g"), params.get("U_bf")) {
        (Some(&g), None) => u_bf_from_coupling(g, k_b),
        (None, Some(&u)) => u,
        _ => return Err(Error::param("g", "exactly one of g and U_bf is required")),
    };
    let u_updown = if spinful { Some(require(params, "U_updown")?) } else { None };
    Ok(Effective { v_f, v_b, k_b, u_bf, big_g, u_updown })
}

fn setup_from_params(params: &ParamSet) -> Result<OpticalSetup> {
    Ok(OpticalSetup {
        s_b_par: require(params, "s_b_par")?,
        s_b_perp: require(params, "s_b_perp")?,
        s_f_par: require(params, "s_f_par")?,
        s_f_perp: require(params, "s_f_perp")?,
        a_bb: require(params, "a_bb")?,
        a_bf: require(params, "a_bf")?,
        a_ff: params.get("a_ff").copied(),
        nu_b: require(params, "nu_b")?,
        nu_f: require(params, "nu_f")?,
        spinful: params.get("spinful").is_some_and(|&s| s != 0.0),
    })
}

fn is_spinful(mode: Mode, params: &ParamSet) -> bool {
    match mode {
        Mode::Microscopic => params.get("spinful").is_some_and(|&s| s != 0.0),
        Mode::EffectiveSpinless => false,
        Mode::EffectiveSpinful => true,
    }
}

fn evaluate(mode: Mode, axes: Vec<(String, f64)>, params: &ParamSet, sites: &dyn SiteSource) -> PointResult {
    let mut row = PointResult::new(axes);
    row.spinful = is_spinful(mode, params);
    if let Err(e) = evaluate_into(mode, params, sites, &mut row) {
        row.message = Some(e.to_string());
        row.phase = "error".into();
        row.regime = None;
    }
    warning::normalize(&mut row.warnings);
    row
}

fn evaluate_into(mode: Mode, params: &ParamSet, sites: &dyn SiteSource, row: &mut PointResult) -> Result<()> {
    for name in params.keys() {
        if !mode.accepts(name) {
            return Err(Error::param(name.as_str(), format!("not valid in {mode} mode")));
        }
    }
    let spinful = row.spinful;
    let eff = match mode {
        Mode::Microscopic => {
            let setup = setup_from_params(params)?;
            let boson = sites.site(setup.s_b_par)?;
            let fermion = sites.site(setup.s_f_par)?;
            let h = hubbard_from_sites(&setup, &boson, &fermion)?;
            row.warnings.extend(&h.warnings);
            row.set("t_b", h.t_b);
            row.set("t_f", h.t_f);
            row.set("U_b", h.u_b);
            row.set("U_bf", h.u_bf);
            let u_updown = match (spinful, h.u_updown, params.get("U_updown")) {
                (false, _, _) => None,
                (true, _, Some(&u)) => Some(u),
                (true, Some(u), None) => Some(u),
                (true, None, None) => {
                    return Err(Error::param("a_ff", "spin-1/2 mixtures need a_ff or U_updown"))
                }
            };
            row.set_opt("U_updown", u_updown);
            let l = luttinger_from_hubbard(&h, spinful)?;
            row.warnings.extend(&l.warnings);
            row.set("k_f", l.k_f);
            row.set("v_f", l.v_f);
            row.set("gamma", l.gamma);
            row.set("v_b", l.v_b);
            row.set("K_b", l.k_b);
            row.set("g", l.g);
            row.set("G", l.big_g);
            Effective {
                v_f: l.v_f,
                v_b: l.v_b,
                k_b: l.k_b,
                u_bf: l.u_bf,
                big_g: l.big_g,
                u_updown,
            }
        }
        Mode::EffectiveSpinless | Mode::EffectiveSpinful => {
            let eff = effective_from_params(params, spinful)?;
            row.set("U_bf", eff.u_bf);
            row.set_opt("U_updown", eff.u_updown);
            row.set("v_f", eff.v_f);
            row.set("v_b", eff.v_b);
            row.set("K_b", eff.k_b);
            row.set("g", fp_coupling_smallk(eff.u_bf, eff.k_b));
            row.set("G", eff.big_g);
            if eff.v_b / eff.v_f < 2.0 {
                row.warnings.push(Warning::SlowPhonons);
            }
            eff
        }
    };

    match eff.u_updown {
        None => evaluate_spinless(&eff, row),
        Some(u_updown) => evaluate_spinful(&eff, u_updown, row),
    }
}

fn record_modes(theory: &GaussianTheory, row: &mut PointResult) -> Stability {
    let spectrum = eigen_velocities(theory);
    let s = stability(theory);
    if spectrum.v_a.is_finite() {
        row.set("v_a", spectrum.v_a);
    }
    if s.is_stable() {
        row.set("v_A", spectrum.v_a_soft);
    }
    row.stability = Some(s);
    s
}

fn record_stiffness(e: &crate::gaussian::ExponentSet, row: &mut PointResult) {
    row.set("K_beta", e.k_beta);
    row.set("inv_K_gamma", e.inv_k_gamma);
    row.set("inv_K_eps", e.inv_k_eps);
    row.set("inv_K_gammaeps", e.inv_k_gammaeps);
    row.set("lambda_c", e.lambda_c);
    row.set("eta_c", e.eta_c);
}

fn evaluate_spinless(eff: &Effective, row: &mut PointResult) -> Result<()> {
    let theory = build_theory(eff.v_f, eff.v_b, eff.k_b, eff.u_bf, eff.big_g);
    let s = record_modes(&theory, row);
    let exponents = if s.is_stable() {
        let e = exponent_set(&stiffness_matrices(&theory)?);
        record_stiffness(&e, row);
        row.set("alpha_CDW", e.alpha_cdw);
        row.set("alpha_fPP", e.alpha_fpp);
        row.set("alpha_BFP", e.alpha_bfp);
        row.set("alpha_bP", e.alpha_bp);
        row.set("alpha_BB", e.alpha_bb);
        Some(e)
    } else {
        None
    };
    let phase = classify_spinless(exponents.as_ref(), s);
    row.phase = phase.label;
    Ok(())
}

fn evaluate_spinful(eff: &Effective, u_updown: f64, row: &mut PointResult) -> Result<()> {
    let theory = charge_sector_theory(eff.v_f, eff.v_b, eff.k_b, eff.u_bf, eff.big_g, u_updown);
    let s = record_modes(&theory, row);
    row.set("g1perp", backscattering_amplitude(u_updown, eff.big_g));
    let spin = spin_sector(u_updown, eff.big_g, eff.v_f);
    if let Ok(sp) = &spin {
        row.set("K_sigma", sp.k_sigma);
    }
    let exponents = if s.is_stable() {
        let spin = spin?;
        let e = spin_half_exponents(&stiffness_matrices(&theory)?, &spin);
        record_stiffness(&e.charge, row);
        row.set_opt("alpha_SDW", e.alpha_sdw);
        row.set("alpha_CDW", e.alpha_cdw);
        row.set("alpha_WC", e.alpha_wc);
        row.set("alpha_SPP", e.alpha_spp);
        row.set_opt("alpha_TPP", e.alpha_tpp);
        Some(e)
    } else {
        if spin.is_err() {
            row.warnings.push(Warning::SpinSectorStrongCoupling);
        }
        None
    };
    let phase = classify_spinful(exponents.as_ref(), s);
    row.phase = phase.label;
    row.regime = phase.regime;
    Ok(())
}

/// Checks that `params` names exactly the inputs `mode` needs.
pub fn check_params(mode: Mode, params: &ParamSet) -> Result<()> {
    if let Some(name) = params.keys().find(|k| !mode.accepts(k)) {
        return Err(Error::Config(format!("parameter `{name}` is not valid in {mode} mode")));
    }
    if let Some(name) = mode.required_params().iter().find(|k| !params.contains_key(**k)) {
        return Err(Error::Config(format!("missing parameter `{name}` for {mode} mode")));
    }
    if mode != Mode::Microscopic && params.contains_key("g") == params.contains_key("U_bf") {
        return Err(Error::Config("give exactly one of `g` and `U_bf`".into()));
    }
    Ok(())
}

/// Evaluates a single parameter record through the full pipeline.
pub fn run_point(mode: Mode, params: &ParamSet) -> PointResult {
    evaluate(mode, Vec::new(), params, &LatticeSolver::default())
}

/// Boson and fermion lattice sites of a microscopic record, for inspection.
pub fn lattice_sites(params: &ParamSet, solver: &LatticeSolver) -> Result<(LatticeSite, LatticeSite)> {
    let setup = setup_from_params(params)?;
    setup.validate()?;
    Ok((solver.site(setup.s_b_par)?, solver.site(setup.s_f_par)?))
}

pub fn run_grid(config: &SweepConfig) -> Result<GridResult> {
    run_grid_with(config, Execution::default())
}

pub fn run_grid_with(config: &SweepConfig, exec: Execution) -> Result<GridResult> {
    config.validate()?;
    let points = config.points();
    let rows = if config.mode == Mode::Microscopic {
        let depths: Vec<f64> = points
            .iter()
            .flat_map(|(_, p)| [p.get("s_b_par"), p.get("s_f_par")])
            .flatten()
            .copied()
            .collect();
        let cache = SiteCache::build(LatticeSolver::default(), &depths, exec);
        exec.map(&points, |(axes, p)| evaluate(config.mode, axes.clone(), p, &cache))
    } else {
        let solver = LatticeSolver::default();
        exec.map(&points, |(axes, p)| evaluate(config.mode, axes.clone(), p, &solver))
    };
    Ok(GridResult::new(config.clone(), rows))
}

/// Runs the grid and writes it to the configured output. The output file is
/// created before any computation so that unwritable paths fail fast.
pub fn run_sweep(config: &SweepConfig, exec: Execution) -> Result<GridResult> {
    config.validate()?;
    let sink = match &config.output {
        Some(out) => Some((
            File::create(&out.path).map_err(|source| Error::Io { path: out.path.clone(), source })?,
            out,
        )),
        None => None,
    };
    let result = run_grid_with(config, exec)?;
    if let Some((file, out)) = sink {
        result.write_to(file, out.format, &out.path)?;
        if config.emit_curves {
            let path = output::curves_path(&out.path);
            let file = File::create(&path).map_err(|source| Error::Io { path: path.clone(), source })?;
            result.write_curves_to(file, &path)?;
        }
    }
    Ok(result)
}
