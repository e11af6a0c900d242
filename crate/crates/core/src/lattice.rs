//! Optical-lattice depths and scattering lengths to single-band Hubbard
//! parameters.
//!
//! The longitudinal lattice `s sin^2(pi x)` is solved exactly in a plane-wave
//! basis (the Mathieu problem); Wannier functions are assembled from the
//! lowest-band Bloch states. Transverse confinement enters through the
//! harmonic-oscillator ground state of each transverse well.

use std::f64::consts::PI;

use nalgebra::{DMatrix, SymmetricEigen};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::warning::{self, Warning};

/// Bare atomic mass in lattice units (`E_R = 1` with `k_R = pi`).
pub const BARE_MASS: f64 = PI * PI / 2.0;

/// Relative energy change tolerated when the plane-wave cutoff grows by 5.
const CONVERGENCE_TOL: f64 = 1e-3;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OpticalSetup {
    pub s_b_par: f64,
    pub s_b_perp: f64,
    pub s_f_par: f64,
    pub s_f_perp: f64,
    pub a_bb: f64,
    pub a_bf: f64,
    pub a_ff: Option<f64>,
    pub nu_b: f64,
    pub nu_f: f64,
    pub spinful: bool,
}

impl OpticalSetup {
    /// Checks the hard invariants and returns the soft ones as warnings.
    pub fn validate(&self) -> Result<Vec<Warning>> {
        let depths = [
            ("s_b_par", self.s_b_par),
            ("s_b_perp", self.s_b_perp),
            ("s_f_par", self.s_f_par),
            ("s_f_perp", self.s_f_perp),
        ];
        for (name, s) in depths {
            if !(s.is_finite() && s > 0.0) {
                return Err(Error::param(name, format!("lattice depth must be > 0, got {s}")));
            }
        }
        for (name, a) in [("a_bb", Some(self.a_bb)), ("a_bf", Some(self.a_bf)), ("a_ff", self.a_ff)] {
            if let Some(a) = a {
                if !a.is_finite() {
                    return Err(Error::param(name, "scattering length must be finite"));
                }
            }
        }
        if !(self.nu_b.is_finite() && self.nu_b > 0.0) {
            return Err(Error::param("nu_b", format!("boson filling must be > 0, got {}", self.nu_b)));
        }
        let nu_f_max = if self.spinful { 2.0 } else { 1.0 };
        if !(self.nu_f > 0.0 && self.nu_f < nu_f_max) {
            return Err(Error::param(
                "nu_f",
                format!("fermion filling must lie in (0, {nu_f_max}), got {}", self.nu_f),
            ));
        }

        let mut warnings = Vec::new();
        if self.s_b_perp < 15.0 || self.s_f_perp < 15.0 {
            warnings.push(Warning::ShallowTransverse);
        }
        let twice = 2.0 * self.nu_f;
        if (twice - twice.round()).abs() < 1e-12 {
            warnings.push(Warning::CommensurateFilling);
        }
        Ok(warnings)
    }
}

/// Lowest Bloch band of `s sin^2(pi x)` on a quasi-momentum grid.
#[derive(Debug, Clone)]
pub struct BandStructure {
    pub depth: f64,
    /// `k_j = -pi + 2 pi (j + 1) / n_k`, so the grid covers `(-pi, pi]` and
    /// contains `0` and `pi`.
    pub k_grid: Vec<f64>,
    pub energies: Vec<f64>,
    pub plane_wave_cutoff: usize,
    /// `min` of the second band minus `max` of the first.
    pub gap: f64,
    /// Plane-wave coefficients of the lowest-band Bloch states, index `n + cutoff`.
    coefficients: Vec<Vec<f64>>,
}

impl BandStructure {
    pub fn bandwidth(&self) -> f64 {
        let (lo, hi) = min_max(&self.energies);
        hi - lo
    }

    pub fn n_k(&self) -> usize {
        self.k_grid.len()
    }
}

fn min_max(xs: &[f64]) -> (f64, f64) {
    xs.iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &x| (lo.min(x), hi.max(x)))
}

/// Two lowest eigenvalues and the ground-state vector of the plane-wave
/// Hamiltonian at quasi-momentum `k`.
fn bloch_states(depth: f64, cutoff: usize, k: f64) -> (f64, f64, Vec<f64>) {
    let dim = 2 * cutoff + 1;
    let h = DMatrix::from_fn(dim, dim, |i, j| {
        if i == j {
            let n = i as f64 - cutoff as f64;
            let q = k / PI + 2.0 * n;
            q * q + 0.5 * depth
        } else if i.abs_diff(j) == 1 {
            -0.25 * depth
        } else {
            0.0
        }
    });
    let eig = SymmetricEigen::new(h);
    let mut order: Vec<usize> = (0..dim).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let ground = eig.eigenvectors.column(order[0]).iter().copied().collect();
    (eig.eigenvalues[order[0]], eig.eigenvalues[order[1]], ground)
}

fn k_grid(n_k: usize) -> Vec<f64> {
    (0..n_k)
        .map(|j| -PI + 2.0 * PI * (j + 1) as f64 / n_k as f64)
        .collect()
}

/// Solves the lowest band of `-(1/pi^2) d^2/dx^2 + depth sin^2(pi x)` with
/// plane waves `-cutoff..=cutoff` at `n_k` quasi-momenta.
pub fn solve_band_1d(depth: f64, cutoff: usize, n_k: usize) -> Result<BandStructure> {
    if !(depth.is_finite() && depth > 0.0) {
        return Err(Error::param("depth", format!("must be > 0, got {depth}")));
    }
    if cutoff < 10 {
        return Err(Error::param("cutoff", format!("must be >= 10, got {cutoff}")));
    }
    if n_k < 32 || !n_k.is_multiple_of(2) {
        return Err(Error::param("n_k", format!("must be even and >= 32, got {n_k}")));
    }

    let k_grid = k_grid(n_k);
    let mut energies = Vec::with_capacity(n_k);
    let mut second = Vec::with_capacity(n_k);
    let mut coefficients = Vec::with_capacity(n_k);
    let mut max_shift = 0.0_f64;
    for &k in &k_grid {
        let (e0, e1, c) = bloch_states(depth, cutoff, k);
        let (e0_wide, _, _) = bloch_states(depth, cutoff + 5, k);
        max_shift = max_shift.max((e0 - e0_wide).abs());
        energies.push(e0);
        second.push(e1);
        coefficients.push(c);
    }

    let (lo, hi) = min_max(&energies);
    let scale = (hi - lo).max(hi.abs()).max(f64::MIN_POSITIVE);
    let change = max_shift / scale;
    if change > CONVERGENCE_TOL {
        return Err(Error::BandNotConverged { depth, cutoff, change });
    }
    let (second_lo, _) = min_max(&second);

    Ok(BandStructure {
        depth,
        k_grid,
        energies,
        plane_wave_cutoff: cutoff,
        gap: second_lo - hi,
        coefficients,
    })
}

/// Quarter bandwidth of the lowest band.
pub fn tunneling_amplitude(band: &BandStructure) -> f64 {
    band.bandwidth() / 4.0
}

/// Largest deviation of the band from `const - 2t cos k` (with `t` the
/// quarter bandwidth and the constant the band centre), as a fraction of `4t`.
pub fn cosine_fit_residual(band: &BandStructure) -> f64 {
    let (lo, hi) = min_max(&band.energies);
    let t = (hi - lo) / 4.0;
    if t == 0.0 {
        return 0.0;
    }
    let centre = 0.5 * (lo + hi);
    band.k_grid
        .iter()
        .zip(&band.energies)
        .map(|(&k, &e)| (e - (centre - 2.0 * t * k.cos())).abs())
        .fold(0.0, f64::max)
        / (4.0 * t)
}

/// Mass from the band curvature at `k = 0`: `eps(dk) - eps(0) = dk^2 / 2m`.
pub fn band_curvature_mass(band: &BandStructure) -> f64 {
    let zero = band.n_k() / 2 - 1;
    let dk = band.k_grid[zero + 1] - band.k_grid[zero];
    let de = 0.5 * (band.energies[zero + 1] + band.energies[zero - 1]) - band.energies[zero];
    dk * dk / (2.0 * de)
}

/// Effective mass of a tight-binding band `-2t cos k`.
pub fn effective_mass(t: f64) -> Result<f64> {
    if !(t > 0.0) {
        return Err(Error::param("t", format!("tunneling must be > 0, got {t}")));
    }
    Ok(1.0 / (2.0 * t))
}

/// Real, even Wannier function sampled on a position grid.
#[derive(Debug, Clone, PartialEq)]
pub struct WannierFunction {
    pub x_grid: Vec<f64>,
    pub amplitudes: Vec<f64>,
    /// Discrete norm before rescaling to 1; the deficit is the tail weight
    /// lying outside the grid.
    pub raw_norm: f64,
}

impl WannierFunction {
    pub fn density_integral(&self, power: i32) -> f64 {
        let ys: Vec<f64> = self.amplitudes.iter().map(|w| w.abs().powi(power)).collect();
        trapezoid(&self.x_grid, &ys)
    }
}

/// Uniform grid on `[-half_span, half_span]` (lattice sites) with
/// `points_per_site` intervals per site.
pub fn symmetric_grid(half_span: f64, points_per_site: usize) -> Vec<f64> {
    let n = (2.0 * half_span * points_per_site as f64).round() as usize;
    let h = 2.0 * half_span / n as f64;
    (0..=n).map(|i| -half_span + i as f64 * h).collect()
}

pub(crate) fn trapezoid(x: &[f64], y: &[f64]) -> f64 {
    x.windows(2)
        .zip(y.windows(2))
        .map(|(xs, ys)| 0.5 * (xs[1] - xs[0]) * (ys[0] + ys[1]))
        .sum()
}

/// `w(x) = (1/n_k) sum_k psi_k(x)` with every `psi_k(0)` real and positive.
pub fn wannier_function(band: &BandStructure, x_grid: &[f64]) -> Result<WannierFunction> {
    let (Some(&first), Some(&last)) = (x_grid.first(), x_grid.last()) else {
        return Err(Error::param("x_grid", "empty grid"));
    };
    if first > -2.5 || last < 2.5 || (first + last).abs() > 1e-9 {
        return Err(Error::param(
            "x_grid",
            format!("must span at least 5 sites centred on 0, got [{first}, {last}]"),
        ));
    }
    if x_grid.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::param("x_grid", "must be strictly increasing"));
    }
    if last > band.n_k() as f64 / 2.0 {
        return Err(Error::param(
            "x_grid",
            format!("exceeds the {}-site periodicity of the k grid", band.n_k()),
        ));
    }

    let cutoff = band.plane_wave_cutoff as f64;
    let mut amplitudes = vec![0.0; x_grid.len()];
    for (&k, coeffs) in band.k_grid.iter().zip(&band.coefficients) {
        let at_origin: f64 = coeffs.iter().sum();
        if at_origin.abs() < 1e-12 {
            return Err(Error::PhaseFixing { k, amplitude: at_origin.abs() });
        }
        let sign = at_origin.signum();
        for (w, &x) in amplitudes.iter_mut().zip(x_grid) {
            // Imaginary parts cancel between k and -k (and within k = pi).
            let re: f64 = coeffs
                .iter()
                .enumerate()
                .map(|(i, c)| c * ((k + 2.0 * PI * (i as f64 - cutoff)) * x).cos())
                .sum();
            *w += sign * re;
        }
    }
    let n_k = band.n_k() as f64;
    amplitudes.iter_mut().for_each(|w| *w /= n_k);

    let squares: Vec<f64> = amplitudes.iter().map(|w| w * w).collect();
    let raw_norm = trapezoid(x_grid, &squares);
    let scale = raw_norm.sqrt();
    amplitudes.iter_mut().for_each(|w| *w /= scale);

    Ok(WannierFunction {
        x_grid: x_grid.to_vec(),
        amplitudes,
        raw_norm,
    })
}

/// Ground-state width of the harmonic expansion of a transverse `sin^2` well.
pub fn transverse_width(s_perp: f64) -> f64 {
    1.0 / (PI * s_perp.powf(0.25))
}

/// Contact coupling `4 pi a / (2 mu)` for two atoms of the bare mass.
pub fn contact_coupling(a_s: f64) -> f64 {
    8.0 * a_s / PI
}

/// On-site interaction between two species with longitudinal Wannier
/// functions `w_1`, `w_2` and Gaussian transverse widths `sigma_1`, `sigma_2`.
pub fn onsite_interaction(
    w_1: &WannierFunction,
    sigma_1: f64,
    w_2: &WannierFunction,
    sigma_2: f64,
    a_s: f64,
) -> Result<f64> {
    if w_1.x_grid.len() != w_2.x_grid.len()
        || w_1.x_grid.iter().zip(&w_2.x_grid).any(|(a, b)| (a - b).abs() > 1e-12)
    {
        return Err(Error::GridMismatch);
    }
    let overlap: Vec<f64> = w_1
        .amplitudes
        .iter()
        .zip(&w_2.amplitudes)
        .map(|(a, b)| a * a * b * b)
        .collect();
    let longitudinal = trapezoid(&w_1.x_grid, &overlap);
    let transverse = 1.0 / (PI * (sigma_1 * sigma_1 + sigma_2 * sigma_2));
    Ok(contact_coupling(a_s) * longitudinal * transverse)
}

/// Whether `a_s` is small enough against the transverse widths for a contact
/// interaction.
pub fn contact_is_valid(a_s: f64, sigma_1: f64, sigma_2: f64) -> bool {
    a_s.abs() <= 0.2 * sigma_1.min(sigma_2)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SingleBandReport {
    pub gap_b: f64,
    pub gap_f: f64,
    pub residual_b: f64,
    pub residual_f: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct HubbardParams {
    pub t_b: f64,
    pub t_f: f64,
    pub u_b: f64,
    pub u_bf: f64,
    pub u_updown: Option<f64>,
    pub nu_b: f64,
    pub nu_f: f64,
    pub report: SingleBandReport,
    pub warnings: Vec<Warning>,
}

/// Band and Wannier function for one longitudinal depth.
#[derive(Debug, Clone)]
pub struct LatticeSite {
    pub band: BandStructure,
    pub wannier: WannierFunction,
}

/// Numerical resolution of the lattice stage.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LatticeSolver {
    pub cutoff: usize,
    pub n_k: usize,
    /// Half-width of the Wannier position grid, in sites.
    pub half_span: f64,
    pub points_per_site: usize,
}

impl Default for LatticeSolver {
    fn default() -> Self {
        LatticeSolver {
            cutoff: 20,
            n_k: 64,
            half_span: 6.0,
            points_per_site: 48,
        }
    }
}

impl LatticeSolver {
    pub fn site(&self, depth: f64) -> Result<LatticeSite> {
        let band = solve_band_1d(depth, self.cutoff, self.n_k)?;
        let grid = symmetric_grid(self.half_span, self.points_per_site);
        let wannier = wannier_function(&band, &grid)?;
        Ok(LatticeSite { band, wannier })
    }

    pub fn hubbard(&self, setup: &OpticalSetup) -> Result<HubbardParams> {
        setup.validate()?;
        let boson = self.site(setup.s_b_par)?;
        let fermion = self.site(setup.s_f_par)?;
        hubbard_from_sites(setup, &boson, &fermion)
    }
}

/// Assembles Hubbard parameters from already-solved lattice sites.
pub fn hubbard_from_sites(
    setup: &OpticalSetup,
    boson: &LatticeSite,
    fermion: &LatticeSite,
) -> Result<HubbardParams> {
    let mut warnings = setup.validate()?;
    let sigma_b = transverse_width(setup.s_b_perp);
    let sigma_f = transverse_width(setup.s_f_perp);

    let t_b = tunneling_amplitude(&boson.band);
    let t_f = tunneling_amplitude(&fermion.band);
    let u_b = onsite_interaction(&boson.wannier, sigma_b, &boson.wannier, sigma_b, setup.a_bb)?;
    let u_bf = onsite_interaction(&boson.wannier, sigma_b, &fermion.wannier, sigma_f, setup.a_bf)?;
    let u_updown = match (setup.spinful, setup.a_ff) {
        (true, Some(a_ff)) => {
            Some(onsite_interaction(&fermion.wannier, sigma_f, &fermion.wannier, sigma_f, a_ff)?)
        }
        _ => None,
    };

    let contact_ok = contact_is_valid(setup.a_bb, sigma_b, sigma_b)
        && contact_is_valid(setup.a_bf, sigma_b, sigma_f)
        && setup.a_ff.is_none_or(|a| contact_is_valid(a, sigma_f, sigma_f));
    if !contact_ok {
        warnings.push(Warning::ContactInteraction);
    }
    let (gap_b, gap_f) = (boson.band.gap, fermion.band.gap);
    if u_b >= gap_b || u_bf.abs() >= gap_b.min(gap_f) || u_updown.is_some_and(|u| u.abs() >= gap_f) {
        warnings.push(Warning::InteractionExceedsGap);
    }
    if t_b > 0.1 * gap_b || t_f > 0.1 * gap_f {
        warnings.push(Warning::TunnelingNearGap);
    }
    warning::normalize(&mut warnings);

    Ok(HubbardParams {
        t_b,
        t_f,
        u_b,
        u_bf,
        u_updown,
        nu_b: setup.nu_b,
        nu_f: setup.nu_f,
        report: SingleBandReport {
            gap_b,
            gap_f,
            residual_b: cosine_fit_residual(&boson.band),
            residual_f: cosine_fit_residual(&fermion.band),
        },
        warnings,
    })
}

/// [`LatticeSolver::hubbard`] at default resolution.
pub fn hubbard_from_setup(setup: &OpticalSetup) -> Result<HubbardParams> {
    LatticeSolver::default().hubbard(setup)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn asymptotic_t(s: f64) -> f64 {
        4.0 / PI.sqrt() * s.powf(0.75) * (-2.0 * s.sqrt()).exp()
    }

    fn fig1_setup() -> OpticalSetup {
        OpticalSetup {
            s_b_par: 4.0,
            s_b_perp: 20.0,
            s_f_par: 2.0,
            s_f_perp: 20.0,
            a_bb: 0.01,
            a_bf: 0.02,
            a_ff: None,
            nu_b: 4.0,
            nu_f: 0.5,
            spinful: false,
        }
    }

    #[test]
    fn free_limit_dispersion() {
        let band = solve_band_1d(1e-9, 12, 32).unwrap();
        for (&k, &e) in band.k_grid.iter().zip(&band.energies) {
            assert!((e - (k / PI).powi(2)).abs() < 1e-8, "k={k} e={e}");
        }
    }

    #[test]
    fn depth_ten_tunneling() {
        let band = solve_band_1d(10.0, 21, 64).unwrap();
        let t = tunneling_amplitude(&band);
        // Plane-wave oracle (numpy, cutoff 25): 0.0191867.
        assert_relative_eq!(t, 0.019_186_709, max_relative = 1e-6);
        assert!((t / asymptotic_t(10.0) - 1.0).abs() < 0.2);
        assert!(cosine_fit_residual(&band) < 0.05);
    }

    #[test]
    fn tunneling_decreases_with_depth() {
        let t2 = tunneling_amplitude(&solve_band_1d(2.0, 20, 32).unwrap());
        let t10 = tunneling_amplitude(&solve_band_1d(10.0, 20, 32).unwrap());
        assert!(t2 > t10);
        assert_relative_eq!(t2, 0.148_105, max_relative = 1e-4);
    }

    #[test]
    fn band_symmetry_and_minimum() {
        for s in [0.5, 3.0, 11.0, 30.0] {
            let band = solve_band_1d(s, 20, 48).unwrap();
            let n = band.n_k();
            let zero = n / 2 - 1;
            assert_eq!(band.k_grid[zero], 0.0);
            for j in 0..n - 1 {
                // k_j and k_{n-2-j} are mirror images
                let mirror = n - 2 - j;
                assert!((band.energies[j] - band.energies[mirror]).abs() < 1e-10);
            }
            let (lo, _) = min_max(&band.energies);
            assert_eq!(band.energies[zero], lo);
            assert!(band.bandwidth() > 0.0);
        }
    }

    #[test]
    fn residual_decreases_with_depth() {
        let r: Vec<f64> = [8.0, 12.0, 16.0, 20.0]
            .iter()
            .map(|&s| cosine_fit_residual(&solve_band_1d(s, 20, 64).unwrap()))
            .collect();
        assert!(r.windows(2).all(|w| w[1] < w[0]), "{r:?}");
    }

    #[test]
    fn rejects_bad_inputs() {
        assert!(solve_band_1d(0.0, 20, 64).is_err());
        assert!(solve_band_1d(5.0, 9, 64).is_err());
        assert!(solve_band_1d(5.0, 20, 16).is_err());
        assert!(effective_mass(0.0).is_err());
    }

    #[test]
    fn unconverged_cutoff_is_diagnosed() {
        // Very deep wells need many more plane waves than the minimum cutoff.
        let err = solve_band_1d(3000.0, 10, 32).unwrap_err();
        assert!(matches!(err, Error::BandNotConverged { .. }), "{err}");
    }

    #[test]
    fn flat_band_has_zero_tunneling() {
        let band = BandStructure {
            depth: 1.0,
            k_grid: k_grid(32),
            energies: vec![0.7; 32],
            plane_wave_cutoff: 10,
            gap: 1.0,
            coefficients: vec![],
        };
        assert_eq!(tunneling_amplitude(&band), 0.0);
    }

    #[test]
    fn effective_mass_values() {
        assert_eq!(effective_mass(0.5).unwrap(), 1.0);
        let t = tunneling_amplitude(&solve_band_1d(10.0, 20, 64).unwrap());
        assert_relative_eq!(effective_mass(t).unwrap(), 26.06, max_relative = 0.02);
        let free = solve_band_1d(1e-6, 20, 64).unwrap();
        assert_relative_eq!(band_curvature_mass(&free), BARE_MASS, max_relative = 0.02);
    }

    #[test]
    fn transverse_widths() {
        assert_relative_eq!(transverse_width(1.0), 1.0 / PI, epsilon = 1e-15);
        assert_relative_eq!(transverse_width(20.0), 0.150_53, max_relative = 1e-4);
        assert!(transverse_width(16.0) < transverse_width(1.0));
    }

    #[test]
    fn wannier_norm_and_parity() {
        let band = solve_band_1d(2.0, 20, 64).unwrap();
        let w = wannier_function(&band, &symmetric_grid(6.0, 48)).unwrap();
        assert!((w.density_integral(2) - 1.0).abs() < 1e-8);
        assert!(w.raw_norm > 0.999);
        let n = w.amplitudes.len();
        for i in 0..n {
            assert!((w.amplitudes[i] - w.amplitudes[n - 1 - i]).abs() < 1e-6);
        }
        assert!(w.amplitudes[n / 2] > 0.0);
    }

    #[test]
    fn deep_wannier_is_gaussian() {
        let s = 20.0;
        let band = solve_band_1d(s, 20, 64).unwrap();
        let w = wannier_function(&band, &symmetric_grid(4.0, 64)).unwrap();
        let sigma = transverse_width(s);
        let gauss: Vec<f64> = w
            .x_grid
            .iter()
            .zip(&w.amplitudes)
            .map(|(x, a)| a * (-x * x / (2.0 * sigma * sigma)).exp() / (PI.sqrt() * sigma).sqrt())
            .collect();
        let overlap = trapezoid(&w.x_grid, &gauss);
        assert!(overlap * overlap > 0.99, "{overlap}");
    }

    #[test]
    fn quartic_integral_near_gaussian() {
        let s = 10.0;
        let band = solve_band_1d(s, 20, 64).unwrap();
        let w = wannier_function(&band, &symmetric_grid(6.0, 48)).unwrap();
        let sigma = transverse_width(s);
        let gaussian = 1.0 / ((2.0 * PI).sqrt() * sigma);
        assert!((w.density_integral(4) / gaussian - 1.0).abs() < 0.15);
    }

    #[test]
    fn wannier_grid_preconditions() {
        let band = solve_band_1d(4.0, 20, 32).unwrap();
        assert!(wannier_function(&band, &symmetric_grid(2.0, 16)).is_err());
        assert!(wannier_function(&band, &symmetric_grid(17.0, 4)).is_err());
    }

    /// Gaussian "Wannier" functions for the closed-form quadrature oracle.
    fn gaussian_wannier(sigma: f64) -> WannierFunction {
        let x_grid = symmetric_grid(3.0, 400);
        let amplitudes = x_grid
            .iter()
            .map(|x| (-x * x / (2.0 * sigma * sigma)).exp() / (PI.sqrt() * sigma).sqrt())
            .collect();
        WannierFunction { x_grid, amplitudes, raw_norm: 1.0 }
    }

    #[test]
    fn onsite_matches_gaussian_closed_form() {
        let sigma = 0.15;
        let w = gaussian_wannier(sigma);
        let a = 0.01;
        let u = onsite_interaction(&w, sigma, &w, sigma, a).unwrap();
        let closed = (8.0 * a / PI) / ((2.0 * PI).sqrt() * sigma) / (2.0 * PI * sigma * sigma);
        assert_relative_eq!(u, closed, max_relative = 1e-9);
        assert_eq!(onsite_interaction(&w, sigma, &w, sigma, 0.0).unwrap(), 0.0);
    }

    #[test]
    fn onsite_grid_mismatch() {
        let w1 = gaussian_wannier(0.2);
        let mut w2 = gaussian_wannier(0.2);
        w2.x_grid.pop();
        w2.amplitudes.pop();
        assert!(matches!(
            onsite_interaction(&w1, 0.1, &w2, 0.1, 0.01),
            Err(Error::GridMismatch)
        ));
    }

    #[test]
    fn onsite_numeric_vs_gaussian_at_depth_ten() {
        let solver = LatticeSolver::default();
        let site = solver.site(10.0).unwrap();
        let sp = transverse_width(20.0);
        let u = onsite_interaction(&site.wannier, sp, &site.wannier, sp, 0.01).unwrap();
        let sl = transverse_width(10.0);
        let closed = (8.0 * 0.01 / PI) / ((2.0 * PI).sqrt() * sl) / (2.0 * PI * sp * sp);
        assert!((u / closed - 1.0).abs() < 0.15);
    }

    #[test]
    fn boson_interaction_grows_with_depth() {
        let solver = LatticeSolver::default();
        let mut setup = fig1_setup();
        let mut last = 0.0;
        for s in [0.5, 1.0, 2.0, 4.0, 6.0, 8.0] {
            setup.s_b_par = s;
            let h = solver.hubbard(&setup).unwrap();
            assert!(h.u_b > last, "U_b not increasing at s={s}");
            last = h.u_b;
        }
    }

    #[test]
    fn fig1_point_regression() {
        let h = hubbard_from_setup(&fig1_setup()).unwrap();
        assert!(h.t_b > 0.0 && h.t_f > 0.0 && h.u_b > 0.0);
        assert!(h.u_bf > 0.0);
        assert!(h.warnings.contains(&Warning::CommensurateFilling));
        // Frozen after agreement with an independent numpy implementation.
        assert_relative_eq!(h.t_b, 0.086_222_4, max_relative = 1e-5);
        assert_relative_eq!(h.t_f, 0.148_105, max_relative = 1e-5);
        assert_relative_eq!(h.u_b, REGRESSION_U_B, max_relative = 1e-6);
        assert_relative_eq!(h.u_bf, REGRESSION_U_BF, max_relative = 1e-6);
    }

    const REGRESSION_U_B: f64 = 0.267_108_941_379_674;
    const REGRESSION_U_BF: f64 = 0.469_645_475_356_955;

    #[test]
    fn zero_bf_scattering_gives_zero_coupling() {
        let mut setup = fig1_setup();
        setup.a_bf = 0.0;
        assert_eq!(hubbard_from_setup(&setup).unwrap().u_bf, 0.0);
    }

    #[test]
    fn swapping_depths_swaps_tunneling() {
        let mut setup = fig1_setup();
        let h = hubbard_from_setup(&setup).unwrap();
        std::mem::swap(&mut setup.s_b_par, &mut setup.s_f_par);
        let swapped = hubbard_from_setup(&setup).unwrap();
        assert_eq!(h.t_b, swapped.t_f);
        assert_eq!(h.t_f, swapped.t_b);
    }

    #[test]
    fn setup_validation() {
        let mut setup = fig1_setup();
        setup.s_b_perp = 10.0;
        let w = setup.validate().unwrap();
        assert!(w.contains(&Warning::ShallowTransverse));
        setup.nu_f = 1.2;
        assert!(setup.validate().is_err());
        setup.spinful = true;
        assert!(setup.validate().is_ok());
        setup.nu_b = 0.0;
        assert!(setup.validate().is_err());
    }
}
