//! Effective Luttinger inputs from Hubbard parameters: Fermi data, the
//! weakly interacting lattice Bose liquid, Bogoliubov phonons, and the
//! phonon-mediated fermion interaction.

use std::f64::consts::PI;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::lattice::{effective_mass, HubbardParams};
use crate::warning::{self, Warning};

const TWO_PI: f64 = 2.0 * PI;

/// Upper edge of the regime where the `(1 - sqrt(gamma)/2pi)` correction is real.
pub const GAMMA_HARD_LIMIT: f64 = TWO_PI * TWO_PI;
pub const GAMMA_SOFT_LIMIT: f64 = 10.0;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LuttingerParams {
    pub k_f: f64,
    pub v_f: f64,
    pub gamma: f64,
    pub nu_s: f64,
    pub m_star_b: f64,
    pub v_b: f64,
    pub k_b: f64,
    /// Long-wavelength sound velocity of the Bogoliubov spectrum.
    pub v_b_bogoliubov: f64,
    pub u_bf: f64,
    pub g: f64,
    pub big_g: f64,
    pub omega_2kf: f64,
    pub warnings: Vec<Warning>,
}

pub fn fermi_momentum(nu_f: f64, spinful: bool) -> Result<f64> {
    let max = if spinful { 2.0 } else { 1.0 };
    if !(nu_f > 0.0 && nu_f < max) {
        return Err(Error::param("nu_f", format!("must lie in (0, {max}), got {nu_f}")));
    }
    Ok(if spinful { PI * nu_f / 2.0 } else { PI * nu_f })
}

pub fn fermi_velocity(t_f: f64, k_f: f64) -> f64 {
    2.0 * t_f * k_f.sin()
}

/// `gamma = m*_b U_b / nu_s`, with a soft warning at `gamma >= 10`.
pub fn lieb_liniger_gamma(m_star_b: f64, u_b: f64, nu_s: f64) -> Result<(f64, Option<Warning>)> {
    for (name, v) in [("m_star_b", m_star_b), ("U_b", u_b), ("nu_s", nu_s)] {
        if !(v > 0.0) {
            return Err(Error::param(name, format!("must be > 0, got {v}")));
        }
    }
    let gamma = m_star_b * u_b / nu_s;
    if gamma >= GAMMA_HARD_LIMIT {
        return Err(Error::GammaOutOfRange(gamma));
    }
    let warning = (gamma >= GAMMA_SOFT_LIMIT).then_some(Warning::StrongBosonInteraction);
    Ok((gamma, warning))
}

/// Sound velocity and Luttinger parameter of the weakly interacting Bose
/// liquid. Returns `(v_b, K_b)`.
pub fn boson_velocity_and_k(gamma: f64, nu_s: f64, m_star_b: f64) -> Result<(f64, f64)> {
    if !(gamma > 0.0 && gamma < GAMMA_HARD_LIMIT) {
        return Err(Error::GammaOutOfRange(gamma));
    }
    let root = gamma.sqrt();
    let correction = (1.0 - root / TWO_PI).sqrt();
    let v_b = nu_s / m_star_b * root * correction;
    let k_b = PI / root / correction;
    Ok((v_b, k_b))
}

/// Tight-binding kinetic energy above the band bottom.
#[inline]
fn band_offset(k: f64, t_b: f64) -> f64 {
    2.0 * t_b * (1.0 - k.cos())
}

pub fn bogoliubov_dispersion(k: f64, t_b: f64, u_b: f64, nu_b: f64) -> f64 {
    let e = band_offset(k, t_b);
    (e * (e + 2.0 * u_b * nu_b)).sqrt()
}

/// Fermion-phonon vertex `g_k`. Undefined at `k = 0`.
pub fn fp_vertex(k: f64, u_bf: f64, nu_b: f64, t_b: f64, u_b: f64) -> Result<f64> {
    if k == 0.0 {
        return Err(Error::param("k", "vertex is singular at k = 0; use fp_coupling_smallk"));
    }
    let omega = bogoliubov_dispersion(k, t_b, u_b, nu_b);
    Ok(u_bf * (nu_b * band_offset(k, t_b) / (TWO_PI * omega)).sqrt())
}

/// Long-wavelength coupling `g = U_bf sqrt(K_b) / 2pi`.
pub fn fp_coupling_smallk(u_bf: f64, k_b: f64) -> f64 {
    u_bf * k_b.sqrt() / TWO_PI
}

/// Inverse of [`fp_coupling_smallk`].
pub fn u_bf_from_coupling(g: f64, k_b: f64) -> f64 {
    TWO_PI * g / k_b.sqrt()
}

/// Phonon-mediated fermion interaction `G = g_{2k_f}^2 / omega_{2k_f}`.
/// Returns `(G, omega_2kf)`.
pub fn induced_interaction(k_f: f64, u_bf: f64, nu_b: f64, t_b: f64, u_b: f64) -> Result<(f64, f64)> {
    let q = 2.0 * k_f;
    if !(q > 0.0 && q < TWO_PI) {
        return Err(Error::param("k_f", format!("2 k_f must lie in (0, 2pi), got {q}")));
    }
    let omega = bogoliubov_dispersion(q, t_b, u_b, nu_b);
    if !(omega > 0.0) {
        return Err(Error::param("omega_2kf", "phonon frequency at 2 k_f vanishes"));
    }
    let g = fp_vertex(q, u_bf, nu_b, t_b, u_b)?;
    Ok((g * g / omega, omega))
}

/// Full hydrodynamic stage. The superfluid filling is taken equal to `nu_b`.
pub fn luttinger_from_hubbard(h: &HubbardParams, spinful: bool) -> Result<LuttingerParams> {
    let mut warnings = Vec::new();
    let k_f = fermi_momentum(h.nu_f, spinful)?;
    if !(h.t_f > 0.0) {
        return Err(Error::param("t_f", format!("must be > 0, got {}", h.t_f)));
    }
    let v_f = fermi_velocity(h.t_f, k_f);
    let nu_s = h.nu_b;
    let m_star_b = effective_mass(h.t_b)?;
    let (gamma, w) = lieb_liniger_gamma(m_star_b, h.u_b, nu_s)?;
    warnings.extend(w);
    let (v_b, k_b) = boson_velocity_and_k(gamma, nu_s, m_star_b)?;
    let g = fp_coupling_smallk(h.u_bf, k_b);
    let (big_g, omega_2kf) = induced_interaction(k_f, h.u_bf, h.nu_b, h.t_b, h.u_b)?;
    if v_b / v_f < 2.0 {
        warnings.push(Warning::SlowPhonons);
    }
    warning::normalize(&mut warnings);
    Ok(LuttingerParams {
        k_f,
        v_f,
        gamma,
        nu_s,
        m_star_b,
        v_b,
        k_b,
        v_b_bogoliubov: (2.0 * h.t_b * h.u_b * h.nu_b).sqrt(),
        u_bf: h.u_bf,
        g,
        big_g,
        omega_2kf,
        warnings,
    })
}
