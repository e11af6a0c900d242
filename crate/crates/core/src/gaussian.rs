//! The coupled fermion-boson quadratic theory.
//!
//! With `H = 1/2 [Pi^T M Pi + (d_x Phi)^T N (d_x Phi)]` for the field pair
//! `(f, b)`, the squared mode velocities are the eigenvalues of
//! `B = N^{1/2} M N^{1/2}`. The equal-time logarithmic covariances of the
//! phase fields `Phi` and the dual density fields `Theta` are
//!
//! ```text
//! W_phi   = (1/pi) N^{-1/2} B^{1/2}  N^{-1/2}
//! W_theta =  pi    N^{1/2}  B^{-1/2} N^{1/2}
//! ```
//!
//! i.e. `<[Phi_i(x) - Phi_i(0)][Phi_j(x) - Phi_j(0)]> ~ W_phi_ij ln|x|`.
//! All correlation exponents are read off these two mutually inverse matrices.

use std::f64::consts::PI;
use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::Mat2;

/// Relative threshold below which the softest mode counts as unstable.
pub const INSTABILITY_TOL: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Sector {
    /// Spinless fermions coupled to the Bose liquid.
    Spinless,
    /// Charge sector of spin-1/2 fermions.
    Charge,
}

/// Physical inputs a theory was built from.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TheoryInputs {
    pub v_f: f64,
    pub v_b: f64,
    pub k_b: f64,
    pub u_bf: f64,
    pub big_g: f64,
    pub u_updown: f64,
    pub sector: Sector,
}

impl TheoryInputs {
    /// Spinless-equivalent `(U_bf, G, U_updown/pi)` couplings of the sector.
    fn effective(&self) -> (f64, f64, f64) {
        match self.sector {
            Sector::Spinless => (self.u_bf, self.big_g, 0.0),
            Sector::Charge => (
                std::f64::consts::SQRT_2 * self.u_bf,
                2.0 * self.big_g,
                self.u_updown / PI,
            ),
        }
    }

    /// Renormalized fermion velocity `((v_f - 2G)(v_f + 2G))^{1/2}`.
    pub fn v_f_tilde(&self) -> f64 {
        let (_, g_big, u) = self.effective();
        ((self.v_f - 2.0 * g_big) * (self.v_f + 2.0 * g_big + u)).sqrt()
    }

    /// `e^theta = ((v_f - 2G)/(v_f + 2G))^{1/4}`.
    pub fn e_theta(&self) -> f64 {
        let (_, g_big, u) = self.effective();
        ((self.v_f - 2.0 * g_big) / (self.v_f + 2.0 * g_big + u)).powf(0.25)
    }

    /// Small-k fermion-phonon coupling of the sector.
    pub fn g(&self) -> f64 {
        let (u_bf, _, _) = self.effective();
        u_bf * self.k_b.sqrt() / (2.0 * PI)
    }

    pub fn g_tilde(&self) -> f64 {
        self.g() * self.e_theta()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GaussianTheory {
    /// Momentum-sector couplings, indices `(f, b)`.
    #[serde(skip)]
    pub m: Mat2,
    /// Diagonal of the gradient-sector couplings.
    pub n: [f64; 2],
    pub inputs: TheoryInputs,
}

impl GaussianTheory {
    pub fn n_matrix(&self) -> Mat2 {
        Mat2::diag(self.n[0], self.n[1])
    }

    /// `N^{1/2} M N^{1/2}`; only meaningful when both gradient entries are positive.
    pub fn b_matrix(&self) -> Mat2 {
        self.m.congruence_diag([self.n[0].sqrt(), self.n[1].sqrt()])
    }

    fn fermion_sector_ok(&self) -> bool {
        self.n[0] > 0.0 && self.m.get(0, 0) > 0.0
    }
}

pub fn build_theory(v_f: f64, v_b: f64, k_b: f64, u_bf: f64, big_g: f64) -> GaussianTheory {
    GaussianTheory {
        m: Mat2::symmetric(PI * (v_f + 2.0 * big_g), u_bf, PI * v_b / k_b),
        n: [(v_f - 2.0 * big_g) / PI, v_b * k_b / PI],
        inputs: TheoryInputs {
            v_f,
            v_b,
            k_b,
            u_bf,
            big_g,
            u_updown: 0.0,
            sector: Sector::Spinless,
        },
    }
}

/// Charge sector of spin-1/2 fermions: phonon-induced `G` counts once per
/// spin channel, the boson coupling picks up `sqrt 2` from
/// `Phi_rho = (Phi_up + Phi_down)/sqrt 2`, and `U_updown` enters as forward
/// scattering in the momentum sector.
pub fn charge_sector_theory(
    v_f: f64,
    v_b: f64,
    k_b: f64,
    u_bf: f64,
    big_g: f64,
    u_updown: f64,
) -> GaussianTheory {
    let c = std::f64::consts::SQRT_2 * u_bf;
    GaussianTheory {
        m: Mat2::symmetric(PI * (v_f + 4.0 * big_g) + u_updown, c, PI * v_b / k_b),
        n: [(v_f - 4.0 * big_g) / PI, v_b * k_b / PI],
        inputs: TheoryInputs {
            v_f,
            v_b,
            k_b,
            u_bf,
            big_g,
            u_updown,
            sector: Sector::Charge,
        },
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Stability {
    Stable,
    PhaseSeparation,
    Collapse,
    FermionSectorUnstable,
}

impl Stability {
    pub fn code(self) -> &'static str {
        match self {
            Stability::Stable => "stable",
            Stability::PhaseSeparation => "phase-separation",
            Stability::Collapse => "collapse",
            Stability::FermionSectorUnstable => "fermion-sector-unstable",
        }
    }

    /// Phase label used for unstable points.
    pub fn phase_label(self) -> &'static str {
        match self {
            Stability::Stable => "stable",
            Stability::PhaseSeparation => "PS",
            Stability::Collapse => "collapse",
            Stability::FermionSectorUnstable => "fermion-unstable",
        }
    }

    pub fn is_stable(self) -> bool {
        self == Stability::Stable
    }
}

impl fmt::Display for Stability {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.code())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ModeSpectrum {
    pub v_a: f64,
    /// Soft-mode velocity; `0` when unstable.
    pub v_a_soft: f64,
    /// Signed squared velocities `(v_a^2, v_A^2)` from the matrix solve.
    pub squares: (f64, f64),
    pub stable: bool,
    /// Largest difference between the matrix eigenvalues and the closed-form
    /// mode velocities, relative to `v_a^2`. `NaN` when unstable.
    pub closed_form_residual: f64,
}

/// Squared mode velocities `(v_a^2, v_A^2)` from the closed form in
/// `v_b`, the renormalized fermion velocity and the dressed coupling.
pub fn closed_form_squares(v_b: f64, v_f_tilde: f64, g_tilde: f64) -> (f64, f64) {
    let (vb2, vf2) = (v_b * v_b, v_f_tilde * v_f_tilde);
    let mean = 0.5 * (vb2 + vf2);
    let root = 0.5 * ((vb2 - vf2).powi(2) + 16.0 * g_tilde * g_tilde * v_b * v_f_tilde).sqrt();
    (mean + root, mean - root)
}

/// Coupling at which the soft mode vanishes: `sqrt(v_b v_f_tilde) / 2`.
pub fn critical_g_tilde(v_b: f64, v_f_tilde: f64) -> f64 {
    0.5 * (v_b * v_f_tilde).sqrt()
}

fn min_eigen_is_soft(theory: &GaussianTheory, lo: f64) -> bool {
    lo <= INSTABILITY_TOL * theory.b_matrix().max_abs()
}

pub fn eigen_velocities(theory: &GaussianTheory) -> ModeSpectrum {
    if !theory.fermion_sector_ok() {
        return ModeSpectrum {
            v_a: f64::NAN,
            v_a_soft: 0.0,
            squares: (f64::NAN, f64::NAN),
            stable: false,
            closed_form_residual: f64::NAN,
        };
    }
    let eig = theory.b_matrix().sym_eigen();
    let stable = !min_eigen_is_soft(theory, eig.lo);
    let residual = if stable {
        let inp = &theory.inputs;
        let (a2, soft2) = closed_form_squares(inp.v_b, inp.v_f_tilde(), inp.g_tilde());
        ((eig.hi - a2).abs().max((eig.lo - soft2).abs())) / eig.hi
    } else {
        f64::NAN
    };
    ModeSpectrum {
        v_a: eig.hi.sqrt(),
        v_a_soft: if stable { eig.lo.sqrt() } else { 0.0 },
        squares: (eig.hi, eig.lo),
        stable,
        closed_form_residual: residual,
    }
}

pub fn stability(theory: &GaussianTheory) -> Stability {
    if !theory.fermion_sector_ok() {
        return Stability::FermionSectorUnstable;
    }
    let eig = theory.b_matrix().sym_eigen();
    if !min_eigen_is_soft(theory, eig.lo) {
        return Stability::Stable;
    }
    let u_bf = theory.inputs.u_bf;
    if u_bf > 0.0 {
        Stability::PhaseSeparation
    } else if u_bf < 0.0 {
        Stability::Collapse
    } else {
        Stability::FermionSectorUnstable
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StiffnessMatrices {
    pub w_phi: Mat2,
    pub w_theta: Mat2,
}

pub fn stiffness_matrices(theory: &GaussianTheory) -> Result<StiffnessMatrices> {
    let s = stability(theory);
    if !s.is_stable() {
        return Err(Error::Unstable(s));
    }
    let eig = theory.b_matrix().sym_eigen();
    let (Some(b_sqrt), Some(b_inv_sqrt)) = (eig.sqrt(), eig.inv_sqrt()) else {
        return Err(Error::Unstable(Stability::PhaseSeparation));
    };
    let n_sqrt = [theory.n[0].sqrt(), theory.n[1].sqrt()];
    let n_inv_sqrt = [1.0 / n_sqrt[0], 1.0 / n_sqrt[1]];
    Ok(StiffnessMatrices {
        w_phi: b_sqrt.congruence_diag(n_inv_sqrt).scale(1.0 / PI),
        w_theta: b_inv_sqrt.congruence_diag(n_sqrt).scale(PI),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ExponentSet {
    pub k_beta: f64,
    pub inv_k_gamma: f64,
    pub inv_k_eps: f64,
    pub inv_k_gammaeps: f64,
    pub lambda_c: f64,
    pub eta_c: f64,
    pub alpha_cdw: f64,
    pub alpha_fpp: f64,
    pub alpha_bfp: f64,
    pub alpha_bp: f64,
    pub alpha_bb: f64,
}

impl ExponentSet {
    /// Decay exponent of the dressed fermion phase `Phi_f - lambda Phi_b`
    /// (the `lambda`-dependent part of the f-polaron exponent).
    pub fn fermion_dressing_exponent(&self, lambda: f64) -> f64 {
        self.inv_k_gamma + lambda * lambda * self.inv_k_eps - 2.0 * lambda * self.inv_k_gammaeps
    }
}

pub fn exponent_set(w: &StiffnessMatrices) -> ExponentSet {
    let k_beta = w.w_theta.get(0, 0);
    let inv_k_gamma = w.w_phi.get(0, 0);
    let inv_k_eps = w.w_phi.get(1, 1);
    let inv_k_gammaeps = 0.5 * (w.w_phi.get(0, 1) + w.w_phi.get(1, 0));
    let x2 = inv_k_gammaeps * inv_k_gammaeps;
    ExponentSet {
        k_beta,
        inv_k_gamma,
        inv_k_eps,
        inv_k_gammaeps,
        lambda_c: inv_k_gammaeps / inv_k_eps,
        eta_c: inv_k_gammaeps / inv_k_gamma,
        alpha_cdw: 2.0 - 2.0 * k_beta,
        alpha_fpp: 2.0 - 2.0 * (inv_k_gamma - x2 / inv_k_eps),
        alpha_bfp: 2.0 - 2.0 * inv_k_gamma,
        alpha_bp: 2.0 - 0.5 * (inv_k_eps - x2 / inv_k_gamma),
        alpha_bb: 2.0 - 0.5 * inv_k_eps,
    }
}

/// Form factor of the canonical polaron transformation reproducing the
/// `exp(-i lambda Phi_b)` dressing.
pub fn cpt_form_factor(k: f64, k_b: f64, length: f64) -> Result<f64> {
    if k == 0.0 {
        return Err(Error::param("k", "form factor undefined at k = 0"));
    }
    if !(k_b > 0.0 && length > 0.0) {
        return Err(Error::param("K_b/L", "must be positive"));
    }
    Ok(0.5 * (2.0 * PI / (k_b * k.abs() * length)).sqrt() * k.signum())
}
