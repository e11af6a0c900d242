//! Ground-state classification from correlation exponents.

use std::f64::consts::PI;
use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::gaussian::{exponent_set, ExponentSet, Stability, StiffnessMatrices};

/// Exponents closer than this to zero (or to each other) are treated as equal.
pub const BOUNDARY_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum Order {
    Cdw,
    Sdw,
    Wc,
    /// Spinless f-polaron pairing.
    Fpp,
    Spp,
    Tpp,
}

impl Order {
    pub fn label(self) -> &'static str {
        match self {
            Order::Cdw => "CDW",
            Order::Sdw => "SDW",
            Order::Wc => "WC",
            Order::Fpp => "f-PP",
            Order::Spp => "SPP",
            Order::Tpp => "TPP",
        }
    }
}

impl fmt::Display for Order {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PhasePoint {
    pub stability: Stability,
    /// `CDW`, `f-PP`, `[CDW,SDW]`, `SPP (CDW)`, `PS`, ...
    pub label: String,
    /// Dominant orders (more than one when degenerate) and their exponent.
    pub dominant: Vec<Order>,
    pub dominant_alpha: Option<f64>,
    /// Other divergent orders, strongest first.
    pub subdominant: Vec<(Order, f64)>,
    /// Regime index 1-6 (spin-1/2 only).
    pub regime: Option<u8>,
    pub lambda_c: Option<f64>,
}

impl PhasePoint {
    fn unstable(stability: Stability) -> Self {
        PhasePoint {
            stability,
            label: stability.phase_label().to_string(),
            dominant: vec![],
            dominant_alpha: None,
            subdominant: vec![],
            regime: None,
            lambda_c: None,
        }
    }
}

pub fn classify_spinless(exponents: Option<&ExponentSet>, stability: Stability) -> PhasePoint {
    let e = match (stability, exponents) {
        (Stability::Stable, Some(e)) => e,
        (Stability::Stable, None) => return PhasePoint::unstable(Stability::PhaseSeparation),
        (s, _) => return PhasePoint::unstable(s),
    };
    let mut point = PhasePoint {
        stability,
        label: "boundary".into(),
        dominant: vec![],
        dominant_alpha: None,
        subdominant: vec![],
        regime: None,
        lambda_c: Some(e.lambda_c),
    };
    if e.alpha_cdw.abs() <= BOUNDARY_TOL && e.alpha_fpp.abs() <= BOUNDARY_TOL {
        return point;
    }
    let (order, alpha) = if e.alpha_cdw > 0.0 {
        (Order::Cdw, e.alpha_cdw)
    } else {
        (Order::Fpp, e.alpha_fpp)
    };
    point.label = order.label().into();
    point.dominant = vec![order];
    point.dominant_alpha = Some(alpha);
    point
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Relevance {
    Relevant,
    Irrelevant,
    Marginal,
}

/// RG relevance of a weak local potential for fermions. The `2k_f`
/// backscattering it generates has scaling dimension `K_beta`.
pub fn impurity_relevance(exponents: &ExponentSet) -> Relevance {
    let delta = exponents.k_beta;
    if (delta - 1.0).abs() <= BOUNDARY_TOL {
        Relevance::Marginal
    } else if delta < 1.0 {
        Relevance::Relevant
    } else {
        Relevance::Irrelevant
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ThermalVisibility {
    pub xi: f64,
    pub t_fermi: f64,
    pub t_star: f64,
    pub visible: bool,
}

/// Thermal correlation length `v_f / T` against a system of `n_sites` sites.
pub fn thermal_visibility(v_f: f64, t_f: f64, k_f: f64, temperature: f64, n_sites: usize) -> Result<ThermalVisibility> {
    if !(temperature > 0.0) {
        return Err(Error::param("T", format!("must be > 0, got {temperature}")));
    }
    if n_sites == 0 {
        return Err(Error::param("N_sites", "must be > 0"));
    }
    let xi = v_f / temperature;
    let t_fermi = 2.0 * t_f * (1.0 - k_f.cos());
    Ok(ThermalVisibility {
        xi,
        t_fermi,
        t_star: t_fermi / n_sites as f64,
        visible: xi >= n_sites as f64,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SpinSector {
    pub g1perp: f64,
    pub k_sigma: f64,
    pub v_sigma: f64,
    pub gapped: bool,
}

/// Backscattering amplitude `U_updown - 4 pi G`.
pub fn backscattering_amplitude(u_updown: f64, big_g: f64) -> f64 {
    u_updown - 4.0 * PI * big_g
}

pub fn spin_sector(u_updown: f64, big_g: f64, v_f: f64) -> Result<SpinSector> {
    if !(v_f > 0.0) {
        return Err(Error::param("v_f", format!("must be > 0, got {v_f}")));
    }
    let g1perp = backscattering_amplitude(u_updown, big_g);
    let scale = 2.0 * PI * v_f;
    if g1perp.abs() >= scale {
        return Err(Error::SpinSectorOutOfRange { g1perp, limit: scale });
    }
    let y = g1perp / scale;
    Ok(SpinSector {
        g1perp,
        k_sigma: ((scale + g1perp) / (scale - g1perp)).sqrt(),
        v_sigma: v_f * (1.0 - y * y).sqrt(),
        gapped: g1perp < 0.0,
    })
}

/// Susceptibility exponents of spin-1/2 fermions. `None` marks orders whose
/// correlations decay exponentially (spin gap).
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SpinHalfExponents {
    pub k_rho: f64,
    pub gapped: bool,
    pub alpha_sdw: Option<f64>,
    pub alpha_cdw: f64,
    pub alpha_wc: f64,
    pub alpha_spp: f64,
    pub alpha_tpp: Option<f64>,
    /// Charge-sector exponent set (polaron dressings, stiffness entries).
    pub charge: ExponentSet,
}

/// `K_rho` is the charge-sector `W_theta_ff`. Gapless spin sectors sit at the
/// SU(2) fixed point.
pub fn spin_half_exponents(w_rho: &StiffnessMatrices, spin: &SpinSector) -> SpinHalfExponents {
    let charge = exponent_set(w_rho);
    let k = charge.k_beta;
    let alpha_wc = 2.0 - 4.0 * k;
    if spin.gapped {
        SpinHalfExponents {
            k_rho: k,
            gapped: true,
            alpha_sdw: None,
            alpha_cdw: 2.0 - k,
            alpha_wc,
            alpha_spp: 2.0 - 1.0 / k,
            alpha_tpp: None,
            charge,
        }
    } else {
        SpinHalfExponents {
            k_rho: k,
            gapped: false,
            alpha_sdw: Some(1.0 - k),
            alpha_cdw: 1.0 - k,
            alpha_wc,
            alpha_spp: 1.0 - 1.0 / k,
            alpha_tpp: Some(1.0 - 1.0 / k),
            charge,
        }
    }
}

fn render_group(group: &[Order]) -> String {
    if group.len() == 1 {
        group[0].label().to_string()
    } else {
        let names: Vec<&str> = group.iter().map(|o| o.label()).collect();
        format!("[{}]", names.join(","))
    }
}

/// Labels follow the figure convention: the dominant order first, degenerate
/// orders in square brackets, subdominant ones in parentheses.
pub fn classify_spinful(exponents: Option<&SpinHalfExponents>, stability: Stability) -> PhasePoint {
    let e = match (stability, exponents) {
        (Stability::Stable, Some(e)) => e,
        (Stability::Stable, None) => return PhasePoint::unstable(Stability::PhaseSeparation),
        (s, _) => return PhasePoint::unstable(s),
    };

    let mut divergent: Vec<(Order, f64)> = [
        (Order::Cdw, Some(e.alpha_cdw)),
        (Order::Sdw, e.alpha_sdw),
        (Order::Wc, Some(e.alpha_wc)),
        (Order::Spp, Some(e.alpha_spp)),
        (Order::Tpp, e.alpha_tpp),
    ]
    .into_iter()
    .filter_map(|(o, a)| a.filter(|&a| a > BOUNDARY_TOL).map(|a| (o, a)))
    .collect();
    divergent.sort_by(|a, b| b.1.total_cmp(&a.1).then(a.0.cmp(&b.0)));

    // Group exactly degenerate exponents.
    let mut groups: Vec<(Vec<Order>, f64)> = Vec::new();
    for (o, a) in divergent {
        match groups.last_mut() {
            Some((g, ga)) if (*ga - a).abs() <= BOUNDARY_TOL => g.push(o),
            _ => groups.push((vec![o], a)),
        }
    }

    let lambda_c = Some(e.charge.lambda_c);
    let Some(((dominant, dominant_alpha), rest)) = groups.split_first() else {
        return PhasePoint {
            stability,
            label: "LL".into(),
            dominant: vec![],
            dominant_alpha: None,
            subdominant: vec![],
            regime: None,
            lambda_c,
        };
    };

    let mut label = render_group(dominant);
    if !rest.is_empty() {
        let subs: Vec<String> = rest.iter().map(|(g, _)| render_group(g)).collect();
        label.push_str(&format!(" ({})", subs.join(", ")));
    }
    let subdominant: Vec<(Order, f64)> = rest
        .iter()
        .flat_map(|(g, a)| g.iter().map(move |&o| (o, *a)))
        .collect();

    let has = |o: Order| dominant.contains(&o) || subdominant.iter().any(|&(s, _)| s == o);
    let regime = if dominant.contains(&Order::Wc) {
        6
    } else if e.gapped {
        match (has(Order::Cdw), has(Order::Spp)) {
            (true, true) => 4,
            (false, true) => 3,
            _ => 5,
        }
    } else if dominant.contains(&Order::Spp) {
        2
    } else {
        1
    };

    PhasePoint {
        stability,
        label,
        dominant: dominant.clone(),
        dominant_alpha: Some(*dominant_alpha),
        subdominant,
        regime: Some(regime),
        lambda_c,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gaussian::{build_theory, stiffness_matrices};
    use crate::linalg::Mat2;
    use approx::assert_relative_eq;

    /// Decoupled stiffness with a given fermion Luttinger parameter.
    fn stiffness_with_k(k: f64) -> StiffnessMatrices {
        StiffnessMatrices {
            w_phi: Mat2::diag(1.0 / k, 0.2),
            w_theta: Mat2::diag(k, 5.0),
        }
    }

    fn spin(gapped: bool) -> SpinSector {
        SpinSector {
            g1perp: if gapped { -0.1 } else { 0.1 },
            k_sigma: 1.0,
            v_sigma: 1.0,
            gapped,
        }
    }

    fn spinless_at(k: f64) -> PhasePoint {
        let e = exponent_set(&stiffness_with_k(k));
        classify_spinless(Some(&e), Stability::Stable)
    }

    #[test]
    fn spinless_labels() {
        let p = spinless_at(0.9);
        assert_eq!(p.label, "CDW");
        assert_relative_eq!(p.dominant_alpha.unwrap(), 0.2, max_relative = 1e-14);
        let p = spinless_at(1.25);
        assert_eq!(p.label, "f-PP");
        assert_relative_eq!(p.dominant_alpha.unwrap(), 0.4, max_relative = 1e-14);
        assert_eq!(spinless_at(1.0).label, "boundary");
        let p = classify_spinless(None, Stability::PhaseSeparation);
        assert_eq!(p.label, "PS");
    }

    #[test]
    fn impurity_relevance_cases() {
        let at = |k| impurity_relevance(&exponent_set(&stiffness_with_k(k)));
        assert_eq!(at(0.8), Relevance::Relevant);
        assert_eq!(at(1.2), Relevance::Irrelevant);
        assert_eq!(at(1.0), Relevance::Marginal);
    }

    #[test]
    fn thermal_visibility_cases() {
        let v = thermal_visibility(2.0, 1.0, PI / 2.0, 2.0 / 100.0, 100).unwrap();
        assert_relative_eq!(v.xi, 100.0, max_relative = 1e-14);
        assert!(v.visible);
        assert_relative_eq!(v.t_fermi, 2.0, max_relative = 1e-15);
        let v = thermal_visibility(2.0, 1.0, PI / 2.0, 2.0 / 1000.0, 100).unwrap();
        assert_relative_eq!(v.xi, 1000.0, max_relative = 1e-12);
        assert_relative_eq!(v.t_star, 0.02, max_relative = 1e-14);
        assert!(v.visible);
        assert!(!thermal_visibility(2.0, 1.0, PI / 2.0, 0.1, 100).unwrap().visible);
        assert!(thermal_visibility(2.0, 1.0, PI / 2.0, 0.0, 100).is_err());
    }

    #[test]
    fn spin_sector_cases() {
        let s = spin_sector(4.0 * PI * 0.1, 0.1, 1.0).unwrap();
        assert!(s.g1perp.abs() < 1e-15);
        assert_relative_eq!(s.k_sigma, 1.0, max_relative = 1e-14);
        assert!(!s.gapped);
        let s = spin_sector(-0.8 * PI, 0.0, 1.0).unwrap();
        assert!(s.gapped && s.k_sigma < 1.0);
        let s = spin_sector(0.8 * PI, 0.3, 1.0).unwrap();
        assert_relative_eq!(s.g1perp, -0.4 * PI, max_relative = 1e-14);
        assert!(s.gapped);
        assert!(matches!(spin_sector(2.5 * PI, 0.0, 1.0), Err(Error::SpinSectorOutOfRange { .. })));
    }

    #[test]
    fn charge_sector_examples() {
        use crate::gaussian::charge_sector_theory;
        let w = stiffness_matrices(&charge_sector_theory(1.0, 3.0, 5.0, 0.0, 0.0, 0.0)).unwrap();
        assert_relative_eq!(w.w_theta.get(0, 0), 1.0, max_relative = 1e-14);

        let u = 0.7;
        let w = stiffness_matrices(&charge_sector_theory(1.0, 3.0, 5.0, 0.0, 0.0, u)).unwrap();
        assert_relative_eq!(w.w_theta.get(0, 0), (1.0 / (1.0 + u / PI)).sqrt(), max_relative = 1e-14);

        let (u_bf, g_big) = (0.8, 0.12);
        let charge = charge_sector_theory(1.0, 3.0, 5.0, u_bf / 2f64.sqrt(), g_big / 2.0, 0.0);
        let spinless = build_theory(1.0, 3.0, 5.0, u_bf, g_big);
        assert!(charge.m.max_abs_diff(&spinless.m) < 1e-15);
        assert_eq!(charge.n, spinless.n);
    }

    #[test]
    fn spin_half_exponent_examples() {
        let e = spin_half_exponents(&stiffness_with_k(1.0), &spin(false));
        for a in [e.alpha_cdw, e.alpha_sdw.unwrap(), e.alpha_spp, e.alpha_tpp.unwrap()] {
            assert!(a.abs() < 1e-15);
        }
        let e = spin_half_exponents(&stiffness_with_k(0.8), &spin(true));
        assert_relative_eq!(e.alpha_cdw, 1.2, max_relative = 1e-14);
        assert_relative_eq!(e.alpha_spp, 0.75, max_relative = 1e-14);
        let p = classify_spinful(Some(&e), Stability::Stable);
        assert_eq!((p.label.as_str(), p.regime), ("CDW (SPP)", Some(4)));

        let e = spin_half_exponents(&stiffness_with_k(0.2), &spin(false));
        assert_relative_eq!(e.alpha_wc, 1.2, max_relative = 1e-14);
        assert_relative_eq!(e.alpha_cdw, 0.8, max_relative = 1e-14);
        let p = classify_spinful(Some(&e), Stability::Stable);
        assert_eq!(p.dominant, vec![Order::Wc]);
        assert_eq!(p.regime, Some(6));
        assert_eq!(p.label, "WC ([CDW,SDW])");
    }

    #[test]
    fn spinful_regimes() {
        let label = |k: f64, gapped: bool| {
            let e = spin_half_exponents(&stiffness_with_k(k), &spin(gapped));
            let p = classify_spinful(Some(&e), Stability::Stable);
            (p.label, p.regime)
        };
        assert_eq!(label(0.9, false), ("[CDW,SDW]".into(), Some(1)));
        assert_eq!(label(1.3, false), ("[SPP,TPP]".into(), Some(2)));
        assert_eq!(label(2.5, true), ("SPP".into(), Some(3)));
        assert_eq!(label(1.5, true), ("SPP (CDW)".into(), Some(4)));
        assert_eq!(label(0.4, true), ("CDW (WC)".into(), Some(5)));
        assert_eq!(label(0.6, true), ("CDW (SPP)".into(), Some(4)));
        assert_eq!(label(1.0, false), ("LL".into(), None));
        let p = classify_spinful(None, Stability::Collapse);
        assert_eq!(p.label, "collapse");
    }

    #[test]
    fn spin_gap_enhances_cdw_by_one() {
        for k in [0.3, 0.7, 1.0, 1.9] {
            let w = stiffness_with_k(k);
            let gapped = spin_half_exponents(&w, &spin(true));
            let gapless = spin_half_exponents(&w, &spin(false));
            assert_relative_eq!(gapped.alpha_cdw - gapless.alpha_cdw, 1.0, max_relative = 1e-14);
            assert_eq!(Some(gapless.alpha_cdw), gapless.alpha_sdw);
            assert_eq!(Some(gapless.alpha_spp), gapless.alpha_tpp);
        }
    }
}
