use std::fmt;

use serde::Serialize;

/// Validity flags attached to pipeline results. They never stop a computation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Warning {
    /// Transverse depth below 15 E_R; the quasi-1D reduction is questionable.
    ShallowTransverse,
    /// Fermion filling is a multiple of 1/2.
    CommensurateFilling,
    /// Scattering length above 0.2 of the smallest oscillator width.
    ContactInteraction,
    /// An on-site interaction is not below the first band gap.
    InteractionExceedsGap,
    /// Tunneling is not small compared with the first band gap.
    TunnelingNearGap,
    /// Lieb-Liniger gamma at or above 10.
    StrongBosonInteraction,
    /// v_b / v_f below 2; the instantaneous induced interaction is degraded.
    SlowPhonons,
    /// Spin sector outside its weak-coupling window (K_sigma undefined).
    SpinSectorStrongCoupling,
}

impl Warning {
    pub fn code(self) -> &'static str {
        match self {
            Warning::ShallowTransverse => "shallow-transverse",
            Warning::CommensurateFilling => "commensurate-filling",
            Warning::ContactInteraction => "contact-interaction",
            Warning::InteractionExceedsGap => "interaction-exceeds-gap",
            Warning::TunnelingNearGap => "tunneling-near-gap",
            Warning::StrongBosonInteraction => "strong-boson-interaction",
            Warning::SlowPhonons => "slow-phonons",
            Warning::SpinSectorStrongCoupling => "spin-sector-strong-coupling",
        }
    }
}

impl fmt::Display for Warning {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.code())
    }
}

/// Sorted, de-duplicated warning list so that identical inputs always render
/// identically.
pub(crate) fn normalize(warnings: &mut Vec<Warning>) {
    warnings.sort();
    warnings.dedup();
}
