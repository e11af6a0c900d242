//! Figure presets. Axis ranges are chosen to bracket every phase of the
//! corresponding diagram.

use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::sweeps::config::{Axis, Mode, ParamSet, SweepConfig};

pub const PRESET_NAMES: [&str; 5] = ["fig1", "fig2a", "fig2b", "fig3a", "fig3b"];

fn params(pairs: &[(&str, f64)]) -> ParamSet {
    pairs.iter().map(|&(k, v)| (k.to_string(), v)).collect()
}

fn global_grid(mode: Mode, extra: &[(&str, f64)]) -> SweepConfig {
    let mut fixed = params(&[("v_f", 1.0), ("v_b", 5.0), ("K_b", 10.0)]);
    fixed.extend(params(extra));
    SweepConfig {
        mode,
        axis1: Axis::new("g", 0.0, 1.5, 121),
        axis2: Some(Axis::new("G", 0.0, 0.45, 121)),
        fixed,
        output: None,
        emit_curves: false,
    }
}

pub fn figure_preset(name: &str) -> Result<SweepConfig> {
    let config = match name {
        // Experimental knobs: boson-fermion scattering length against the
        // longitudinal boson lattice depth.
        "fig1" => SweepConfig {
            mode: Mode::Microscopic,
            axis1: Axis::new("a_bf", 0.0, 0.05, 61),
            axis2: Some(Axis::new("s_b_par", 0.5, 8.0, 61)),
            fixed: params(&[
                ("nu_b", 4.0),
                ("nu_f", 0.5),
                ("s_b_perp", 20.0),
                ("s_f_perp", 20.0),
                ("s_f_par", 2.0),
                ("a_bb", 0.01),
                ("spinful", 0.0),
            ]),
            output: None,
            emit_curves: false,
        },
        "fig2a" => SweepConfig {
            mode: Mode::EffectiveSpinless,
            axis1: Axis::new("g", 0.0, 1.0, 201),
            axis2: None,
            fixed: params(&[("v_f", 1.0), ("v_b", 3.0), ("K_b", 5.0), ("G", 0.1)]),
            output: None,
            emit_curves: true,
        },
        "fig2b" => global_grid(Mode::EffectiveSpinless, &[]),
        "fig3a" => global_grid(Mode::EffectiveSpinful, &[("U_updown", -0.8 * PI)]),
        "fig3b" => global_grid(Mode::EffectiveSpinful, &[("U_updown", 0.8 * PI)]),
        other => return Err(Error::UnknownPreset(other.to_string())),
    };
    Ok(config)
}
