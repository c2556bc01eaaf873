//! System-bath timescale extraction and coupling calibration.
//!
//! The kernel trace fixes the slowest dissipative scale: the sum of all
//! relaxation rapidities equals 2 tr M, so tau_SB = 1 / (2 |tr M|) measures
//! how long the chain takes to forget its initial condition. Rates scale as
//! J_int^2, which makes the inverse problem (pick J_int to hit a wanted
//! tau_SB) solvable in closed form from a single probe kernel.

use crate::builders::{build_redfield_m, default_baths, GeneratorM};
use crate::lattice::ChainSpec;
use crate::{Error, Result};

/// System-bath relaxation time 1 / (2 |tr M|) of an assembled kernel.
pub fn tau_sb_from_m(gen: &GeneratorM) -> Result<f64> {
    let rate = 2.0 * gen.m.trace().re.abs();
    if !(rate > 0.0) || !rate.is_finite() {
        return Err(Error::DegenerateNormalization(format!(
            "kernel trace {rate:e} fixes no relaxation scale"
        )));
    }
    Ok(1.0 / rate)
}

/// Coupling strength whose Redfield kernel relaxes on the requested
/// timescale. Builds one probe kernel at unit coupling and inverts the
/// quadratic rate law: J_int = sqrt(1 / (target * 2 |tr M_1|)).
pub fn calibrate_jint(
    target_tau_sb: f64,
    spec: &ChainSpec,
    tau_b: f64,
    include_eta: bool,
) -> Result<f64> {
    if !(target_tau_sb > 0.0) {
        return Err(Error::InvalidChain(format!(
            "target tau_SB must be positive, got {target_tau_sb}"
        )));
    }
    let baths = default_baths(spec, tau_b, 1.0)?;
    let probe = build_redfield_m(spec, &baths, include_eta)?;
    let tau_unit = tau_sb_from_m(&probe)?;
    Ok((tau_unit / target_tau_sb).sqrt())
}
