//! Physical constants and the wavenumber calibration used by both loop models.
//!
//! Energies are in eV, potentials in volts and lengths in nm. Every formula
//! downstream only needs the combination `k0 = sqrt(2 m e) / hbar`, so a
//! profile carries it precomputed in nm⁻¹·eV^(−1/2).

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// CODATA 2018 electron mass, kg.
pub const ELECTRON_MASS: f64 = 9.109_383_701_5e-31;
/// CODATA 2018 elementary charge, C (exact).
pub const ELEMENTARY_CHARGE: f64 = 1.602_176_634e-19;
/// CODATA 2018 reduced Planck constant, J·s.
pub const REDUCED_PLANCK: f64 = 1.054_571_817e-34;

/// Scale between the tables' effective calibration and SI.
pub const PAPER_EFFECTIVE_SCALE: f64 = 1e-3;

const METRES_PER_NM: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ConstantsMode {
    /// Physically correct SI calibration.
    #[serde(rename = "si")]
    Si,
    /// `k0` exactly 1000× below SI. Lengths reported in the published
    /// tables are consistent with this calibration.
    #[serde(rename = "paper")]
    PaperEffective,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ConstantsProfile {
    pub electron_mass: f64,
    pub elementary_charge: f64,
    pub reduced_planck: f64,
    /// nm⁻¹·eV^(−1/2)
    pub k0: f64,
    pub mode: ConstantsMode,
}

/// `sqrt(2 m e) / hbar` in nm⁻¹·eV^(−1/2).
pub fn si_k0() -> f64 {
    (2.0 * ELECTRON_MASS * ELEMENTARY_CHARGE).sqrt() / REDUCED_PLANCK * METRES_PER_NM
}

pub fn make_profile(mode: ConstantsMode) -> ConstantsProfile {
    let k0 = match mode {
        ConstantsMode::Si => si_k0(),
        ConstantsMode::PaperEffective => si_k0() * PAPER_EFFECTIVE_SCALE,
    };
    ConstantsProfile {
        electron_mass: ELECTRON_MASS,
        elementary_charge: ELEMENTARY_CHARGE,
        reduced_planck: REDUCED_PLANCK,
        k0,
        mode,
    }
}

impl ConstantsProfile {
    pub fn new(mode: ConstantsMode) -> Self {
        make_profile(mode)
    }

    /// Same constants with `k0` multiplied by `s`. Used to probe the
    /// length/wavenumber scale invariance of the loop equations.
    pub fn scaled(&self, s: f64) -> Self {
        Self { k0: self.k0 * s, ..*self }
    }

    /// Propagation constant `k = k0·sqrt(E)` in nm⁻¹.
    pub fn wavenumber(&self, energy: f64) -> Result<f64> {
        if !(energy > 0.0) || !energy.is_finite() {
            return Err(Error::domain(format!("energy must be positive (got {energy})")));
        }
        Ok(self.k0 * energy.sqrt())
    }

    /// Evanescent decay constant `β = k0·sqrt(V − E)` in nm⁻¹.
    pub fn decay_constant(&self, energy: f64, potential: f64) -> Result<f64> {
        if !(energy > 0.0) || !energy.is_finite() {
            return Err(Error::domain(format!("energy must be positive (got {energy})")));
        }
        if !(energy < potential) || !potential.is_finite() {
            return Err(Error::domain(format!(
                "energy must be below barrier potential (energy {energy}, potential {potential})"
            )));
        }
        Ok(self.k0 * (potential - energy).sqrt())
    }
}

pub fn wavenumber(profile: &ConstantsProfile, energy: f64) -> Result<f64> {
    profile.wavenumber(energy)
}

pub fn decay_constant(profile: &ConstantsProfile, energy: f64, potential: f64) -> Result<f64> {
    profile.decay_constant(energy, potential)
}
