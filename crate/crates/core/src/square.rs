//! Closed loop with a square barrier.
//!
//! Region I (`a <= x <= 0`, potential 0) carries `ψ = A cos kx + B sin kx`,
//! Region II (`0 <= x <= b`, potential `V`) carries `ψ = C e^{βx} + D e^{-βx}`.
//! The loop closes by identifying `x = a` with `x = b`.

use std::f64::consts::TAU;

use serde::{Deserialize, Serialize};

use crate::constants::ConstantsProfile;
use crate::error::{Error, Result};
use crate::linalg::{lu_determinant, Mat4};

/// Above this value of `βb` the determinant is reported scaled by `e^{-βb}`.
pub const SCALING_THRESHOLD: f64 = 30.0;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SquareBarrierSpec {
    /// eV
    pub energy: f64,
    /// V
    pub potential: f64,
    /// Start of Region I, nm (non-positive).
    pub a: f64,
    /// Barrier length, nm.
    pub b: f64,
}

impl SquareBarrierSpec {
    pub fn new(energy: f64, potential: f64, a: f64, b: f64) -> Result<Self> {
        let spec = Self { energy, potential, a, b };
        spec.validate()?;
        Ok(spec)
    }

    /// Spec whose pre-barrier coordinate realises the phase `theta = k·a`.
    pub fn from_theta(energy: f64, potential: f64, theta: f64, b: f64, profile: &ConstantsProfile) -> Result<Self> {
        let k = profile.wavenumber(energy)?;
        Self::new(energy, potential, theta / k, b)
    }

    pub fn validate(&self) -> Result<()> {
        let Self { energy, potential, a, b } = *self;
        if ![energy, potential, a, b].iter().all(|v| v.is_finite()) {
            return Err(Error::domain("parameters must be finite"));
        }
        if !(energy > 0.0) {
            return Err(Error::domain(format!("energy must be positive (got {energy})")));
        }
        if !(energy < potential) {
            return Err(Error::domain(format!(
                "energy must be below barrier potential (energy {energy}, potential {potential})"
            )));
        }
        if a > 0.0 {
            return Err(Error::domain(format!("pre-barrier coordinate a must not be positive (got {a})")));
        }
        if b < 0.0 {
            return Err(Error::domain(format!("barrier length must not be negative (got {b})")));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SquareDerived {
    pub k: f64,
    pub beta: f64,
    /// `k·a`, rad
    pub theta: f64,
}

pub fn derive(spec: &SquareBarrierSpec, profile: &ConstantsProfile) -> Result<SquareDerived> {
    spec.validate()?;
    let k = profile.wavenumber(spec.energy)?;
    let beta = profile.decay_constant(spec.energy, spec.potential)?;
    Ok(SquareDerived { k, beta, theta: k * spec.a })
}

/// Closed-form determinant of the boundary matrix,
/// `2(β²−k²) sinΘ sinh(βb) + 4kβ [1 − cosΘ cosh(βb)]`.
///
/// For `βb > SCALING_THRESHOLD` the value is multiplied by `e^{-βb}`; the sign
/// and hence every root is unchanged.
pub fn determinant_closed_form(theta: f64, k: f64, beta: f64, b: f64) -> f64 {
    let bb = beta * b;
    if bb <= SCALING_THRESHOLD {
        determinant_unscaled(theta, k, beta, b)
    } else {
        let e1 = (-bb).exp();
        let e2 = e1 * e1;
        let (sin, cos) = theta.sin_cos();
        (beta * beta - k * k) * sin * (1.0 - e2) + 4.0 * k * beta * e1 - 2.0 * k * beta * cos * (1.0 + e2)
    }
}

/// The closed form without any rescaling. Overflows once `βb` approaches 710.
///
/// `1 − cosΘ cosh βb` is evaluated as `2 sin²(r/2) cosh βb − 2 sinh²(βb/2)`
/// with `r` the offset of Θ from the nearest multiple of 2π.
pub fn determinant_unscaled(theta: f64, k: f64, beta: f64, b: f64) -> f64 {
    let bb = beta * b;
    let r = theta - (theta / TAU).round() * TAU;
    let half_sin = (0.5 * r).sin();
    let half_sinh = (0.5 * bb).sinh();
    let bracket = 2.0 * half_sin * half_sin * bb.cosh() - 2.0 * half_sinh * half_sinh;
    2.0 * (beta * beta - k * k) * r.sin() * bb.sinh() + 4.0 * k * beta * bracket
}

/// Continuity of ψ and ψ' at `x = 0` (rows 1–2) and across the closure
/// `x = a ↔ x = b` (rows 3–4), acting on `(A, B, C, D)`.
pub fn build_matrix(theta: f64, k: f64, beta: f64, b: f64) -> Mat4 {
    let (sin, cos) = theta.sin_cos();
    let ep = (beta * b).exp();
    let em = (-beta * b).exp();
    Mat4::new(
        1.0,
        0.0,
        -1.0,
        -1.0, //
        0.0,
        k,
        -beta,
        beta, //
        cos,
        sin,
        -ep,
        -em, //
        k * sin,
        -k * cos,
        beta * ep,
        -beta * em,
    )
}

pub fn determinant_matrix(theta: f64, k: f64, beta: f64, b: f64) -> f64 {
    lu_determinant(&build_matrix(theta, k, beta, b))
}

/// Large-`b` limit of the root on `branch` (0 = the family nearest Θ = 0,
/// 1 = the next one down). Solves `(β²−k²) sinΘ − 2kβ cosΘ = 0`.
pub fn asymptotic_theta(k: f64, beta: f64, branch: usize) -> f64 {
    let base = (2.0 * k * beta).atan2(beta * beta - k * k);
    base - std::f64::consts::PI * (branch as f64 + 1.0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constants::{make_profile, ConstantsMode};
    use std::f64::consts::PI;

    fn paper() -> ConstantsProfile {
        make_profile(ConstantsMode::PaperEffective)
    }

    #[test]
    fn derive_reproduces_tabulated_phase() {
        let p = paper();
        let d = derive(&SquareBarrierSpec::new(0.95, 1.0, -0.026320, 0.5).unwrap(), &p).unwrap();
        assert!((d.theta - -1.3141e-4).abs() < 1e-7, "{}", d.theta);
        let d = derive(&SquareBarrierSpec::new(0.95, 1.0, -719.4395, 50000.0).unwrap(), &p).unwrap();
        assert!((d.theta - -3.592621).abs() < 1e-3, "{}", d.theta);
        let d = derive(&SquareBarrierSpec::new(0.95, 1.0, 0.0, 1.0).unwrap(), &p).unwrap();
        assert_eq!(d.theta, 0.0);
    }

    #[test]
    fn rejects_non_physical_specs() {
        assert!(SquareBarrierSpec::new(1.05, 1.0, -1.0, 1.0).is_err());
        assert!(SquareBarrierSpec::new(0.0, 1.0, -1.0, 1.0).is_err());
        assert!(SquareBarrierSpec::new(0.5, 1.0, 1.0, 1.0).is_err());
        assert!(SquareBarrierSpec::new(0.5, 1.0, -1.0, -1.0).is_err());
    }

    #[test]
    fn special_phases() {
        let (k, beta, b): (f64, f64, f64) = (0.7, 1.3, 2.0);
        let c = (beta * b).cosh();
        let d0 = determinant_closed_form(0.0, k, beta, b);
        assert!((d0 - 4.0 * k * beta * (1.0 - c)).abs() <= 1e-12 * d0.abs());
        assert!(d0 < 0.0);
        assert_eq!(determinant_closed_form(0.0, k, beta, 0.0), 0.0);
        let dpi = determinant_closed_form(PI, k, beta, b);
        assert!((dpi - 4.0 * k * beta * (1.0 + c)).abs() <= 1e-12 * dpi);
        assert!(dpi > 0.0);
    }

    #[test]
    fn small_arguments_keep_precision() {
        // 50-digit reference; the literal 1 − cosΘ cosh βb loses ~6 digits here.
        let got = determinant_closed_form(-3e-5, 0.7, 1.3, 7.692307692307694e-6);
        assert!((got - 7.360000000535332e-10).abs() <= 1e-14 * 7.36e-10, "{got:e}");
    }

    #[test]
    fn matrix_rows() {
        let m = build_matrix(-0.4, 0.3, 0.9, 1.7);
        assert_eq!(m.row(0).iter().copied().collect::<Vec<_>>(), vec![1.0, 0.0, -1.0, -1.0]);
        assert_eq!(m.row(1).iter().copied().collect::<Vec<_>>(), vec![0.0, 0.3, -0.9, 0.9]);
    }

    #[test]
    fn degenerate_loop_has_zero_determinant() {
        assert!(determinant_matrix(0.0, 0.4, 0.8, 0.0).abs() < 1e-15);
    }

    #[test]
    fn closed_form_matches_matrix() {
        for &(theta, k, beta, b) in &[(-0.3, 0.5, 0.2, 3.0), (-2.0, 1.1, 0.7, 0.4), (-5.5, 0.05, 0.9, 10.0)] {
            let lhs = determinant_closed_form(theta, k, beta, b);
            let rhs = determinant_matrix(theta, k, beta, b);
            assert!((lhs - rhs).abs() <= 1e-12 * lhs.abs().max(4.0 * k * beta), "{lhs} vs {rhs}");
        }
    }

    #[test]
    fn scaled_form_keeps_sign() {
        let (k, beta) = (0.5, 0.2);
        for theta in [-0.1, -0.5, -1.0, -3.0, -4.0] {
            let b = 150.1; // βb just above the threshold
            let scaled = determinant_closed_form(theta, k, beta, b);
            let raw = determinant_unscaled(theta, k, beta, b);
            assert_eq!(scaled.signum(), raw.signum());
            assert!((scaled - raw * (-beta * b).exp()).abs() <= 1e-12 * scaled.abs());
        }
    }

    #[test]
    fn asymptote_for_tabulated_energy() {
        let p = paper();
        let k = p.wavenumber(0.95).unwrap();
        let beta = p.decay_constant(0.95, 1.0).unwrap();
        let tan = 2.0 * k * beta / (beta * beta - k * k);
        assert!((tan - -0.48430).abs() < 1e-4);
        assert!((asymptotic_theta(k, beta, 0).to_degrees() - -25.84194).abs() < 1e-3);
        assert!((asymptotic_theta(k, beta, 1).to_degrees() - -205.8419).abs() < 1e-3);
    }
}
