//! Closed loop with a triangular barrier.
//!
//! Region I spans `0 <= x <= A` at zero potential. The barrier spans
//! `A <= x <= C` with `V(x) = V0 (C − x) / (C − A)`, and the loop closes by
//! identifying `x = C` with `x = 0`. Inside the barrier
//! `ψ = C3 Ai(K − γx) + C4 Bi(K − γx)`.

use serde::{Deserialize, Serialize};

use crate::airy::{airy_eval, AiryValues};
use crate::constants::ConstantsProfile;
use crate::error::{Error, Result};
use crate::linalg::{lu_determinant, Mat4};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TriangularBarrierSpec {
    /// eV
    pub energy: f64,
    /// Potential at the barrier start, V.
    pub peak_potential: f64,
    /// `C − A`, nm.
    pub barrier_length: f64,
    /// `k·A`, rad.
    pub theta: f64,
}

impl TriangularBarrierSpec {
    pub fn new(energy: f64, peak_potential: f64, barrier_length: f64, theta: f64) -> Result<Self> {
        let spec = Self { energy, peak_potential, barrier_length, theta };
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<()> {
        let Self { energy, peak_potential, barrier_length, theta } = *self;
        if ![energy, peak_potential, barrier_length, theta].iter().all(|v| v.is_finite()) {
            return Err(Error::domain("parameters must be finite"));
        }
        if !(energy > 0.0) {
            return Err(Error::domain(format!("energy must be positive (got {energy})")));
        }
        if !(energy < peak_potential) {
            return Err(Error::domain(format!(
                "energy must be below barrier potential (energy {energy}, potential {peak_potential})"
            )));
        }
        if !(barrier_length > 0.0) {
            return Err(Error::domain(format!("barrier length must be positive (got {barrier_length})")));
        }
        if theta < 0.0 {
            return Err(Error::domain(format!("theta must not be negative for the triangular loop (got {theta})")));
        }
        Ok(())
    }
}

/// Everything the determinant needs, derived from a spec.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TriangularDerived {
    pub k: f64,
    /// End of Region I / start of the barrier (A), nm.
    pub barrier_start: f64,
    /// Classical turning point (B), nm.
    pub turning_point: f64,
    /// End of the barrier (C), nm.
    pub barrier_end: f64,
    /// Airy-argument slope γ, nm⁻¹.
    pub gamma: f64,
    /// Airy-argument offset K.
    pub offset: f64,
    /// `γ / k`.
    pub ratio: f64,
    /// Airy argument at the barrier start (X).
    pub arg_start: f64,
    /// Airy argument at the barrier end (Y).
    pub arg_end: f64,
}

pub fn derive(spec: &TriangularBarrierSpec, profile: &ConstantsProfile) -> Result<TriangularDerived> {
    spec.validate()?;
    let TriangularBarrierSpec { energy, peak_potential, barrier_length, theta } = *spec;
    let k = profile.wavenumber(energy)?;
    let start = theta / k;
    let end = start + barrier_length;
    let fraction = energy / peak_potential;
    let turning_point = end - fraction * barrier_length;
    let gamma = (profile.k0 * profile.k0 * peak_potential / barrier_length).cbrt();
    let offset = gamma * (end - barrier_length * fraction);
    // K − γA and K − γC, written without the cancellation between K and γA.
    let span = gamma * barrier_length;
    Ok(TriangularDerived {
        k,
        barrier_start: start,
        turning_point,
        barrier_end: end,
        gamma,
        offset,
        ratio: gamma / k,
        arg_start: span * (1.0 - fraction),
        arg_end: -span * fraction,
    })
}

/// `X − Y = (k0² V0)^(1/3) L^(2/3)`, independent of the energy.
pub fn x_minus_y(barrier_length: f64, peak_potential: f64, profile: &ConstantsProfile) -> f64 {
    (profile.k0 * profile.k0 * peak_potential).cbrt() * barrier_length.powf(2.0 / 3.0)
}

/// Dimensionless boundary matrix acting on `(C1, C2, C3, C4)`.
///
/// Rows: ψ and ψ'/k continuity at `x = A`, then at the closure `x = C ↔ 0`.
pub fn build_matrix(theta: f64, arg_start: f64, arg_end: f64, ratio: f64) -> Result<Mat4> {
    let x = airy_eval(arg_start)?;
    let y = airy_eval(arg_end)?;
    Ok(matrix_from_airy(theta, &x, &y, ratio))
}

pub(crate) fn matrix_from_airy(theta: f64, x: &AiryValues, y: &AiryValues, ratio: f64) -> Mat4 {
    let (sin, cos) = theta.sin_cos();
    Mat4::new(
        cos,
        sin,
        -x.ai,
        -x.bi, //
        -sin,
        cos,
        ratio * x.aip,
        ratio * x.bip, //
        1.0,
        0.0,
        -y.ai,
        -y.bi, //
        0.0,
        1.0,
        ratio * y.aip,
        ratio * y.bip,
    )
}

pub fn determinant(theta: f64, arg_start: f64, arg_end: f64, ratio: f64) -> Result<f64> {
    Ok(lu_determinant(&build_matrix(theta, arg_start, arg_end, ratio)?))
}
