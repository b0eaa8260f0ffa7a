//! Mode coefficients from the null space of the boundary matrix, and the
//! wavefunction they describe.

use nalgebra::Vector4;
use serde::{Deserialize, Serialize};

use crate::airy::airy_eval;
use crate::circuit::Circuit;
use crate::constants::ConstantsProfile;
use crate::error::{Error, Result};
use crate::linalg::Mat4;
use crate::square;
use crate::triangular;

/// `‖M c‖₂` above this multiple of `‖M‖_F` means the matrix is not singular.
pub const NULL_SPACE_TOLERANCE: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum NormConvention {
    /// Unit Euclidean norm, largest-magnitude entry positive.
    UnitL2LargestPositive,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ModeCoefficients {
    pub c: [f64; 4],
    /// `‖M c‖₂`
    pub residual: f64,
    /// `‖M‖_F`
    pub matrix_norm: f64,
    pub norm_convention: NormConvention,
}

fn inverse_max_abs<'a>(values: impl Iterator<Item = &'a f64>) -> f64 {
    let m = values.fold(0.0f64, |acc, v| acc.max(v.abs()));
    if m > 0.0 && m.is_finite() {
        1.0 / m
    } else {
        1.0
    }
}

/// Right singular vector of the smallest singular value, computed after
/// equilibrating columns, rows, then columns again so that entries spanning
/// many orders of magnitude do not swamp the small ones.
pub fn nullspace_coefficients(m: &Mat4) -> Result<ModeCoefficients> {
    if m.iter().any(|v| !v.is_finite()) {
        return Err(Error::domain("boundary matrix has non-finite entries"));
    }
    let mut scaled = *m;
    let mut col_scale = [1.0; 4];
    let mut scale_columns = |scaled: &mut Mat4| {
        for (j, s) in col_scale.iter_mut().enumerate() {
            let c = inverse_max_abs(scaled.column(j).iter());
            scaled.column_mut(j).scale_mut(c);
            *s *= c;
        }
    };
    scale_columns(&mut scaled);
    for i in 0..4 {
        let r = inverse_max_abs(scaled.row(i).iter());
        scaled.row_mut(i).scale_mut(r);
    }
    scale_columns(&mut scaled);
    let svd = scaled.svd(false, true);
    let v_t = svd.v_t.ok_or_else(|| Error::domain("singular value decomposition failed"))?;
    let smallest = svd.singular_values.imin();
    let mut c = Vector4::from_fn(|j, _| v_t[(smallest, j)] * col_scale[j]);
    c /= c.norm();
    if c[c.iamax()] < 0.0 {
        c = -c;
    }
    let residual = (m * c).norm();
    let matrix_norm = m.norm();
    let limit = NULL_SPACE_TOLERANCE * matrix_norm;
    if !(residual <= limit) {
        return Err(Error::NotAMode { residual, limit });
    }
    Ok(ModeCoefficients {
        c: [c[0], c[1], c[2], c[3]],
        residual,
        matrix_norm,
        norm_convention: NormConvention::UnitL2LargestPositive,
    })
}

/// Solve for the coefficients of a fixed loop.
pub fn mode_coefficients(circuit: &Circuit, profile: &ConstantsProfile) -> Result<ModeCoefficients> {
    nullspace_coefficients(&circuit.matrix(profile)?)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Region {
    PreBarrier,
    Barrier,
}

impl Region {
    pub fn name(&self) -> &'static str {
        match self {
            Region::PreBarrier => "pre_barrier",
            Region::Barrier => "barrier",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WavefunctionSample {
    /// nm
    pub x: f64,
    pub psi: f64,
    /// nm⁻¹
    pub dpsi: f64,
    pub region: Region,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WavefunctionTrace {
    pub samples: Vec<WavefunctionSample>,
    /// Mismatch in ψ and ψ' at the barrier entrance, then ψ and ψ' across
    /// the closure.
    pub boundary_residuals: [f64; 4],
    pub max_abs_psi: f64,
    pub max_abs_dpsi: f64,
}

impl WavefunctionTrace {
    /// Residuals divided by the sampled maxima of `|ψ|` and `|ψ'|`.
    pub fn relative_residuals(&self) -> [f64; 4] {
        let scale = |v: f64| if v > 0.0 { v } else { 1.0 };
        let (p, d) = (scale(self.max_abs_psi), scale(self.max_abs_dpsi));
        let r = self.boundary_residuals;
        [r[0].abs() / p, r[1].abs() / d, r[2].abs() / p, r[3].abs() / d]
    }

    pub fn max_relative_residual(&self) -> f64 {
        self.relative_residuals().into_iter().fold(0.0, f64::max)
    }
}

fn linspace(lo: f64, hi: f64, n: usize) -> impl Iterator<Item = f64> {
    (0..n).map(move |i| if i + 1 == n { hi } else { lo + (hi - lo) * (i as f64 / (n - 1) as f64) })
}

/// Sample ψ and ψ' on `samples_per_region` points of each region.
pub fn trace_wavefunction(
    circuit: &Circuit,
    coeffs: &ModeCoefficients,
    samples_per_region: usize,
    profile: &ConstantsProfile,
) -> Result<WavefunctionTrace> {
    if samples_per_region < 2 {
        return Err(Error::Parameters(format!("need at least 2 samples per region (got {samples_per_region})")));
    }
    let [c1, c2, c3, c4] = coeffs.c;
    let mut samples = Vec::with_capacity(2 * samples_per_region);
    let residuals = match circuit {
        Circuit::Square(spec) => {
            let d = square::derive(spec, profile)?;
            let (k, beta) = (d.k, d.beta);
            let free = |x: f64| {
                let (s, c) = (k * x).sin_cos();
                (c1 * c + c2 * s, k * (c2 * c - c1 * s))
            };
            let barrier = |x: f64| {
                let (ep, em) = ((beta * x).exp(), (-beta * x).exp());
                (c3 * ep + c4 * em, beta * (c3 * ep - c4 * em))
            };
            for x in linspace(spec.a, 0.0, samples_per_region) {
                let (psi, dpsi) = free(x);
                samples.push(WavefunctionSample { x, psi, dpsi, region: Region::PreBarrier });
            }
            for x in linspace(0.0, spec.b, samples_per_region) {
                let (psi, dpsi) = barrier(x);
                samples.push(WavefunctionSample { x, psi, dpsi, region: Region::Barrier });
            }
            let (f0, b0) = (free(0.0), barrier(0.0));
            let (fa, bb) = (free(spec.a), barrier(spec.b));
            [f0.0 - b0.0, f0.1 - b0.1, fa.0 - bb.0, fa.1 - bb.1]
        }
        Circuit::Triangular(spec) => {
            let d = triangular::derive(spec, profile)?;
            let (k, gamma) = (d.k, d.gamma);
            let free = |x: f64| {
                let (s, c) = (k * x).sin_cos();
                (c1 * c + c2 * s, k * (c2 * c - c1 * s))
            };
            // Local coordinate s from the barrier start, argument X − γs.
            let barrier = |s: f64| -> Result<(f64, f64)> {
                let arg = if s == spec.barrier_length { d.arg_end } else { d.arg_start - gamma * s };
                let a = airy_eval(arg)?;
                Ok((c3 * a.ai + c4 * a.bi, -gamma * (c3 * a.aip + c4 * a.bip)))
            };
            for x in linspace(0.0, d.barrier_start, samples_per_region) {
                let (psi, dpsi) = free(x);
                samples.push(WavefunctionSample { x, psi, dpsi, region: Region::PreBarrier });
            }
            for s in linspace(0.0, spec.barrier_length, samples_per_region) {
                let (psi, dpsi) = barrier(s)?;
                samples.push(WavefunctionSample { x: d.barrier_start + s, psi, dpsi, region: Region::Barrier });
            }
            // Θ stands in for kA so the junction sees the exact phase.
            let (sin, cos) = spec.theta.sin_cos();
            let fa = (c1 * cos + c2 * sin, k * (c2 * cos - c1 * sin));
            let (f0, b0, bl) = (free(0.0), barrier(0.0)?, barrier(spec.barrier_length)?);
            [fa.0 - b0.0, fa.1 - b0.1, f0.0 - bl.0, f0.1 - bl.1]
        }
    };
    if let Some(s) = samples.iter().find(|s| !s.psi.is_finite() || !s.dpsi.is_finite()) {
        return Err(Error::NonFinite { at: s.x, value: s.psi });
    }
    let max_abs_psi = samples.iter().fold(0.0f64, |m, s| m.max(s.psi.abs()));
    let max_abs_dpsi = samples.iter().fold(0.0f64, |m, s| m.max(s.dpsi.abs()));
    Ok(WavefunctionTrace { samples, boundary_residuals: residuals, max_abs_psi, max_abs_dpsi })
}
