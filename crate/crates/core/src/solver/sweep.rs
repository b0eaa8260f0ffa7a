//! Follow the two lowest Θ-branches of the square loop across a list of
//! barrier lengths.

use std::f64::consts::TAU;

use serde::{Deserialize, Serialize};

use super::bracket::{refine_root, scan_brackets, RefineOptions};
use super::problem::{
    solve_free_parameter, theta_steps, FreeParameter, ParameterSet, SolveOptions, THETA_STEPS_PER_TURN,
};
use crate::circuit::Model;
use crate::constants::ConstantsProfile;
use crate::error::{Error, Result};
use crate::square::{self, SquareBarrierSpec};

pub const BRANCHES: usize = 2;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SweepOptions {
    pub steps_per_turn: usize,
    /// Half-width of the continuation window relative to `|Θ|`.
    pub window_fraction: f64,
    /// Smallest half-width, rad.
    pub min_window: f64,
    /// Growth applied once when a window holds no root.
    pub widen_factor: f64,
    pub refine: RefineOptions,
}

impl Default for SweepOptions {
    fn default() -> Self {
        Self {
            steps_per_turn: THETA_STEPS_PER_TURN,
            window_fraction: 0.25,
            min_window: 0.05,
            widen_factor: 4.0,
            refine: RefineOptions::default(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BranchPoint {
    /// rad
    pub theta: f64,
    pub theta_deg: f64,
    /// Equal to `theta`; kept as its own column for tabulation.
    pub ka: f64,
    /// Start of Region I, nm.
    pub a: f64,
    /// Determinant at the root.
    pub residual: f64,
    /// Search interval that produced this root, rad.
    pub window: (f64, f64),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub b: f64,
    /// `None` once a branch has been lost.
    pub branches: Vec<Option<BranchPoint>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SquareSweep {
    pub energy: f64,
    pub potential: f64,
    pub rows: Vec<SweepRow>,
    pub warnings: Vec<String>,
}

fn point(theta: f64, residual: f64, k: f64, window: (f64, f64)) -> BranchPoint {
    BranchPoint { theta, theta_deg: theta.to_degrees(), ka: theta, a: theta / k, residual, window }
}

fn roots_in(
    energy: f64,
    potential: f64,
    b: f64,
    lo: f64,
    hi: f64,
    profile: &ConstantsProfile,
    opts: &SweepOptions,
) -> Result<Vec<(f64, f64)>> {
    let det = |theta: f64| {
        let spec = SquareBarrierSpec::from_theta(energy, potential, theta, b, profile)?;
        let d = square::derive(&spec, profile)?;
        Ok(square::determinant_closed_form(d.theta, d.k, d.beta, b))
    };
    let steps = theta_steps(hi - lo, opts.steps_per_turn, 32);
    scan_brackets(det, lo, hi, steps)?
        .iter()
        .map(|br| refine_root(det, br, &opts.refine).map(|r| (r.value, r.residual)))
        .collect()
}

fn window(centre: f64, half: f64) -> (f64, f64) {
    ((centre - half).max(-TAU), (centre + half).min(0.0))
}

/// Θ-roots on branches 0 and 1 for each barrier length in `b_list`.
///
/// The first length is scanned over `[−2π, 0]`. Every later root is sought in
/// a window around the previous one, widened once if empty; a branch with no
/// root in the widened window is dropped and a warning recorded.
pub fn sweep_square(
    energy: f64,
    potential: f64,
    b_list: &[f64],
    profile: &ConstantsProfile,
    opts: &SweepOptions,
) -> Result<SquareSweep> {
    let k = profile.wavenumber(energy)?;
    profile.decay_constant(energy, potential)?;
    if b_list.is_empty() {
        return Err(Error::Parameters("barrier length list is empty".into()));
    }
    if let Some(bad) = b_list.iter().find(|b| !(b.is_finite() && **b >= 0.0)) {
        return Err(Error::domain(format!("barrier length must not be negative (got {bad})")));
    }

    let mut rows = Vec::with_capacity(b_list.len());
    let mut warnings = Vec::new();

    let fixed = ParameterSet {
        energy: Some(energy),
        potential: Some(potential),
        barrier_length: Some(b_list[0]),
        ..Default::default()
    };
    let solve = SolveOptions { steps: Some(theta_steps(TAU, opts.steps_per_turn, 100)), refine: opts.refine };
    let first = solve_free_parameter(Model::Square, &fixed, FreeParameter::Theta, -TAU, 0.0, profile, &solve)?;
    let mut current: Vec<Option<BranchPoint>> =
        (0..BRANCHES).map(|i| first.get(i).map(|r| point(r.value, r.residual, k, (-TAU, 0.0)))).collect();
    for (i, c) in current.iter().enumerate() {
        if c.is_none() {
            warnings.push(format!("branch {i} has no root at b = {}", b_list[0]));
        }
    }
    rows.push(SweepRow { b: b_list[0], branches: current.clone() });

    for &b in &b_list[1..] {
        for (i, slot) in current.iter_mut().enumerate() {
            let Some(prev) = *slot else { continue };
            let mut half = (opts.window_fraction * prev.theta.abs()).max(opts.min_window);
            let mut found = None;
            for attempt in 0..2 {
                if attempt == 1 {
                    half *= opts.widen_factor;
                }
                let (lo, hi) = window(prev.theta, half);
                let roots = roots_in(energy, potential, b, lo, hi, profile, opts)?;
                if let Some(&(theta, residual)) =
                    roots.iter().min_by(|x, y| (x.0 - prev.theta).abs().total_cmp(&(y.0 - prev.theta).abs()))
                {
                    found = Some(point(theta, residual, k, (lo, hi)));
                    break;
                }
            }
            if found.is_none() {
                warnings.push(format!("branch {i} terminated at b = {b}: no root near theta = {:.9e} rad", prev.theta));
            }
            *slot = found;
        }
        rows.push(SweepRow { b, branches: current.clone() });
    }

    Ok(SquareSweep { energy, potential, rows, warnings })
}
