//! Any one of the four loop parameters may be left free; it is then varied
//! until the determinant vanishes.

use std::f64::consts::TAU;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::bracket::{refine_root, scan_brackets, RefineOptions};
use crate::circuit::{Circuit, Model};
use crate::constants::ConstantsProfile;
use crate::error::{Error, Result};
use crate::square::SquareBarrierSpec;
use crate::triangular::TriangularBarrierSpec;

/// Default Θ scan resolution, grid points per 2π.
pub const THETA_STEPS_PER_TURN: usize = 10_000;
/// Default scan resolution for every other free parameter.
pub const DEFAULT_SCAN_STEPS: usize = 10_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FreeParameter {
    Theta,
    Energy,
    BarrierHeight,
    BarrierLength,
    PreBarrierLength,
}

impl FreeParameter {
    pub fn name(&self) -> &'static str {
        match self {
            FreeParameter::Theta => "theta",
            FreeParameter::Energy => "energy",
            FreeParameter::BarrierHeight => "barrier_height",
            FreeParameter::BarrierLength => "barrier_length",
            FreeParameter::PreBarrierLength => "pre_barrier_length",
        }
    }

    pub fn unit(&self) -> &'static str {
        match self {
            FreeParameter::Theta => "rad",
            FreeParameter::Energy => "eV",
            FreeParameter::BarrierHeight => "V",
            FreeParameter::BarrierLength | FreeParameter::PreBarrierLength => "nm",
        }
    }
}

impl fmt::Display for FreeParameter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for FreeParameter {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.replace('-', "_").as_str() {
            "theta" => Ok(FreeParameter::Theta),
            "energy" => Ok(FreeParameter::Energy),
            "barrier_height" | "potential" => Ok(FreeParameter::BarrierHeight),
            "barrier_length" => Ok(FreeParameter::BarrierLength),
            "pre_barrier_length" => Ok(FreeParameter::PreBarrierLength),
            other => Err(Error::Parameters(format!("unknown free parameter '{other}'"))),
        }
    }
}

/// A zero of the determinant along the free parameter.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ModeRoot {
    pub free_parameter: FreeParameter,
    /// In the free parameter's unit (radians for Θ).
    pub value: f64,
    /// Determinant at `value`.
    pub residual: f64,
    pub branch_index: usize,
}

/// The loop parameters. Exactly one of `theta` / `pre_barrier_length` closes
/// the geometry; `pre_barrier_length` is the positive length of the
/// zero-potential region.
#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
pub struct ParameterSet {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub energy: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub potential: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub barrier_length: Option<f64>,
    /// rad
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub theta: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub pre_barrier_length: Option<f64>,
}

fn required(value: Option<f64>, name: &str) -> Result<f64> {
    value.ok_or_else(|| Error::Parameters(format!("{name} is required")))
}

impl ParameterSet {
    pub fn get(&self, p: FreeParameter) -> Option<f64> {
        match p {
            FreeParameter::Theta => self.theta,
            FreeParameter::Energy => self.energy,
            FreeParameter::BarrierHeight => self.potential,
            FreeParameter::BarrierLength => self.barrier_length,
            FreeParameter::PreBarrierLength => self.pre_barrier_length,
        }
    }

    pub fn with(&self, p: FreeParameter, value: f64) -> ParameterSet {
        let mut out = *self;
        let slot = match p {
            FreeParameter::Theta => &mut out.theta,
            FreeParameter::Energy => &mut out.energy,
            FreeParameter::BarrierHeight => &mut out.potential,
            FreeParameter::BarrierLength => &mut out.barrier_length,
            FreeParameter::PreBarrierLength => &mut out.pre_barrier_length,
        };
        *slot = Some(value);
        out
    }

    /// Fails unless `free` is unset and the remaining three parameters are
    /// given (with exactly one of Θ / pre-barrier length when neither is free).
    pub fn check_free(&self, free: FreeParameter) -> Result<()> {
        if self.get(free).is_some() {
            return Err(Error::Parameters(format!("{free} is free and must not also be fixed")));
        }
        let closure_free = matches!(free, FreeParameter::Theta | FreeParameter::PreBarrierLength);
        if closure_free && (self.theta.is_some() || self.pre_barrier_length.is_some()) {
            return Err(Error::Parameters("theta and pre_barrier_length fix the same degree of freedom".into()));
        }
        self.with(free, f64::NAN).check_complete()
    }

    fn check_complete(&self) -> Result<()> {
        required(self.energy, "energy")?;
        required(self.potential, "potential")?;
        required(self.barrier_length, "barrier_length")?;
        match (self.theta, self.pre_barrier_length) {
            (Some(_), Some(_)) => Err(Error::Parameters("give either theta or pre_barrier_length, not both".into())),
            (None, None) => Err(Error::Parameters("theta or pre_barrier_length is required".into())),
            _ => Ok(()),
        }
    }

    /// Build the loop when every parameter is fixed.
    pub fn circuit(&self, model: Model, profile: &ConstantsProfile) -> Result<Circuit> {
        self.check_complete()?;
        let energy = required(self.energy, "energy")?;
        let potential = required(self.potential, "potential")?;
        let length = required(self.barrier_length, "barrier_length")?;
        match model {
            Model::Square => {
                let a = match (self.theta, self.pre_barrier_length) {
                    (Some(theta), _) => theta / profile.wavenumber(energy)?,
                    (_, Some(len)) => -len,
                    _ => unreachable!(),
                };
                Ok(Circuit::Square(SquareBarrierSpec::new(energy, potential, a, length)?))
            }
            Model::Triangular => {
                let theta = match (self.theta, self.pre_barrier_length) {
                    (Some(theta), _) => theta,
                    (_, Some(len)) => profile.wavenumber(energy)? * len,
                    _ => unreachable!(),
                };
                Ok(Circuit::Triangular(TriangularBarrierSpec::new(energy, potential, length, theta)?))
            }
        }
    }

    /// Reject search ranges that leave the physical domain.
    pub fn check_range(&self, model: Model, free: FreeParameter, lo: f64, hi: f64) -> Result<()> {
        let bad = |reason: String| Err(Error::InvalidRange { lo, hi, reason });
        if !(lo < hi) || !lo.is_finite() || !hi.is_finite() {
            return bad("range must be finite with lo < hi".into());
        }
        match free {
            FreeParameter::Theta => match model {
                Model::Square if hi > 0.0 => bad("theta must not be positive for the square loop".into()),
                Model::Triangular if lo < 0.0 => bad("theta must not be negative for the triangular loop".into()),
                _ => Ok(()),
            },
            FreeParameter::Energy => {
                let v = self.potential.unwrap_or(f64::INFINITY);
                if lo <= 0.0 || hi >= v {
                    bad(format!("energy must lie strictly between 0 and the barrier potential {v}"))
                } else {
                    Ok(())
                }
            }
            FreeParameter::BarrierHeight => {
                let e = self.energy.unwrap_or(0.0);
                if lo <= e {
                    bad(format!("barrier potential must exceed the energy {e}"))
                } else {
                    Ok(())
                }
            }
            FreeParameter::BarrierLength => match model {
                Model::Square if lo < 0.0 => bad("barrier length must not be negative".into()),
                Model::Triangular if lo <= 0.0 => bad("barrier length must be positive".into()),
                _ => Ok(()),
            },
            FreeParameter::PreBarrierLength if lo < 0.0 => bad("pre-barrier length must not be negative".into()),
            FreeParameter::PreBarrierLength => Ok(()),
        }
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
pub struct SolveOptions {
    /// Scan intervals across the whole range; `None` uses the defaults
    /// (`THETA_STEPS_PER_TURN` per 2π for Θ, `DEFAULT_SCAN_STEPS` otherwise).
    pub steps: Option<usize>,
    pub refine: RefineOptions,
}

pub(crate) fn theta_steps(width: f64, per_turn: usize, min: usize) -> usize {
    ((per_turn as f64 * width / TAU).ceil() as usize).max(min)
}

/// Every root of the determinant in `[lo, hi]` along `free`.
///
/// Roots along Θ or the pre-barrier length are ordered by magnitude (branch 0
/// is nearest the degenerate zero-length loop); other parameters ascend.
pub fn solve_free_parameter(
    model: Model,
    fixed: &ParameterSet,
    free: FreeParameter,
    lo: f64,
    hi: f64,
    profile: &ConstantsProfile,
    opts: &SolveOptions,
) -> Result<Vec<ModeRoot>> {
    fixed.check_free(free)?;
    fixed.check_range(model, free, lo, hi)?;
    let det = |x: f64| fixed.with(free, x).circuit(model, profile)?.determinant(profile);

    let steps = opts.steps.unwrap_or_else(|| match free {
        FreeParameter::Theta => theta_steps(hi - lo, THETA_STEPS_PER_TURN, 100),
        _ => DEFAULT_SCAN_STEPS,
    });
    let brackets = scan_brackets(det, lo, hi, steps)?;
    let mut roots = brackets
        .iter()
        .map(|b| {
            let r = refine_root(det, b, &opts.refine)?;
            Ok(ModeRoot { free_parameter: free, value: r.value, residual: r.residual, branch_index: 0 })
        })
        .collect::<Result<Vec<_>>>()?;

    match free {
        FreeParameter::Theta | FreeParameter::PreBarrierLength => {
            roots.sort_by(|a, b| a.value.abs().total_cmp(&b.value.abs()))
        }
        _ => roots.sort_by(|a, b| a.value.total_cmp(&b.value)),
    }
    for (i, r) in roots.iter_mut().enumerate() {
        r.branch_index = i;
    }
    Ok(roots)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constants::{make_profile, ConstantsMode};

    fn square_fixed(b: f64) -> ParameterSet {
        ParameterSet { energy: Some(0.95), potential: Some(1.0), barrier_length: Some(b), ..Default::default() }
    }

    #[test]
    fn parses_free_parameter_names() {
        assert_eq!("theta".parse::<FreeParameter>().unwrap(), FreeParameter::Theta);
        assert_eq!("barrier-length".parse::<FreeParameter>().unwrap(), FreeParameter::BarrierLength);
        assert_eq!("pre_barrier_length".parse::<FreeParameter>().unwrap(), FreeParameter::PreBarrierLength);
        assert!("mass".parse::<FreeParameter>().is_err());
    }

    #[test]
    fn parameter_bookkeeping() {
        let fixed = square_fixed(1.0);
        assert!(fixed.check_free(FreeParameter::Theta).is_ok());
        assert!(fixed.check_free(FreeParameter::Energy).is_err());
        let both = ParameterSet { theta: Some(-0.1), energy: None, ..square_fixed(1.0) };
        assert!(both.check_free(FreeParameter::PreBarrierLength).is_err());
        assert!(both.check_free(FreeParameter::Energy).is_ok());
        let over = ParameterSet { pre_barrier_length: Some(3.0), ..both };
        assert!(over.check_free(FreeParameter::Energy).is_err());
    }

    #[test]
    fn square_theta_roots_for_unit_barrier() {
        let p = make_profile(ConstantsMode::PaperEffective);
        let roots = solve_free_parameter(
            Model::Square,
            &square_fixed(1.0),
            FreeParameter::Theta,
            -TAU,
            0.0,
            &p,
            &SolveOptions::default(),
        )
        .unwrap();
        assert_eq!(roots.len(), 2);
        assert!((roots[0].value.to_degrees() - -0.015059).abs() < 1e-3 * 0.015059);
        assert!((roots[1].value.to_degrees() - -359.7189).abs() < 1e-3 * 359.7189);
        assert_eq!((roots[0].branch_index, roots[1].branch_index), (0, 1));
    }

    #[test]
    fn pre_barrier_length_is_theta_over_k() {
        let p = make_profile(ConstantsMode::PaperEffective);
        let k = p.wavenumber(0.95).unwrap();
        let by_theta = solve_free_parameter(
            Model::Square,
            &square_fixed(1.0),
            FreeParameter::Theta,
            -TAU,
            0.0,
            &p,
            &SolveOptions::default(),
        )
        .unwrap();
        let by_len = solve_free_parameter(
            Model::Square,
            &square_fixed(1.0),
            FreeParameter::PreBarrierLength,
            0.0,
            TAU / k,
            &p,
            &SolveOptions::default(),
        )
        .unwrap();
        assert_eq!(by_len.len(), 2);
        for (t, l) in by_theta.iter().zip(&by_len) {
            assert!((-t.value / k - l.value).abs() <= 1e-9 * l.value, "{} vs {}", -t.value / k, l.value);
        }
    }

    #[test]
    fn range_checks() {
        let p = make_profile(ConstantsMode::PaperEffective);
        let opts = SolveOptions::default();
        let fixed = square_fixed(1.0);
        assert!(solve_free_parameter(Model::Square, &fixed, FreeParameter::Theta, -1.0, 1.0, &p, &opts).is_err());
        assert!(solve_free_parameter(Model::Square, &fixed, FreeParameter::Theta, 0.0, -1.0, &p, &opts).is_err());
        let e_free = ParameterSet { energy: None, theta: Some(-0.1), ..fixed };
        assert!(solve_free_parameter(Model::Square, &e_free, FreeParameter::Energy, 0.5, 1.2, &p, &opts).is_err());
        let bad = ParameterSet { energy: Some(1.05), ..fixed };
        assert!(solve_free_parameter(Model::Square, &bad, FreeParameter::Theta, -1.0, 0.0, &p, &opts).is_err());
    }

    #[test]
    fn energy_as_free_parameter() {
        // Fix the geometry of a known Θ-root and recover its energy.
        let p = make_profile(ConstantsMode::PaperEffective);
        let theta_roots = solve_free_parameter(
            Model::Square,
            &square_fixed(100.0),
            FreeParameter::Theta,
            -TAU,
            0.0,
            &p,
            &SolveOptions::default(),
        )
        .unwrap();
        let len = -theta_roots[1].value / p.wavenumber(0.95).unwrap();
        let fixed = ParameterSet { energy: None, pre_barrier_length: Some(len), ..square_fixed(100.0) };
        let roots =
            solve_free_parameter(Model::Square, &fixed, FreeParameter::Energy, 0.9, 0.99, &p, &SolveOptions::default())
                .unwrap();
        assert!(roots.iter().any(|r| (r.value - 0.95).abs() < 1e-9), "{roots:?}");
    }
}
