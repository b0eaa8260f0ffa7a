use serde::{Deserialize, Serialize};

use crate::constants::ConstantsProfile;
use crate::error::Result;
use crate::linalg::Mat4;
use crate::square::{self, SquareBarrierSpec};
use crate::triangular::{self, TriangularBarrierSpec};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Model {
    Square,
    Triangular,
}

impl std::fmt::Display for Model {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Model::Square => "square",
            Model::Triangular => "triangular",
        })
    }
}

/// A fully specified loop: every parameter fixed.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum Circuit {
    Square(SquareBarrierSpec),
    Triangular(TriangularBarrierSpec),
}

impl Circuit {
    pub fn model(&self) -> Model {
        match self {
            Circuit::Square(_) => Model::Square,
            Circuit::Triangular(_) => Model::Triangular,
        }
    }

    pub fn energy(&self) -> f64 {
        match self {
            Circuit::Square(s) => s.energy,
            Circuit::Triangular(t) => t.energy,
        }
    }

    /// Phase accumulated across the zero-potential region.
    pub fn theta(&self, profile: &ConstantsProfile) -> Result<f64> {
        match self {
            Circuit::Square(s) => Ok(square::derive(s, profile)?.theta),
            Circuit::Triangular(t) => Ok(t.theta),
        }
    }

    /// The literal 4×4 boundary matrix.
    pub fn matrix(&self, profile: &ConstantsProfile) -> Result<Mat4> {
        match self {
            Circuit::Square(s) => {
                let d = square::derive(s, profile)?;
                Ok(square::build_matrix(d.theta, d.k, d.beta, s.b))
            }
            Circuit::Triangular(t) => {
                let d = triangular::derive(t, profile)?;
                triangular::build_matrix(t.theta, d.arg_start, d.arg_end, d.ratio)
            }
        }
    }

    /// Determinant whose sign changes mark modes. For the square loop this is
    /// the overflow-safe closed form (possibly rescaled by a positive factor).
    pub fn determinant(&self, profile: &ConstantsProfile) -> Result<f64> {
        match self {
            Circuit::Square(s) => {
                let d = square::derive(s, profile)?;
                Ok(square::determinant_closed_form(d.theta, d.k, d.beta, s.b))
            }
            Circuit::Triangular(t) => {
                let d = triangular::derive(t, profile)?;
                triangular::determinant(t.theta, d.arg_start, d.arg_end, d.ratio)
            }
        }
    }
}
