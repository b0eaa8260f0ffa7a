//! Independent cross-checks that do not go through the boundary matrices:
//! RK4 propagation of `(ψ, ψ')` through piecewise-linear potentials and the
//! resulting loop monodromy. A mode exists exactly when the monodromy has
//! eigenvalue 1, i.e. `tr(M) = 2` (its determinant is 1).

use nalgebra::Matrix2;

use crate::airy::airy_eval;
use crate::circuit::Circuit;
use crate::constants::ConstantsProfile;
use crate::error::{Error, Result};
use crate::square;
use crate::triangular::{self, TriangularDerived};

/// Default RK4 steps per region.
pub const DEFAULT_STEPS: usize = 10_000;
pub const MIN_STEPS: usize = 100;

/// Maps the state `(ψ, ψ')` at one abscissa to another.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TransferMatrix {
    pub m: Matrix2<f64>,
}

impl TransferMatrix {
    pub fn identity() -> Self {
        Self { m: Matrix2::identity() }
    }

    pub fn det(&self) -> f64 {
        self.m[(0, 0)] * self.m[(1, 1)] - self.m[(0, 1)] * self.m[(1, 0)]
    }

    pub fn trace(&self) -> f64 {
        self.m[(0, 0)] + self.m[(1, 1)]
    }

    /// Propagate through `self`, then through `next`.
    pub fn then(&self, next: &TransferMatrix) -> TransferMatrix {
        TransferMatrix { m: next.m * self.m }
    }

    /// Largest absolute entry.
    pub fn max_abs(&self) -> f64 {
        self.m.iter().fold(0.0f64, |acc, v| acc.max(v.abs()))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PiecewiseLinearPotential {
    nodes: Vec<(f64, f64)>,
}

impl PiecewiseLinearPotential {
    /// Nodes `(x, V)` with strictly increasing `x`. Outside the node range
    /// the end values are held constant.
    pub fn new(nodes: Vec<(f64, f64)>) -> Result<Self> {
        if nodes.is_empty() {
            return Err(Error::Parameters("potential needs at least one node".into()));
        }
        if nodes.windows(2).any(|w| !(w[0].0 < w[1].0)) {
            return Err(Error::Parameters("potential nodes must be strictly increasing in x".into()));
        }
        if nodes.iter().any(|(x, v)| !x.is_finite() || !v.is_finite()) {
            return Err(Error::Parameters("potential nodes must be finite".into()));
        }
        Ok(Self { nodes })
    }

    pub fn constant(value: f64) -> Self {
        Self { nodes: vec![(0.0, value)] }
    }

    pub fn value(&self, x: f64) -> f64 {
        let n = &self.nodes;
        if x <= n[0].0 {
            return n[0].1;
        }
        if x >= n[n.len() - 1].0 {
            return n[n.len() - 1].1;
        }
        let i = n.partition_point(|&(xi, _)| xi <= x);
        let (x0, v0) = n[i - 1];
        let (x1, v1) = n[i];
        v0 + (v1 - v0) * (x - x0) / (x1 - x0)
    }
}

/// Fixed-step RK4 for `ψ'' = k0² (V(x) − E) ψ`, carried for both unit
/// initial states so the result is the transfer matrix from `x0` to `x1`.
pub fn integrate_transfer(
    potential: &PiecewiseLinearPotential,
    energy: f64,
    x0: f64,
    x1: f64,
    steps: usize,
    profile: &ConstantsProfile,
) -> Result<TransferMatrix> {
    if steps < MIN_STEPS {
        return Err(Error::Parameters(format!("integration needs at least {MIN_STEPS} steps (got {steps})")));
    }
    if !(x0 < x1) {
        return Err(Error::Parameters(format!("integration interval [{x0}, {x1}] is empty")));
    }
    let h = (x1 - x0) / steps as f64;
    if x0 + h == x0 {
        return Err(Error::StepUnderflow(x0));
    }
    let k0sq = profile.k0 * profile.k0;
    let generator = |x: f64| Matrix2::new(0.0, 1.0, k0sq * (potential.value(x) - energy), 0.0);

    let mut y = Matrix2::identity();
    for i in 0..steps {
        let x = x0 + h * i as f64;
        let a0 = generator(x);
        let am = generator(x + 0.5 * h);
        let a1 = generator(x + h);
        let k1 = a0 * y;
        let k2 = am * (y + k1 * (0.5 * h));
        let k3 = am * (y + k2 * (0.5 * h));
        let k4 = a1 * (y + k3 * h);
        y += (k1 + k2 * 2.0 + k3 * 2.0 + k4) * (h / 6.0);
    }
    Ok(TransferMatrix { m: y })
}

/// Exact transfer across a zero-potential stretch of length `len`.
pub fn free_transfer(k: f64, len: f64) -> TransferMatrix {
    let (s, c) = (k * len).sin_cos();
    TransferMatrix { m: Matrix2::new(c, s / k, -k * s, c) }
}

/// Exact transfer across a flat barrier with decay constant `beta`.
pub fn square_barrier_transfer(beta: f64, len: f64) -> TransferMatrix {
    let (sh, ch) = ((beta * len).sinh(), (beta * len).cosh());
    TransferMatrix { m: Matrix2::new(ch, sh / beta, beta * sh, ch) }
}

/// Transfer from the start to the end of a triangular barrier, built from
/// the Airy fundamental solutions `Ai(X − γs)`, `Bi(X − γs)`.
pub fn airy_barrier_transfer(d: &TriangularDerived) -> Result<TransferMatrix> {
    let fundamental = |arg: f64| -> Result<Matrix2<f64>> {
        let v = airy_eval(arg)?;
        Ok(Matrix2::new(v.ai, v.bi, -d.gamma * v.aip, -d.gamma * v.bip))
    };
    let start = fundamental(d.arg_start)?;
    let end = fundamental(d.arg_end)?;
    // det(start) = −γ/π exactly, but invert numerically to stay self-contained.
    let det = start[(0, 0)] * start[(1, 1)] - start[(0, 1)] * start[(1, 0)];
    let inv = Matrix2::new(start[(1, 1)], -start[(0, 1)], -start[(1, 0)], start[(0, 0)]) / det;
    Ok(TransferMatrix { m: end * inv })
}

fn rk4_region(
    potential: &PiecewiseLinearPotential,
    energy: f64,
    len: f64,
    steps: usize,
    profile: &ConstantsProfile,
) -> Result<TransferMatrix> {
    if len == 0.0 {
        return Ok(TransferMatrix::identity());
    }
    integrate_transfer(potential, energy, 0.0, len, steps, profile)
}

/// Monodromy once around the loop, built only from RK4 propagation:
/// the zero-potential region first, then the barrier.
pub fn loop_monodromy(
    circuit: &Circuit,
    profile: &ConstantsProfile,
    steps_per_region: usize,
) -> Result<TransferMatrix> {
    match circuit {
        Circuit::Square(s) => {
            square::derive(s, profile)?;
            let free = rk4_region(&PiecewiseLinearPotential::constant(0.0), s.energy, -s.a, steps_per_region, profile)?;
            let barrier =
                rk4_region(&PiecewiseLinearPotential::constant(s.potential), s.energy, s.b, steps_per_region, profile)?;
            Ok(free.then(&barrier))
        }
        Circuit::Triangular(t) => {
            let d = triangular::derive(t, profile)?;
            let free = rk4_region(
                &PiecewiseLinearPotential::constant(0.0),
                t.energy,
                d.barrier_start,
                steps_per_region,
                profile,
            )?;
            let ramp = PiecewiseLinearPotential::new(vec![(0.0, t.peak_potential), (t.barrier_length, 0.0)])?;
            let barrier = rk4_region(&ramp, t.energy, t.barrier_length, steps_per_region, profile)?;
            Ok(free.then(&barrier))
        }
    }
}

/// Same monodromy from the exact per-region transfers (trig/hyperbolic for
/// the square loop, Airy for the triangular one).
pub fn analytic_monodromy(circuit: &Circuit, profile: &ConstantsProfile) -> Result<TransferMatrix> {
    match circuit {
        Circuit::Square(s) => {
            let d = square::derive(s, profile)?;
            Ok(free_transfer(d.k, -s.a).then(&square_barrier_transfer(d.beta, s.b)))
        }
        Circuit::Triangular(t) => {
            let d = triangular::derive(t, profile)?;
            // free_transfer(k, A) with kA replaced by the exact phase.
            let (sin, cos) = t.theta.sin_cos();
            let free = TransferMatrix { m: Matrix2::new(cos, sin / d.k, -d.k * sin, cos) };
            Ok(free.then(&airy_barrier_transfer(&d)?))
        }
    }
}
