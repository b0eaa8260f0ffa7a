//! Airy functions Ai, Bi and their derivatives for real arguments.
//!
//! Two regimes:
//!
//! * `NEGATIVE_SWITCH <= x <= POSITIVE_SWITCH`: Maclaurin series of the two
//!   standard solutions `f`, `g` of `w'' = x w`, summed in double-double
//!   arithmetic. For positive `x` the combination `Ai = c1 f - c2 g` cancels
//!   by roughly `exp(4/3 x^(3/2))`, which plain `f64` cannot absorb.
//! * outside that interval: the standard asymptotic expansions, exponential
//!   for large positive `x` and oscillatory for large negative `x`, truncated
//!   at their smallest term.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Below this the oscillatory asymptotic expansion is used.
pub const NEGATIVE_SWITCH: f64 = -9.0;
/// Above this the exponential asymptotic expansion is used.
pub const POSITIVE_SWITCH: f64 = 8.0;

/// Bounds of the certified domain. Past `MAX_ARGUMENT` Bi overflows, past
/// `MIN_ARGUMENT` the phase `2/3 |x|^(3/2)` loses more than ~1e-11 to rounding.
pub const MIN_ARGUMENT: f64 = -1000.0;
pub const MAX_ARGUMENT: f64 = 100.0;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AiryValues {
    pub ai: f64,
    pub aip: f64,
    pub bi: f64,
    pub bip: f64,
}

impl AiryValues {
    /// `Ai·Bi' − Ai'·Bi`, identically `1/π`.
    pub fn wronskian(&self) -> f64 {
        self.ai * self.bip - self.aip * self.bi
    }
}

pub fn airy_eval(x: f64) -> Result<AiryValues> {
    if !x.is_finite() || !(MIN_ARGUMENT..=MAX_ARGUMENT).contains(&x) {
        return Err(Error::AiryRange(x));
    }
    if x < NEGATIVE_SWITCH {
        Ok(asymptotic_negative(x))
    } else if x > POSITIVE_SWITCH {
        Ok(asymptotic_positive(x))
    } else {
        Ok(maclaurin(x))
    }
}

// Ai(0) = 3^(-2/3) / Γ(2/3) and -Ai'(0) = 3^(-1/3) / Γ(1/3), split into
// double-double pairs.
const AI0: Dd = Dd { hi: 0.355_028_053_887_817_2, lo: 2.052_336_324_362_12e-17 };
const MINUS_AIP0: Dd = Dd { hi: 0.258_819_403_792_806_8, lo: -2.522_243_111_610_832e-17 };
const SQRT3: Dd = Dd { hi: 1.732_050_807_568_877_2, lo: 1.003_508_422_180_690_3e-16 };

/// Maclaurin series, valid for any `x` but only accurate inside the switch points.
pub(crate) fn maclaurin(x: f64) -> AiryValues {
    let x3 = Dd::from(x).mul_f64(x).mul_f64(x);

    // f = Σ a_k, f' = Σ b_k, g = Σ c_k, g' = Σ d_k
    let mut a = Dd::from(1.0);
    let mut b = Dd::from(x).mul_f64(x).div_f64(2.0);
    let mut c = Dd::from(x);
    let mut d = Dd::from(1.0);
    let (mut f, mut fp, mut g, mut gp) = (a, b, c, d);

    for k in 1..400 {
        let k3 = 3.0 * k as f64;
        a = a.mul(x3).div_f64(k3 * (k3 - 1.0));
        c = c.mul(x3).div_f64((k3 + 1.0) * k3);
        d = d.mul(x3).div_f64(k3 * (k3 - 2.0));
        f = f.add(a);
        g = g.add(c);
        gp = gp.add(d);
        if k >= 2 {
            b = b.mul(x3).div_f64((k3 - 1.0) * (k3 - 3.0));
            fp = fp.add(b);
        }
        let small = |t: Dd, s: Dd| t.hi.abs() <= 1e-34 * s.hi.abs();
        if small(a, f) && small(b, fp) && small(c, g) && small(d, gp) {
            break;
        }
    }

    let ai = AI0.mul(f).sub(MINUS_AIP0.mul(g));
    let aip = AI0.mul(fp).sub(MINUS_AIP0.mul(gp));
    let bi = SQRT3.mul(AI0.mul(f).add(MINUS_AIP0.mul(g)));
    let bip = SQRT3.mul(AI0.mul(fp).add(MINUS_AIP0.mul(gp)));
    AiryValues { ai: ai.to_f64(), aip: aip.to_f64(), bi: bi.to_f64(), bip: bip.to_f64() }
}

/// Coefficients `u_k` of the asymptotic expansions; `v_k = -(6k+1)/(6k-1) u_k`.
fn u_coefficients(n: usize) -> Vec<f64> {
    let mut u = Vec::with_capacity(n);
    u.push(1.0);
    for k in 1..n {
        let kf = k as f64;
        let next = u[k - 1] * (6.0 * kf - 5.0) * (6.0 * kf - 3.0) * (6.0 * kf - 1.0) / ((2.0 * kf - 1.0) * 216.0 * kf);
        u.push(next);
    }
    u
}

/// Sums `Σ sign(k)·coef_k / ζ^k` over the selected `k`, stopping at the
/// smallest term (optimal truncation) or once terms drop below 1e-17.
struct AsymptoticSums {
    u_even: f64,
    u_odd: f64,
    v_even: f64,
    v_odd: f64,
    u_all: f64,
    v_all: f64,
}

const MAX_TERMS: usize = 60;

fn optimally_truncated(coef: impl Fn(usize) -> f64, zeta: f64, ks: impl Iterator<Item = usize>) -> f64 {
    let mut sum = 0.0;
    let mut last = f64::INFINITY;
    for k in ks {
        let term = coef(k) / zeta.powi(k as i32);
        if term.abs() > last {
            break;
        }
        sum += term;
        last = term.abs();
        if term.abs() < 1e-17 * sum.abs() {
            break;
        }
    }
    sum
}

fn asymptotic_sums(zeta: f64, alternate_all: bool) -> AsymptoticSums {
    let u = u_coefficients(MAX_TERMS);
    let v = |k: usize| {
        let kf = k as f64;
        -(6.0 * kf + 1.0) / (6.0 * kf - 1.0) * u[k]
    };
    let sign = |j: usize| if j.is_multiple_of(2) { 1.0 } else { -1.0 };
    // P, Q, R, S of the oscillatory forms: alternate in the pair index j.
    let u_even = optimally_truncated(|k| sign(k / 2) * u[k], zeta, (0..MAX_TERMS).step_by(2));
    let u_odd = optimally_truncated(|k| sign(k / 2) * u[k], zeta, (1..MAX_TERMS).step_by(2));
    let v_even = optimally_truncated(|k| sign(k / 2) * v(k), zeta, (0..MAX_TERMS).step_by(2));
    let v_odd = optimally_truncated(|k| sign(k / 2) * v(k), zeta, (1..MAX_TERMS).step_by(2));
    let s = move |k: usize| if alternate_all { sign(k) } else { 1.0 };
    let u_all = optimally_truncated(|k| s(k) * u[k], zeta, 0..MAX_TERMS);
    let v_all = optimally_truncated(|k| s(k) * v(k), zeta, 0..MAX_TERMS);
    AsymptoticSums { u_even, u_odd, v_even, v_odd, u_all, v_all }
}

const FRAC_1_SQRT_PI: f64 = 0.564_189_583_547_756_3;

pub(crate) fn asymptotic_positive(x: f64) -> AiryValues {
    let zeta = 2.0 / 3.0 * x * x.sqrt();
    let q = x.powf(0.25);
    let decaying = asymptotic_sums(zeta, true);
    let growing = asymptotic_sums(zeta, false);
    let e_minus = (-zeta).exp();
    let e_plus = zeta.exp();
    AiryValues {
        ai: 0.5 * FRAC_1_SQRT_PI / q * e_minus * decaying.u_all,
        aip: -0.5 * FRAC_1_SQRT_PI * q * e_minus * decaying.v_all,
        bi: FRAC_1_SQRT_PI / q * e_plus * growing.u_all,
        bip: FRAC_1_SQRT_PI * q * e_plus * growing.v_all,
    }
}

pub(crate) fn asymptotic_negative(x: f64) -> AiryValues {
    let z = -x;
    let zeta = 2.0 / 3.0 * z * z.sqrt();
    let q = z.powf(0.25);
    let s = asymptotic_sums(zeta, true);
    let phase = zeta - std::f64::consts::FRAC_PI_4;
    let (sin, cos) = phase.sin_cos();
    AiryValues {
        ai: FRAC_1_SQRT_PI / q * (cos * s.u_even + sin * s.u_odd),
        aip: FRAC_1_SQRT_PI * q * (sin * s.v_even - cos * s.v_odd),
        bi: FRAC_1_SQRT_PI / q * (-sin * s.u_even + cos * s.u_odd),
        bip: FRAC_1_SQRT_PI * q * (cos * s.v_even + sin * s.v_odd),
    }
}

/// Minimal double-double number (`hi + lo`, `|lo| <= ulp(hi)/2`).
#[derive(Debug, Clone, Copy)]
struct Dd {
    hi: f64,
    lo: f64,
}

#[inline]
fn two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let bb = s - a;
    (s, (a - (s - bb)) + (b - bb))
}

#[inline]
fn quick_two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    (s, b - (s - a))
}

impl From<f64> for Dd {
    fn from(hi: f64) -> Self {
        Dd { hi, lo: 0.0 }
    }
}

impl Dd {
    fn to_f64(self) -> f64 {
        self.hi + self.lo
    }

    fn add(self, o: Dd) -> Dd {
        let (s, e) = two_sum(self.hi, o.hi);
        let (t, f) = two_sum(self.lo, o.lo);
        let (s, e) = quick_two_sum(s, e + t);
        let (hi, lo) = quick_two_sum(s, e + f);
        Dd { hi, lo }
    }

    fn sub(self, o: Dd) -> Dd {
        self.add(Dd { hi: -o.hi, lo: -o.lo })
    }

    fn mul(self, o: Dd) -> Dd {
        let p = self.hi * o.hi;
        let e = self.hi.mul_add(o.hi, -p) + (self.hi * o.lo + self.lo * o.hi);
        let (hi, lo) = quick_two_sum(p, e);
        Dd { hi, lo }
    }

    fn mul_f64(self, b: f64) -> Dd {
        let p = self.hi * b;
        let e = self.hi.mul_add(b, -p) + self.lo * b;
        let (hi, lo) = quick_two_sum(p, e);
        Dd { hi, lo }
    }

    fn div_f64(self, d: f64) -> Dd {
        let q1 = self.hi / d;
        let r = self.sub(Dd::from(q1).mul_f64(d));
        let q2 = r.hi / d;
        let (hi, lo) = quick_two_sum(q1, q2);
        Dd { hi, lo }
    }
}
