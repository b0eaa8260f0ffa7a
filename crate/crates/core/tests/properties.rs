#![allow(clippy::excessive_precision)]

use std::f64::consts::{PI, TAU};

use loop_modes::airy::airy_eval;
use loop_modes::oracle::analytic_monodromy;
use loop_modes::square::{self, SquareBarrierSpec};
use loop_modes::triangular::{self, x_minus_y, TriangularBarrierSpec};
use loop_modes::{make_profile, Circuit, ConstantsMode, ConstantsProfile};
use proptest::prelude::*;

fn profile(si: bool) -> ConstantsProfile {
    make_profile(if si { ConstantsMode::Si } else { ConstantsMode::PaperEffective })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn wavenumbers_close_the_circle(si: bool, v in 0.01f64..50.0, frac in 0.001f64..0.999) {
        let p = profile(si);
        let e = v * frac;
        let (k, beta) = (p.wavenumber(e).unwrap(), p.decay_constant(e, v).unwrap());
        let want = p.k0 * p.k0 * v;
        prop_assert!((k * k + beta * beta - want).abs() <= 1e-12 * want);
        let e2 = e * 1.001;
        prop_assume!(e2 < v);
        prop_assert!(p.wavenumber(e2).unwrap() > k);
        prop_assert!(p.decay_constant(e2, v).unwrap() < beta);
    }

    #[test]
    fn closed_form_matches_matrix(
        k in 0.001f64..10.0,
        beta in 0.001f64..10.0,
        bb in 0.0f64..20.0,
        theta in -TAU..0.0f64,
    ) {
        let b = bb / beta;
        let closed = square::determinant_closed_form(theta, k, beta, b);
        let lu = square::determinant_matrix(theta, k, beta, b);
        // Reference magnitude: the size of the individual terms.
        let scale = 2.0 * (beta * beta - k * k).abs() * bb.sinh() + 4.0 * k * beta * (1.0 + bb.cosh());
        prop_assert!((closed - lu).abs() <= 1e-12 * scale, "{closed:e} vs {lu:e}");
    }

    #[test]
    fn square_determinant_is_scale_free(
        v in 0.1f64..5.0,
        frac in 0.05f64..0.95,
        theta in -TAU..0.0f64,
        b in 0.0f64..2000.0,
        si: bool,
    ) {
        let p = profile(si);
        let e = v * frac;
        let base = Circuit::Square(SquareBarrierSpec::from_theta(e, v, theta, b, &p).unwrap()).determinant(&p).unwrap();
        for s in [1e-3, 1.0, 1e3] {
            let ps = p.scaled(s);
            let d = Circuit::Square(SquareBarrierSpec::from_theta(e, v, theta, b / s, &ps).unwrap()).determinant(&ps).unwrap();
            let (k, beta) = (p.wavenumber(e).unwrap(), p.decay_constant(e, v).unwrap());
            let scale = 4.0 * k * beta * (1.0 + (beta * b).min(30.0).cosh()) + 2.0 * (k * k + beta * beta) * (beta * b).min(30.0).sinh();
            prop_assert!((d / (s * s) - base).abs() <= 1e-10 * scale, "s={s}: {d:e} vs {base:e}");
        }
    }

    #[test]
    fn triangular_geometry(
        v in 0.1f64..5.0,
        frac in 0.001f64..0.999,
        len in 0.01f64..50.0,
        theta in 0.0f64..20.0,
        si: bool,
    ) {
        let p = profile(si);
        let spec = TriangularBarrierSpec::new(v * frac, v, len, theta).unwrap();
        let d = triangular::derive(&spec, &p).unwrap();
        prop_assert!(d.barrier_start <= d.turning_point && d.turning_point <= d.barrier_end);
        prop_assert!(d.arg_start > 0.0 && d.arg_end < 0.0);
        let xy = x_minus_y(len, v, &p);
        prop_assert!(((d.arg_start - d.arg_end) - xy).abs() <= 1e-12 * xy);
        prop_assert!((d.offset - d.gamma * d.turning_point).abs() <= 1e-9 * d.offset.abs().max(1.0));
    }

    #[test]
    fn airy_wronskian(x in -20.0f64..8.0) {
        let w = airy_eval(x).unwrap().wronskian();
        prop_assert!((w - 1.0 / PI).abs() <= 1e-12, "{x}: {w}");
    }

    #[test]
    fn airy_wronskian_far_field(x in -1000.0f64..100.0) {
        let v = airy_eval(x).unwrap();
        // For x > 0 the Wronskian is a product Ai·Bi' of order one.
        prop_assert!((v.wronskian() * PI - 1.0).abs() <= 1e-10, "{x}: {}", v.wronskian());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    // Det = 2kβ (2 − tr M) for the square loop.
    #[test]
    fn square_determinant_is_monodromy_trace(
        v in 0.1f64..5.0,
        frac in 0.05f64..0.95,
        theta in -TAU..0.0f64,
        bb in 0.0f64..15.0,
    ) {
        let p = profile(false);
        let e = v * frac;
        let (k, beta) = (p.wavenumber(e).unwrap(), p.decay_constant(e, v).unwrap());
        let circuit = Circuit::Square(SquareBarrierSpec::from_theta(e, v, theta, bb / beta, &p).unwrap());
        let det = circuit.determinant(&p).unwrap();
        let tr = analytic_monodromy(&circuit, &p).unwrap().trace();
        let scale = 4.0 * k * beta * bb.cosh() * (1.0 + (k / beta + beta / k));
        prop_assert!((det - 2.0 * k * beta * (2.0 - tr)).abs() <= 1e-12 * scale);
    }

    // det = (R/π)(tr M − 2) for the triangular loop.
    #[test]
    fn triangular_determinant_is_monodromy_trace(
        v in 0.1f64..5.0,
        frac in 0.05f64..0.95,
        len in 0.1f64..3.0,
        theta in 0.0f64..TAU,
    ) {
        let p = profile(true);
        let circuit = Circuit::Triangular(TriangularBarrierSpec::new(v * frac, v, len, theta).unwrap());
        let Circuit::Triangular(spec) = circuit else { unreachable!() };
        let d = triangular::derive(&spec, &p).unwrap();
        let det = circuit.determinant(&p).unwrap();
        let m = analytic_monodromy(&circuit, &p).unwrap();
        let want = d.ratio / PI * (m.trace() - 2.0);
        let scale = d.ratio / PI * (2.0 + m.m.abs().sum());
        prop_assert!((det - want).abs() <= 1e-10 * scale, "{det:e} vs {want:e}");
    }

    #[test]
    fn triangular_determinant_is_periodic(theta in 0.0f64..TAU, si: bool) {
        let p = profile(si);
        let det = |t: f64| Circuit::Triangular(TriangularBarrierSpec::new(0.95, 1.0, 2.0, t).unwrap()).determinant(&p).unwrap();
        let (a, b) = (det(theta), det(theta + TAU));
        prop_assert!((a - b).abs() <= 1e-11 * a.abs().max(1.0));
    }
}
