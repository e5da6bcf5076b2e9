use num_complex::Complex64;
use proptest::prelude::*;
use std::sync::Arc;
use tracewidth::distributions::*;
use tracewidth::multiplier::*;
use tracewidth::quadrature::{uniform_panels, GaussLegendre};

fn c(x: f64) -> Complex64 {
    Complex64::new(x, 0.0)
}

fn gauss(center: f64, alpha: f64, poly: Vec<f64>) -> GaussPoly1D {
    GaussPoly1D {
        center,
        alpha,
        poly,
        max_order: 12,
    }
}

/// ∫_a^b f by composite Gauss–Legendre.
fn plain_integral(a: f64, b: f64, f: impl Fn(f64) -> Complex64) -> Complex64 {
    let gl = GaussLegendre::new(20);
    let mut acc = c(0.0);
    for (lo, hi) in uniform_panels(a, b, 0.05) {
        for (s, w) in gl.mapped(lo, hi) {
            acc += f(s) * w;
        }
    }
    acc
}

#[test]
fn r_plus_of_gaussian_is_half_euler_gamma() {
    let phi = GaussPoly1D::gaussian(0.0, 1.0);
    let v = r_plus_action(1, Rho::Infinite, &phi).unwrap();
    assert!((v.value.re + 0.288607832450766430).abs() < 1e-10, "{}", v.value);
    assert_eq!(v.boundary_part, c(0.0));
    assert_eq!(v.harmonic_part, c(0.0));
}

#[test]
fn ordinary_integral_away_from_origin() {
    let phi = Bump1D {
        lo: 0.4,
        hi: 3.0,
        amplitude: 2.0,
    };
    for k in 1..=4 {
        let v = r_plus_action(k, Rho::Infinite, &phi).unwrap().value;
        let want = plain_integral(0.4, 3.0, |s| phi.value(s) * s.powi(-(k as i32)));
        assert!((v - want).norm() < 1e-9, "k={k}: {v} vs {want}");
    }
}

#[test]
fn finite_rho_differs_from_truncated_integral_by_log_term() {
    let phi = Bump1D {
        lo: 0.3,
        hi: 2.5,
        amplitude: 1.0,
    };
    let rho = 1.7;
    for k in 1..=4 {
        let v = r_plus_action(k, Rho::Finite(rho), &phi).unwrap().value;
        let trunc = plain_integral(0.3, rho, |s| phi.value(s) * s.powi(-(k as i32)));
        let log = rho.ln() * phi.deriv(k - 1, rho) / tracewidth::jet::factorial(k - 1);
        assert!((v + log - trunc).norm() < 1e-9, "k={k}");
    }
}

#[test]
fn finite_rho_matches_infinite_when_support_ends_early() {
    let phi = Bump1D {
        lo: -1.0,
        hi: 1.2,
        amplitude: 1.0,
    };
    for k in 1..=4 {
        let a = r_plus_action(k, Rho::Finite(2.0), &phi).unwrap();
        let b = r_plus_action(k, Rho::Infinite, &phi).unwrap();
        assert!((a.value - b.value).norm() < 1e-10, "k={k}");
        assert_eq!(a.boundary_part, c(0.0));
    }
    // with ϱ inside the support the boundary sum is live
    let g = gauss(0.2, 1.0, vec![1.0, 0.3]);
    let a = r_plus_action(3, Rho::Finite(0.8), &g).unwrap();
    assert!(a.boundary_part.norm() > 1e-3);
}

#[test]
fn reflection_relations() {
    let even = GaussPoly1D::gaussian(0.0, 1.3);
    let odd = gauss(0.0, 1.3, vec![0.0, 1.0]);
    let generic = gauss(0.4, 0.9, vec![1.0, -0.2, 0.1]);
    for k in 1..=3 {
        let p = r_plus_action(k, Rho::Infinite, &generic).unwrap().value;
        let m = r_minus_action(k, Rho::Infinite, &generic).unwrap().value;
        let via = r_plus_action(k, Rho::Infinite, &Reflected(&generic)).unwrap().value;
        assert_eq!(m, via);
        assert!((p - m).norm() > 1e-3);
    }
    let p = r_plus_action(1, Rho::Infinite, &even).unwrap().value;
    let m = r_minus_action(1, Rho::Infinite, &even).unwrap().value;
    assert!((p - m).norm() < 1e-13);
    let p = r_plus_action(1, Rho::Infinite, &odd).unwrap().value;
    let m = r_minus_action(1, Rho::Infinite, &odd).unwrap().value;
    assert!((p + m).norm() < 1e-13);
}

#[test]
fn translations() {
    let phi = gauss(0.1, 1.0, vec![1.0, 0.5]);
    for k in 1..=3 {
        let a = translated_action(k, Rho::Infinite, 0.0, Side::Plus, &phi).unwrap();
        assert_eq!(a, r_plus_action(k, Rho::Infinite, &phi).unwrap());
        let a = translated_action(k, Rho::Infinite, 0.0, Side::Minus, &phi).unwrap();
        assert_eq!(a, r_minus_action(k, Rho::Infinite, &phi).unwrap());
    }
    let rj = 2.3;
    let centered = GaussPoly1D::gaussian(rj, 1.5);
    let p = translated_action(1, Rho::Infinite, rj, Side::Plus, &centered).unwrap().value;
    let m = translated_action(1, Rho::Infinite, rj, Side::Minus, &centered).unwrap().value;
    assert!((p - m).norm() < 1e-12);

    // self-convergence under node doubling
    let shifted = Shifted {
        inner: &phi,
        shift: rj,
    };
    let base = QuadratureOptions::default();
    for rho in [Rho::Infinite, Rho::Finite(rj)] {
        let a = r_plus_actions(&[1, 2, 3], rho, &shifted, &base).unwrap();
        let b = r_plus_actions(&[1, 2, 3], rho, &shifted, &base.refined()).unwrap();
        for (x, y) in a.iter().zip(&b) {
            assert!((x.value - y.value).norm() < 1e-9);
        }
    }
}

#[test]
fn error_estimate_shrinks_under_refinement() {
    let phi = gauss(1.0, 4.0, vec![1.0, 1.0, 1.0]);
    let coarse = QuadratureOptions {
        levels: 12,
        panel: 2.0,
        orders: (4, 6),
    };
    let a = r_plus_actions(&[1, 2], Rho::Infinite, &phi, &coarse).unwrap();
    let b = r_plus_actions(&[1, 2], Rho::Infinite, &phi, &coarse.refined()).unwrap();
    for (x, y) in a.iter().zip(&b) {
        assert!(y.error < x.error, "{} !< {}", y.error, x.error);
    }
}

#[test]
fn i_a_direct_against_reference() {
    let phi = GaussPoly1D::gaussian(0.0, 1.0);
    let v = i_a_rho(c(0.5), Rho::Finite(1.0), &phi, 0).unwrap();
    assert!((v.re - 0.453391944451235539).abs() < 1e-12);
}

#[test]
fn i_a_continuation_against_reference() {
    let phi = gauss(0.3, 1.0, vec![1.0, 0.5]);
    let v = i_a_rho(c(-2.5), Rho::Infinite, &phi, 2).unwrap();
    assert!((v.re + 3.3109715383595066504).abs() < 1e-9, "{v}");
    let v3 = i_a_rho(c(-2.5), Rho::Infinite, &phi, 3).unwrap();
    assert!((v - v3).norm() < 1e-9);
}

#[test]
fn continuation_agrees_on_the_overlap() {
    let phi = gauss(0.3, 1.0, vec![1.0, 0.5]);
    for rho in [Rho::Infinite, Rho::Finite(1.3)] {
        let d = i_a_rho_direct(c(0.3), rho, &phi).unwrap();
        let k = i_a_rho_continued(c(0.3), rho, &phi, 2).unwrap();
        assert!((d - k).norm() < 1e-9);
        let a = Complex64::new(-0.4, 0.7);
        let d = i_a_rho_direct(a, rho, &phi).unwrap();
        let k = i_a_rho_continued(a, rho, &phi, 3).unwrap();
        assert!((d - k).norm() < 1e-9);
    }
}

#[test]
fn residue_law() {
    let phi = gauss(0.3, 1.0, vec![1.0, 0.5, -0.25]);
    for rho in [Rho::Infinite, Rho::Finite(2.0), Rho::Finite(0.7)] {
        for k in 1..=4usize {
            let kf = k as f64;
            let f = |eps: f64| eps * i_a_rho(c(-kf + eps), rho, &phi, k).unwrap();
            let (e1, e2) = (1e-3, 1e-4);
            let extrapolated = (e1 * f(e2) - e2 * f(e1)) / (e1 - e2);
            let want = residue(k, &phi);
            assert!((extrapolated - want).norm() < 1e-6, "k={k} {rho:?}");
        }
    }
    // the three-point version with ε ∈ {1e-2, 1e-3, 1e-4}
    let f = |eps: f64| eps * i_a_rho(c(-1.0 + eps), Rho::Finite(1.0), &phi, 1).unwrap();
    let fit = (1e-3 * f(1e-4) - 1e-4 * f(1e-3)) / (1e-3 - 1e-4);
    let fit2 = (1e-2 * f(1e-3) - 1e-3 * f(1e-2)) / (1e-2 - 1e-3);
    assert!((fit - phi.value(0.0)).norm() < 1e-6);
    assert!((fit2 - phi.value(0.0)).norm() < 1e-4);
}

#[test]
fn laurent_constant_of_i_a_versus_r_plus() {
    let phi = gauss(0.3, 1.0, vec![1.0, 0.5, -0.25]);
    for rho in [Rho::Infinite, Rho::Finite(1.4)] {
        for k in 1..=4usize {
            let kf = k as f64;
            let res = residue(k, &phi);
            let g = |eps: f64| i_a_rho(c(-kf + eps), rho, &phi, k).unwrap() - res / eps;
            let eps = 1e-4;
            let constant = 0.5 * (g(eps) + g(-eps));
            // the constant term carries ln ϱ·φ^{(k-1)}(ϱ)/(k-1)! on top of r_{+,ϱ}
            let edge = match rho {
                Rho::Finite(r) => r.ln() * phi.deriv(k - 1, r) / tracewidth::jet::factorial(k - 1),
                Rho::Infinite => c(0.0),
            };
            let want = r_plus_action(k, rho, &phi).unwrap().value + edge;
            assert!((constant - want).norm() < 1e-6, "k={k} {rho:?}: {constant} vs {want}");
        }
    }
}

#[test]
fn poles_report_their_residue() {
    let phi = gauss(0.3, 1.0, vec![1.0, 0.5]);
    for k in 1..=3usize {
        match i_a_rho(c(-(k as f64)), Rho::Infinite, &phi, 3) {
            Err(tracewidth::Error::Pole { pole, residue: r }) => {
                assert_eq!(pole, -(k as i64));
                assert_eq!(r, residue(k, &phi));
            }
            other => panic!("expected a pole, got {other:?}"),
        }
    }
    assert!(i_a_rho(c(-3.5), Rho::Infinite, &phi, 2).is_err());
}

fn unit() -> Arc<dyn RadialFactor> {
    Arc::new(ConstantFactor(c(1.0)))
}

fn nd(center: Vec<f64>, alpha: Vec<f64>, terms: &[(&[u32], f64)]) -> GaussPolyND {
    let mut poly = Poly::new();
    for (e, v) in terms {
        poly.insert(e.to_vec(), *v);
    }
    GaussPolyND::gaussian(center, alpha).with_poly(poly)
}

#[test]
fn helmholtz_identity_in_the_plane() {
    let k = 2.0 * std::f64::consts::PI;
    let spec = SymbolSpec::helmholtz(k).unwrap();
    let phi = GaussPolyND::gaussian(vec![0.0, 0.0], vec![1.0, 1.0]);
    assert!((phi.integral().unwrap().re - std::f64::consts::PI).abs() < 1e-14);
    let res = verify_multiplier_identity(&spec, 2, &phi).unwrap();
    assert!(res <= 1e-6 * (1.0 + std::f64::consts::PI), "{res}");
    let act = frak_p_inverse_action(&spec, 2, &SymbolTimes { phi: &phi, spec: &spec }).unwrap();
    assert_eq!(act.delta_part, c(0.0));
}

#[test]
fn two_simple_roots_identity() {
    let spec = SymbolSpec::new(vec![1.0, 2.0], vec![1, 1], unit()).unwrap();
    let phi = nd(vec![0.2, -0.1], vec![1.0, 0.8], &[(&[0, 0], 1.0), (&[1, 1], 0.4)]);
    let res = verify_multiplier_identity(&spec, 2, &phi).unwrap();
    let scale = 1.0 + phi.integral().unwrap().norm();
    assert!(res <= 1e-6 * scale, "{res}");
    // the right side by plain quadrature agrees with the closed form
    let q = integrate_nd(&phi, &PInverseOptions::for_dim(2)).unwrap();
    assert!((q - phi.integral().unwrap()).norm() < 1e-10);
}

#[test]
fn double_root_needs_the_delta_term() {
    let spec = SymbolSpec::new(vec![1.5, 2.5], vec![2, 1], unit()).unwrap();
    let phi = nd(vec![0.1, 0.2], vec![1.2, 0.9], &[(&[0, 0], 1.0), (&[2, 0], -0.3)]);
    let scale = 1.0 + phi.integral().unwrap().norm();
    let res = verify_multiplier_identity(&spec, 2, &phi).unwrap();
    assert!(res <= 1e-6 * scale, "{res}");
    let mut ablated = PInverseOptions::for_dim(2);
    ablated.include_delta = false;
    let bad = verify_multiplier_identity_with(&spec, 2, &phi, &ablated).unwrap();
    assert!(bad > 1e-2, "{bad}");
}

#[test]
fn helmholtz_identity_in_space() {
    let spec = SymbolSpec::helmholtz(2.0 * std::f64::consts::PI).unwrap();
    let phi = nd(vec![0.1, 0.0, -0.2], vec![1.0, 1.5, 0.8], &[(&[0, 0, 0], 1.0), (&[0, 1, 1], 0.5)]);
    let res = verify_multiplier_identity(&spec, 3, &phi).unwrap();
    assert!(res <= 1e-6 * (1.0 + phi.integral().unwrap().norm()), "{res}");
}

#[test]
fn linearity() {
    let spec = SymbolSpec::new(vec![1.5, 2.5], vec![2, 1], unit()).unwrap();
    let a = nd(vec![0.1, 0.2], vec![1.2, 0.9], &[(&[0, 0], 1.0)]);
    let b = nd(vec![0.1, 0.2], vec![1.2, 0.9], &[(&[1, 0], 1.0), (&[0, 3], 0.2)]);
    let alpha = -0.7;
    let mix = a.combine(alpha, &b, 1.0);
    let fa = frak_p_inverse_action(&spec, 2, &a).unwrap().value;
    let fb = frak_p_inverse_action(&spec, 2, &b).unwrap().value;
    let fm = frak_p_inverse_action(&spec, 2, &mix).unwrap().value;
    assert!((fm - (fa * alpha + fb)).norm() < 1e-10);
}

#[test]
fn insufficient_order_is_a_capability_error() {
    let spec = SymbolSpec::new(vec![1.0], vec![3], unit()).unwrap();
    let mut phi = GaussPolyND::gaussian(vec![0.0, 0.0], vec![1.0, 1.0]);
    phi.max_order = 4;
    assert!(matches!(
        frak_p_inverse_action(&spec, 2, &phi),
        Err(tracewidth::Error::Capability(_))
    ));
    assert!(frak_p_inverse_action(&spec, 4, &phi).is_err());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn minus_is_plus_of_reflection(center in -1.0f64..1.0, alpha in 0.5f64..2.0, b in -0.5f64..0.5, k in 1usize..4) {
        let phi = gauss(center, alpha, vec![1.0, b]);
        let m = r_minus_action(k, Rho::Infinite, &phi).unwrap().value;
        let p = r_plus_action(k, Rho::Infinite, &Reflected(&phi)).unwrap().value;
        prop_assert_eq!(m, p);
    }

    #[test]
    fn continuation_depths_agree(frac in 0.05f64..0.95, k in 1usize..4, im in -1.0f64..1.0) {
        let phi = gauss(0.3, 1.0, vec![1.0, 0.5]);
        let a = Complex64::new(-(k as f64) - frac, im);
        let x = i_a_rho_continued(a, Rho::Infinite, &phi, k).unwrap();
        let y = i_a_rho_continued(a, Rho::Infinite, &phi, k + 1).unwrap();
        prop_assert!((x - y).norm() <= 1e-9 * x.norm().max(1.0), "{} vs {}", x, y);
    }
}
