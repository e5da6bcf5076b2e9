use num_complex::Complex64;
use proptest::prelude::*;
use std::f64::consts::PI;
use tracewidth::distributions::{GaussPolyND, Poly};
use tracewidth::helmholtz::*;
use tracewidth::specfun::hankel1;

const K: f64 = 2.0 * PI;

fn i() -> Complex64 {
    Complex64::new(0.0, 1.0)
}

fn rel(a: Complex64, b: Complex64) -> f64 {
    (a - b).norm() / b.norm()
}

#[test]
fn low_dimensional_closed_forms() {
    let mut r = 0.1;
    while r <= 100.0 {
        let p3 = phi_radial(3, K, r).unwrap();
        let want = -Complex64::from_polar(1.0, K * r) / (4.0 * PI * r);
        assert!(rel(p3, want) < 1e-12, "r={r}");
        let p2 = phi_radial(2, K, r).unwrap();
        assert!(rel(p2, hankel1(0, K * r).unwrap() / (4.0 * i())) < 1e-14);
        let p1 = phi_radial(1, K, r).unwrap();
        assert!(rel(p1, Complex64::from_polar(1.0, K * r) / (2.0 * i() * K)) < 1e-14);
        r *= 1.37;
    }
    assert!(phi_radial(3, K, 0.0).is_err());
}

#[test]
fn conventions_agree_up_to_dimension_four() {
    for n in 1..=9 {
        let a = RadialProfile::with_convention(n, K, 2, Convention::Literal).unwrap();
        let b = RadialProfile::with_convention(n, K, 2, Convention::Iterated).unwrap();
        let diff = (a.eval(0, 1.3).unwrap() - b.eval(0, 1.3).unwrap()).norm();
        if n <= 4 {
            assert!(diff < 1e-14, "n={n}");
        } else {
            assert!(diff > 1e-6, "n={n}");
        }
    }
}

fn fd(mut f: impl FnMut(f64) -> Complex64, x: f64, h: f64) -> Complex64 {
    (f(x + 3.0 * h) - 9.0 * f(x + 2.0 * h) + 45.0 * f(x + h) - 45.0 * f(x - h) + 9.0 * f(x - 2.0 * h)
        - f(x - 3.0 * h))
        / (60.0 * h)
}

#[test]
fn laurent_derivatives_match_finite_differences() {
    for n in 1..=9 {
        for conv in [Convention::Literal, Convention::Iterated] {
            let p = RadialProfile::with_convention(n, K, 6, conv).unwrap();
            for &r in &[0.7, 2.2, 9.5] {
                for c in 0..6 {
                    let d = fd(|t| p.eval(c, t).unwrap(), r, 1e-3);
                    let e = p.eval(c + 1, r).unwrap();
                    assert!(rel(d, e) < 1e-7, "n={n} c={c} r={r}");
                }
            }
        }
    }
}

#[test]
fn point_source_basics() {
    let y = [0.3, -0.2, 0.5];
    let x = [1.1, 0.9, -0.4];
    let z: Vec<f64> = x.iter().zip(&y).map(|(a, b)| a - b).collect();
    let r = z.iter().map(|v| v * v).sum::<f64>().sqrt();
    assert_eq!(point_source_field(3, K, &y, 2, 0, &x).unwrap(), phi_radial(3, K, r).unwrap());
    let u1 = point_source_field(3, K, &y, 1, 1, &x).unwrap();
    let d1 = z[0] / r * (-Complex64::from_polar(1.0, K * r) / (4.0 * PI * r)) * (i() * K - 1.0 / r);
    assert!(rel(u1, -d1) < 1e-13);
    assert!(matches!(point_source_field(3, K, &y, 1, 0, &y), Err(tracewidth::Error::Singularity)));
    assert!(point_source_field(3, K, &y, 1, 9, &x).is_err());
}

#[test]
fn fifth_derivative_in_the_plane() {
    let y = [0.0, 0.0];
    let u5 = point_source_field(2, K, &y, 1, 5, &[3.0, 4.0]).unwrap();
    let d = fd(|t| point_source_field(2, K, &y, 1, 4, &[t, 4.0]).unwrap(), 3.0, 1e-3);
    assert!(rel(-d, u5) < 1e-6, "{d} vs {u5}");
}

#[test]
fn derivative_rule_soundness() {
    for n in 1..=9usize {
        let y: Vec<f64> = (0..n).map(|d| 0.1 * d as f64 - 0.2).collect();
        let mut x: Vec<f64> = (0..n).map(|d| 0.9 - 0.15 * d as f64).collect();
        for axis in [0, n - 1] {
            for nu in 0..=4u32 {
                let lo = PointSource::new(n, K, y.clone(), axis, nu).unwrap();
                let hi = PointSource::new(n, K, y.clone(), axis, nu + 1).unwrap();
                let x0 = x[axis];
                let d = fd(
                    |t| {
                        x[axis] = t;
                        lo.field(&x).unwrap()
                    },
                    x0,
                    1e-3,
                );
                x[axis] = x0;
                let e = hi.field(&x).unwrap();
                assert!(rel(-d, e) < 1e-6, "n={n} axis={axis} nu={nu}");
            }
        }
    }
}

#[test]
fn radiation_decay() {
    for n in 1..=9usize {
        let p = RadialProfile::new(n, K, 0).unwrap();
        let mut sup: f64 = 0.0;
        let mut r = 10.0;
        while r <= 1e4 {
            sup = sup.max(p.eval(0, r).unwrap().norm() * r.powf((n as f64 - 1.0) / 2.0));
            r *= 1.05;
        }
        let at10 = p.eval(0, 10.0).unwrap().norm() * 10f64.powf((n as f64 - 1.0) / 2.0);
        assert!(sup.is_finite() && sup <= 2.0 * at10.max(1e-300) + 1.0, "n={n}");
    }
}

fn cell(center: &[f64], half: &[f64], amplitude: f64) -> Cell {
    Cell {
        center: center.to_vec(),
        half: half.to_vec(),
        amplitude,
    }
}

#[test]
fn volume_source_small_cell_and_linearity() {
    let empty = VolumeSource::new(2, vec![]).unwrap();
    assert_eq!(volume_source_field(&empty, K, &[1.0, 2.0]).unwrap(), Complex64::default());

    for n in [2usize, 3] {
        let h = vec![0.01; n];
        let c0 = vec![0.2; n];
        let src = VolumeSource::new(n, vec![cell(&c0, &h, 1.5)]).unwrap();
        let mut x = vec![0.0; n];
        x[0] = 0.2 + 0.02 * (n as f64).sqrt() / 0.05;
        let v = volume_source_field(&src, K, &x).unwrap();
        let dist = x.iter().zip(&c0).map(|(a, b)| (a - b) * (a - b)).sum::<f64>().sqrt();
        let approx = phi_radial(n, K, dist).unwrap() * 1.5 * src.total_volume();
        assert!(rel(v, approx) < 1e-2, "n={n}");
    }

    let a = cell(&[-1.0, 1.0], &[1.5, 1.5], 1.0);
    let b = cell(&[2.5, -2.5], &[1.0, 1.0], -0.7);
    let both = VolumeSource::new(2, vec![a.clone(), b.clone()]).unwrap();
    let x = [5.01 * 0.3f64.cos(), 5.01 * 0.3f64.sin()];
    let fa = volume_source_field(&VolumeSource::new(2, vec![a]).unwrap(), K, &x).unwrap();
    let fb = volume_source_field(&VolumeSource::new(2, vec![b]).unwrap(), K, &x).unwrap();
    assert_eq!(volume_source_field(&both, K, &x).unwrap(), fa + fb);
}

#[test]
fn volume_source_self_convergence_and_errors() {
    let src = VolumeSource::new(
        3,
        vec![
            cell(&[0.6, 0.2, 0.0], &[0.2, 0.2, 0.2], 1.0),
            cell(&[0.3, -0.4, 0.1], &[0.15, 0.15, 0.15], 0.5),
        ],
    )
    .unwrap();
    let profile = RadialProfile::new(3, K, 0).unwrap();
    let x = [1.01, 0.0, 0.0];
    let base = volume_source_field_with(&src, &profile, &x, &CellQuadrature::default()).unwrap().0;
    let tight = CellQuadrature {
        orders: (12, 16),
        tol: 1e-12,
        max_depth: 16,
    };
    let fine = volume_source_field_with(&src, &profile, &x, &tight).unwrap().0;
    assert!(rel(base, fine) < 1e-8);

    assert!(matches!(
        volume_source_field(&src, K, &[0.6, 0.2, 0.2]),
        Err(tracewidth::Error::Proximity { .. })
    ));
    let overlap = VolumeSource::new(2, vec![cell(&[0.0, 0.0], &[1.0, 1.0], 1.0), cell(&[1.5, 0.0], &[1.0, 1.0], 1.0)]);
    assert!(overlap.is_err());
}

#[test]
fn pde_residual_constant() {
    let mut poly = Poly::new();
    poly.insert(vec![0, 0], 1.0);
    poly.insert(vec![1, 1], 0.3);
    let family2 = [
        GaussPolyND::gaussian(vec![0.0, 0.0], vec![1.0, 1.0]),
        GaussPolyND::gaussian(vec![0.3, -0.2], vec![1.5, 0.8]),
        GaussPolyND::gaussian(vec![0.1, 0.4], vec![2.0, 1.2]).with_poly(poly),
    ];
    let mut poly3 = Poly::new();
    poly3.insert(vec![0, 0, 0], 1.0);
    poly3.insert(vec![2, 0, 1], -0.4);
    let family3 = [
        GaussPolyND::gaussian(vec![0.0, 0.0, 0.0], vec![1.0, 1.0, 1.0]),
        GaussPolyND::gaussian(vec![0.2, 0.1, -0.3], vec![1.3, 0.9, 1.1]),
        GaussPolyND::gaussian(vec![-0.1, 0.2, 0.1], vec![1.0, 1.6, 1.2]).with_poly(poly3),
    ];
    for (n, fam) in [(2usize, &family2[..]), (3, &family3[..])] {
        let mut first = None;
        for phi in fam {
            let (v, _) = pde_residual(n, K, phi).unwrap();
            let origin = vec![0.0; n];
            let s = v / tracewidth::distributions::TestFunctionND::value(phi, &origin);
            let s0 = *first.get_or_insert(s);
            assert!((s - s0).norm() < 1e-4, "n={n}: {s} vs {s0}");
            assert!((s - 1.0).norm() < 1e-4, "n={n}: {s}");
        }
    }
    let phi = &family2[1];
    let twice = phi.combine(2.0, phi, 0.0);
    let a = pde_residual(2, K, phi).unwrap().0;
    let b = pde_residual(2, K, &twice).unwrap().0;
    assert!((b - 2.0 * a).norm() < 1e-12);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn term_sums_stay_deduplicated(nu in 0u32..=8) {
        let mut t = RadialTermSum::identity();
        for _ in 0..nu {
            t = t.derivative();
        }
        prop_assert!(t.max_c() == nu as usize);
        prop_assert!(t.terms.keys().all(|&(a, b, c)| a <= nu && c <= nu && b <= 2 * nu));
    }

    #[test]
    fn random_point_derivatives(n in 2usize..6, nu in 0u32..4, x0 in 1.0f64..4.0, x1 in -3.0f64..3.0) {
        let y = vec![0.0; n];
        let mut x = vec![0.2; n];
        x[0] = x0;
        x[1] = x1;
        let lo = PointSource::new(n, K, y.clone(), 1, nu).unwrap();
        let hi = PointSource::new(n, K, y, 1, nu + 1).unwrap();
        let d = fd(|t| { let mut z = x.clone(); z[1] = t; lo.field(&z).unwrap() }, x1, 1e-3);
        let e = hi.field(&x).unwrap();
        prop_assert!(rel(-d, e) < 1e-6);
    }
}
