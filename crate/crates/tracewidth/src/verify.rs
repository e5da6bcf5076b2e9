//! Self-checks shared by the command-line `verify` run and the acceptance suite.

use num_complex::Complex64;
use std::f64::consts::PI;
use std::sync::Arc;

use crate::distributions::{
    i_a_rho, r_plus_action, residue, verify_multiplier_identity_with, Bump1D, GaussPoly1D, GaussPolyND,
    PInverseOptions, Poly, Rho, TestFunction1D, TestFunctionND,
};
use crate::error::Result;
use crate::helmholtz::pde_residual;
use crate::jet::factorial;
use crate::multiplier::{ConstantFactor, SymbolSpec};
use crate::quadrature::{uniform_panels, GaussLegendre};
use crate::specfun::{bessel_j, bessel_j_deriv, bessel_j_seq, bessel_y, derivative_bound_constant};

#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub group: &'static str,
    pub name: String,
    pub value: f64,
    pub tolerance: f64,
    pub pass: bool,
}

impl Check {
    fn at_most(group: &'static str, name: String, value: f64, tolerance: f64) -> Self {
        Self {
            group,
            name,
            value,
            tolerance,
            pass: value <= tolerance,
        }
    }
}

pub const CHECK_HEADER: &str = "group,name,value,tolerance,pass";

pub fn checks_to_csv(checks: &[Check]) -> String {
    let mut s = format!("{CHECK_HEADER}\n");
    for c in checks {
        s.push_str(&format!("{},{},{:e},{:e},{}\n", c.group, c.name, c.value, c.tolerance, c.pass));
    }
    s
}

fn poly(terms: &[(&[u32], f64)]) -> Poly {
    terms.iter().map(|(e, c)| (e.to_vec(), *c)).collect()
}

/// Five Gaussian×polynomial test functions in R^n, n ∈ {2, 3}.
pub fn gaussian_family(n: usize) -> Vec<GaussPolyND> {
    let z = vec![0u32; n];
    let e = |i: usize, p: u32| {
        let mut v = vec![0u32; n];
        v[i] = p;
        v
    };
    let mixed = {
        let mut v = vec![1u32; n];
        v[0] = 2;
        v
    };
    let g = |center: Vec<f64>, alpha: Vec<f64>| GaussPolyND::gaussian(center[..n].to_vec(), alpha[..n].to_vec());
    vec![
        g(vec![0.0; 3], vec![1.0; 3]),
        g(vec![0.3, -0.2, 0.1], vec![1.5, 0.8, 1.1]),
        g(vec![0.1, 0.4, -0.2], vec![2.0, 1.2, 0.9]).with_poly(poly(&[(&z, 1.0), (&e(0, 1), 0.5)])),
        g(vec![-0.2, 0.1, 0.3], vec![1.1, 1.4, 1.0]).with_poly(poly(&[(&z, 1.0), (&e(1, 2), -0.3), (&mixed, 0.2)])),
        g(vec![0.2, 0.2, 0.0], vec![0.9, 1.0, 1.3]).with_poly(poly(&[(&e(0, 2), 1.0), (&e(n - 1, 1), 0.4)])),
    ]
}

/// Helmholtz at k = 2π and the symbol (r - 1.5)²(r - 2.5).
pub fn identity_symbols() -> Result<Vec<(&'static str, SymbolSpec)>> {
    Ok(vec![
        ("helmholtz", SymbolSpec::helmholtz(2.0 * PI)?),
        (
            "double-root",
            SymbolSpec::new(vec![1.5, 2.5], vec![2, 1], Arc::new(ConstantFactor(Complex64::new(1.0, 0.0))))?,
        ),
    ])
}

/// |𝔭⁻¹(pφ) - ∫φ| against 1e-6 (1 + |∫φ|).
pub fn multiplier_identity_checks(include_delta: bool) -> Result<Vec<Check>> {
    let mut out = Vec::new();
    for n in [2usize, 3] {
        let mut opts = PInverseOptions::for_dim(n);
        opts.include_delta = include_delta;
        for (label, spec) in identity_symbols()? {
            for (i, phi) in gaussian_family(n).iter().enumerate() {
                let scale = 1.0 + phi.integral().map(|v| v.norm()).unwrap_or(0.0);
                let res = verify_multiplier_identity_with(&spec, n, phi, &opts)?;
                out.push(Check::at_most(
                    "multiplier",
                    format!("n{n}-{label}-phi{i}"),
                    res,
                    1e-6 * scale,
                ));
            }
        }
    }
    Ok(out)
}

fn residue_family() -> Vec<GaussPoly1D> {
    let g = |center: f64, alpha: f64, poly: Vec<f64>| GaussPoly1D {
        center,
        alpha,
        poly,
        max_order: 12,
    };
    vec![
        GaussPoly1D::gaussian(0.0, 1.0),
        g(0.3, 1.0, vec![1.0, 0.5, -0.25]),
        g(-0.4, 1.5, vec![0.5, -1.0, 0.0, 0.2]),
    ]
}

/// Pole residues of I_{a,ϱ} at a = -k, and finite-ϱ actions against ϱ = ∞.
pub fn residue_checks() -> Result<Vec<Check>> {
    let mut out = Vec::new();
    for (i, phi) in residue_family().iter().enumerate() {
        for rho in [Rho::Infinite, Rho::Finite(2.0), Rho::Finite(0.7)] {
            for k in 1..=4usize {
                let kf = k as f64;
                let f = |eps: f64| -> Result<Complex64> {
                    Ok(i_a_rho(Complex64::new(-kf + eps, 0.0), rho, phi, k)? * eps)
                };
                let (e1, e2) = (1e-3, 1e-4);
                let extrapolated = (f(e2)? * e1 - f(e1)? * e2) / (e1 - e2);
                out.push(Check::at_most(
                    "residue",
                    format!("phi{i}-{rho:?}-k{k}"),
                    (extrapolated - residue(k, phi)).norm(),
                    1e-6,
                ));
            }
        }
    }
    // ϱ beyond the support: the boundary terms vanish and both actions agree.
    let bump = Bump1D {
        lo: -1.0,
        hi: 1.2,
        amplitude: 1.0,
    };
    for k in 1..=4usize {
        let a = r_plus_action(k, Rho::Finite(2.0), &bump)?;
        let b = r_plus_action(k, Rho::Infinite, &bump)?;
        out.push(Check::at_most(
            "residue",
            format!("bump-finite-vs-infinite-k{k}"),
            (a.value - b.value).norm() + a.boundary_part.norm(),
            1e-10,
        ));
    }
    // ϱ inside the support: finite action is the truncated infinite one.
    // r_{+,ϱ} - r_{+,∞} = -∫_ϱ^∞ φ r^{-k} dr - ln ϱ·φ^{(k-1)}(ϱ)/(k-1)!
    let phi = &residue_family()[1];
    let rho = 1.3;
    for k in 1..=4usize {
        let a = r_plus_action(k, Rho::Finite(rho), phi)?.value;
        let b = r_plus_action(k, Rho::Infinite, phi)?.value;
        let tail = tail_integral(phi, rho, k);
        let log = rho.ln() * phi.deriv(k - 1, rho) / factorial(k - 1);
        out.push(Check::at_most(
            "residue",
            format!("gauss-finite-vs-infinite-k{k}"),
            (a - (b - tail - log)).norm(),
            1e-9,
        ));
    }
    Ok(out)
}

/// ∫_ϱ^∞ φ(r) r^{-k} dr by composite Gauss–Legendre.
fn tail_integral(phi: &GaussPoly1D, rho: f64, k: usize) -> Complex64 {
    let gl = GaussLegendre::new(20);
    let mut acc = Complex64::default();
    for (lo, hi) in uniform_panels(rho, rho + 12.0, 0.1) {
        for (s, w) in gl.mapped(lo, hi) {
            acc += phi.value(s) * s.powi(-(k as i32)) * w;
        }
    }
    acc
}

/// Recurrence, Wronskian, reflection, finite-difference derivatives and
/// derivative-bound constants at the given (m, x) probes.
pub fn specfun_checks(probes: &[(i32, f64)]) -> Result<Vec<Check>> {
    let mut worst = [0.0f64; 4];
    for &(m, x) in probes {
        let m = m.abs();
        let seq = bessel_j_seq(m as u32 + 2, x)?;
        let mu = m as usize;
        let rec = seq[mu] + seq[mu + 2] - 2.0 * (m as f64 + 1.0) / x * seq[mu + 1];
        worst[0] = worst[0].max(rec.abs() / seq[mu + 1].abs().max(1.0));

        if m <= 50 {
            let w = bessel_j(m + 1, x)? * bessel_y(m, x)? - bessel_j(m, x)? * bessel_y(m + 1, x)?;
            let want = 2.0 / (PI * x);
            let scale = (bessel_j(m + 1, x)? * bessel_y(m, x)?).abs();
            worst[1] = worst[1].max((w - want).abs() / want.max(1.0).max(scale * 1e-3));
        }

        let sign = if m % 2 == 0 { 1.0 } else { -1.0 };
        worst[2] = worst[2].max((bessel_j(-m, x)? - sign * bessel_j(m, x)?).abs());

        if x > 0.1 {
            for q in 1..=4usize {
                let h = 1e-3;
                let f = |t: f64| bessel_j_deriv(m, q - 1, t);
                let fd = (f(x + 3.0 * h)? - 9.0 * f(x + 2.0 * h)? + 45.0 * f(x + h)? - 45.0 * f(x - h)?
                    + 9.0 * f(x - 2.0 * h)?
                    - f(x - 3.0 * h)?)
                    / (60.0 * h);
                let exact = bessel_j_deriv(m, q, x)?;
                let scale = f(x)?.abs().max(exact.abs()).max(1e-6);
                worst[3] = worst[3].max((exact - fd).abs() / scale);
            }
        }
    }
    let mut out = vec![
        Check::at_most("specfun", "recurrence".into(), worst[0], 1e-10),
        Check::at_most("specfun", "wronskian".into(), worst[1], 1e-9),
        Check::at_most("specfun", "reflection".into(), worst[2], 0.0),
        Check::at_most("specfun", "derivative-vs-fd".into(), worst[3], 1e-6),
    ];
    let grid: Vec<f64> = (1..=400).map(|i| 0.1 * i as f64).collect();
    // m = 0, j = 1 is the exact relation ∂J_0 = -J_1; for j ≥ 2 the right side vanishes.
    let r = derivative_bound_constant(0, 1, &grid)?;
    out.push(Check::at_most("specfun", "derivative-bound-m0-j1".into(), (r.constant - 1.0).abs(), 1e-12));
    for m in [1, 5, 20, 40] {
        for j in [1usize, 2, 4, 8] {
            let r = derivative_bound_constant(m, j, &grid)?;
            out.push(Check {
                group: "specfun",
                name: format!("derivative-bound-m{m}-j{j}"),
                value: r.constant,
                tolerance: f64::INFINITY,
                pass: r.finite && r.constant.is_finite(),
            });
        }
    }
    Ok(out)
}

/// Deterministic probe grid used when no seed is supplied.
pub fn default_probes() -> Vec<(i32, f64)> {
    let mut p = Vec::new();
    for m in [0, 1, 2, 7, 15, 40, 90, 150] {
        let mut x = 0.05;
        while x < 60.0 {
            p.push((m, x));
            x += 1.37;
        }
    }
    p
}

/// s = ∫Φ_n(Δ+k²)φ / φ(0) for each family member, compared to the first.
pub fn pde_constant_checks() -> Result<(Vec<Complex64>, Vec<Check>)> {
    let mut out = Vec::new();
    let mut pinned = Vec::new();
    for n in [2usize, 3] {
        let mut first = None;
        for (i, phi) in gaussian_family(n).iter().take(3).enumerate() {
            let (v, _) = pde_residual(n, 2.0 * PI, phi)?;
            let s = v / phi.value(&vec![0.0; n]);
            let s0 = *first.get_or_insert(s);
            if i == 0 {
                pinned.push(s);
            }
            out.push(Check::at_most("pde", format!("n{n}-phi{i}"), (s - s0).norm(), 1e-4));
        }
    }
    Ok((pinned, out))
}
