//! Regularized one-dimensional distributions and the fundamental-solution
//! functional of a radial-form multiplier.

pub mod testfn;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::jet::{factorial, Jet};
use crate::multiplier::{partial_fractions, RadialFactor, SymbolSpec};
use crate::quadrature::{geometric_panels, uniform_panels, GaussLegendre, SphereRule};
pub use testfn::*;

const LEVELS: usize = 24;
const PANEL: f64 = 0.5;
const TAYLOR_TAIL: usize = 2;

/// Upper limit of integration.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Rho {
    Finite(f64),
    Infinite,
}

impl Rho {
    fn upper(self, phi: &dyn TestFunction1D) -> f64 {
        match self {
            Rho::Finite(r) => r,
            Rho::Infinite => phi.decay_radius().max(1.0),
        }
    }
}

/// Value of a distribution on a test function, with its pieces.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct DistributionAction {
    pub value: Complex64,
    /// Difference between two quadrature orders, summed over terms.
    pub error: f64,
    pub log_part: Complex64,
    pub harmonic_part: Complex64,
    pub boundary_part: Complex64,
    pub delta_part: Complex64,
}

impl DistributionAction {
    fn from_parts(log: Complex64, harmonic: Complex64, boundary: Complex64, error: f64) -> Self {
        Self {
            value: log + harmonic + boundary,
            error,
            log_part: log,
            harmonic_part: harmonic,
            boundary_part: boundary,
            delta_part: Complex64::default(),
        }
    }

    fn accumulate(&mut self, c: Complex64, o: &Self) {
        self.value += c * o.value;
        self.error += c.norm() * o.error;
        self.log_part += c * o.log_part;
        self.harmonic_part += c * o.harmonic_part;
        self.boundary_part += c * o.boundary_part;
        self.delta_part += c * o.delta_part;
    }
}

/// Quadrature settings for the singular integrals.
#[derive(Debug, Clone)]
pub struct QuadratureOptions {
    /// Geometric panels toward 0.
    pub levels: usize,
    /// Width of the regular panels on [1, upper].
    pub panel: f64,
    /// Gauss–Legendre orders: the result uses the second, the first feeds the error estimate.
    pub orders: (usize, usize),
}

impl Default for QuadratureOptions {
    fn default() -> Self {
        Self {
            levels: LEVELS,
            panel: PANEL,
            orders: (8, 12),
        }
    }
}

impl QuadratureOptions {
    /// Same layout with every panel halved.
    pub fn refined(&self) -> Self {
        Self {
            levels: self.levels + 4,
            panel: 0.5 * self.panel,
            orders: self.orders,
        }
    }
}

#[derive(Debug, Clone, Copy)]
enum Weight {
    Log,
    Power(Complex64),
}

impl Weight {
    fn at(self, s: f64) -> Complex64 {
        match self {
            Weight::Log => Complex64::new(s.ln(), 0.0),
            Weight::Power(a) => (a * s.ln()).exp(),
        }
    }

    /// ∫_0^ε w(s) s^t ds.
    fn moment(self, eps: f64, t: usize) -> Complex64 {
        let p = t as f64 + 1.0;
        match self {
            Weight::Log => Complex64::new(eps.powf(p) * (eps.ln() / p - 1.0 / (p * p)), 0.0),
            Weight::Power(a) => {
                let e = a + p;
                (e * eps.ln()).exp() / e
            }
        }
    }
}

/// ∫_0^upper w(s) φ^{(k)}(s) ds for each k in `ks`, with error estimates.
fn weighted_derivative_integrals(
    phi: &dyn TestFunction1D,
    ks: &[usize],
    weight: Weight,
    upper: f64,
    opts: &QuadratureOptions,
) -> Vec<(Complex64, f64)> {
    let kmax = *ks.iter().max().unwrap_or(&0);
    let split = upper.min(1.0);
    let mut panels = geometric_panels(split, opts.levels);
    panels.extend(uniform_panels(1.0, upper, opts.panel));
    let panels = refine_panels(panels, &phi.breakpoints(), phi.max_panel());
    let eps = panels[0].0;

    let mut results = Vec::with_capacity(2);
    for n in [opts.orders.0, opts.orders.1] {
        let gl = GaussLegendre::new(n);
        let mut acc = vec![Complex64::default(); ks.len()];
        for &(a, b) in &panels {
            for (s, w) in gl.mapped(a, b) {
                let jet = phi.jet(s, kmax);
                let ws = weight.at(s) * w;
                for (slot, &k) in acc.iter_mut().zip(ks) {
                    *slot += ws * jet.deriv(k);
                }
            }
        }
        results.push(acc);
    }

    let tail_order = TAYLOR_TAIL.min(phi.max_order().saturating_sub(kmax));
    let origin = phi.jet(0.0, kmax + tail_order);
    ks.iter()
        .enumerate()
        .map(|(i, &k)| {
            let mut tail = Complex64::default();
            for t in 0..=tail_order {
                tail += origin.deriv(k + t) / factorial(t) * weight.moment(eps, t);
            }
            let hi = results[1][i] + tail;
            let lo = results[0][i] + tail;
            (hi, (hi - lo).norm())
        })
        .collect()
}

/// Split panels at breakpoints and cap their width.
fn refine_panels(panels: Vec<(f64, f64)>, breaks: &[f64], width: f64) -> Vec<(f64, f64)> {
    let mut out = Vec::with_capacity(panels.len());
    for (a, b) in panels {
        let mut cuts = vec![a];
        let mut inner: Vec<f64> = breaks.iter().cloned().filter(|&t| t > a && t < b).collect();
        inner.sort_by(|x, y| x.partial_cmp(y).unwrap());
        cuts.extend(inner);
        cuts.push(b);
        for w in cuts.windows(2) {
            if width.is_finite() {
                out.extend(uniform_panels(w[0], w[1], width));
            } else {
                out.push((w[0], w[1]));
            }
        }
    }
    out
}

fn harmonic(n: usize) -> f64 {
    (1..=n).map(|v| 1.0 / v as f64).sum()
}

/// r_{+,ϱ}^{-k}(φ) for every k in `ks`, sharing one set of samples.
pub fn r_plus_actions(
    ks: &[usize],
    rho: Rho,
    phi: &dyn TestFunction1D,
    opts: &QuadratureOptions,
) -> Result<Vec<DistributionAction>> {
    let kmax = *ks.iter().max().unwrap_or(&1);
    if ks.iter().any(|&k| k == 0) {
        return Err(Error::Domain("k must be positive".into()));
    }
    if phi.max_order() < kmax {
        return Err(Error::Capability(format!(
            "test function carries {} derivatives, need {kmax}",
            phi.max_order()
        )));
    }
    if let Rho::Finite(r) = rho {
        if !(r > 0.0) {
            return Err(Error::Domain("ϱ must be positive".into()));
        }
    }
    let upper = rho.upper(phi);
    let logs = weighted_derivative_integrals(phi, ks, Weight::Log, upper, opts);
    let origin = phi.jet(0.0, kmax);
    let edge = match rho {
        Rho::Finite(r) => Some((r, phi.jet(r, kmax))),
        Rho::Infinite => None,
    };
    Ok(ks
        .iter()
        .zip(logs)
        .map(|(&k, (l, err))| {
            let f = factorial(k - 1);
            let log = -l / f;
            let harm = origin.deriv(k - 1) / f * harmonic(k - 1);
            let mut boundary = Complex64::default();
            if let Some((r, jet)) = &edge {
                for j in 0..k.saturating_sub(1) {
                    boundary -= jet.deriv(j) * r.powi(j as i32 + 1 - k as i32) * factorial(k - j - 2);
                }
                boundary /= f;
            }
            DistributionAction::from_parts(log, harm, boundary, err / f)
        })
        .collect())
}

/// r_{+,ϱ}^{-k}(φ).
pub fn r_plus_action(k: usize, rho: Rho, phi: &dyn TestFunction1D) -> Result<DistributionAction> {
    Ok(r_plus_actions(&[k], rho, phi, &QuadratureOptions::default())?[0])
}

/// r_{-,ϱ}^{-k}(φ) = r_{+,ϱ}^{-k}(φ(-·)).
pub fn r_minus_action(k: usize, rho: Rho, phi: &dyn TestFunction1D) -> Result<DistributionAction> {
    r_plus_action(k, rho, &Reflected(phi))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    Plus,
    Minus,
}

/// (r - b)_{±,ϱ}^{-k}(φ) = r_{±,ϱ}^{-k}(φ(· + b)).
pub fn translated_action(
    k: usize,
    rho: Rho,
    b: f64,
    side: Side,
    phi: &dyn TestFunction1D,
) -> Result<DistributionAction> {
    let shifted = Shifted { inner: phi, shift: b };
    match side {
        Side::Plus => r_plus_action(k, rho, &shifted),
        Side::Minus => r_minus_action(k, rho, &shifted),
    }
}

/// φ^{(k-1)}(0)/(k-1)!, the residue of a ↦ I_{a,ϱ}(φ) at a = -k.
pub fn residue(k: usize, phi: &dyn TestFunction1D) -> Complex64 {
    phi.deriv(k - 1, 0.0) / factorial(k - 1)
}

fn pole_at(a: Complex64, depth: usize) -> Option<usize> {
    let k = (-a.re).round();
    if a.im == 0.0 && k >= 1.0 && (a.re + k).abs() < 1e-14 && k as usize <= depth.max(1) {
        Some(k as usize)
    } else {
        None
    }
}

/// ∫_0^ϱ s^a φ(s) ds for Re a > -1.
pub fn i_a_rho_direct(a: Complex64, rho: Rho, phi: &dyn TestFunction1D) -> Result<Complex64> {
    if !(a.re > -1.0) {
        return Err(Error::Domain(format!("direct integral needs Re a > -1, got {a}")));
    }
    let upper = rho.upper(phi);
    Ok(weighted_derivative_integrals(phi, &[0], Weight::Power(a), upper, &QuadratureOptions::default())[0].0)
}

/// I_{a,ϱ}(φ) through `depth` integrations by parts:
/// I_a(φ) = ϱ^{a+1}φ(ϱ)/(a+1) - I_{a+1}(φ')/(a+1).
pub fn i_a_rho_continued(a: Complex64, rho: Rho, phi: &dyn TestFunction1D, depth: usize) -> Result<Complex64> {
    if let Some(k) = pole_at(a, depth) {
        return Err(Error::Pole {
            pole: -(k as i64),
            residue: residue(k, phi),
        });
    }
    if !(a.re + depth as f64 > -1.0) {
        return Err(Error::Domain(format!("Re a must exceed -1-{depth}")));
    }
    if phi.max_order() < depth {
        return Err(Error::Capability(format!("need {depth} derivatives")));
    }
    let upper = rho.upper(phi);
    let ad = a + depth as f64;
    let deep = Derivative { inner: phi, k: depth };
    let mut value = weighted_derivative_integrals(&deep, &[0], Weight::Power(ad), upper, &QuadratureOptions::default())[0].0;
    let edge = match rho {
        Rho::Finite(r) => Some((r, phi.jet(r, depth))),
        Rho::Infinite => None,
    };
    for i in (0..depth).rev() {
        let ai = a + i as f64;
        let boundary = match &edge {
            Some((r, jet)) => ((ai + 1.0) * r.ln()).exp() * jet.deriv(i),
            None => Complex64::default(),
        };
        value = (boundary - value) / (ai + 1.0);
    }
    Ok(value)
}

/// I_{a,ϱ}(φ): direct for Re a > -1, otherwise continued through `depth` steps.
pub fn i_a_rho(a: Complex64, rho: Rho, phi: &dyn TestFunction1D, depth: usize) -> Result<Complex64> {
    if a.re > -1.0 {
        i_a_rho_direct(a, rho, phi)
    } else {
        i_a_rho_continued(a, rho, phi, depth)
    }
}

/// r ↦ ∫_{S^{n-1}} r^{power} φ(rω) / g(rω) dω.
pub struct SphereAverage<'a> {
    pub phi: &'a dyn TestFunctionND,
    pub g: &'a dyn RadialFactor,
    pub power: usize,
    pub sphere: &'a SphereRule,
}

impl TestFunction1D for SphereAverage<'_> {
    fn max_order(&self) -> usize {
        self.phi.max_order()
    }

    fn jet(&self, r: f64, order: usize) -> Jet<Complex64> {
        let mut acc = Jet::constant(Complex64::default(), order);
        for (om, &w) in self.sphere.directions.iter().zip(&self.sphere.weights) {
            let t = self.phi.ray_jet(om, r, order).div(&self.g.jet(om, r, order));
            acc = acc.add(&t.scale(Complex64::new(w, 0.0)));
        }
        let rp = Jet::linear(r, 1.0, order).powi(self.power as i32).to_complex();
        acc.mul(&rp)
    }

    fn decay_radius(&self) -> f64 {
        self.phi.decay_radius()
    }
}

/// Quadrature settings for 𝔭⁻¹.
#[derive(Debug, Clone)]
pub struct PInverseOptions {
    /// Azimuthal count of the sphere rule.
    pub sphere_resolution: usize,
    pub radial: QuadratureOptions,
    /// Keep the δ-derivative correction (switch off only for ablation).
    pub include_delta: bool,
}

impl PInverseOptions {
    pub fn for_dim(n: usize) -> Self {
        Self {
            sphere_resolution: if n == 2 { 96 } else { 32 },
            radial: QuadratureOptions::default(),
            include_delta: true,
        }
    }
}

/// 𝔭⁻¹(φ) for the symbol `spec` in dimension n ∈ {2, 3}.
pub fn frak_p_inverse_action(spec: &SymbolSpec, n: usize, phi: &dyn TestFunctionND) -> Result<DistributionAction> {
    frak_p_inverse_action_with(spec, n, phi, &PInverseOptions::for_dim(n))
}

pub fn frak_p_inverse_action_with(
    spec: &SymbolSpec,
    n: usize,
    phi: &dyn TestFunctionND,
    opts: &PInverseOptions,
) -> Result<DistributionAction> {
    if n != 2 && n != 3 {
        return Err(Error::Capability(format!("dimension {n}: only 2 and 3 are supported")));
    }
    if phi.dim() != n {
        return Err(Error::Domain(format!("test function lives in R^{}, not R^{n}", phi.dim())));
    }
    let need = spec.max_mult() as usize + n;
    if phi.max_order() < need {
        return Err(Error::Capability(format!(
            "test function carries {} derivatives, need {need}",
            phi.max_order()
        )));
    }
    let pf = partial_fractions(spec)?;
    let sphere = SphereRule::new(n, opts.sphere_resolution);
    let psi = SphereAverage {
        phi,
        g: spec.g.as_ref(),
        power: n - 1,
        sphere: &sphere,
    };
    let flat = SphereAverage {
        phi,
        g: spec.g.as_ref(),
        power: 0,
        sphere: &sphere,
    };

    let mut total = DistributionAction::default();
    for (j, (&rj, &qj)) in spec.roots.iter().zip(&spec.mults).enumerate() {
        let ks: Vec<usize> = (1..=qj as usize).collect();
        let shifted = Shifted { inner: &psi, shift: rj };
        let plus = r_plus_actions(&ks, Rho::Infinite, &shifted, &opts.radial)?;
        let minus = r_plus_actions(&ks, Rho::Finite(rj), &Reflected(&shifted), &opts.radial)?;
        for (i, &k) in ks.iter().enumerate() {
            let c = Complex64::new(pf.coefficient(j, k), 0.0);
            let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
            total.accumulate(c, &plus[i]);
            total.accumulate(c * sign, &minus[i]);
        }
        if opts.include_delta && qj as usize >= n {
            let origin = flat.jet(0.0, qj as usize - n);
            for k in n..=qj as usize {
                let m = k - n;
                // (-1)^m δ^{(m)}(F) = F^{(m)}(0)
                let d = -pf.coefficient(j, k) * rj.ln() / factorial(m) * origin.deriv(m);
                total.value += d;
                total.delta_part += d;
            }
        }
    }
    Ok(total)
}

/// |𝔭⁻¹(pφ) - ∫φ|.
pub fn verify_multiplier_identity(spec: &SymbolSpec, n: usize, phi: &dyn TestFunctionND) -> Result<f64> {
    verify_multiplier_identity_with(spec, n, phi, &PInverseOptions::for_dim(n))
}

pub fn verify_multiplier_identity_with(
    spec: &SymbolSpec,
    n: usize,
    phi: &dyn TestFunctionND,
    opts: &PInverseOptions,
) -> Result<f64> {
    let p_phi = SymbolTimes { phi, spec };
    let lhs = frak_p_inverse_action_with(spec, n, &p_phi, opts)?;
    let rhs = match phi.integral() {
        Some(v) => v,
        None => integrate_nd(phi, opts)?,
    };
    Ok((lhs.value - rhs).norm())
}

/// ∫_{R^n} φ in polar coordinates.
pub fn integrate_nd(phi: &dyn TestFunctionND, opts: &PInverseOptions) -> Result<Complex64> {
    let n = phi.dim();
    if n != 2 && n != 3 {
        return Err(Error::Capability(format!("dimension {n}: only 2 and 3 are supported")));
    }
    let sphere = SphereRule::new(n, opts.sphere_resolution);
    let gl = GaussLegendre::new(opts.radial.orders.1);
    let mut acc = Complex64::default();
    for (a, b) in uniform_panels(0.0, phi.decay_radius(), opts.radial.panel) {
        for (r, w) in gl.mapped(a, b) {
            let rp = r.powi(n as i32 - 1) * w;
            for (om, &wo) in sphere.directions.iter().zip(&sphere.weights) {
                let x: Vec<f64> = om.iter().map(|o| o * r).collect();
                acc += phi.value(&x) * rp * wo;
            }
        }
    }
    Ok(acc)
}
