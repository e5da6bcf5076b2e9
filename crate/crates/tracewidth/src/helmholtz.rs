//! Outgoing fundamental solutions of Δ + k², their Cartesian derivatives,
//! and fields of piecewise-constant volume sources.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::f64::consts::PI;

use crate::distributions::GaussPolyND;
use crate::error::{Error, Result};
use crate::quadrature::{geometric_panels, uniform_panels, GaussLegendre, SphereRule};
use crate::specfun::hankel01;

pub const NU_CAP: u32 = 8;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Basis {
    /// e^{ikr}
    Exp,
    /// H_0^{(1)}(kr)
    H0,
    /// H_1^{(1)}(kr)
    H1,
}

/// Σ c · r^{-p} · B(kr).
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Laurent {
    pub terms: BTreeMap<(Basis, u32), Complex64>,
}

impl Laurent {
    fn single(b: Basis, c: Complex64) -> Self {
        let mut terms = BTreeMap::new();
        terms.insert((b, 0), c);
        Self { terms }
    }

    fn push(&mut self, b: Basis, p: u32, c: Complex64) {
        *self.terms.entry((b, p)).or_default() += c;
    }

    pub fn derivative(&self, k: f64) -> Self {
        let i = Complex64::new(0.0, 1.0);
        let mut out = Self::default();
        for (&(b, p), &c) in &self.terms {
            if p > 0 {
                out.push(b, p + 1, -c * p as f64);
            }
            match b {
                Basis::Exp => out.push(Basis::Exp, p, c * i * k),
                Basis::H0 => out.push(Basis::H1, p, -c * k),
                Basis::H1 => {
                    out.push(Basis::H0, p, c * k);
                    out.push(Basis::H1, p + 1, -c);
                }
            }
        }
        out.terms.retain(|_, c| *c != Complex64::default());
        out
    }

    fn scaled(&self, s: Complex64, shift: u32) -> Self {
        let mut out = Self::default();
        for (&(b, p), &c) in &self.terms {
            out.push(b, p + shift, c * s);
        }
        out
    }

    pub fn eval(&self, r: f64, basis: &BasisValues) -> Complex64 {
        let inv = 1.0 / r;
        self.terms
            .iter()
            .map(|(&(b, p), &c)| {
                let v = match b {
                    Basis::Exp => basis.exp,
                    Basis::H0 => basis.h0,
                    Basis::H1 => basis.h1,
                };
                c * v * inv.powi(p as i32)
            })
            .sum()
    }
}

/// Basis functions at one radius.
#[derive(Debug, Clone, Copy)]
pub struct BasisValues {
    pub exp: Complex64,
    pub h0: Complex64,
    pub h1: Complex64,
}

impl BasisValues {
    pub fn new(n: usize, k: f64, r: f64) -> Self {
        let zero = Complex64::default();
        if n % 2 == 1 {
            Self {
                exp: Complex64::from_polar(1.0, k * r),
                h0: zero,
                h1: zero,
            }
        } else {
            let (h0, h1) = hankel01(k * r);
            Self { exp: zero, h0, h1 }
        }
    }
}

/// How the radial derivatives in Φ_n are read.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Convention {
    /// (-2πr)^{-m} ∂_r^m applied to e^{ikr} or H_0^{(1)}(kr).
    #[default]
    Literal,
    /// (-(2πr)^{-1} ∂_r)^m, the classical form; equal to `Literal` for n ≤ 4.
    Iterated,
}

/// Φ_n and its radial derivatives as Laurent sums.
#[derive(Debug, Clone)]
pub struct RadialProfile {
    pub n: usize,
    pub k: f64,
    pub convention: Convention,
    /// derivs[c] = ∂_r^c Φ_n.
    pub derivs: Vec<Laurent>,
}

impl RadialProfile {
    pub fn new(n: usize, k: f64, max_deriv: usize) -> Result<Self> {
        Self::with_convention(n, k, max_deriv, Convention::Literal)
    }

    pub fn with_convention(n: usize, k: f64, max_deriv: usize, convention: Convention) -> Result<Self> {
        if n == 0 {
            return Err(Error::Domain("dimension must be at least 1".into()));
        }
        if !(k > 0.0) {
            return Err(Error::Domain("wavenumber must be positive".into()));
        }
        let i = Complex64::new(0.0, 1.0);
        let (mut g, m, front) = if n % 2 == 1 {
            (Laurent::single(Basis::Exp, Complex64::new(1.0, 0.0)), (n - 1) / 2, (2.0 * i * k).inv())
        } else {
            (Laurent::single(Basis::H0, Complex64::new(1.0, 0.0)), (n - 2) / 2, (4.0 * i).inv())
        };
        let step = Complex64::new(-1.0 / (2.0 * PI), 0.0);
        match convention {
            Convention::Literal => {
                for _ in 0..m {
                    g = g.derivative(k);
                }
                g = g.scaled(step.powi(m as i32), m as u32);
            }
            Convention::Iterated => {
                for _ in 0..m {
                    g = g.derivative(k).scaled(step, 1);
                }
            }
        }
        let mut derivs = vec![g.scaled(front, 0)];
        for c in 0..max_deriv {
            let d = derivs[c].derivative(k);
            derivs.push(d);
        }
        Ok(Self {
            n,
            k,
            convention,
            derivs,
        })
    }

    fn ensure(&mut self, c: usize) {
        while self.derivs.len() <= c {
            let d = self.derivs.last().unwrap().derivative(self.k);
            self.derivs.push(d);
        }
    }

    pub fn eval(&self, c: usize, r: f64) -> Result<Complex64> {
        if !(r > 0.0) {
            return Err(Error::Domain(format!("Φ_n needs r > 0, got {r}")));
        }
        let b = BasisValues::new(self.n, self.k, r);
        Ok(self.derivs[c].eval(r, &b))
    }
}

/// Φ_n(r).
pub fn phi_radial(n: usize, k: f64, r: f64) -> Result<Complex64> {
    RadialProfile::new(n, k, 0)?.eval(0, r)
}

/// Σ coeff · x_j^a · r^{-b} · G^{(c)}(r), keyed by (a, b, c).
#[derive(Debug, Clone, PartialEq)]
pub struct RadialTermSum {
    pub terms: BTreeMap<(u32, u32, u32), Complex64>,
}

impl RadialTermSum {
    /// The bare profile G.
    pub fn identity() -> Self {
        let mut terms = BTreeMap::new();
        terms.insert((0, 0, 0), Complex64::new(1.0, 0.0));
        Self { terms }
    }

    /// ∂_j of the sum.
    pub fn derivative(&self) -> Self {
        let mut out: BTreeMap<(u32, u32, u32), Complex64> = BTreeMap::new();
        for (&(a, b, c), &v) in &self.terms {
            if a > 0 {
                *out.entry((a - 1, b, c)).or_default() += v * a as f64;
            }
            if b > 0 {
                *out.entry((a + 1, b + 2, c)).or_default() -= v * b as f64;
            }
            *out.entry((a + 1, b + 1, c + 1)).or_default() += v;
        }
        out.retain(|_, v| *v != Complex64::default());
        Self { terms: out }
    }

    pub fn max_c(&self) -> usize {
        self.terms.keys().map(|t| t.2 as usize).max().unwrap_or(0)
    }

    /// Value at a point with axis coordinate `xj` and radius `r`.
    pub fn eval(&self, profile: &RadialProfile, xj: f64, r: f64) -> Result<Complex64> {
        let b = BasisValues::new(profile.n, profile.k, r);
        let g: Vec<Complex64> = (0..=self.max_c()).map(|c| profile.derivs[c].eval(r, &b)).collect();
        Ok(self
            .terms
            .iter()
            .map(|(&(a, bb, c), &v)| v * xj.powi(a as i32) * r.powi(-(bb as i32)) * g[c as usize])
            .sum())
    }
}

/// u = (∂_j^ν δ_y) * Φ_n = (-1)^ν (∂_j^ν Φ_n)(· - y).
#[derive(Debug, Clone)]
pub struct PointSource {
    pub y: Vec<f64>,
    /// Zero-based axis index.
    pub axis: usize,
    pub nu: u32,
    pub profile: RadialProfile,
    pub terms: RadialTermSum,
}

impl PointSource {
    pub fn new(n: usize, k: f64, y: Vec<f64>, axis: usize, nu: u32) -> Result<Self> {
        Self::with_convention(n, k, y, axis, nu, Convention::Literal)
    }

    pub fn with_convention(
        n: usize,
        k: f64,
        y: Vec<f64>,
        axis: usize,
        nu: u32,
        convention: Convention,
    ) -> Result<Self> {
        if y.len() != n {
            return Err(Error::Domain(format!("source point has {} coordinates, expected {n}", y.len())));
        }
        if axis >= n {
            return Err(Error::Domain(format!("axis {} out of range for n = {n}", axis + 1)));
        }
        if nu > NU_CAP {
            return Err(Error::Capability(format!("ν = {nu} exceeds the cap {NU_CAP}")));
        }
        let mut terms = RadialTermSum::identity();
        for _ in 0..nu {
            terms = terms.derivative();
        }
        let mut profile = RadialProfile::with_convention(n, k, 0, convention)?;
        profile.ensure(terms.max_c());
        Ok(Self {
            y,
            axis,
            nu,
            profile,
            terms,
        })
    }

    pub fn field(&self, x: &[f64]) -> Result<Complex64> {
        let z: Vec<f64> = x.iter().zip(&self.y).map(|(a, b)| a - b).collect();
        let r = z.iter().map(|v| v * v).sum::<f64>().sqrt();
        if r == 0.0 {
            return Err(Error::Singularity);
        }
        let v = self.terms.eval(&self.profile, z[self.axis], r)?;
        Ok(if self.nu % 2 == 0 { v } else { -v })
    }
}

/// Field of ∂_j^ν δ_y at x (axis `j` is one-based).
pub fn point_source_field(n: usize, k: f64, y: &[f64], j: usize, nu: u32, x: &[f64]) -> Result<Complex64> {
    if j == 0 {
        return Err(Error::Domain("axes are numbered from 1".into()));
    }
    PointSource::new(n, k, y.to_vec(), j - 1, nu)?.field(x)
}

/// Axis-aligned box with a constant amplitude.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Cell {
    pub center: Vec<f64>,
    pub half: Vec<f64>,
    pub amplitude: f64,
}

impl Cell {
    pub fn new(center: Vec<f64>, half: Vec<f64>, amplitude: f64) -> Self {
        Self {
            center,
            half,
            amplitude,
        }
    }

    fn volume(&self) -> f64 {
        self.half.iter().map(|h| 2.0 * h).product()
    }

    fn distance(&self, x: &[f64]) -> f64 {
        self.center
            .iter()
            .zip(&self.half)
            .zip(x)
            .map(|((c, h), xi)| ((xi - c).abs() - h).max(0.0).powi(2))
            .sum::<f64>()
            .sqrt()
    }

    fn overlaps(&self, o: &Cell) -> bool {
        self.center
            .iter()
            .zip(&self.half)
            .zip(o.center.iter().zip(&o.half))
            .all(|((c1, h1), (c2, h2))| (c1 - c2).abs() < h1 + h2)
    }
}

/// Piecewise-constant source on non-overlapping cells.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VolumeSource {
    pub dim: usize,
    pub cells: Vec<Cell>,
    pub support_radius: f64,
}

impl VolumeSource {
    pub fn new(dim: usize, cells: Vec<Cell>) -> Result<Self> {
        if dim != 2 && dim != 3 {
            return Err(Error::Capability(format!("volume sources exist for n = 2, 3, not {dim}")));
        }
        for c in &cells {
            if c.center.len() != dim || c.half.len() != dim {
                return Err(Error::Domain("cell dimension mismatch".into()));
            }
            if c.half.iter().any(|&h| !(h > 0.0)) {
                return Err(Error::Domain("cell half-widths must be positive".into()));
            }
        }
        for (i, a) in cells.iter().enumerate() {
            for b in &cells[i + 1..] {
                if a.overlaps(b) {
                    return Err(Error::Domain("cells overlap".into()));
                }
            }
        }
        let support_radius = cells
            .iter()
            .map(|c| {
                c.center
                    .iter()
                    .zip(&c.half)
                    .map(|(x, h)| (x.abs() + h).powi(2))
                    .sum::<f64>()
                    .sqrt()
            })
            .fold(0.0, f64::max);
        Ok(Self {
            dim,
            cells,
            support_radius,
        })
    }

    pub fn total_volume(&self) -> f64 {
        self.cells.iter().map(Cell::volume).sum()
    }
}

/// Cell quadrature settings.
#[derive(Debug, Clone)]
pub struct CellQuadrature {
    /// Orders compared on each accepted box.
    pub orders: (usize, usize),
    /// Accept a box when the two orders differ by less than this, relative.
    pub tol: f64,
    pub max_depth: usize,
}

impl Default for CellQuadrature {
    fn default() -> Self {
        Self {
            orders: (8, 12),
            tol: 1e-10,
            max_depth: 14,
        }
    }
}

struct CellIntegrator<'a> {
    profile: &'a RadialProfile,
    lo: GaussLegendre,
    hi: GaussLegendre,
    opts: &'a CellQuadrature,
}

impl CellIntegrator<'_> {
    fn tensor(&self, gl: &GaussLegendre, center: &[f64], half: &[f64], x: &[f64]) -> Result<Complex64> {
        let n = center.len();
        let m = gl.nodes.len();
        let mut idx = vec![0usize; n];
        let mut acc = Complex64::default();
        loop {
            let mut w = 1.0;
            let mut r2 = 0.0;
            for d in 0..n {
                let y = center[d] + half[d] * gl.nodes[idx[d]];
                w *= half[d] * gl.weights[idx[d]];
                r2 += (x[d] - y).powi(2);
            }
            acc += self.profile.eval(0, r2.sqrt())? * w;
            let mut d = 0;
            loop {
                idx[d] += 1;
                if idx[d] < m {
                    break;
                }
                idx[d] = 0;
                d += 1;
                if d == n {
                    return Ok(acc);
                }
            }
        }
    }

    fn integrate(&self, center: &[f64], half: &[f64], x: &[f64], depth: usize) -> Result<(Complex64, f64)> {
        let dist = Cell {
            center: center.to_vec(),
            half: half.to_vec(),
            amplitude: 0.0,
        }
        .distance(x);
        let diam = 2.0 * half.iter().map(|h| h * h).sum::<f64>().sqrt();
        if dist >= diam || depth >= self.opts.max_depth {
            let a = self.tensor(&self.lo, center, half, x)?;
            let b = self.tensor(&self.hi, center, half, x)?;
            let err = (a - b).norm();
            if err <= self.opts.tol * b.norm() || depth >= self.opts.max_depth {
                return Ok((b, err));
            }
        }
        // split along every axis
        let n = center.len();
        let h2: Vec<f64> = half.iter().map(|h| 0.5 * h).collect();
        let mut acc = Complex64::default();
        let mut err = 0.0;
        for corner in 0..(1usize << n) {
            let c: Vec<f64> = (0..n)
                .map(|d| center[d] + if corner >> d & 1 == 1 { h2[d] } else { -h2[d] })
                .collect();
            let (v, e) = self.integrate(&c, &h2, x, depth + 1)?;
            acc += v;
            err += e;
        }
        Ok((acc, err))
    }
}

/// Σ_cells amplitude · ∫_cell Φ_n(x - y) dy, with an error estimate.
pub fn volume_source_field_with(
    src: &VolumeSource,
    profile: &RadialProfile,
    x: &[f64],
    opts: &CellQuadrature,
) -> Result<(Complex64, f64)> {
    if profile.n != src.dim || x.len() != src.dim {
        return Err(Error::Domain("dimension mismatch".into()));
    }
    let integ = CellIntegrator {
        profile,
        lo: GaussLegendre::new(opts.orders.0),
        hi: GaussLegendre::new(opts.orders.1),
        opts,
    };
    let mut acc = Complex64::default();
    let mut err = 0.0;
    for c in &src.cells {
        let size = c.half.iter().cloned().fold(f64::INFINITY, f64::min);
        let d = c.distance(x);
        if d < 1e-6 * size {
            return Err(Error::Proximity { distance: d });
        }
        let (v, e) = integ.integrate(&c.center, &c.half, x, 0)?;
        acc += v * c.amplitude;
        err += e * c.amplitude.abs();
    }
    let scale = acc.norm().max(f64::MIN_POSITIVE);
    if err > 1e-6 * scale {
        return Err(Error::Quadrature { estimate: err });
    }
    Ok((acc, err))
}

pub fn volume_source_field(src: &VolumeSource, k: f64, x: &[f64]) -> Result<Complex64> {
    let profile = RadialProfile::new(src.dim, k, 0)?;
    Ok(volume_source_field_with(src, &profile, x, &CellQuadrature::default())?.0)
}

/// ∫ Φ_n (Δ + k²)φ dx in polar coordinates, with an error estimate.
pub fn pde_residual(n: usize, k: f64, phi: &GaussPolyND) -> Result<(Complex64, f64)> {
    if n != 2 && n != 3 {
        return Err(Error::Capability(format!("dimension {n}: only 2 and 3 are supported")));
    }
    if phi.center.len() != n {
        return Err(Error::Domain("test function dimension mismatch".into()));
    }
    let lap = phi.laplacian();
    let profile = RadialProfile::new(n, k, 0)?;
    let sphere = SphereRule::new(n, if n == 2 { 128 } else { 48 });
    let top = crate::distributions::TestFunctionND::decay_radius(phi);
    let mut panels = geometric_panels(1.0, 40);
    panels.extend(uniform_panels(1.0, top, 0.25));
    let mut vals = Vec::new();
    for order in [12, 20] {
        let gl = GaussLegendre::new(order);
        let mut acc = Complex64::default();
        for &(a, b) in &panels {
            for (r, w) in gl.mapped(a, b) {
                let radial = profile.eval(0, r)? * r.powi(n as i32 - 1) * w;
                let mut ang = 0.0;
                for (om, &wo) in sphere.directions.iter().zip(&sphere.weights) {
                    let x: Vec<f64> = om.iter().map(|o| o * r).collect();
                    let f = phi_value(phi, &x);
                    ang += wo * (phi_value(&lap, &x) + k * k * f);
                }
                acc += radial * ang;
            }
        }
        vals.push(acc);
    }
    let err = (vals[1] - vals[0]).norm();
    if !err.is_finite() || err > 1e-6 * vals[1].norm().max(1e-300) {
        return Err(Error::Quadrature { estimate: err });
    }
    Ok((vals[1], err))
}

fn phi_value(phi: &GaussPolyND, x: &[f64]) -> f64 {
    crate::distributions::TestFunctionND::value(phi, x).re
}
