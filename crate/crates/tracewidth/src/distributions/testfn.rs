//! Test functions with exact derivatives of every order.

use num_complex::Complex64;
use std::collections::BTreeMap;

use crate::jet::Jet;
use crate::multiplier::SymbolSpec;

/// A smooth, rapidly decaying function on the line.
pub trait TestFunction1D: Send + Sync {
    fn max_order(&self) -> usize;
    /// Taylor jet at r of the given order.
    fn jet(&self, r: f64, order: usize) -> Jet<Complex64>;
    /// All derivatives up to `max_order` are below 1e-16 relative for |r| beyond this.
    fn decay_radius(&self) -> f64;

    /// Points where quadrature panels should break (support edges).
    fn breakpoints(&self) -> Vec<f64> {
        Vec::new()
    }

    /// Widest panel the function is resolved on.
    fn max_panel(&self) -> f64 {
        f64::INFINITY
    }

    fn value(&self, r: f64) -> Complex64 {
        self.jet(r, 0).value()
    }

    fn deriv(&self, q: usize, r: f64) -> Complex64 {
        self.jet(r, q).deriv(q)
    }
}

/// p(r - c) exp(-α (r - c)²).
#[derive(Debug, Clone)]
pub struct GaussPoly1D {
    pub center: f64,
    pub alpha: f64,
    /// Coefficients in (r - c), lowest degree first.
    pub poly: Vec<f64>,
    pub max_order: usize,
}

impl GaussPoly1D {
    pub fn gaussian(center: f64, alpha: f64) -> Self {
        Self {
            center,
            alpha,
            poly: vec![1.0],
            max_order: 12,
        }
    }
}

impl TestFunction1D for GaussPoly1D {
    fn max_order(&self) -> usize {
        self.max_order
    }

    fn jet(&self, r: f64, order: usize) -> Jet<Complex64> {
        let u = Jet::linear(r - self.center, 1.0, order);
        let e = u.mul(&u).scale(-self.alpha).exp();
        let mut p = Jet::constant(0.0, order);
        for &c in self.poly.iter().rev() {
            p = p.mul(&u).add(&Jet::constant(c, order));
        }
        p.mul(&e).to_complex()
    }

    fn decay_radius(&self) -> f64 {
        self.center.abs() + gaussian_reach(self.alpha, self.poly.len() + self.max_order)
    }
}

/// Distance beyond which u^p e^{-αu²} and its derivatives sit below e^{-46}.
fn gaussian_reach(alpha: f64, p: usize) -> f64 {
    let r0 = (46.0 / alpha).sqrt();
    ((46.0 + p as f64 * (2.0 * r0.max(1.0)).ln()) / alpha).sqrt()
}

/// a · exp(-1 / ((r - lo)(hi - r))) on (lo, hi), zero elsewhere.
#[derive(Debug, Clone)]
pub struct Bump1D {
    pub lo: f64,
    pub hi: f64,
    pub amplitude: f64,
}

impl TestFunction1D for Bump1D {
    fn max_order(&self) -> usize {
        usize::MAX
    }

    fn jet(&self, r: f64, order: usize) -> Jet<Complex64> {
        if r <= self.lo || r >= self.hi {
            return Jet::constant(Complex64::new(0.0, 0.0), order);
        }
        let a = Jet::linear(r - self.lo, 1.0, order);
        let b = Jet::linear(self.hi - r, -1.0, order);
        a.mul(&b).recip().scale(-1.0).exp().scale(self.amplitude).to_complex()
    }

    fn decay_radius(&self) -> f64 {
        self.lo.abs().max(self.hi.abs())
    }

    fn breakpoints(&self) -> Vec<f64> {
        vec![self.lo, self.hi]
    }

    fn max_panel(&self) -> f64 {
        (self.hi - self.lo) / 160.0
    }
}

/// r ↦ φ(-r).
pub struct Reflected<'a>(pub &'a dyn TestFunction1D);

impl TestFunction1D for Reflected<'_> {
    fn max_order(&self) -> usize {
        self.0.max_order()
    }
    fn jet(&self, r: f64, order: usize) -> Jet<Complex64> {
        self.0.jet(-r, order).reflect()
    }
    fn decay_radius(&self) -> f64 {
        self.0.decay_radius()
    }
    fn breakpoints(&self) -> Vec<f64> {
        self.0.breakpoints().iter().map(|b| -b).collect()
    }
    fn max_panel(&self) -> f64 {
        self.0.max_panel()
    }
}

/// r ↦ φ(r + b).
pub struct Shifted<'a> {
    pub inner: &'a dyn TestFunction1D,
    pub shift: f64,
}

impl TestFunction1D for Shifted<'_> {
    fn max_order(&self) -> usize {
        self.inner.max_order()
    }
    fn jet(&self, r: f64, order: usize) -> Jet<Complex64> {
        self.inner.jet(r + self.shift, order)
    }
    fn decay_radius(&self) -> f64 {
        self.inner.decay_radius() + self.shift.abs()
    }
    fn breakpoints(&self) -> Vec<f64> {
        self.inner.breakpoints().iter().map(|b| b - self.shift).collect()
    }
    fn max_panel(&self) -> f64 {
        self.inner.max_panel()
    }
}

/// r ↦ φ^(k)(r).
pub struct Derivative<'a> {
    pub inner: &'a dyn TestFunction1D,
    pub k: usize,
}

impl TestFunction1D for Derivative<'_> {
    fn max_order(&self) -> usize {
        self.inner.max_order().saturating_sub(self.k)
    }
    fn jet(&self, r: f64, order: usize) -> Jet<Complex64> {
        self.inner.jet(r, order + self.k).differentiate(self.k)
    }
    fn decay_radius(&self) -> f64 {
        self.inner.decay_radius()
    }
    fn breakpoints(&self) -> Vec<f64> {
        self.inner.breakpoints()
    }
    fn max_panel(&self) -> f64 {
        self.inner.max_panel()
    }
}

/// αφ + βψ.
pub struct Combination<'a> {
    pub terms: Vec<(Complex64, &'a dyn TestFunction1D)>,
}

impl TestFunction1D for Combination<'_> {
    fn max_order(&self) -> usize {
        self.terms.iter().map(|t| t.1.max_order()).min().unwrap_or(0)
    }
    fn jet(&self, r: f64, order: usize) -> Jet<Complex64> {
        let mut acc = Jet::constant(Complex64::new(0.0, 0.0), order);
        for (a, f) in &self.terms {
            acc = acc.add(&f.jet(r, order).scale(*a));
        }
        acc
    }
    fn decay_radius(&self) -> f64 {
        self.terms.iter().map(|t| t.1.decay_radius()).fold(0.0, f64::max)
    }
    fn breakpoints(&self) -> Vec<f64> {
        self.terms.iter().flat_map(|t| t.1.breakpoints()).collect()
    }
    fn max_panel(&self) -> f64 {
        self.terms.iter().map(|t| t.1.max_panel()).fold(f64::INFINITY, f64::min)
    }
}

/// A smooth, rapidly decaying function on R^n, accessed along rays.
pub trait TestFunctionND: Send + Sync {
    fn dim(&self) -> usize;
    fn max_order(&self) -> usize;
    /// Jet in r of r ↦ φ(rω).
    fn ray_jet(&self, omega: &[f64], r: f64, order: usize) -> Jet<Complex64>;
    fn value(&self, x: &[f64]) -> Complex64;
    /// φ is negligible (below 1e-16 relative) outside this ball.
    fn decay_radius(&self) -> f64;
    /// Closed-form ∫φ when known.
    fn integral(&self) -> Option<Complex64> {
        None
    }
}

/// Multivariate polynomial: exponent vector ↦ coefficient.
pub type Poly = BTreeMap<Vec<u32>, f64>;

/// P(x - c) exp(-Σ α_i (x_i - c_i)²).
#[derive(Debug, Clone)]
pub struct GaussPolyND {
    pub center: Vec<f64>,
    pub alpha: Vec<f64>,
    pub poly: Poly,
    pub max_order: usize,
}

impl GaussPolyND {
    pub fn gaussian(center: Vec<f64>, alpha: Vec<f64>) -> Self {
        let n = center.len();
        let mut poly = Poly::new();
        poly.insert(vec![0; n], 1.0);
        Self {
            center,
            alpha,
            poly,
            max_order: 12,
        }
    }

    pub fn with_poly(mut self, poly: Poly) -> Self {
        self.poly = poly;
        self
    }

    pub fn degree(&self) -> u32 {
        self.poly.keys().map(|e| e.iter().sum::<u32>()).max().unwrap_or(0)
    }

    /// ∂_i φ, again of the same form.
    pub fn partial(&self, i: usize) -> Self {
        let mut out = Poly::new();
        for (e, &c) in &self.poly {
            if e[i] > 0 {
                let mut f = e.clone();
                f[i] -= 1;
                *out.entry(f).or_insert(0.0) += c * e[i] as f64;
            }
            let mut f = e.clone();
            f[i] += 1;
            *out.entry(f).or_insert(0.0) += -2.0 * self.alpha[i] * c;
        }
        out.retain(|_, c| *c != 0.0);
        Self {
            poly: out,
            ..self.clone()
        }
    }

    pub fn laplacian(&self) -> Self {
        let mut out = Poly::new();
        for i in 0..self.center.len() {
            for (e, c) in self.partial(i).partial(i).poly {
                *out.entry(e).or_insert(0.0) += c;
            }
        }
        out.retain(|_, c| *c != 0.0);
        Self {
            poly: out,
            ..self.clone()
        }
    }

    /// a·self + b·other; both must share center and widths.
    pub fn combine(&self, a: f64, other: &Self, b: f64) -> Self {
        assert_eq!(self.center, other.center);
        assert_eq!(self.alpha, other.alpha);
        let mut out = Poly::new();
        for (e, &c) in &self.poly {
            *out.entry(e.clone()).or_insert(0.0) += a * c;
        }
        for (e, &c) in &other.poly {
            *out.entry(e.clone()).or_insert(0.0) += b * c;
        }
        Self {
            poly: out,
            ..self.clone()
        }
    }

    fn value_real(&self, x: &[f64]) -> f64 {
        let u: Vec<f64> = x.iter().zip(&self.center).map(|(a, b)| a - b).collect();
        let q: f64 = u.iter().zip(&self.alpha).map(|(v, a)| -a * v * v).sum();
        let p: f64 = self
            .poly
            .iter()
            .map(|(e, c)| c * e.iter().zip(&u).map(|(&k, v)| v.powi(k as i32)).product::<f64>())
            .sum();
        p * q.exp()
    }
}

fn gaussian_moment(e: u32, alpha: f64) -> f64 {
    if e % 2 == 1 {
        return 0.0;
    }
    // (e-1)!! / (2α)^{e/2} · sqrt(π/α)
    let dfact: f64 = (1..e).step_by(2).map(|v| v as f64).product();
    dfact / (2.0 * alpha).powi(e as i32 / 2) * (std::f64::consts::PI / alpha).sqrt()
}

impl TestFunctionND for GaussPolyND {
    fn dim(&self) -> usize {
        self.center.len()
    }

    fn max_order(&self) -> usize {
        self.max_order
    }

    fn ray_jet(&self, omega: &[f64], r: f64, order: usize) -> Jet<Complex64> {
        let n = self.center.len();
        let deg = self.poly.keys().flat_map(|e| e.iter().cloned()).max().unwrap_or(0) as usize;
        let mut q = Jet::constant(0.0, order);
        let mut powers: Vec<Vec<Jet<f64>>> = Vec::with_capacity(n);
        for i in 0..n {
            let u = Jet::linear(r * omega[i] - self.center[i], omega[i], order);
            q = q.sub(&u.mul(&u).scale(self.alpha[i]));
            let mut pw = vec![Jet::constant(1.0, order)];
            for k in 1..=deg {
                let next = pw[k - 1].mul(&u);
                pw.push(next);
            }
            powers.push(pw);
        }
        let mut p = Jet::constant(0.0, order);
        for (e, &c) in &self.poly {
            let mut t = Jet::constant(c, order);
            for (i, &k) in e.iter().enumerate() {
                if k > 0 {
                    t = t.mul(&powers[i][k as usize]);
                }
            }
            p = p.add(&t);
        }
        p.mul(&q.exp()).to_complex()
    }

    fn value(&self, x: &[f64]) -> Complex64 {
        Complex64::new(self.value_real(x), 0.0)
    }

    fn decay_radius(&self) -> f64 {
        let amin = self.alpha.iter().cloned().fold(f64::INFINITY, f64::min);
        let c = self.center.iter().map(|v| v * v).sum::<f64>().sqrt();
        c + gaussian_reach(amin, self.degree() as usize + self.max_order)
    }

    fn integral(&self) -> Option<Complex64> {
        let s: f64 = self
            .poly
            .iter()
            .map(|(e, c)| {
                c * e
                    .iter()
                    .zip(&self.alpha)
                    .map(|(&k, &a)| gaussian_moment(k, a))
                    .product::<f64>()
            })
            .sum();
        Some(Complex64::new(s, 0.0))
    }
}

/// x ↦ p(x) φ(x) for a radial-form symbol p.
pub struct SymbolTimes<'a> {
    pub phi: &'a dyn TestFunctionND,
    pub spec: &'a SymbolSpec,
}

impl TestFunctionND for SymbolTimes<'_> {
    fn dim(&self) -> usize {
        self.phi.dim()
    }
    fn max_order(&self) -> usize {
        self.phi.max_order()
    }
    fn ray_jet(&self, omega: &[f64], r: f64, order: usize) -> Jet<Complex64> {
        self.phi.ray_jet(omega, r, order).mul(&self.spec.jet(omega, r, order))
    }
    fn value(&self, x: &[f64]) -> Complex64 {
        let r = x.iter().map(|v| v * v).sum::<f64>().sqrt();
        let omega: Vec<f64> = if r > 0.0 {
            x.iter().map(|v| v / r).collect()
        } else {
            let mut e = vec![0.0; x.len()];
            e[0] = 1.0;
            e
        };
        self.phi.value(x) * self.spec.jet(&omega, r, 0).value()
    }
    fn decay_radius(&self) -> f64 {
        // polynomial growth of p costs a few extra widths
        self.phi.decay_radius() * 1.15
    }
}
