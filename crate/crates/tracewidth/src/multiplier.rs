//! Radial multiplier symbols p(rω) = g(rω) Π (r - r_j)^{q_j}: partial
//! fractions, quadratic-symbol pullback and the bandwidth bound curves.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use std::fmt::Debug;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::jet::Jet;
use crate::specfun::bessel_j_seq;

/// The factor g of a symbol, evaluated along rays r ↦ g(rω).
pub trait RadialFactor: Send + Sync + Debug {
    fn jet(&self, omega: &[f64], r: f64, order: usize) -> Jet<Complex64>;
    /// Declared positive lower bound of |g|.
    fn lower_bound(&self) -> f64;
    /// Polynomial growth degree of g.
    fn growth_degree(&self) -> u32;
}

/// g(rω) = -(r + k), the Helmholtz factor of k² - r².
#[derive(Debug, Clone, Copy)]
pub struct HelmholtzFactor {
    pub k: f64,
}

impl RadialFactor for HelmholtzFactor {
    fn jet(&self, _omega: &[f64], r: f64, order: usize) -> Jet<Complex64> {
        Jet::linear(Complex64::new(-(r + self.k), 0.0), Complex64::new(-1.0, 0.0), order)
    }
    fn lower_bound(&self) -> f64 {
        self.k
    }
    fn growth_degree(&self) -> u32 {
        1
    }
}

#[derive(Debug, Clone, Copy)]
pub struct ConstantFactor(pub Complex64);

impl RadialFactor for ConstantFactor {
    fn jet(&self, _omega: &[f64], _r: f64, order: usize) -> Jet<Complex64> {
        Jet::constant(self.0, order)
    }
    fn lower_bound(&self) -> f64 {
        self.0.norm()
    }
    fn growth_degree(&self) -> u32 {
        0
    }
}

/// g(r) = Q(r²) Π (r + r_j)^{q_j}, what is left of a polynomial in r² after
/// removing its positive roots.
#[derive(Debug, Clone)]
pub struct QuotientFactor {
    /// Coefficients of Q in t = r², lowest degree first.
    pub q: Vec<Complex64>,
    pub roots: Vec<f64>,
    pub mults: Vec<u32>,
    lower: f64,
}

impl QuotientFactor {
    fn new(q: Vec<Complex64>, roots: Vec<f64>, mults: Vec<u32>) -> Self {
        let mut f = Self {
            q,
            roots,
            mults,
            lower: 0.0,
        };
        let top = 4.0 * f.roots.iter().cloned().fold(1.0, f64::max);
        f.lower = (0..=4000)
            .map(|i| f.jet(&[], top * i as f64 / 4000.0, 0).value().norm())
            .fold(f64::INFINITY, f64::min);
        f
    }
}

impl RadialFactor for QuotientFactor {
    fn jet(&self, _omega: &[f64], r: f64, order: usize) -> Jet<Complex64> {
        let x = Jet::linear(Complex64::new(r, 0.0), Complex64::new(1.0, 0.0), order);
        let t = x.mul(&x);
        let mut acc = Jet::constant(Complex64::new(0.0, 0.0), order);
        for &c in self.q.iter().rev() {
            acc = acc.mul(&t).add(&Jet::constant(c, order));
        }
        for (&rj, &qj) in self.roots.iter().zip(&self.mults) {
            let f = x.add(&Jet::constant(Complex64::new(rj, 0.0), order));
            acc = acc.mul(&f.powi(qj as i32));
        }
        acc
    }
    fn lower_bound(&self) -> f64 {
        self.lower
    }
    fn growth_degree(&self) -> u32 {
        2 * (self.q.len() as u32 - 1) + self.mults.iter().sum::<u32>()
    }
}

/// p(rω) = g(rω) Π_j (r - r_j)^{q_j}.
#[derive(Debug, Clone)]
pub struct SymbolSpec {
    pub roots: Vec<f64>,
    pub mults: Vec<u32>,
    pub g: Arc<dyn RadialFactor>,
}

impl SymbolSpec {
    pub fn new(roots: Vec<f64>, mults: Vec<u32>, g: Arc<dyn RadialFactor>) -> Result<Self> {
        if roots.is_empty() || roots.len() != mults.len() {
            return Err(Error::Domain("need one multiplicity per root and at least one root".into()));
        }
        if roots.iter().any(|&r| !(r > 0.0) || !r.is_finite()) {
            return Err(Error::Domain("roots must be positive and finite".into()));
        }
        if roots.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::Domain("roots must be strictly increasing".into()));
        }
        if mults.iter().any(|&q| q == 0) {
            return Err(Error::Domain("multiplicities must be at least 1".into()));
        }
        if !(g.lower_bound() > 0.0) {
            return Err(Error::Domain("g must be bounded away from zero".into()));
        }
        Ok(Self { roots, mults, g })
    }

    /// The Helmholtz symbol k² - r² = -(r + k)(r - k).
    pub fn helmholtz(k: f64) -> Result<Self> {
        Self::new(vec![k], vec![1], Arc::new(HelmholtzFactor { k }))
    }

    pub fn max_mult(&self) -> u32 {
        *self.mults.iter().max().unwrap()
    }

    /// Jet of r ↦ p(rω).
    pub fn jet(&self, omega: &[f64], r: f64, order: usize) -> Jet<Complex64> {
        self.g.jet(omega, r, order).mul(&self.root_product_jet(r, order))
    }

    /// Jet of r ↦ Π_j (r - r_j)^{q_j}.
    pub fn root_product_jet(&self, r: f64, order: usize) -> Jet<Complex64> {
        let mut acc = Jet::constant(Complex64::new(1.0, 0.0), order);
        for (&rj, &qj) in self.roots.iter().zip(&self.mults) {
            let f = Jet::linear(Complex64::new(r - rj, 0.0), Complex64::new(1.0, 0.0), order);
            acc = acc.mul(&f.powi(qj as i32));
        }
        acc
    }
}

/// Constants c_{jk} with Π_j (r - r_j)^{-q_j} = Σ_{j,k} c_{jk} (r - r_j)^{-k}.
#[derive(Debug, Clone, PartialEq)]
pub struct PartialFractions {
    pub roots: Vec<f64>,
    /// `c[j][k - 1]` for k = 1..=q_j.
    pub c: Vec<Vec<f64>>,
    /// Largest reconstruction error over the probe set, relative to the sum
    /// of absolute term values (the scale rounding errors are measured on).
    pub residual: f64,
}

impl PartialFractions {
    pub fn coefficient(&self, j: usize, k: usize) -> f64 {
        self.c[j][k - 1]
    }

    pub fn eval(&self, r: f64) -> f64 {
        self.eval_with_scale(r).0
    }

    /// The sum and the sum of absolute values of its terms.
    pub fn eval_with_scale(&self, r: f64) -> (f64, f64) {
        let mut s = 0.0;
        let mut a = 0.0;
        for (j, row) in self.c.iter().enumerate() {
            for (i, &c) in row.iter().enumerate() {
                let t = c * (r - self.roots[j]).powi(-(i as i32 + 1));
                s += t;
                a += t.abs();
            }
        }
        (s, a)
    }
}

fn product_inverse(roots: &[f64], mults: &[u32], r: f64) -> f64 {
    roots
        .iter()
        .zip(mults)
        .map(|(&rj, &q)| (r - rj).powi(-(q as i32)))
        .product()
}

pub fn partial_fractions(spec: &SymbolSpec) -> Result<PartialFractions> {
    let roots = &spec.roots;
    let mults = &spec.mults;
    let scale = roots.iter().cloned().fold(0.0, f64::max);
    for w in roots.windows(2) {
        if w[1] - w[0] < 1e-8 * scale {
            return Err(Error::IllConditioned(format!(
                "roots {} and {} are closer than 1e-8 relative",
                w[0], w[1]
            )));
        }
    }
    let mut c = Vec::with_capacity(roots.len());
    for (j, (&rj, &qj)) in roots.iter().zip(mults).enumerate() {
        let order = qj as usize - 1;
        // Taylor jet at r_j of Π_{l≠j} (r - r_l)^{-q_l}
        let mut h = Jet::constant(1.0, order);
        for (l, (&rl, &ql)) in roots.iter().zip(mults).enumerate() {
            if l != j {
                h = h.mul(&Jet::linear(rj - rl, 1.0, order).powi(-(ql as i32)));
            }
        }
        // c_{j, q_j - s} is the s-th Taylor coefficient
        let row = (1..=qj as usize).map(|k| h.c[qj as usize - k]).collect();
        c.push(row);
    }
    let mut pf = PartialFractions {
        roots: roots.clone(),
        c,
        residual: 0.0,
    };
    let top = 2.0 * scale + 1.0;
    let golden = 0.618_033_988_749_894_9;
    let mut worst: f64 = 0.0;
    let mut i = 0;
    let mut used = 0;
    while used < 100 {
        i += 1;
        let r = top * ((i as f64 * golden) % 1.0);
        let near = roots.iter().any(|&rj| (r - rj).abs() < 1e-3 * scale);
        if near {
            continue;
        }
        used += 1;
        let want = product_inverse(roots, mults, r);
        let (got, scale) = pf.eval_with_scale(r);
        worst = worst.max((got - want).abs() / scale);
    }
    pf.residual = worst;
    if worst > 1e-10 {
        return Err(Error::IllConditioned(format!(
            "partial-fraction reconstruction residual {worst:e}"
        )));
    }
    Ok(pf)
}

fn binomial(n: usize, k: usize) -> f64 {
    (0..k).fold(1.0, |a, i| a * (n - i) as f64 / (i + 1) as f64)
}

fn check_spd(a: &DMatrix<f64>) -> Result<()> {
    if !a.is_square() {
        return Err(Error::Domain("A must be square".into()));
    }
    let n = a.nrows();
    for i in 0..n {
        for j in 0..i {
            if (a[(i, j)] - a[(j, i)]).abs() > 1e-12 * (a[(i, j)].abs() + a[(j, i)].abs() + 1.0) {
                return Err(Error::Domain("A must be symmetric".into()));
            }
        }
    }
    if a.clone().cholesky().is_none() {
        return Err(Error::Domain("A must be positive definite".into()));
    }
    Ok(())
}

/// The point ξ = Φ(r, ω) = r Q Λ^{-1/2} ω - A⁻¹b/2 with A = QΛQᵀ, at which
/// ξ·Aξ + b·ξ + c equals r² - b·A⁻¹b/4 + c.
pub fn pullback_point(a: &DMatrix<f64>, b: &[f64], r: f64, omega: &[f64]) -> Result<Vec<f64>> {
    check_spd(a)?;
    let eig = a.clone().symmetric_eigen();
    let w = DVector::from_iterator(
        omega.len(),
        omega
            .iter()
            .zip(eig.eigenvalues.iter())
            .map(|(&o, &l)| r * o / l.sqrt()),
    );
    let shift = a.clone().cholesky().unwrap().solve(&DVector::from_column_slice(b));
    let xi = &eig.eigenvectors * w - shift * 0.5;
    Ok(xi.iter().cloned().collect())
}

/// Roots of Σ p_i t^i (lowest degree first) as eigenvalues of the companion matrix.
pub fn polynomial_roots(p: &[Complex64]) -> Vec<Complex64> {
    let deg = p.len() - 1;
    if deg == 0 {
        return Vec::new();
    }
    let lead = p[deg];
    let mut m = DMatrix::<Complex64>::zeros(deg, deg);
    for i in 1..deg {
        m[(i, i - 1)] = Complex64::new(1.0, 0.0);
    }
    for i in 0..deg {
        m[(i, deg - 1)] = -p[i] / lead;
    }
    let roots: Vec<Complex64> = match m.clone().schur().eigenvalues() {
        Some(v) => v.iter().cloned().collect(),
        None => Vec::new(),
    };
    roots
}

fn horner(p: &[Complex64], t: Complex64) -> Complex64 {
    p.iter().rev().fold(Complex64::new(0.0, 0.0), |a, &c| a * t + c)
}

fn deflate(p: &[Complex64], root: Complex64) -> Vec<Complex64> {
    let deg = p.len() - 1;
    let mut out = vec![Complex64::new(0.0, 0.0); deg];
    let mut carry = Complex64::new(0.0, 0.0);
    for i in (0..deg).rev() {
        carry = p[i + 1] + carry * root;
        out[i] = carry;
    }
    out
}

/// Relative distance within which companion eigenvalues count as one root.
pub const CLUSTER_TOL: f64 = 1e-5;

/// Reduces p(ξ) = Σ_j c_j (ξ·Aξ + b·ξ + c)^j to the radial form of a
/// [`SymbolSpec`] through the pullback ξ = Φ(r, ω).
pub fn reduce_quadratic_symbol(
    a: &DMatrix<f64>,
    b: &[f64],
    c: Complex64,
    coeffs: &[Complex64],
) -> Result<SymbolSpec> {
    check_spd(a)?;
    if b.len() != a.nrows() {
        return Err(Error::Domain("b must match the dimension of A".into()));
    }
    let ainv_b = a.clone().cholesky().unwrap().solve(&DVector::from_column_slice(b));
    let bab: f64 = b.iter().zip(ainv_b.iter()).map(|(x, y)| x * y).sum();
    let s0 = Complex64::new(0.25 * bab, 0.0) - c;

    // Σ_j c_j (t - s0)^j expanded in t
    let mut poly = vec![Complex64::new(0.0, 0.0); coeffs.len().max(1)];
    for (j, &cj) in coeffs.iter().enumerate() {
        for i in 0..=j {
            poly[i] += cj * binomial(j, i) * (-s0).powu((j - i) as u32);
        }
    }
    let big = poly.iter().map(|v| v.norm()).fold(0.0, f64::max);
    while poly.len() > 1 && poly.last().unwrap().norm() <= 1e-14 * big {
        poly.pop();
    }
    if poly.len() < 2 {
        return Err(Error::Rejected("symbol is constant in r²; no positive root".into()));
    }

    let mut raw = polynomial_roots(&poly);
    raw.sort_by(|x, y| x.re.partial_cmp(&y.re).unwrap().then(x.im.partial_cmp(&y.im).unwrap()));
    let mut clusters: Vec<Vec<Complex64>> = Vec::new();
    for z in raw {
        let scale = z.norm().max(1e-300);
        match clusters.iter_mut().find(|cl| {
            let centre = cl.iter().sum::<Complex64>() / cl.len() as f64;
            (centre - z).norm() <= CLUSTER_TOL * scale.max(centre.norm())
        }) {
            Some(cl) => cl.push(z),
            None => clusters.push(vec![z]),
        }
    }

    let mut positive: Vec<(f64, u32)> = Vec::new();
    let mut rest = poly.clone();
    for cl in &clusters {
        let mut t = cl.iter().sum::<Complex64>() / cl.len() as f64;
        if cl.len() == 1 {
            for _ in 0..3 {
                let dp: Vec<Complex64> = (1..poly.len()).map(|i| poly[i] * i as f64).collect();
                let d = horner(&dp, t);
                if d.norm() == 0.0 {
                    break;
                }
                t -= horner(&poly, t) / d;
            }
        }
        if t.re > 0.0 && t.im.abs() <= 1e-8 * t.norm() {
            let t_real = Complex64::new(t.re, 0.0);
            for _ in 0..cl.len() {
                rest = deflate(&rest, t_real);
            }
            positive.push((t.re.sqrt(), cl.len() as u32));
        }
    }
    if positive.is_empty() {
        return Err(Error::Rejected(format!(
            "no positive real root among {} roots in r² (shift {s0})",
            clusters.iter().map(|c| c.len()).sum::<usize>()
        )));
    }
    positive.sort_by(|x, y| x.0.partial_cmp(&y.0).unwrap());
    let roots: Vec<f64> = positive.iter().map(|p| p.0).collect();
    let mults: Vec<u32> = positive.iter().map(|p| p.1).collect();
    let g = QuotientFactor::new(rest, roots.clone(), mults.clone());
    if !(g.lower_bound() > 0.0) {
        return Err(Error::Rejected("remaining factor vanishes on the real axis".into()));
    }
    SymbolSpec::new(roots, mults, Arc::new(g))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BoundMode {
    /// Full inhomogeneous bound with tempered order d.
    Inhomogeneous,
    /// Particular-solution bound without the d terms.
    Particular,
    /// Bound for solutions of Pu = 0.
    Homogeneous,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundParams {
    pub radius: f64,
    pub d: u32,
    pub mode: BoundMode,
    pub c_prime: f64,
    pub c_rho: f64,
}

impl BoundParams {
    pub fn new(radius: f64, d: u32, mode: BoundMode) -> Self {
        Self {
            radius,
            d,
            mode,
            c_prime: 0.0,
            c_rho: 1.0,
        }
    }
}

fn pow_abs(a: f64, e: u32) -> f64 {
    if e == 0 {
        1.0
    } else {
        a.powi(e as i32)
    }
}

/// Multipliers of |J_m| and |J_{m+1}| for one root.
pub fn bound_factors(mode: BoundMode, m: i32, q: u32, d: u32) -> (f64, f64) {
    let a = m.unsigned_abs() as f64;
    match mode {
        BoundMode::Inhomogeneous => {
            let f1 = 1f64.max(pow_abs(a, q)).max(pow_abs(a, d));
            let mut f2 = 1f64.max(pow_abs(a, q - 1));
            if d >= 1 {
                f2 = f2.max(pow_abs(a, d - 1));
            }
            (f1, f2)
        }
        BoundMode::Particular => (1f64.max(pow_abs(a, q)), 1f64.max(pow_abs(a, q - 1))),
        BoundMode::Homogeneous => {
            let f2 = if d >= 1 { 1f64.max(pow_abs(a, d - 1)) } else { 0.0 };
            (1f64.max(pow_abs(a, d)), f2)
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct BoundCurve {
    pub ms: Vec<i32>,
    pub values: Vec<f64>,
}

/// Bound curve m ↦ c' + c_ϱ Σ_j (f1 |J_m(R r_j)| + f2 |J_{m+1}(R r_j)|), using |m|.
pub fn bound_curve(spec: &SymbolSpec, params: &BoundParams, m_lo: i32, m_hi: i32) -> Result<BoundCurve> {
    if m_lo > m_hi {
        return Err(Error::Precondition("empty m range".into()));
    }
    if !(params.radius > 0.0) {
        return Err(Error::Domain("radius must be positive".into()));
    }
    let top = m_lo.unsigned_abs().max(m_hi.unsigned_abs()) + 1;
    let tables: Vec<Vec<f64>> = spec
        .roots
        .iter()
        .map(|&rj| bessel_j_seq(top, params.radius * rj))
        .collect::<Result<_>>()?;
    let ms: Vec<i32> = (m_lo..=m_hi).collect();
    let values = ms
        .iter()
        .map(|&m| {
            let a = m.unsigned_abs() as usize;
            let s: f64 = spec
                .mults
                .iter()
                .zip(&tables)
                .map(|(&q, t)| {
                    let (f1, f2) = bound_factors(params.mode, m, q, params.d);
                    f1 * t[a].abs() + f2 * t[a + 1].abs()
                })
                .sum();
            params.c_prime + params.c_rho * s
        })
        .collect();
    Ok(BoundCurve { ms, values })
}

/// Tempered order d(n) + ν of (∂_j^ν Φ_n)(· - y).
pub fn helmholtz_bound_exponents(n: u32, nu: u32) -> Result<u32> {
    if n == 0 {
        return Err(Error::Domain("dimension must be at least 1".into()));
    }
    let d = if n % 2 == 1 {
        (n + 3) / 2
    } else {
        match n {
            2 => 2,
            4 => 3,
            _ => 4,
        }
    };
    Ok(d + nu)
}
