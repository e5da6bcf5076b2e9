//! Bessel J and Y for integer and half-integer orders, Hankel functions of
//! order 0 and 1, exact derivatives of J_m and first positive zeros.

use num_complex::Complex64;
use std::f64::consts::{FRAC_2_PI, PI};

use crate::error::{Error, Result};

/// Largest |m| accepted by the integer-order evaluators.
pub const ORDER_CAP: u32 = 1024;
/// Largest derivative order accepted by [`bessel_j_deriv`].
pub const DERIV_CAP: usize = 16;
/// Magnitudes below this are reported as zero with the deep-decay flag set.
pub const DEEP_DECAY: f64 = 1e-280;

const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;
const ASYMPTOTIC_FROM: f64 = 25.0;
const RESCALE: f64 = 1e250;

/// Order of a cylinder function as a multiple of one half.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BesselOrder {
    pub twice_order: i32,
}

impl BesselOrder {
    pub fn integer(m: i32) -> Self {
        Self { twice_order: 2 * m }
    }

    /// Order `m + 1/2`.
    pub fn half_integer(m: i32) -> Self {
        Self {
            twice_order: 2 * m + 1,
        }
    }

    pub fn value(self) -> f64 {
        self.twice_order as f64 / 2.0
    }

    pub fn is_integer(self) -> bool {
        self.twice_order % 2 == 0
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ZeroKind {
    J,
    Y,
}

/// A value of J_m together with a flag marking underflow to zero.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Flagged {
    pub value: f64,
    pub deep_decay: bool,
}

fn check_arg(x: f64) -> Result<()> {
    if !x.is_finite() || x < 0.0 {
        return Err(Error::Domain(format!("Bessel argument must be finite and >= 0, got {x}")));
    }
    Ok(())
}

fn check_order(m: i64) -> Result<()> {
    if m.unsigned_abs() > ORDER_CAP as u64 {
        return Err(Error::Capability(format!("order {m} exceeds cap {ORDER_CAP}")));
    }
    Ok(())
}

fn ln_factorial(m: u32) -> f64 {
    (2..=m).map(|i| (i as f64).ln()).sum()
}

fn use_series(m: u32, x: f64) -> bool {
    0.25 * x * x <= (m + 1) as f64
}

/// Ascending series; every term is smaller than the previous one in the
/// region selected by [`use_series`], so there is no cancellation.
fn j_series(m: u32, x: f64) -> Flagged {
    let log_pref = m as f64 * (0.5 * x).ln() - ln_factorial(m);
    if log_pref < DEEP_DECAY.ln() - 2.0 {
        return Flagged {
            value: 0.0,
            deep_decay: true,
        };
    }
    let q = -0.25 * x * x;
    let mut term = 1.0;
    let mut sum = 1.0;
    for k in 1..400 {
        term *= q / (k as f64 * (m + k) as f64);
        sum += term;
        if term.abs() <= 1e-17 * sum.abs() {
            break;
        }
    }
    let value = log_pref.exp() * sum;
    if value.abs() < DEEP_DECAY {
        Flagged {
            value: 0.0,
            deep_decay: true,
        }
    } else {
        Flagged {
            value,
            deep_decay: false,
        }
    }
}

fn miller_start(top: u32, x: f64) -> usize {
    let n = (top as f64).max(x);
    let mut s = (n + 30.0 + 6.0 * n.sqrt()).ceil() as usize;
    if s % 2 == 1 {
        s += 1;
    }
    s
}

/// Backward recurrence normalized by J_0 + 2 Σ J_{2k} = 1. Returns J_0..=J_N
/// for an N at least `top`; x must be positive.
fn miller(top: u32, x: f64) -> Vec<f64> {
    let n = miller_start(top, x);
    let mut v = vec![0.0; n + 2];
    v[n] = 1e-30;
    let mut sum = 0.0;
    if n % 2 == 0 {
        sum += 2.0 * v[n];
    }
    for k in (1..=n).rev() {
        let prev = 2.0 * k as f64 / x * v[k] - v[k + 1];
        v[k - 1] = prev;
        if k - 1 > 0 && (k - 1) % 2 == 0 {
            sum += 2.0 * prev;
        }
        if prev.abs() > RESCALE {
            let s = 1.0 / RESCALE;
            for t in v.iter_mut().skip(k - 1) {
                *t *= s;
            }
            sum *= s;
        }
    }
    sum += v[0];
    v.truncate(n + 1);
    for t in v.iter_mut() {
        *t /= sum;
        if t.abs() < DEEP_DECAY {
            *t = 0.0;
        }
    }
    v
}

fn j_nonneg(mu: u32, x: f64) -> Flagged {
    if x == 0.0 {
        Flagged {
            value: if mu == 0 { 1.0 } else { 0.0 },
            deep_decay: false,
        }
    } else if use_series(mu, x) {
        j_series(mu, x)
    } else if mu <= 1 && x > ASYMPTOTIC_FROM {
        Flagged {
            value: hankel_asymptotic(mu, x).0,
            deep_decay: false,
        }
    } else {
        let v = miller(mu, x)[mu as usize];
        Flagged {
            value: v,
            deep_decay: v == 0.0,
        }
    }
}

/// J_m(x) with the deep-decay flag.
pub fn bessel_j_flagged(m: i32, x: f64) -> Result<Flagged> {
    check_arg(x)?;
    check_order(m as i64)?;
    let mu = m.unsigned_abs();
    let mut f = j_nonneg(mu, x);
    if m < 0 && mu % 2 == 1 {
        f.value = -f.value;
    }
    Ok(f)
}

/// Bessel function of the first kind J_m(x), x >= 0.
pub fn bessel_j(m: i32, x: f64) -> Result<f64> {
    bessel_j_flagged(m, x).map(|f| f.value)
}

/// J_0(x), …, J_{m_max}(x) from a single backward sweep.
pub fn bessel_j_seq(m_max: u32, x: f64) -> Result<Vec<f64>> {
    check_arg(x)?;
    check_order(m_max as i64)?;
    if x == 0.0 {
        let mut v = vec![0.0; m_max as usize + 1];
        v[0] = 1.0;
        return Ok(v);
    }
    let mut out = miller(m_max, x);
    out.truncate(m_max as usize + 1);
    for (m, slot) in out.iter_mut().enumerate() {
        if use_series(m as u32, x) {
            *slot = j_series(m as u32, x).value;
        }
    }
    Ok(out)
}

/// Hankel asymptotic expansion for orders 0 and 1, returning (J, Y).
fn hankel_asymptotic(nu: u32, x: f64) -> (f64, f64) {
    let mu = 4.0 * (nu * nu) as f64;
    let mut p = 1.0;
    let mut q = 0.0;
    let mut a = 1.0;
    let mut last = f64::INFINITY;
    for k in 1..60 {
        let odd = (2 * k - 1) as f64;
        a *= (mu - odd * odd) / (k as f64 * 8.0 * x);
        if a.abs() > last {
            break;
        }
        last = a.abs();
        let sign = if (k / 2) % 2 == 0 { 1.0 } else { -1.0 };
        if k % 2 == 0 {
            p += sign * a;
        } else {
            let sign = if ((k - 1) / 2) % 2 == 0 { 1.0 } else { -1.0 };
            q += sign * a;
        }
        if a.abs() < 1e-17 {
            break;
        }
    }
    let chi = x - (0.5 * nu as f64 + 0.25) * PI;
    let amp = (FRAC_2_PI / x).sqrt();
    let (s, c) = chi.sin_cos();
    (amp * (p * c - q * s), amp * (p * s + q * c))
}

/// (J_0, J_1, Y_0, Y_1) at x > 0.
fn jy01(x: f64) -> (f64, f64, f64, f64) {
    if x > ASYMPTOTIC_FROM {
        let (j0, y0) = hankel_asymptotic(0, x);
        let (j1, y1) = hankel_asymptotic(1, x);
        return (j0, j1, y0, y1);
    }
    let j = miller(1, x);
    let n = j.len() - 1;
    let lg = (0.5 * x).ln() + EULER_GAMMA;
    let mut s0 = 0.0;
    let mut s1 = 0.0;
    let mut k = 1;
    while 2 * k < n {
        let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
        s0 += sign * j[2 * k] / k as f64;
        s1 += sign * (j[2 * k - 1] - j[2 * k + 1]) / k as f64;
        k += 1;
    }
    let y0 = FRAC_2_PI * (lg * j[0] - 2.0 * s0);
    let y1 = FRAC_2_PI * (lg * j[1] - j[0] / x + s1);
    // J from the same branch bessel_j takes, so H = J + iY holds exactly
    let j0 = if use_series(0, x) { j_series(0, x).value } else { j[0] };
    let j1 = if use_series(1, x) { j_series(1, x).value } else { j[1] };
    (j0, j1, y0, y1)
}

/// Neumann function Y_m(x), x > 0, by forward recurrence from Y_0 and Y_1.
pub fn bessel_y(m: i32, x: f64) -> Result<f64> {
    if !(x > 0.0) || !x.is_finite() {
        return Err(Error::Domain(format!("Neumann argument must be positive, got {x}")));
    }
    check_order(m as i64)?;
    let mu = m.unsigned_abs();
    let (_, _, y0, y1) = jy01(x);
    let v = if mu == 0 {
        y0
    } else {
        let (mut a, mut b) = (y0, y1);
        for k in 1..mu {
            let c = 2.0 * k as f64 / x * b - a;
            a = b;
            b = c;
            if !b.is_finite() {
                break;
            }
        }
        b
    };
    Ok(if m < 0 && mu % 2 == 1 { -v } else { v })
}

/// Hankel function of the first kind H_m^(1)(x) = J_m(x) + i Y_m(x), m ∈ {0, 1}.
pub fn hankel1(m: u32, x: f64) -> Result<Complex64> {
    if m > 1 {
        return Err(Error::Capability(format!("hankel1 supports orders 0 and 1, got {m}")));
    }
    if !(x > 0.0) || !x.is_finite() {
        return Err(Error::Domain(format!("Hankel argument must be positive, got {x}")));
    }
    let (h0, h1) = hankel01(x);
    Ok(if m == 0 { h0 } else { h1 })
}

/// Both H_0^(1)(x) and H_1^(1)(x) from one evaluation; x > 0 is assumed.
pub fn hankel01(x: f64) -> (Complex64, Complex64) {
    let (j0, j1, y0, y1) = jy01(x);
    (Complex64::new(j0, y0), Complex64::new(j1, y1))
}

/// Representation ∂_r^j J_m(r) = r^{-j} [P_j(m, r) J_m(r) + Q_j(m, r) J_{m+1}(r)].
///
/// `p[a][b]` is the coefficient of m^a r^b in P_j, likewise for `q`.
#[derive(Debug, Clone, PartialEq)]
pub struct DerivRep {
    pub order: usize,
    pub p: Vec<Vec<f64>>,
    pub q: Vec<Vec<f64>>,
}

impl DerivRep {
    pub fn new(order: usize) -> Result<Self> {
        if order > DERIV_CAP {
            return Err(Error::Capability(format!(
                "derivative order {order} exceeds cap {DERIV_CAP}"
            )));
        }
        let size = order + 2;
        let mut p = vec![vec![0.0; size]; size];
        let mut q = vec![vec![0.0; size]; size];
        p[0][0] = 1.0;
        for j in 0..order {
            // P' = (m - j)P + r ∂_r P + rQ,  Q' = -(m + 1 + j)Q + r ∂_r Q - rP
            let mut np = vec![vec![0.0; size]; size];
            let mut nq = vec![vec![0.0; size]; size];
            for a in 0..size {
                for b in 0..size {
                    let pc = p[a][b];
                    let qc = q[a][b];
                    if pc != 0.0 {
                        np[a + 1][b] += pc;
                        np[a][b] += (b as f64 - j as f64) * pc;
                        nq[a][b + 1] -= pc;
                    }
                    if qc != 0.0 {
                        nq[a + 1][b] -= qc;
                        nq[a][b] += (b as f64 - 1.0 - j as f64) * qc;
                        np[a][b + 1] += qc;
                    }
                }
            }
            p = np;
            q = nq;
        }
        let rep = Self { order, p, q };
        let (pm, pr) = rep.degrees(&rep.p);
        let (qm, qr) = rep.degrees(&rep.q);
        assert!(pm <= order && pr <= order, "J_m part degree bookkeeping violated");
        assert!(
            order == 0 || (qm + 1 <= order && qr <= order),
            "J_(m+1) part degree bookkeeping violated"
        );
        Ok(rep)
    }

    fn degrees(&self, grid: &[Vec<f64>]) -> (usize, usize) {
        let mut dm = 0;
        let mut dr = 0;
        for (a, row) in grid.iter().enumerate() {
            for (b, &c) in row.iter().enumerate() {
                if c != 0.0 {
                    dm = dm.max(a);
                    dr = dr.max(b);
                }
            }
        }
        (dm, dr)
    }

    /// Degrees in m of the J_m and J_{m+1} parts.
    pub fn m_degrees(&self) -> (usize, usize) {
        (self.degrees(&self.p).0, self.degrees(&self.q).0)
    }

    /// Degrees in r of the J_m and J_{m+1} parts.
    pub fn r_degrees(&self) -> (usize, usize) {
        (self.degrees(&self.p).1, self.degrees(&self.q).1)
    }

    fn eval_grid(grid: &[Vec<f64>], m: f64, r: f64) -> f64 {
        let mut acc = 0.0;
        for row in grid.iter().rev() {
            let mut inner = 0.0;
            for &c in row.iter().rev() {
                inner = inner * r + c;
            }
            acc = acc * m + inner;
        }
        acc
    }

    /// (P_j(m, r), Q_j(m, r)).
    pub fn eval(&self, m: f64, r: f64) -> (f64, f64) {
        (Self::eval_grid(&self.p, m, r), Self::eval_grid(&self.q, m, r))
    }
}

/// ∂_x^q J_m(x) from the exact two-term representation.
pub fn bessel_j_deriv(m: i32, q: usize, x: f64) -> Result<f64> {
    if q == 0 {
        return bessel_j(m, x);
    }
    if !(x > 0.0) {
        return Err(Error::Domain(format!("derivative needs x > 0, got {x}")));
    }
    let rep = DerivRep::new(q)?;
    let mu = m.unsigned_abs() as i32;
    let jm = bessel_j(mu, x)?;
    let jm1 = bessel_j(mu + 1, x)?;
    let (p, qq) = rep.eval(mu as f64, x);
    let v = (p * jm + qq * jm1) / x.powi(q as i32);
    Ok(if m < 0 && mu % 2 == 1 { -v } else { v })
}

/// Outcome of an empirical search for the derivative-bound constant.
#[derive(Debug, Clone, PartialEq)]
pub struct DerivativeBoundReport {
    pub m: i32,
    pub j: usize,
    /// Smallest c satisfying the inequality on every conclusive grid point.
    pub constant: f64,
    pub finite: bool,
    /// Grid points where the right-hand side underflowed while the left did not.
    pub inconclusive: Vec<f64>,
}

/// Smallest c with |∂^j J_m(r)| <= c (|m|^j |J_m(r)| + |m|^{j-1} |J_{m+1}(r)|) on `grid`.
pub fn derivative_bound_constant(m: i32, j: usize, grid: &[f64]) -> Result<DerivativeBoundReport> {
    if grid.is_empty() {
        return Err(Error::Precondition("grid must be nonempty".into()));
    }
    if !(1..=DERIV_CAP).contains(&j) {
        return Err(Error::Capability(format!("j must lie in 1..={DERIV_CAP}")));
    }
    let mabs = m.unsigned_abs() as f64;
    let pow = |e: usize| if e == 0 { 1.0 } else { mabs.powi(e as i32) };
    let mut c: f64 = 0.0;
    let mut finite = true;
    let mut inconclusive = Vec::new();
    for &r in grid {
        if !(r > 0.0) {
            return Err(Error::Precondition(format!("grid points must be positive, got {r}")));
        }
        let lhs = bessel_j_deriv(m, j, r)?.abs();
        let jm = bessel_j_flagged(m.abs(), r)?;
        let jm1 = bessel_j_flagged(m.abs() + 1, r)?;
        let rhs = pow(j) * jm.value.abs() + pow(j - 1) * jm1.value.abs();
        if rhs == 0.0 {
            if lhs == 0.0 {
                continue;
            }
            if jm.deep_decay && jm1.deep_decay {
                inconclusive.push(r);
            } else {
                finite = false;
                c = f64::INFINITY;
            }
            continue;
        }
        c = c.max(lhs / rhs);
    }
    Ok(DerivativeBoundReport {
        m,
        j,
        constant: c,
        finite,
        inconclusive,
    })
}

/// Spherical Bessel j_n(x) by backward recurrence, x > 0.
fn spherical_j(n: u32, x: f64) -> f64 {
    let top = miller_start(n, x);
    let mut next = 0.0;
    let mut cur = 1e-30;
    let mut at_n = if top == n as usize { cur } else { 0.0 };
    let mut f1 = 0.0;
    for k in (1..=top).rev() {
        let prev = (2 * k + 1) as f64 / x * cur - next;
        next = cur;
        cur = prev;
        if k - 1 == n as usize {
            at_n = cur;
        }
        if k - 1 == 1 {
            f1 = cur;
        }
        if cur.abs() > RESCALE {
            let s = 1.0 / RESCALE;
            cur *= s;
            next *= s;
            at_n *= s;
            f1 *= s;
        }
    }
    let f0 = cur;
    let (s, c) = x.sin_cos();
    let j0 = s / x;
    let j1 = s / (x * x) - c / x;
    if j0.abs() >= j1.abs() {
        at_n * j0 / f0
    } else {
        at_n * j1 / f1
    }
}

/// Spherical Bessel y_n(x) by forward recurrence, x > 0.
fn spherical_y(n: u32, x: f64) -> f64 {
    let (s, c) = x.sin_cos();
    let y0 = -c / x;
    if n == 0 {
        return y0;
    }
    let mut a = y0;
    let mut b = -c / (x * x) - s / x;
    for k in 1..n {
        let nb = (2 * k + 1) as f64 / x * b - a;
        a = b;
        b = nb;
    }
    b
}

/// J or Y of a nonnegative integer or half-integer order at x > 0.
pub fn cylinder(kind: ZeroKind, order: BesselOrder, x: f64) -> Result<f64> {
    if order.twice_order < 0 {
        return Err(Error::Domain("order must be nonnegative".into()));
    }
    if order.is_integer() {
        let m = order.twice_order / 2;
        match kind {
            ZeroKind::J => bessel_j(m, x),
            ZeroKind::Y => bessel_y(m, x),
        }
    } else {
        if !(x > 0.0) {
            return Err(Error::Domain(format!("half-integer order needs x > 0, got {x}")));
        }
        check_order(order.twice_order as i64 / 2)?;
        let n = (order.twice_order / 2) as u32;
        let scale = (2.0 * x / PI).sqrt();
        Ok(scale
            * match kind {
                ZeroKind::J => spherical_j(n, x),
                ZeroKind::Y => spherical_y(n, x),
            })
    }
}

/// First positive zero j_{μ,1} or y_{μ,1}.
pub fn first_zero(kind: ZeroKind, order: BesselOrder) -> Result<f64> {
    if order.twice_order < 0 {
        return Err(Error::Domain("order must be nonnegative".into()));
    }
    let mu = order.value();
    let f = |x: f64| cylinder(kind, order, x);
    let next = BesselOrder {
        twice_order: order.twice_order + 2,
    };
    let df = |x: f64| -> Result<f64> { Ok(mu / x * f(x)? - cylinder(kind, next, x)?) };

    // Sign-bracketing scan on [order, order + 4 order^{1/3} + 4].
    let lo0 = mu.max(1e-6);
    let hi0 = mu + 4.0 * mu.cbrt() + 4.0;
    let steps = ((hi0 - lo0) / 0.02).ceil() as usize;
    let h = (hi0 - lo0) / steps as f64;
    let mut a = lo0;
    let mut fa = f(a)?;
    let mut bracket = None;
    for i in 1..=steps {
        let b = lo0 + h * i as f64;
        let fb = f(b)?;
        if fa == 0.0 {
            return Ok(a);
        }
        if fa.signum() != fb.signum() {
            bracket = Some((a, b, fa));
            break;
        }
        a = b;
        fa = fb;
    }
    let (mut a, mut b, mut fa) =
        bracket.ok_or_else(|| Error::Capability(format!("no sign change for order {mu}")))?;

    // Asymptotic seed, safeguarded Newton, bisection fallback.
    let c = mu.cbrt();
    let seed = match kind {
        ZeroKind::J if mu > 0.0 => mu + 1.855_757_1 * c + 1.033_150 / c,
        ZeroKind::Y if mu > 0.0 => mu + 0.931_576_8 * c + 0.260_351 / c,
        _ => 0.5 * (a + b),
    };
    let mut x = if seed > a && seed < b { seed } else { 0.5 * (a + b) };
    for _ in 0..200 {
        let fx = f(x)?;
        if fx == 0.0 {
            return Ok(x);
        }
        if fx.signum() == fa.signum() {
            a = x;
            fa = fx;
        } else {
            b = x;
        }
        let d = df(x)?;
        let mut nx = if d != 0.0 { x - fx / d } else { f64::NAN };
        if !(nx > a && nx < b) {
            nx = 0.5 * (a + b);
        }
        if (nx - x).abs() < 1e-15 * x.max(1.0) || (b - a) < 1e-14 * x.max(1.0) {
            return Ok(nx);
        }
        x = nx;
    }
    Ok(x)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn trivial_values() {
        assert_eq!(bessel_j(0, 0.0).unwrap(), 1.0);
        assert_eq!(bessel_j(3, 0.0).unwrap(), 0.0);
        assert!(bessel_j(2000, 1.0).is_err());
        assert!(bessel_y(0, 0.0).is_err());
        assert!(hankel1(2, 1.0).is_err());
    }

    #[test]
    fn j0_at_one_matches_power_series() {
        // 40-term alternating series, summed independently.
        let mut s = 0.0;
        let mut t = 1.0;
        for k in 0..40 {
            if k > 0 {
                t *= -0.25 / (k * k) as f64;
            }
            s += t;
        }
        assert_relative_eq!(s, 0.7651976865579666, max_relative = 1e-15);
        assert_relative_eq!(bessel_j(0, 1.0).unwrap(), s, max_relative = 1e-14);
    }

    #[test]
    fn y0_at_one() {
        assert_relative_eq!(bessel_y(0, 1.0).unwrap(), 0.0882569642156769, max_relative = 1e-12);
    }

    #[test]
    fn wronskian_at_two() {
        let w = bessel_j(1, 2.0).unwrap() * bessel_y(0, 2.0).unwrap()
            - bessel_j(0, 2.0).unwrap() * bessel_y(1, 2.0).unwrap();
        assert_relative_eq!(w, 1.0 / PI, max_relative = 1e-13);
    }

    #[test]
    fn deriv_rep_first_orders() {
        let r1 = DerivRep::new(1).unwrap();
        assert_eq!(r1.eval(3.0, 2.0), (3.0, -2.0));
        let r0 = DerivRep::new(0).unwrap();
        assert_eq!(r0.eval(3.0, 2.0), (1.0, 0.0));
        assert!(DerivRep::new(17).is_err());
    }

    #[test]
    fn deriv_zero_order() {
        for &x in &[0.5, 3.0, 17.0] {
            assert_relative_eq!(
                bessel_j_deriv(0, 1, x).unwrap(),
                -bessel_j(1, x).unwrap(),
                max_relative = 1e-13
            );
            assert_eq!(bessel_j_deriv(4, 0, x).unwrap(), bessel_j(4, x).unwrap());
        }
    }

    #[test]
    fn half_order_zero_is_pi() {
        let z = first_zero(ZeroKind::J, BesselOrder::half_integer(0)).unwrap();
        assert!((z - PI).abs() < 1e-12);
        let y = first_zero(ZeroKind::Y, BesselOrder::half_integer(0)).unwrap();
        assert!((y - PI / 2.0).abs() < 1e-12);
    }

    #[test]
    fn integer_first_zeros() {
        let j = first_zero(ZeroKind::J, BesselOrder::integer(0)).unwrap();
        assert!((j - 2.404825557695773).abs() < 1e-12);
        let y = first_zero(ZeroKind::Y, BesselOrder::integer(0)).unwrap();
        assert!((y - 0.8935769662791675).abs() < 1e-12);
        assert!(bessel_y(0, y).unwrap().abs() < 1e-10);
    }

    #[test]
    fn derivative_bound_m0_j1_is_one() {
        let grid: Vec<f64> = (1..200).map(|i| 0.1 * i as f64).collect();
        let rep = derivative_bound_constant(0, 1, &grid).unwrap();
        assert!(rep.finite);
        assert_relative_eq!(rep.constant, 1.0, max_relative = 1e-12);
    }
}
