//! Truncated Taylor series ("jets") used to carry exact derivatives through
//! products, quotients and exponentials.

use num_complex::Complex64;
use std::fmt::Debug;
use std::ops::{Add, AddAssign, Div, Mul, Neg, Sub};

pub trait Scalar:
    Copy
    + Debug
    + PartialEq
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
    + AddAssign
    + Send
    + Sync
{
    fn from_f64(x: f64) -> Self;
    fn exp(self) -> Self;
    fn modulus(self) -> f64;
    fn to_complex(self) -> Complex64;
}

impl Scalar for f64 {
    fn from_f64(x: f64) -> Self {
        x
    }
    fn exp(self) -> Self {
        f64::exp(self)
    }
    fn modulus(self) -> f64 {
        self.abs()
    }
    fn to_complex(self) -> Complex64 {
        Complex64::new(self, 0.0)
    }
}

impl Scalar for Complex64 {
    fn from_f64(x: f64) -> Self {
        Complex64::new(x, 0.0)
    }
    fn exp(self) -> Self {
        Complex64::exp(self)
    }
    fn modulus(self) -> f64 {
        self.norm()
    }
    fn to_complex(self) -> Complex64 {
        self
    }
}

/// Taylor coefficients c_i = f^(i)(x0) / i! for i = 0..=order.
#[derive(Debug, Clone, PartialEq)]
pub struct Jet<T: Scalar> {
    pub c: Vec<T>,
}

impl<T: Scalar> Jet<T> {
    pub fn constant(v: T, order: usize) -> Self {
        let mut c = vec![T::from_f64(0.0); order + 1];
        c[0] = v;
        Self { c }
    }

    /// The identity map x ↦ x expanded at `x0`, scaled by `slope`.
    pub fn linear(x0: T, slope: T, order: usize) -> Self {
        let mut j = Self::constant(x0, order);
        if order >= 1 {
            j.c[1] = slope;
        }
        j
    }

    pub fn order(&self) -> usize {
        self.c.len() - 1
    }

    pub fn value(&self) -> T {
        self.c[0]
    }

    /// The q-th derivative at the expansion point.
    pub fn deriv(&self, q: usize) -> T {
        self.c[q] * T::from_f64(factorial(q))
    }

    pub fn scale(&self, s: T) -> Self {
        Self {
            c: self.c.iter().map(|&v| v * s).collect(),
        }
    }

    pub fn add(&self, o: &Self) -> Self {
        Self {
            c: self.c.iter().zip(&o.c).map(|(&a, &b)| a + b).collect(),
        }
    }

    pub fn sub(&self, o: &Self) -> Self {
        Self {
            c: self.c.iter().zip(&o.c).map(|(&a, &b)| a - b).collect(),
        }
    }

    pub fn mul(&self, o: &Self) -> Self {
        let n = self.c.len().min(o.c.len());
        let mut c = vec![T::from_f64(0.0); n];
        for i in 0..n {
            let a = self.c[i];
            for j in 0..n - i {
                c[i + j] += a * o.c[j];
            }
        }
        Self { c }
    }

    pub fn recip(&self) -> Self {
        let n = self.c.len();
        let inv = T::from_f64(1.0) / self.c[0];
        let mut b = vec![T::from_f64(0.0); n];
        b[0] = inv;
        for k in 1..n {
            let mut s = T::from_f64(0.0);
            for i in 1..=k {
                s += self.c[i] * b[k - i];
            }
            b[k] = -(s * inv);
        }
        Self { c: b }
    }

    pub fn div(&self, o: &Self) -> Self {
        self.mul(&o.recip())
    }

    pub fn exp(&self) -> Self {
        let n = self.c.len();
        let mut b = vec![T::from_f64(0.0); n];
        b[0] = self.c[0].exp();
        for k in 1..n {
            let mut s = T::from_f64(0.0);
            for i in 1..=k {
                s += T::from_f64(i as f64) * self.c[i] * b[k - i];
            }
            b[k] = s / T::from_f64(k as f64);
        }
        Self { c: b }
    }

    pub fn powi(&self, e: i32) -> Self {
        let base = if e < 0 { self.recip() } else { self.clone() };
        let mut out = Self::constant(T::from_f64(1.0), self.order());
        for _ in 0..e.unsigned_abs() {
            out = out.mul(&base);
        }
        out
    }

    /// Jet of the k-th derivative, of order `order() - k`.
    pub fn differentiate(&self, k: usize) -> Self {
        let n = self.c.len();
        if k >= n {
            return Self::constant(T::from_f64(0.0), 0);
        }
        let c = (0..n - k)
            .map(|i| self.c[i + k] * T::from_f64(falling(i + k, k)))
            .collect();
        Self { c }
    }

    /// Jet of x ↦ f(-x) at the mirrored point.
    pub fn reflect(&self) -> Self {
        let c = self
            .c
            .iter()
            .enumerate()
            .map(|(i, &v)| if i % 2 == 1 { -v } else { v })
            .collect();
        Self { c }
    }

    pub fn truncate(&self, order: usize) -> Self {
        Self {
            c: self.c[..=order.min(self.order())].to_vec(),
        }
    }

    /// Evaluates the Taylor polynomial at offset h from the expansion point.
    pub fn eval_offset(&self, h: f64) -> T {
        let mut acc = T::from_f64(0.0);
        for &v in self.c.iter().rev() {
            acc = acc * T::from_f64(h) + v;
        }
        acc
    }

    pub fn to_complex(&self) -> Jet<Complex64> {
        Jet {
            c: self.c.iter().map(|v| v.to_complex()).collect(),
        }
    }
}

pub fn factorial(n: usize) -> f64 {
    (1..=n).fold(1.0, |a, i| a * i as f64)
}

/// n (n-1) … (n-k+1)
pub fn falling(n: usize, k: usize) -> f64 {
    (0..k).fold(1.0, |a, i| a * (n - i) as f64)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn exp_of_square() {
        // e^{-x^2} at x0 = 0.7: compare derivatives with closed forms.
        let x0: f64 = 0.7;
        let x = Jet::linear(x0, 1.0, 4);
        let f = x.mul(&x).scale(-1.0).exp();
        let e = (-x0 * x0).exp();
        assert_relative_eq!(f.deriv(0), e, max_relative = 1e-15);
        assert_relative_eq!(f.deriv(1), -2.0 * x0 * e, max_relative = 1e-14);
        assert_relative_eq!(f.deriv(2), (4.0 * x0 * x0 - 2.0) * e, max_relative = 1e-13);
        assert_relative_eq!(
            f.deriv(3),
            (-8.0 * x0.powi(3) + 12.0 * x0) * e,
            max_relative = 1e-13
        );
    }

    #[test]
    fn recip_and_powers() {
        let x = Jet::linear(2.0, 1.0, 5);
        let inv = x.powi(-2);
        for q in 0..=5 {
            let expect = (-1f64).powi(q as i32) * factorial(q + 1) / 2f64.powi(q as i32 + 2);
            assert_relative_eq!(inv.deriv(q), expect, max_relative = 1e-13);
        }
        let one = x.mul(&x.recip());
        assert_relative_eq!(one.c[0], 1.0);
        assert!(one.c[1..].iter().all(|v| v.abs() < 1e-15));
    }

    #[test]
    fn differentiate_shifts() {
        let x = Jet::linear(1.0, 1.0, 6);
        let f = x.powi(5);
        let d2 = f.differentiate(2);
        assert_relative_eq!(d2.deriv(0), 20.0);
        assert_relative_eq!(d2.deriv(1), 60.0);
    }
}
