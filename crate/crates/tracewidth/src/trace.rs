//! Traces of fields on great circles and their Fourier coefficients.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;
use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::helmholtz::{volume_source_field_with, CellQuadrature, PointSource, RadialProfile, VolumeSource};

pub const MAX_SAMPLES: usize = 1 << 20;
pub const CONVERGENCE_TOL: f64 = 1e-8;

/// Circle {R(e_1 cos θ + e_2 sin θ)} sampled at M equispaced angles.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CircleSpec {
    pub radius: f64,
    pub e1: Vec<f64>,
    pub e2: Vec<f64>,
    pub samples: usize,
}

impl CircleSpec {
    pub fn new(radius: f64, e1: Vec<f64>, e2: Vec<f64>, samples: usize) -> Result<Self> {
        if !(radius > 0.0) {
            return Err(Error::Domain("circle radius must be positive".into()));
        }
        if e1.len() != e2.len() || e1.len() < 2 {
            return Err(Error::Domain("e_1 and e_2 must share a dimension ≥ 2".into()));
        }
        let dot = |a: &[f64], b: &[f64]| a.iter().zip(b).map(|(x, y)| x * y).sum::<f64>();
        if (dot(&e1, &e1) - 1.0).abs() > 1e-12 || (dot(&e2, &e2) - 1.0).abs() > 1e-12 || dot(&e1, &e2).abs() > 1e-12 {
            return Err(Error::Domain("e_1, e_2 must be orthonormal".into()));
        }
        if samples < 4 || samples % 2 == 1 {
            return Err(Error::Domain("sample count must be even and at least 4".into()));
        }
        Ok(Self {
            radius,
            e1,
            e2,
            samples,
        })
    }

    /// Circle in the plane of coordinate axes `a` and `b` (zero-based) of R^n.
    pub fn axes(n: usize, radius: f64, a: usize, b: usize, samples: usize) -> Result<Self> {
        if a >= n || b >= n || a == b {
            return Err(Error::Domain("axes must be distinct and inside R^n".into()));
        }
        let mut e1 = vec![0.0; n];
        let mut e2 = vec![0.0; n];
        e1[a] = 1.0;
        e2[b] = 1.0;
        Self::new(radius, e1, e2, samples)
    }

    pub fn dim(&self) -> usize {
        self.e1.len()
    }

    pub fn theta(&self, i: usize) -> f64 {
        2.0 * PI * i as f64 / self.samples as f64
    }

    pub fn point(&self, theta: f64) -> Vec<f64> {
        let (s, c) = theta.sin_cos();
        self.e1
            .iter()
            .zip(&self.e2)
            .map(|(a, b)| self.radius * (a * c + b * s))
            .collect()
    }

    fn with_samples(&self, samples: usize) -> Self {
        Self {
            samples,
            ..self.clone()
        }
    }
}

/// u(R(e_1 cos θ_i + e_2 sin θ_i)), θ_i = 2πi/M.
pub fn sample_trace<F>(field: F, circle: &CircleSpec) -> Result<Vec<Complex64>>
where
    F: Fn(&[f64]) -> Result<Complex64>,
{
    sample_indices(&field, circle, 0, 1)
}

fn sample_indices<F>(field: &F, circle: &CircleSpec, start: usize, step: usize) -> Result<Vec<Complex64>>
where
    F: Fn(&[f64]) -> Result<Complex64>,
{
    (start..circle.samples)
        .step_by(step)
        .map(|i| {
            let theta = circle.theta(i);
            field(&circle.point(theta)).map_err(|e| Error::Sample {
                index: i,
                theta,
                source: Box::new(e),
            })
        })
        .collect()
}

/// Scenario record carried with a spectrum.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct SpectrumMeta {
    pub n: usize,
    pub k: f64,
    pub radius: f64,
    pub source: String,
    pub samples: usize,
    pub converged: bool,
    /// Largest coefficient change at the last doubling, relative to the peak.
    pub last_change: f64,
    /// |Û_{-m}| = |Û_m| within rounding; negative m can then be dropped.
    pub symmetric: bool,
}

/// Û_m for m ∈ [-m_max, m_max].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Spectrum {
    pub m_max: usize,
    pub coeffs: Vec<Complex64>,
    pub meta: SpectrumMeta,
}

impl Spectrum {
    pub fn coeff(&self, m: i64) -> Complex64 {
        self.coeffs[(m + self.m_max as i64) as usize]
    }

    /// |Û_m| for m = 0..=m_max.
    pub fn magnitudes(&self) -> Vec<f64> {
        (0..=self.m_max as i64).map(|m| self.coeff(m).norm()).collect()
    }

    pub fn peak(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm()).fold(0.0, f64::max)
    }

    pub fn to_csv(&self) -> String {
        let mut s = String::from("m,re,im,abs\n");
        for m in 0..=self.m_max as i64 {
            let c = self.coeff(m);
            writeln!(s, "{m},{:e},{:e},{:e}", c.re, c.im, c.norm()).unwrap();
        }
        s
    }

    /// Parse the CSV form back; negative m are filled by conjugation.
    pub fn from_csv(text: &str, meta: SpectrumMeta) -> Result<Self> {
        let mut rows = Vec::new();
        for (i, line) in text.lines().enumerate() {
            if i == 0 {
                if line.trim() != "m,re,im,abs" {
                    return Err(Error::Domain(format!("unexpected spectrum header {line:?}")));
                }
                continue;
            }
            let f: Vec<&str> = line.split(',').collect();
            if f.len() != 4 {
                return Err(Error::Domain(format!("bad spectrum row {line:?}")));
            }
            let parse = |s: &str| s.parse::<f64>().map_err(|e| Error::Domain(e.to_string()));
            if f[0].parse::<usize>().ok() != Some(rows.len()) {
                return Err(Error::Domain(format!("row {i} out of order")));
            }
            rows.push(Complex64::new(parse(f[1])?, parse(f[2])?));
        }
        if rows.is_empty() {
            return Err(Error::Domain("empty spectrum".into()));
        }
        let m_max = rows.len() - 1;
        let mut coeffs: Vec<Complex64> = rows[1..].iter().rev().map(|c| c.conj()).collect();
        coeffs.extend(rows);
        Ok(Self { m_max, coeffs, meta })
    }
}

/// Trapezoid-rule coefficients Û_m = (2π/M) Σ_i e^{-imθ_i} u_i.
pub fn fourier_coeffs(samples: &[Complex64], m_max: usize) -> Result<Spectrum> {
    let big_m = samples.len();
    if big_m < 4 * m_max.max(1) {
        return Err(Error::Precondition(format!(
            "{big_m} samples cannot resolve |m| ≤ {m_max}; need at least {}",
            4 * m_max.max(1)
        )));
    }
    let twiddle: Vec<Complex64> = (0..big_m)
        .map(|i| Complex64::from_polar(1.0, -2.0 * PI * i as f64 / big_m as f64))
        .collect();
    let h = 2.0 * PI / big_m as f64;
    let coeffs: Vec<Complex64> = (-(m_max as i64)..=m_max as i64)
        .map(|m| {
            let step = m.rem_euclid(big_m as i64) as usize;
            let mut idx = 0usize;
            let mut acc = Complex64::default();
            for s in samples {
                acc += s * twiddle[idx];
                idx += step;
                if idx >= big_m {
                    idx -= big_m;
                }
            }
            acc * h
        })
        .collect();
    let peak = coeffs.iter().map(|c| c.norm()).fold(0.0, f64::max);
    let symmetric = (1..=m_max).all(|m| {
        (coeffs[m_max + m].norm() - coeffs[m_max - m].norm()).abs() <= 1e-12 * peak.max(f64::MIN_POSITIVE)
    });
    Ok(Spectrum {
        m_max,
        coeffs,
        meta: SpectrumMeta {
            samples: big_m,
            symmetric,
            ..Default::default()
        },
    })
}

/// Sample, transform, and double M (reusing samples) until the retained
/// coefficients move by less than 1e-8 of the peak.
pub fn spectrum_converged<F>(field: F, circle: &CircleSpec, m_max: usize, meta: SpectrumMeta) -> Result<Spectrum>
where
    F: Fn(&[f64]) -> Result<Complex64>,
{
    let start = (8 * m_max).max(256).max(circle.samples).next_power_of_two();
    let mut c = circle.with_samples(start);
    let mut samples = sample_indices(&field, &c, 0, 1)?;
    let mut spec = fourier_coeffs(&samples, m_max)?;
    loop {
        let doubled = c.with_samples(2 * c.samples);
        if doubled.samples > MAX_SAMPLES {
            spec.meta.converged = false;
            break;
        }
        let odd = sample_indices(&field, &doubled, 1, 2)?;
        let mut merged = Vec::with_capacity(doubled.samples);
        for (a, b) in samples.iter().zip(&odd) {
            merged.push(*a);
            merged.push(*b);
        }
        let next = fourier_coeffs(&merged, m_max)?;
        let peak = next.peak().max(f64::MIN_POSITIVE);
        let change = next
            .coeffs
            .iter()
            .zip(&spec.coeffs)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
            / peak;
        samples = merged;
        c = doubled;
        spec = next;
        spec.meta.last_change = change;
        if change < CONVERGENCE_TOL || spec.peak() == 0.0 {
            spec.meta.converged = true;
            break;
        }
    }
    spec.meta = SpectrumMeta {
        samples: spec.meta.samples,
        converged: spec.meta.converged,
        last_change: spec.meta.last_change,
        symmetric: spec.meta.symmetric,
        ..meta
    };
    Ok(spec)
}

/// Spectrum of the trace of (∂_j^ν δ_y) * Φ_n (axis `j` zero-based).
pub fn spectrum_point_source(src: &PointSource, circle: &CircleSpec, m_max: usize) -> Result<Spectrum> {
    let n = src.profile.n;
    if circle.dim() != n {
        return Err(Error::Domain("circle and source live in different dimensions".into()));
    }
    let meta = SpectrumMeta {
        n,
        k: src.profile.k,
        radius: circle.radius,
        source: format!(
            "point y=({}) j={} nu={}",
            src.y.iter().map(|v| format!("{v}")).collect::<Vec<_>>().join(";"),
            src.axis + 1,
            src.nu
        ),
        ..Default::default()
    };
    spectrum_converged(|x| src.field(x), circle, m_max, meta)
}

/// Spectrum of the trace of f * Φ_n for a piecewise-constant f.
pub fn spectrum_volume_source(src: &VolumeSource, k: f64, circle: &CircleSpec, m_max: usize) -> Result<Spectrum> {
    if circle.dim() != src.dim {
        return Err(Error::Domain("circle and source live in different dimensions".into()));
    }
    let profile = RadialProfile::new(src.dim, k, 0)?;
    let quad = CellQuadrature::default();
    let meta = SpectrumMeta {
        n: src.dim,
        k,
        radius: circle.radius,
        source: format!("volume cells={}", src.cells.len()),
        ..Default::default()
    };
    spectrum_converged(
        |x| volume_source_field_with(src, &profile, x, &quad).map(|v| v.0),
        circle,
        m_max,
        meta,
    )
}
