//! Normalized curves, onset detection, Bessel-zero brackets and
//! predicted-versus-measured reports.

use serde::{Deserialize, Serialize};
use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::helmholtz::{PointSource, VolumeSource};
use crate::multiplier::{bound_curve, helmholtz_bound_exponents, BoundMode, BoundParams, SymbolSpec};
use crate::specfun::{first_zero, BesselOrder, ZeroKind};
use crate::trace::{spectrum_point_source, spectrum_volume_source, CircleSpec, Spectrum};

/// Values below peak·FLOOR are clipped before taking logarithms.
pub const FLOOR: f64 = 1e-16;

/// Log-magnitudes rescaled affinely onto [-1, 1].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NormalizedCurve {
    pub ms: Vec<i64>,
    pub values: Vec<f64>,
    /// log10 of the clipped magnitudes.
    pub log10: Vec<f64>,
    /// Number of entries raised to the floor.
    pub clipped: usize,
    pub degenerate: bool,
}

impl NormalizedCurve {
    /// Decades spanned by the curve.
    pub fn span(&self) -> f64 {
        let hi = self.log10.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        let lo = self.log10.iter().cloned().fold(f64::INFINITY, f64::min);
        hi - lo
    }

    pub fn to_csv(&self) -> String {
        let mut s = String::from("m,log10,normalized\n");
        for ((m, l), v) in self.ms.iter().zip(&self.log10).zip(&self.values) {
            writeln!(s, "{m},{l:e},{v:e}").unwrap();
        }
        s
    }
}

/// v_m = 2(log10 max(value_m, peak·1e-16) - min)/(max - min) - 1.
pub fn normalize(ms: &[i64], values: &[f64]) -> Result<NormalizedCurve> {
    if ms.len() != values.len() {
        return Err(Error::Domain("grid and values differ in length".into()));
    }
    if values.iter().any(|v| !(v >= &0.0) || !v.is_finite()) {
        return Err(Error::Domain("curve values must be finite and nonnegative".into()));
    }
    let peak = values.iter().cloned().fold(0.0, f64::max);
    if !(peak > 0.0) {
        return Err(Error::Degenerate("curve is identically zero".into()));
    }
    let floor = peak * FLOOR;
    let clipped = values.iter().filter(|&&v| v < floor).count();
    let log10: Vec<f64> = values.iter().map(|&v| v.max(floor).log10()).collect();
    let hi = log10.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let lo = log10.iter().cloned().fold(f64::INFINITY, f64::min);
    let degenerate = hi == lo;
    let values = if degenerate {
        vec![0.0; log10.len()]
    } else {
        log10.iter().map(|l| 2.0 * (l - lo) / (hi - lo) - 1.0).collect()
    };
    Ok(NormalizedCurve {
        ms: ms.to_vec(),
        values,
        log10,
        clipped,
        degenerate,
    })
}

/// Onset-of-decay rules.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Detector {
    /// Last mode within `delta` of the normalized maximum, then back up the
    /// slope to the local maximum it belongs to.
    ExitClimb { delta: f64 },
    /// First mode past the argmax whose least-squares log10 slope over
    /// `window + 1` modes is at most `-sigma`, for `window + 1` consecutive
    /// windows; then the first step inside that window dropping by `sigma`.
    Slope { sigma: f64, window: usize },
}

/// The frozen detector shared by predictions and measurements.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct DetectorConfig {
    pub detector: Detector,
}

impl Default for DetectorConfig {
    fn default() -> Self {
        Self {
            detector: Detector::ExitClimb { delta: 0.5 },
        }
    }
}

impl DetectorConfig {
    pub fn slope() -> Self {
        Self {
            detector: Detector::Slope { sigma: 0.5, window: 3 },
        }
    }

    /// Canonical text identifying the configuration.
    pub fn fingerprint(&self) -> String {
        match self.detector {
            Detector::ExitClimb { delta } => format!("exit-climb(delta={delta})"),
            Detector::Slope { sigma, window } => format!("slope(sigma={sigma},window={window})"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Onset {
    pub m: i64,
    pub found: bool,
}

pub fn detect_onset(curve: &NormalizedCurve, config: &DetectorConfig) -> Result<Onset> {
    let v = &curve.values;
    let last = v.len().saturating_sub(1);
    if v.is_empty() {
        return Err(Error::Domain("empty curve".into()));
    }
    let at = |i: usize| Onset {
        m: curve.ms[i],
        found: true,
    };
    let not_found = Onset {
        m: curve.ms[last],
        found: false,
    };
    if curve.degenerate {
        return Ok(not_found);
    }
    match config.detector {
        Detector::ExitClimb { delta } => {
            let top = v.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
            let e = (0..v.len()).rev().find(|&i| v[i] >= top - delta).unwrap();
            if e == last {
                return Ok(not_found);
            }
            let mut i = e;
            while i > 0 && v[i - 1] > v[i] {
                i -= 1;
            }
            Ok(at(i))
        }
        Detector::Slope { sigma, window } => {
            if v.len() < 2 * window + 2 {
                return Err(Error::Precondition(format!(
                    "curve of length {} is too short for window {window}",
                    v.len()
                )));
            }
            let l = &curve.log10;
            let slope = |m: usize| {
                let xs: Vec<f64> = (0..=window).map(|i| i as f64).collect();
                let xm = xs.iter().sum::<f64>() / xs.len() as f64;
                let ym = l[m..=m + window].iter().sum::<f64>() / xs.len() as f64;
                let num: f64 = xs.iter().zip(&l[m..=m + window]).map(|(x, y)| (x - xm) * (y - ym)).sum();
                let den: f64 = xs.iter().map(|x| (x - xm) * (x - xm)).sum();
                num / den
            };
            let argmax = (0..v.len()).fold(0, |b, i| if v[i] > v[b] { i } else { b });
            let windows = v.len() - window;
            for m in argmax..windows {
                if m + window >= windows {
                    break;
                }
                if (m..=m + window).all(|s| slope(s) <= -sigma) {
                    // A window straddling the corner already has a steep fit;
                    // move to the first mode whose next step drops by σ.
                    let first = (m..m + window).find(|&i| l[i + 1] - l[i] <= -sigma).unwrap_or(m);
                    return Ok(at(first));
                }
            }
            Ok(not_found)
        }
    }
}

/// Onset of the normalized bound curve over m = 0..=m_max.
pub fn predicted_bandwidth(
    spec: &SymbolSpec,
    params: &BoundParams,
    m_max: usize,
    config: &DetectorConfig,
) -> Result<Onset> {
    let curve = bound_curve(spec, params, 0, m_max as i32)?;
    let ms: Vec<i64> = curve.ms.iter().map(|&m| m as i64).collect();
    detect_onset(&normalize(&ms, &curve.values)?, config)
}

/// Onset of the normalized |Û_m|, m = 0..=m_max.
pub fn measured_bandwidth(spectrum: &Spectrum, config: &DetectorConfig) -> Result<Onset> {
    let ms: Vec<i64> = (0..=spectrum.m_max as i64).collect();
    detect_onset(&normalize(&ms, &spectrum.magnitudes())?, config)
}

/// (smallest m with first J-zero ≥ kR, smallest m with first Y-zero ≥ kR),
/// at orders m or m + 1/2.
pub fn bessel_zero_bracket(kr: f64, half_integer: bool) -> Result<(u32, u32)> {
    if !(kr > 0.0) {
        return Err(Error::Domain("kR must be positive".into()));
    }
    let first = |kind: ZeroKind| -> Result<u32> {
        let mut m = 0u32;
        loop {
            let order = if half_integer {
                BesselOrder::half_integer(m as i32)
            } else {
                BesselOrder::integer(m as i32)
            };
            if first_zero(kind, order)? >= kr {
                return Ok(m);
            }
            m += 1;
        }
    };
    let lo = first(ZeroKind::J)?;
    let hi = first(ZeroKind::Y)?;
    debug_assert!(lo <= hi);
    Ok((lo, hi))
}

/// Where a scenario's field comes from.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum SourceSpec {
    /// ∂_j^ν δ_y; `axis` is one-based.
    Point { y: Vec<f64>, axis: usize, nu: u32 },
    Volume { source: VolumeSource },
}

/// One row of a comparison table.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Scenario {
    pub name: String,
    pub n: usize,
    pub k: f64,
    pub circle: CircleSpec,
    pub source: SourceSpec,
    pub m_max: usize,
    /// Tempered order d used in the bound.
    pub d: u32,
    /// Orders for the Bessel-zero bracket: None, integer, or half-integer.
    pub bracket: Option<bool>,
}

impl Scenario {
    pub fn point(name: &str, n: usize, k: f64, radius: f64, y: Vec<f64>, axis: usize, nu: u32, m_max: usize) -> Result<Self> {
        Ok(Self {
            name: name.into(),
            n,
            k,
            circle: CircleSpec::axes(n, radius, 0, 1, 256)?,
            source: SourceSpec::Point { y, axis, nu },
            m_max,
            d: helmholtz_bound_exponents(n as u32, nu)?,
            bracket: None,
        })
    }

    pub fn nu(&self) -> Option<u32> {
        match &self.source {
            SourceSpec::Point { nu, .. } => Some(*nu),
            SourceSpec::Volume { .. } => None,
        }
    }

    /// Configurations the point-source experiments single out as poorly
    /// predicted: |y| ≈ R with ν = 0 and n ≥ 6, or ν ≥ 5 and n ≤ 5.
    pub fn pathological(&self) -> bool {
        match &self.source {
            SourceSpec::Point { y, nu, .. } => {
                let r = y.iter().map(|v| v * v).sum::<f64>().sqrt();
                let close = (r - self.circle.radius).abs() <= 0.05 * self.circle.radius;
                close && ((*nu == 0 && self.n >= 6) || (*nu >= 5 && self.n <= 5))
            }
            SourceSpec::Volume { .. } => false,
        }
    }

    pub fn spectrum(&self) -> Result<Spectrum> {
        match &self.source {
            SourceSpec::Point { y, axis, nu } => {
                if *axis == 0 {
                    return Err(Error::Domain("axes are numbered from 1".into()));
                }
                let src = PointSource::new(self.n, self.k, y.clone(), axis - 1, *nu)?;
                spectrum_point_source(&src, &self.circle, self.m_max)
            }
            SourceSpec::Volume { source } => spectrum_volume_source(source, self.k, &self.circle, self.m_max),
        }
    }

    pub fn source_label(&self) -> String {
        match &self.source {
            SourceSpec::Point { .. } => "point".into(),
            SourceSpec::Volume { .. } => "volume".into(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BandwidthReport {
    pub name: String,
    pub n: usize,
    pub k: f64,
    pub radius: f64,
    pub nu: Option<u32>,
    pub source: String,
    pub predicted: Onset,
    pub measured: Onset,
    pub bracket: Option<(u32, u32)>,
    pub flagged: bool,
    pub detector: String,
    pub converged: bool,
}

pub const REPORT_HEADER: &str = "n,k,R,nu,source,predicted,measured,bracket_lo,bracket_hi,flagged";

impl BandwidthReport {
    pub fn csv_row(&self) -> String {
        let (lo, hi) = match self.bracket {
            Some((a, b)) => (a.to_string(), b.to_string()),
            None => (String::new(), String::new()),
        };
        format!(
            "{},{},{},{},{},{},{},{},{},{}",
            self.n,
            self.k,
            self.radius,
            self.nu.map(|v| v.to_string()).unwrap_or_default(),
            self.source,
            self.predicted.m,
            self.measured.m,
            lo,
            hi,
            self.flagged
        )
    }
}

pub fn reports_to_csv(reports: &[BandwidthReport]) -> String {
    let mut s = format!("{REPORT_HEADER}\n");
    for r in reports {
        s.push_str(&r.csv_row());
        s.push('\n');
    }
    s
}

/// Predicted and measured onsets for one scenario.
pub fn evaluate(scenario: &Scenario, config: &DetectorConfig) -> Result<BandwidthReport> {
    let spec = SymbolSpec::helmholtz(scenario.k)?;
    let params = BoundParams::new(scenario.circle.radius, scenario.d, BoundMode::Inhomogeneous);
    let predicted = predicted_bandwidth(&spec, &params, scenario.m_max, config)?;
    let spectrum = scenario.spectrum()?;
    let measured = measured_bandwidth(&spectrum, config)?;
    let bracket = match scenario.bracket {
        Some(half) => Some(bessel_zero_bracket(scenario.k * scenario.circle.radius, half)?),
        None => None,
    };
    Ok(BandwidthReport {
        name: scenario.name.clone(),
        n: scenario.n,
        k: scenario.k,
        radius: scenario.circle.radius,
        nu: scenario.nu(),
        source: scenario.source_label(),
        predicted,
        measured,
        bracket,
        flagged: scenario.pathological(),
        detector: config.fingerprint(),
        converged: spectrum.meta.converged,
    })
}

/// One report per scenario; failures are collected, not fatal.
pub fn compare(scenarios: &[Scenario], config: &DetectorConfig) -> Vec<Result<BandwidthReport>> {
    scenarios.iter().map(|s| evaluate(s, config)).collect()
}
