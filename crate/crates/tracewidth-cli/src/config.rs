//! TOML scenario files.
//!
//! ```toml
//! n = 2
//! k = 6.283185307179586
//! m_max = 60
//! out = "results"          # optional
//!
//! [circle]
//! radius = 5.01
//! axes = [1, 2]            # or e1 = [...], e2 = [...]
//!
//! [source]
//! kind = "point"           # point | volume | constant
//! y = [5.0, 0.0]
//! axis = 1
//! nu = 0
//!
//! [detector]               # optional
//! kind = "exit-climb"
//! delta = 0.5
//! ```

use serde::Deserialize;
use std::path::{Path, PathBuf};

use tracewidth::bandwidth::{DetectorConfig, Scenario, SourceSpec};
use tracewidth::helmholtz::{Cell, VolumeSource};
use tracewidth::multiplier::helmholtz_bound_exponents;
use tracewidth::trace::CircleSpec;

/// Largest |e_1·e_2| or ||e_i| - 1| accepted silently.
pub const ORTHO_TOL: f64 = 1e-10;

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CircleConfig {
    pub radius: f64,
    /// One-based coordinate axes spanning the plane.
    pub axes: Option<[usize; 2]>,
    pub e1: Option<Vec<f64>>,
    pub e2: Option<Vec<f64>>,
    pub samples: Option<usize>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase", deny_unknown_fields)]
pub enum SourceConfig {
    Point {
        y: Vec<f64>,
        axis: usize,
        #[serde(default)]
        nu: u32,
    },
    Volume {
        cells: Vec<Cell>,
    },
    /// A constant field; useful for checking the pipeline.
    Constant {
        value: f64,
    },
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioConfig {
    pub n: usize,
    pub k: f64,
    pub m_max: usize,
    pub circle: CircleConfig,
    pub source: SourceConfig,
    #[serde(default)]
    pub detector: Option<DetectorConfig>,
    /// Tempered order for the bound; defaults to d(n) + ν.
    pub d: Option<u32>,
    pub out: Option<PathBuf>,
}

/// A validated scenario plus any warnings produced on the way.
#[derive(Debug, Clone)]
pub struct Resolved {
    pub circle: CircleSpec,
    pub source: ResolvedSource,
    pub detector: DetectorConfig,
    pub d: u32,
    pub warnings: Vec<String>,
}

#[derive(Debug, Clone)]
pub enum ResolvedSource {
    Field(SourceSpec),
    Constant(f64),
}

pub fn load(path: &Path) -> Result<ScenarioConfig, String> {
    let text = std::fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
    toml::from_str(&text).map_err(|e| format!("{}: {e}", path.display()))
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Gram–Schmidt on (e1, e2), reporting the deviation that was removed.
pub fn orthonormalize(e1: &[f64], e2: &[f64]) -> Result<(Vec<f64>, Vec<f64>, f64), String> {
    let n1 = dot(e1, e1).sqrt();
    if !(n1 > 0.0) {
        return Err("circle.e1 is zero".into());
    }
    let u: Vec<f64> = e1.iter().map(|x| x / n1).collect();
    let p = dot(&u, e2);
    let w: Vec<f64> = e2.iter().zip(&u).map(|(b, a)| b - p * a).collect();
    let n2 = dot(&w, &w).sqrt();
    if !(n2 > 1e-8 * dot(e2, e2).sqrt()) {
        return Err("circle.e1 and circle.e2 are parallel".into());
    }
    let v: Vec<f64> = w.iter().map(|x| x / n2).collect();
    let deviation = (n1 - 1.0).abs().max((dot(e2, e2).sqrt() - 1.0).abs()).max(dot(e1, e2).abs());
    Ok((u, v, deviation))
}

impl ScenarioConfig {
    pub fn resolve(&self, m_max_override: Option<usize>) -> Result<(Scenario, Resolved), String> {
        let n = self.n;
        if n < 2 {
            return Err(format!("n = {n}: need n ≥ 2"));
        }
        if !(self.k > 0.0) || !self.k.is_finite() {
            return Err("k must be positive".into());
        }
        let m_max = m_max_override.unwrap_or(self.m_max);
        if m_max < 8 {
            return Err("m_max must be at least 8".into());
        }
        let mut warnings = Vec::new();
        let c = &self.circle;
        let (e1, e2) = match (&c.axes, &c.e1, &c.e2) {
            (Some([a, b]), None, None) => {
                if *a == 0 || *b == 0 || *a > n || *b > n || a == b {
                    return Err(format!("circle.axes must be two distinct axes in 1..={n}"));
                }
                let mut e1 = vec![0.0; n];
                let mut e2 = vec![0.0; n];
                e1[a - 1] = 1.0;
                e2[b - 1] = 1.0;
                (e1, e2)
            }
            (None, Some(e1), Some(e2)) => {
                if e1.len() != n || e2.len() != n {
                    return Err(format!("circle.e1 and circle.e2 must have {n} entries"));
                }
                let (u, v, dev) = orthonormalize(e1, e2)?;
                if dev > ORTHO_TOL {
                    warnings.push(format!("circle frame deviates from orthonormal by {dev:e}; re-orthonormalized"));
                }
                (u, v)
            }
            _ => return Err("circle needs either axes or both e1 and e2".into()),
        };
        let circle = CircleSpec::new(c.radius, e1, e2, c.samples.unwrap_or(256)).map_err(|e| e.to_string())?;
        let (source, nu) = match &self.source {
            SourceConfig::Point { y, axis, nu } => {
                if y.len() != n {
                    return Err(format!("source.y must have {n} entries"));
                }
                if *axis == 0 || *axis > n {
                    return Err(format!("source.axis must lie in 1..={n}"));
                }
                let r = dot(y, y).sqrt();
                if (r - c.radius).abs() < 1e-12 * c.radius.max(1.0) {
                    warnings.push("source lies on the circle radius; the trace may pass through it".into());
                }
                (
                    ResolvedSource::Field(SourceSpec::Point {
                        y: y.clone(),
                        axis: *axis,
                        nu: *nu,
                    }),
                    *nu,
                )
            }
            SourceConfig::Volume { cells } => {
                let src = VolumeSource::new(n, cells.clone()).map_err(|e| e.to_string())?;
                if src.support_radius >= c.radius {
                    return Err(format!(
                        "volume source reaches radius {} but the circle has radius {}",
                        src.support_radius, c.radius
                    ));
                }
                (ResolvedSource::Field(SourceSpec::Volume { source: src }), 0)
            }
            SourceConfig::Constant { value } => (ResolvedSource::Constant(*value), 0),
        };
        let d = match self.d {
            Some(d) => d,
            None => helmholtz_bound_exponents(n as u32, nu).map_err(|e| e.to_string())?,
        };
        let detector = self.detector.unwrap_or_default();
        let scenario = Scenario {
            name: "config".into(),
            n,
            k: self.k,
            circle: circle.clone(),
            source: match &source {
                ResolvedSource::Field(s) => s.clone(),
                ResolvedSource::Constant(_) => SourceSpec::Point {
                    y: vec![0.0; n],
                    axis: 1,
                    nu: 0,
                },
            },
            m_max,
            d,
            bracket: None,
        };
        Ok((
            scenario,
            Resolved {
                circle,
                source,
                detector,
                d,
                warnings,
            },
        ))
    }
}
