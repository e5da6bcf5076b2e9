//! Gauss–Legendre rules, panel layouts and sphere rules.

use std::f64::consts::PI;

#[derive(Debug, Clone)]
pub struct GaussLegendre {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

impl GaussLegendre {
    /// n-point rule on [-1, 1], nodes by Newton iteration on P_n.
    pub fn new(n: usize) -> Self {
        assert!(n >= 1);
        let mut nodes = vec![0.0; n];
        let mut weights = vec![0.0; n];
        let nf = n as f64;
        for i in 0..(n + 1) / 2 {
            let mut x = (PI * (i as f64 + 0.75) / (nf + 0.5)).cos();
            let mut dp = 0.0;
            for _ in 0..100 {
                let (p, d) = legendre(n, x);
                dp = d;
                let dx = p / d;
                x -= dx;
                if dx.abs() < 1e-16 {
                    break;
                }
            }
            let (_, d) = legendre(n, x);
            if d != 0.0 {
                dp = d;
            }
            let w = 2.0 / ((1.0 - x * x) * dp * dp);
            nodes[i] = -x;
            nodes[n - 1 - i] = x;
            weights[i] = w;
            weights[n - 1 - i] = w;
        }
        Self { nodes, weights }
    }

    /// Nodes and weights mapped to [a, b].
    pub fn mapped(&self, a: f64, b: f64) -> impl Iterator<Item = (f64, f64)> + '_ {
        let h = 0.5 * (b - a);
        let c = 0.5 * (a + b);
        self.nodes
            .iter()
            .zip(&self.weights)
            .map(move |(&x, &w)| (c + h * x, h * w))
    }
}

/// (P_n(x), P_n'(x)).
fn legendre(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    if n == 0 {
        return (1.0, 0.0);
    }
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    let d = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}

/// Panels [top·2^{-i-1}, top·2^{-i}] for i = 0..levels, ordered from small to large.
pub fn geometric_panels(top: f64, levels: usize) -> Vec<(f64, f64)> {
    let mut out: Vec<(f64, f64)> = (0..levels)
        .map(|i| {
            let b = top * 0.5f64.powi(i as i32);
            (0.5 * b, b)
        })
        .collect();
    out.reverse();
    out
}

/// Uniform panels of width at most `h` covering [a, b].
pub fn uniform_panels(a: f64, b: f64, h: f64) -> Vec<(f64, f64)> {
    if b <= a {
        return Vec::new();
    }
    let n = ((b - a) / h).ceil().max(1.0) as usize;
    let w = (b - a) / n as f64;
    (0..n).map(|i| (a + w * i as f64, a + w * (i + 1) as f64)).collect()
}

/// Quadrature on the unit sphere S^{n-1} for n ∈ {2, 3}.
#[derive(Debug, Clone)]
pub struct SphereRule {
    pub dim: usize,
    pub directions: Vec<Vec<f64>>,
    pub weights: Vec<f64>,
}

impl SphereRule {
    /// Trapezoid in angle (n = 2), or Gauss–Legendre in cos θ times a
    /// trapezoid in azimuth (n = 3). `resolution` is the azimuthal count.
    pub fn new(dim: usize, resolution: usize) -> Self {
        let mut directions = Vec::new();
        let mut weights = Vec::new();
        match dim {
            2 => {
                let h = 2.0 * PI / resolution as f64;
                for i in 0..resolution {
                    let t = h * i as f64;
                    directions.push(vec![t.cos(), t.sin()]);
                    weights.push(h);
                }
            }
            3 => {
                let gl = GaussLegendre::new(resolution / 2);
                let h = 2.0 * PI / resolution as f64;
                for (&z, &wz) in gl.nodes.iter().zip(&gl.weights) {
                    let s = (1.0 - z * z).sqrt();
                    for i in 0..resolution {
                        let t = h * i as f64 + 0.5 * h;
                        directions.push(vec![s * t.cos(), s * t.sin(), z]);
                        weights.push(wz * h);
                    }
                }
            }
            _ => panic!("sphere rules exist for dimensions 2 and 3 only"),
        }
        Self {
            dim,
            directions,
            weights,
        }
    }
}
