mod config;

use clap::{Parser, Subcommand};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use config::{ResolvedSource, ScenarioConfig};
use tracewidth::bandwidth::{
    bessel_zero_bracket, compare, evaluate, normalize, reports_to_csv, BandwidthReport, DetectorConfig,
};
use tracewidth::experiments;
use tracewidth::multiplier::{bound_curve, BoundMode, BoundParams, SymbolSpec};
use tracewidth::trace::{spectrum_converged, SpectrumMeta};
use tracewidth::verify;

const EXIT_CONFIG: u8 = 2;
const EXIT_NUMERICAL: u8 = 3;
const EXIT_MISMATCH: u8 = 4;

#[derive(Parser)]
#[command(name = "tracewidth", version, about = "Trace spectra, bound curves and bandwidth tables")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(clap::Args, Clone)]
struct Common {
    /// Output directory (created if missing).
    #[arg(long)]
    out: Option<PathBuf>,
    /// Override the largest Fourier mode.
    #[arg(long = "m-max")]
    m_max: Option<usize>,
}

#[derive(Subcommand)]
enum Command {
    /// Spectrum CSV and normalized-curve CSV for a scenario file.
    Spectrum {
        #[arg(long)]
        config: PathBuf,
        #[command(flatten)]
        common: Common,
    },
    /// Bound-curve CSV for a scenario file.
    Bound {
        #[arg(long)]
        config: PathBuf,
        #[command(flatten)]
        common: Common,
    },
    /// Predicted and measured bandwidth for a scenario file.
    Bandwidth {
        #[arg(long)]
        config: PathBuf,
        #[command(flatten)]
        common: Common,
    },
    /// Reproduce one of the point-source tables.
    Table {
        #[arg(long, value_parser = clap::value_parser!(u32).range(1..=3))]
        which: u32,
        #[command(flatten)]
        common: Common,
    },
    /// Piecewise-constant volume-source experiments.
    Pcsource {
        #[arg(long, value_parser = clap::value_parser!(u32).range(2..=3))]
        dim: u32,
        #[command(flatten)]
        common: Common,
    },
    /// Distribution identities and special-function invariants.
    Verify {
        /// Seed for random special-function probe points.
        #[arg(long)]
        seed: Option<u64>,
        #[command(flatten)]
        common: Common,
    },
}

#[derive(Debug, Serialize)]
struct ErrorRecord<'a> {
    status: &'static str,
    exit_code: u8,
    kind: &'a str,
    message: String,
}

struct Failure {
    code: u8,
    kind: &'static str,
    message: String,
}

impl Failure {
    fn config(message: impl Into<String>) -> Self {
        Self {
            code: EXIT_CONFIG,
            kind: "config",
            message: message.into(),
        }
    }

    fn numerical(message: impl Into<String>) -> Self {
        Self {
            code: EXIT_NUMERICAL,
            kind: "numerical",
            message: message.into(),
        }
    }

    fn mismatch(message: impl Into<String>) -> Self {
        Self {
            code: EXIT_MISMATCH,
            kind: "acceptance-mismatch",
            message: message.into(),
        }
    }
}

impl From<tracewidth::Error> for Failure {
    fn from(e: tracewidth::Error) -> Self {
        Self::numerical(e.to_string())
    }
}

fn write(dir: &Path, name: &str, text: &str) -> Result<(), Failure> {
    std::fs::create_dir_all(dir).map_err(|e| Failure::config(format!("{}: {e}", dir.display())))?;
    let path = dir.join(name);
    std::fs::write(&path, text).map_err(|e| Failure::config(format!("{}: {e}", path.display())))
}

fn json<T: Serialize>(value: &T) -> String {
    serde_json::to_string_pretty(value).expect("serializable") + "\n"
}

fn out_dir(common: &Common, cfg: Option<&ScenarioConfig>) -> PathBuf {
    common
        .out
        .clone()
        .or_else(|| cfg.and_then(|c| c.out.clone()))
        .unwrap_or_else(|| PathBuf::from("."))
}

fn load(path: &Path, common: &Common) -> Result<(ScenarioConfig, config::Resolved, tracewidth::bandwidth::Scenario), Failure> {
    let cfg = config::load(path).map_err(Failure::config)?;
    let (scenario, resolved) = cfg.resolve(common.m_max).map_err(Failure::config)?;
    for w in &resolved.warnings {
        eprintln!("warning: {w}");
    }
    Ok((cfg, resolved, scenario))
}

fn run_spectrum(path: &Path, common: &Common) -> Result<(), Failure> {
    let (cfg, resolved, scenario) = load(path, common)?;
    let spectrum = match &resolved.source {
        ResolvedSource::Constant(v) => {
            let v = Complex64::new(*v, 0.0);
            let meta = SpectrumMeta {
                n: scenario.n,
                k: scenario.k,
                radius: scenario.circle.radius,
                source: "constant".into(),
                ..Default::default()
            };
            spectrum_converged(|_| Ok(v), &resolved.circle, scenario.m_max, meta)?
        }
        ResolvedSource::Field(_) => scenario.spectrum()?,
    };
    let dir = out_dir(common, Some(&cfg));
    write(&dir, "spectrum.csv", &spectrum.to_csv())?;
    write(&dir, "spectrum_meta.json", &json(&spectrum.meta))?;
    let ms: Vec<i64> = (0..=spectrum.m_max as i64).collect();
    match normalize(&ms, &spectrum.magnitudes()) {
        Ok(curve) => write(&dir, "normalized.csv", &curve.to_csv())?,
        Err(tracewidth::Error::Degenerate(m)) => eprintln!("warning: no normalized curve: {m}"),
        Err(e) => return Err(e.into()),
    }
    Ok(())
}

fn run_bound(path: &Path, common: &Common) -> Result<(), Failure> {
    let (cfg, resolved, scenario) = load(path, common)?;
    let spec = SymbolSpec::helmholtz(scenario.k)?;
    let params = BoundParams::new(resolved.circle.radius, resolved.d, BoundMode::Inhomogeneous);
    let curve = bound_curve(&spec, &params, 0, scenario.m_max as i32)?;
    let ms: Vec<i64> = curve.ms.iter().map(|&m| m as i64).collect();
    let norm = normalize(&ms, &curve.values)?;
    let mut text = String::from("m,value,normalized\n");
    for ((m, v), z) in ms.iter().zip(&curve.values).zip(&norm.values) {
        text.push_str(&format!("{m},{v:e},{z:e}\n"));
    }
    write(&out_dir(common, Some(&cfg)), "bound.csv", &text)
}

fn run_bandwidth(path: &Path, common: &Common) -> Result<(), Failure> {
    let (cfg, resolved, scenario) = load(path, common)?;
    if let ResolvedSource::Constant(_) = resolved.source {
        return Err(Failure::config("bandwidth needs a point or volume source"));
    }
    let report = evaluate(&scenario, &resolved.detector)?;
    let dir = out_dir(common, Some(&cfg));
    write(&dir, "bandwidth.csv", &reports_to_csv(std::slice::from_ref(&report)))?;
    write(&dir, "bandwidth.json", &json(&report))
}

fn collect(results: Vec<tracewidth::Result<BandwidthReport>>) -> Result<Vec<BandwidthReport>, Failure> {
    let mut reports = Vec::new();
    let mut errors = Vec::new();
    for r in results {
        match r {
            Ok(r) => reports.push(r),
            Err(e) => errors.push(e.to_string()),
        }
    }
    if errors.is_empty() {
        Ok(reports)
    } else {
        Err(Failure::numerical(errors.join("; ")))
    }
}

fn with_m_max(mut scenarios: Vec<tracewidth::bandwidth::Scenario>, m_max: Option<usize>) -> Vec<tracewidth::bandwidth::Scenario> {
    if let Some(m) = m_max {
        for s in &mut scenarios {
            s.m_max = m;
        }
    }
    scenarios
}

fn run_table(which: u32, common: &Common) -> Result<(), Failure> {
    let scenarios = with_m_max(experiments::table(which)?, common.m_max);
    let reports = collect(compare(&scenarios, &DetectorConfig::default()))?;
    let expected = experiments::expected(which)?;
    let mut text = String::from("n,k,R,nu,source,predicted,measured,bracket_lo,bracket_hi,flagged,reference_predicted,reference_measured\n");
    let mut misses = Vec::new();
    for (r, (_, pred, meas)) in reports.iter().zip(&expected) {
        text.push_str(&format!("{},{pred},{meas}\n", r.csv_row()));
        if (r.predicted.m - pred).abs() > 2 || (r.measured.m - meas).abs() > 2 {
            misses.push(format!("n={}: ({}, {}) vs ({pred}, {meas})", r.n, r.predicted.m, r.measured.m));
        }
    }
    write(&out_dir(common, None), &format!("table{which}.csv"), &text)?;
    print!("{text}");
    if misses.is_empty() {
        Ok(())
    } else {
        Err(Failure::mismatch(misses.join("; ")))
    }
}

fn run_pcsource(dim: usize, common: &Common) -> Result<(), Failure> {
    let scenarios = with_m_max(experiments::pcsource(dim)?, common.m_max);
    let reports = collect(compare(&scenarios, &DetectorConfig::default()))?;
    let (pred, meas, bracket): (i64, Vec<i64>, (u32, u32)) = match dim {
        2 => (29, vec![27], (26, 29)),
        _ => (6, vec![4, 4, 0], (3, 5)),
    };
    let mut text = format!("circle,{}\n", tracewidth::bandwidth::REPORT_HEADER);
    let mut misses = Vec::new();
    for (r, want) in reports.iter().zip(&meas) {
        text.push_str(&format!("{},{}\n", r.name, r.csv_row()));
        if (r.predicted.m - pred).abs() > 2 || (r.measured.m - want).abs() > 2 || r.bracket != Some(bracket) {
            misses.push(format!("{}: ({}, {}) vs ({pred}, {want})", r.name, r.predicted.m, r.measured.m));
        }
    }
    let kr = experiments::K * scenarios[0].circle.radius;
    debug_assert_eq!(bessel_zero_bracket(kr, dim == 3).ok(), Some(bracket));
    write(&out_dir(common, None), &format!("pcsource{dim}d.csv"), &text)?;
    print!("{text}");
    if misses.is_empty() {
        Ok(())
    } else {
        Err(Failure::mismatch(misses.join("; ")))
    }
}

fn run_verify(seed: Option<u64>, common: &Common) -> Result<(), Failure> {
    let probes = match seed {
        None => verify::default_probes(),
        Some(seed) => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            (0..400).map(|_| (rng.gen_range(0..=200), rng.gen_range(0.05..60.0))).collect()
        }
    };
    let mut checks = verify::specfun_checks(&probes)?;
    checks.extend(verify::residue_checks()?);
    checks.extend(verify::pde_constant_checks()?.1);
    checks.extend(verify::multiplier_identity_checks(true)?);
    let text = verify::checks_to_csv(&checks);
    write(&out_dir(common, None), "verify.csv", &text)?;
    let failed: Vec<&str> = checks.iter().filter(|c| !c.pass).map(|c| c.name.as_str()).collect();
    println!("{} checks, {} failed", checks.len(), failed.len());
    if failed.is_empty() {
        Ok(())
    } else {
        Err(Failure::numerical(format!("failed checks: {}", failed.join(", "))))
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) if !e.use_stderr() => {
            print!("{e}");
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            eprint!("{e}");
            return ExitCode::from(EXIT_CONFIG);
        }
    };
    let (result, common) = match &cli.command {
        Command::Spectrum { config, common } => (run_spectrum(config, common), common),
        Command::Bound { config, common } => (run_bound(config, common), common),
        Command::Bandwidth { config, common } => (run_bandwidth(config, common), common),
        Command::Table { which, common } => (run_table(*which, common), common),
        Command::Pcsource { dim, common } => (run_pcsource(*dim as usize, common), common),
        Command::Verify { seed, common } => (run_verify(*seed, common), common),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            let record = ErrorRecord {
                status: "error",
                exit_code: f.code,
                kind: f.kind,
                message: f.message,
            };
            let text = serde_json::to_string(&record).expect("serializable");
            eprintln!("{text}");
            if let Some(dir) = &common.out {
                let _ = std::fs::create_dir_all(dir).and_then(|_| std::fs::write(dir.join("error.json"), text + "\n"));
            }
            ExitCode::from(f.code)
        }
    }
}
