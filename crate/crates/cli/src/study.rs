//! Convergence study of the large-`n` integral asymptotic against the closed form.

use std::fmt::Write as _;

use jacobi_wronskian::asymptotics::{
    self, envelope_decay_fit, envelope_window, geometric_grid, DEFAULT_THETAS, PHASE_FILTER,
};
use jacobi_wronskian::integrals::{partial_integral_jacobi_closed, partial_integral_quadrature};
use jacobi_wronskian::quadrature::DEFAULT_TOL;
use jacobi_wronskian::{Error, JacobiParams, Result};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::format::g17;

/// Header row of the CSV output. Part of the public output contract.
pub const CSV_HEADER: &str = "n,theta,exact,estimate,abs_err,ratio,phase";

/// Sentinel written in the ratio column for phase-filtered rows.
pub const RATIO_SENTINEL: &str = "NA";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    Csv,
    Json,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StudyConfig {
    pub alpha: f64,
    pub beta: f64,
    pub m: usize,
    pub thetas: Vec<f64>,
    pub n_min: usize,
    pub n_max: usize,
    pub n_points: usize,
    pub tol: f64,
    pub format: OutputFormat,
    pub seed: u64,
}

impl Default for StudyConfig {
    fn default() -> Self {
        Self {
            alpha: 0.0,
            beta: 0.0,
            m: 0,
            thetas: DEFAULT_THETAS.to_vec(),
            n_min: 50,
            n_max: 2000,
            n_points: 24,
            tol: DEFAULT_TOL,
            format: OutputFormat::Csv,
            seed: 0,
        }
    }
}

impl StudyConfig {
    pub fn params(&self) -> Result<JacobiParams> {
        JacobiParams::new(self.alpha, self.beta)
    }

    pub fn grid(&self) -> Vec<usize> {
        geometric_grid(self.n_min, self.n_max, self.n_points)
    }

    pub fn validate(&self) -> Result<()> {
        self.params()?;
        let fail = |msg: String| Err(Error::Domain(msg));
        if self.n_min < 1 || self.n_max <= self.n_min {
            return fail(format!(
                "need 1 <= n_min < n_max (got n_min = {}, n_max = {})",
                self.n_min, self.n_max
            ));
        }
        if self.n_points < 8 {
            return fail(format!("n_points must be at least 8 (got {})", self.n_points));
        }
        if !self.tol.is_finite() || self.tol <= 0.0 {
            return fail(format!("tol must be positive (got {})", self.tol));
        }
        if self.thetas.is_empty() {
            return fail("at least one theta is required".into());
        }
        if let Some(t) = self.thetas.iter().find(|&&t| !(t > 0.0 && t < std::f64::consts::PI)) {
            return fail(format!("theta must lie strictly inside (0, pi) (got {t})"));
        }
        if self.grid().contains(&self.m) {
            return fail(format!("m = {} coincides with a grid degree", self.m));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct StudyRow {
    pub n: usize,
    pub theta: f64,
    pub exact: f64,
    pub estimate: f64,
    pub abs_err: f64,
    /// `None` when `|phase| < PHASE_FILTER`.
    pub ratio: Option<f64>,
    pub phase: f64,
}

/// Envelope decay fit of `|exact - estimate|` for one angle.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FitSummary {
    pub theta: f64,
    pub window: usize,
    pub slope: Option<f64>,
    pub intercept: Option<f64>,
    pub r_squared: Option<f64>,
    pub points: usize,
    /// Why the fit is missing, if it is.
    pub note: Option<String>,
}

/// Closed form compared against the quadrature oracle at one seeded grid degree.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct OracleCheck {
    pub theta: f64,
    pub n: usize,
    pub closed: f64,
    pub quadrature: f64,
    pub error_estimate: f64,
    pub agree: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StudyReport {
    pub config: StudyConfig,
    pub phase_filter: f64,
    pub rows: Vec<StudyRow>,
    pub fits: Vec<FitSummary>,
    pub oracle_checks: Vec<OracleCheck>,
}

fn row(params: JacobiParams, m: usize, n: usize, theta: f64) -> Result<StudyRow> {
    let exact = partial_integral_jacobi_closed(params, n, m, theta.cos())?.value;
    let estimate = asymptotics::asymptotic_integral(params, n, m, theta)?;
    let phase = asymptotics::phase(params, n, theta);
    Ok(StudyRow {
        n,
        theta,
        exact,
        estimate,
        abs_err: (exact - estimate).abs(),
        ratio: (phase.abs() >= PHASE_FILTER).then(|| exact / estimate),
        phase,
    })
}

fn fit(params: JacobiParams, m: usize, grid: &[usize], theta: f64) -> Result<FitSummary> {
    let window = envelope_window(theta);
    let outcome = envelope_decay_fit(
        grid,
        window,
        |n| asymptotics::phase(params, n, theta).abs() >= PHASE_FILTER,
        |n| {
            if n == m {
                Ok(0.0)
            } else {
                asymptotics::integral_error(params, n, m, theta)
            }
        },
    );
    Ok(match outcome {
        Ok(f) => FitSummary {
            theta,
            window,
            slope: Some(f.slope),
            intercept: Some(f.intercept),
            r_squared: Some(f.r_squared),
            points: f.points,
            note: None,
        },
        Err(Error::Fit(reason)) => FitSummary {
            theta,
            window,
            slope: None,
            intercept: None,
            r_squared: None,
            points: 0,
            note: Some(reason),
        },
        Err(e) => return Err(e),
    })
}

fn oracle_check(params: JacobiParams, m: usize, n: usize, theta: f64, tol: f64) -> Result<OracleCheck> {
    let x = theta.cos();
    let closed = partial_integral_jacobi_closed(params, n, m, x)?.value;
    let quad = partial_integral_quadrature(params, n, m, x, tol)?;
    let bound = 1e-10 * closed.abs().max(1.0) + quad.abs_error_estimate;
    Ok(OracleCheck {
        theta,
        n,
        closed,
        quadrature: quad.value,
        error_estimate: quad.abs_error_estimate,
        agree: (closed - quad.value).abs() <= bound,
    })
}

/// Rows for every `(θ, n)` in θ-major order, one decay fit per θ, and one oracle
/// spot check per θ at a grid degree drawn from `config.seed`.
pub fn run_study(config: &StudyConfig) -> Result<StudyReport> {
    config.validate()?;
    let params = config.params()?;
    let grid = config.grid();
    let m = config.m;

    let tasks: Vec<(f64, usize)> = config
        .thetas
        .iter()
        .flat_map(|&t| grid.iter().map(move |&n| (t, n)))
        .collect();
    let rows = tasks
        .par_iter()
        .map(|&(theta, n)| row(params, m, n, theta))
        .collect::<Result<Vec<_>>>()?;
    let fits = config
        .thetas
        .par_iter()
        .map(|&theta| fit(params, m, &grid, theta))
        .collect::<Result<Vec<_>>>()?;

    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let picks: Vec<(f64, usize)> = config
        .thetas
        .iter()
        .map(|&t| (t, grid[rng.gen_range(0..grid.len())]))
        .collect();
    let oracle_checks = picks
        .par_iter()
        .map(|&(theta, n)| oracle_check(params, m, n, theta, config.tol))
        .collect::<Result<Vec<_>>>()?;

    Ok(StudyReport {
        config: config.clone(),
        phase_filter: PHASE_FILTER,
        rows,
        fits,
        oracle_checks,
    })
}

fn opt(x: Option<f64>) -> String {
    x.map_or_else(|| RATIO_SENTINEL.to_string(), g17)
}

impl StudyReport {
    /// Header, one line per row, then a `#`-prefixed footer with the
    /// configuration, fits and oracle checks.
    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        out.push_str(CSV_HEADER);
        out.push('\n');
        for r in &self.rows {
            let _ = writeln!(
                out,
                "{},{},{},{},{},{},{}",
                r.n,
                g17(r.theta),
                g17(r.exact),
                g17(r.estimate),
                g17(r.abs_err),
                opt(r.ratio),
                g17(r.phase)
            );
        }
        let c = &self.config;
        let _ = writeln!(
            out,
            "# config alpha={} beta={} m={} n_min={} n_max={} n_points={} tol={} seed={} phase_filter={}",
            g17(c.alpha),
            g17(c.beta),
            c.m,
            c.n_min,
            c.n_max,
            c.n_points,
            g17(c.tol),
            c.seed,
            g17(self.phase_filter)
        );
        for f in &self.fits {
            match (f.slope, f.intercept, f.r_squared) {
                (Some(s), Some(i), Some(r2)) => {
                    let _ = writeln!(
                        out,
                        "# fit theta={} slope={} intercept={} r_squared={} points={} window={}",
                        g17(f.theta),
                        g17(s),
                        g17(i),
                        g17(r2),
                        f.points,
                        f.window
                    );
                }
                _ => {
                    let _ = writeln!(
                        out,
                        "# fit theta={} unavailable: {}",
                        g17(f.theta),
                        f.note.as_deref().unwrap_or("unknown")
                    );
                }
            }
        }
        for o in &self.oracle_checks {
            let _ = writeln!(
                out,
                "# oracle theta={} n={} closed={} quadrature={} error_estimate={} agree={}",
                g17(o.theta),
                o.n,
                g17(o.closed),
                g17(o.quadrature),
                g17(o.error_estimate),
                o.agree
            );
        }
        out
    }

    pub fn to_json(&self) -> serde_json::Result<String> {
        let mut s = serde_json::to_string_pretty(self)?;
        s.push('\n');
        Ok(s)
    }

    pub fn render(&self) -> anyhow::Result<String> {
        Ok(match self.config.format {
            OutputFormat::Csv => self.to_csv(),
            OutputFormat::Json => self.to_json()?,
        })
    }
}
