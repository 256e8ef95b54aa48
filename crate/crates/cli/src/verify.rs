//! Seeded invariant suites behind the `verify` subcommand.

use std::f64::consts::PI;

use jacobi_wronskian::asymptotics::{
    self, combined_identity_check, envelope_decay_fit, envelope_window, geometric_grid,
    PHASE_FILTER,
};
use jacobi_wronskian::integrals::{
    double_integral_ipl4, double_integral_partial, ipl4_to_phi_factor, orthogonality_residual_with,
    partial_integral_jacobi_closed, partial_integral_legendre, partial_integral_quadrature_with,
    phi_orthogonality, phi_product_partial, EigenvalueGap, LegendreNormalization,
};
use jacobi_wronskian::polyeval::{eval_jacobi_explicit, JacobiParams, Recurrence};
use jacobi_wronskian::Result;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::format::g17;

/// Counterexamples printed per failing suite.
pub const SHOWN_COUNTEREXAMPLES: usize = 5;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VerifyOptions {
    pub seed: u64,
    pub quick: bool,
    /// Relative perturbation of the recurrence's `P_{k-2}` coefficient.
    pub fault: Option<f64>,
}

impl VerifyOptions {
    fn kernel(&self) -> Recurrence {
        self.fault.map_or(Recurrence::STANDARD, Recurrence::with_perturbation)
    }

    fn max_degree(&self, full: usize) -> usize {
        if self.quick {
            full.min(50)
        } else {
            full
        }
    }

    fn count(&self, full: usize) -> usize {
        if self.quick {
            (full / 4).max(5)
        } else {
            full
        }
    }

    fn rng(&self, suite: u64) -> ChaCha8Rng {
        ChaCha8Rng::seed_from_u64(self.seed ^ suite.wrapping_mul(0x9E37_79B9_7F4A_7C15))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SuiteReport {
    pub name: &'static str,
    pub checks: usize,
    pub failures: Vec<String>,
    pub notes: Vec<String>,
}

impl SuiteReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }

    /// Distinct check labels with at least one failure, with counts, in first-failure order.
    pub fn failing_checks(&self) -> Vec<String> {
        let mut seen: Vec<(&str, usize)> = Vec::new();
        for f in &self.failures {
            let label = f.split(": ").next().unwrap_or(f);
            match seen.iter_mut().find(|(l, _)| *l == label) {
                Some((_, c)) => *c += 1,
                None => seen.push((label, 1)),
            }
        }
        seen.into_iter().map(|(l, c)| format!("{l} ({c})")).collect()
    }

    fn new(name: &'static str) -> Self {
        Self { name, checks: 0, failures: Vec::new(), notes: Vec::new() }
    }

    /// Fold in one batch of per-case outcomes, in input order.
    fn absorb(&mut self, label: &str, outcomes: Vec<Result<Option<String>>>) {
        for o in outcomes {
            self.checks += 1;
            match o {
                Ok(None) => {}
                Ok(Some(detail)) => self.failures.push(format!("{label}: {detail}")),
                Err(e) => self.failures.push(format!("{label}: error: {e}")),
            }
        }
    }

    pub fn render(&self) -> String {
        let status = if self.passed() { "PASS" } else { "FAIL" };
        let mut out = format!(
            "{}: {status} ({} checks, {} failures)\n",
            self.name,
            self.checks,
            self.failures.len()
        );
        if !self.passed() {
            out.push_str(&format!("  failing checks: {}\n", self.failing_checks().join(", ")));
        }
        for f in self.failures.iter().take(SHOWN_COUNTEREXAMPLES) {
            out.push_str(&format!("  counterexample {f}\n"));
        }
        for n in &self.notes {
            out.push_str(&format!("  note: {n}\n"));
        }
        out
    }
}

fn exponent(rng: &mut ChaCha8Rng) -> f64 {
    rng.gen_range(-0.9..=3.0)
}

fn params(rng: &mut ChaCha8Rng) -> JacobiParams {
    JacobiParams::new(exponent(rng), exponent(rng)).expect("sampled exponents exceed -1")
}

fn show(p: JacobiParams) -> String {
    format!("alpha={} beta={}", g17(p.alpha()), g17(p.beta()))
}

fn check(ok: bool, detail: impl FnOnce() -> String) -> Option<String> {
    (!ok).then(detail)
}

fn central_difference(f: impl Fn(f64) -> f64, x: f64, h: f64) -> f64 {
    (-f(x + 2.0 * h) + 8.0 * f(x + h) - 8.0 * f(x - h) + f(x - 2.0 * h)) / (12.0 * h)
}

pub fn poly_suite(opts: &VerifyOptions) -> SuiteReport {
    let mut rep = SuiteReport::new("poly");
    let mut rng = opts.rng(1);
    let k = opts.kernel();
    let cases = opts.count(400);

    let explicit: Vec<_> = (0..cases)
        .map(|_| (params(&mut rng), rng.gen_range(0..=20usize), rng.gen_range(-1.0..=1.0)))
        .collect();
    rep.absorb(
        "recurrence vs explicit",
        explicit
            .par_iter()
            .map(|&(p, n, x)| {
                let rec = k.eval(p, n, x)?;
                let exp = eval_jacobi_explicit(p, n, x)?;
                Ok(check((rec - exp).abs() <= 1e-12 * rec.abs().max(1.0), || {
                    format!("{} n={n} x={}: recurrence={} explicit={}", show(p), g17(x), g17(rec), g17(exp))
                }))
            })
            .collect(),
    );

    let n_max = opts.max_degree(200);
    let endpoint: Vec<_> = (0..cases).map(|_| (params(&mut rng), rng.gen_range(0..=n_max))).collect();
    rep.absorb(
        "endpoint value",
        endpoint
            .par_iter()
            .map(|&(p, n)| {
                let expected =
                    (0..n).fold(1.0, |acc, j| acc * (p.alpha() + 1.0 + j as f64) / (j + 1) as f64);
                let got = k.eval(p, n, 1.0)?;
                Ok(check((got - expected).abs() <= 1e-13 * expected.abs(), || {
                    format!("{} n={n}: got {} expected {}", show(p), g17(got), g17(expected))
                }))
            })
            .collect(),
    );

    let n_max = opts.max_degree(100);
    let sym: Vec<_> = (0..cases)
        .map(|_| (params(&mut rng), rng.gen_range(0..=n_max), rng.gen_range(-1.0..=1.0)))
        .collect();
    rep.absorb(
        "reflection symmetry",
        sym.par_iter()
            .map(|&(p, n, x)| {
                let left = k.eval(p, n, -x)?;
                let sign = if n % 2 == 0 { 1.0 } else { -1.0 };
                let right = sign * k.eval(p.swapped(), n, x)?;
                Ok(check((left - right).abs() <= 1e-12 * left.abs().max(1.0), || {
                    format!("{} n={n} x={}: {} vs {}", show(p), g17(x), g17(left), g17(right))
                }))
            })
            .collect(),
    );

    // Richardson on two 4th-order differences; the raw difference at h = 1e-4
    // carries a truncation error that can exceed 1e-7 for large n near |x| = 0.9.
    let deriv: Vec<_> = (0..cases)
        .map(|_| (params(&mut rng), rng.gen_range(1..=50usize), rng.gen_range(-0.9..=0.9)))
        .collect();
    rep.absorb(
        "shift-formula derivative",
        deriv
            .par_iter()
            .map(|&(p, n, x)| {
                let f = |t: f64| k.eval(p, n, t).unwrap_or(f64::NAN);
                let h = 1e-4;
                let fd = (16.0 * central_difference(f, x, h / 2.0) - central_difference(f, x, h)) / 15.0;
                let d = k.derivative(p, n, x)?;
                let scale = f(x).abs().max(d.abs()).max(1.0);
                Ok(check((fd - d).abs() <= 1e-7 * scale, || {
                    format!("{} n={n} x={}: shift={} difference={}", show(p), g17(x), g17(d), g17(fd))
                }))
            })
            .collect(),
    );

    let n_max = opts.max_degree(60);
    let anti: Vec<_> = (0..cases)
        .map(|_| {
            (params(&mut rng), rng.gen_range(0..=n_max), rng.gen_range(0..=n_max), rng.gen_range(-1.0..=1.0))
        })
        .collect();
    rep.absorb(
        "wronskian antisymmetry",
        anti.par_iter()
            .map(|&(p, n, m, x)| {
                let f = k.wronskian(p, n, m, x)?.value;
                let b = k.wronskian(p, m, n, x)?.value;
                Ok(check(f == -b, || format!("{} n={n} m={m} x={}: {} vs {}", show(p), g17(x), g17(f), g17(b))))
            })
            .collect(),
    );

    let n_max = opts.max_degree(100);
    let ode: Vec<_> = (0..opts.count(100))
        .map(|_| (params(&mut rng), rng.gen_range(1..=n_max), rng.gen_range(-0.99..=0.99)))
        .collect();
    rep.absorb(
        "differential equation",
        ode.par_iter()
            .map(|&(p, n, x)| {
                let (a, b) = (p.alpha(), p.beta());
                let r = (1.0 - x * x) * k.second_derivative(p, n, x)?
                    + (b - a - (a + b + 2.0) * x) * k.derivative(p, n, x)?
                    + p.eigenvalue(n) * k.eval(p, n, x)?;
                Ok(check(r.abs() <= 1e-8 * (n * n) as f64, || {
                    format!("{} n={n} x={}: residual {}", show(p), g17(x), g17(r))
                }))
            })
            .collect(),
    );
    rep
}

const XS: [f64; 5] = [-0.9, -0.5, 0.0, 0.5, 0.9];

pub fn integrals_suite(opts: &VerifyOptions) -> SuiteReport {
    let mut rep = SuiteReport::new("integrals");
    let mut rng = opts.rng(2);
    let k = opts.kernel();

    let n_max = opts.max_degree(200);
    let oracle: Vec<_> = (0..opts.count(200))
        .map(|_| {
            let p = params(&mut rng);
            let n = rng.gen_range(0..=n_max);
            let mut m = rng.gen_range(0..=10usize);
            if m == n {
                m = (m + 1) % 11;
            }
            (p, n, m, XS[rng.gen_range(0..XS.len())])
        })
        .collect();
    rep.absorb(
        "closed form vs oracle",
        oracle
            .par_iter()
            .map(|&(p, n, m, x)| {
                let closed = partial_integral_jacobi_closed(p, n, m, x)?.value;
                let quad = partial_integral_quadrature_with(k, p, n, m, x, 1e-11 * closed.abs().max(1.0))?;
                let bound = 1e-10 * closed.abs().max(1.0) + quad.abs_error_estimate;
                Ok(check((closed - quad.value).abs() <= bound, || {
                    format!(
                        "{} n={n} m={m} x={}: closed={} quadrature={} bound={}",
                        show(p),
                        g17(x),
                        g17(closed),
                        g17(quad.value),
                        g17(bound)
                    )
                }))
            })
            .collect(),
    );

    let n_max = opts.max_degree(50);
    let orth: Vec<_> = (0..opts.count(50))
        .map(|_| {
            let p = params(&mut rng);
            let n = rng.gen_range(1..=n_max);
            let mut m = rng.gen_range(0..=n_max);
            if m == n {
                m = n - 1;
            }
            (p, n, m)
        })
        .collect();
    rep.absorb(
        "orthogonality",
        orth.par_iter()
            .map(|&(p, n, m)| {
                let r = orthogonality_residual_with(k, p, n, m, 1e-12)?;
                Ok(check(r <= 1e-10, || format!("{} n={n} m={m}: residual {}", show(p), g17(r))))
            })
            .collect(),
    );

    let legendre: Vec<_> = (0..opts.count(100))
        .map(|_| {
            let n = rng.gen_range(0..=opts.max_degree(100));
            let mut m = rng.gen_range(0..=20usize);
            if m == n {
                m += 1;
            }
            (n, m, rng.gen_range(-1.0..=1.0))
        })
        .collect();
    rep.absorb(
        "legendre consistency",
        legendre
            .par_iter()
            .map(|&(n, m, x)| {
                let leg = partial_integral_legendre(n, m, x, LegendreNormalization::Standard)?.value;
                let jac = partial_integral_jacobi_closed(JacobiParams::LEGENDRE, n, m, x)?.value;
                Ok(check((leg - jac).abs() <= 1e-12 * leg.abs() + 1e-300, || {
                    format!("n={n} m={m} x={}: legendre={} jacobi={}", g17(x), g17(leg), g17(jac))
                }))
            })
            .collect(),
    );

    let gaps: Vec<_> = (0..opts.count(400))
        .map(|_| {
            let p = params(&mut rng);
            let n = rng.gen_range(0..=500usize);
            let m = (n + rng.gen_range(1..=500usize)) % 501;
            (p, n, if m == n { n + 1 } else { m })
        })
        .collect();
    rep.absorb(
        "endpoint zeros and nonzero gap",
        gaps.par_iter()
            .map(|&(p, n, m)| {
                let gap = EigenvalueGap::new(p, n, m)?.value();
                let lo = partial_integral_jacobi_closed(p, n, m, -1.0)?.value;
                let hi = partial_integral_jacobi_closed(p, n, m, 1.0)?.value;
                Ok(check(gap != 0.0 && gap.is_finite() && lo == 0.0 && hi == 0.0, || {
                    format!("{} n={n} m={m}: gap={} at -1: {} at 1: {}", show(p), g17(gap), g17(lo), g17(hi))
                }))
            })
            .collect(),
    );

    let pairs: Vec<_> = (0..opts.count(20))
        .map(|_| {
            let p = params(&mut rng);
            let n = rng.gen_range(2..=20usize);
            (p, n, rng.gen_range(1..n))
        })
        .collect();
    rep.absorb(
        "double integral identities",
        pairs
            .par_iter()
            .map(|&(p, n, m)| {
                let ipl4 = double_integral_ipl4(p, n, m, 1e-12)?;
                let phi = phi_orthogonality(p, n, m, 1e-12)?;
                let factor = ipl4_to_phi_factor(p, n, m);
                // relative tolerances floored near roundoff: a coarse pass sets the
                // scale, and the raw double integral is smaller than phi by `factor`
                let scale = phi_product_partial(p, n, m, 0.1, 1e-10)?.value.abs();
                let tol = (1e-12 * scale).max(1e-15);
                let phi_part = phi_product_partial(p, n, m, 0.1, tol)?;
                let ipl4_part = double_integral_partial(p, n, m, 0.1, tol / factor)?;
                let (partial_phi, partial_ipl4) = (phi_part.value, factor * ipl4_part.value);
                let bound = 1e-9 * partial_phi.abs()
                    + phi_part.error_estimate
                    + factor * ipl4_part.error_estimate;
                let ok = ipl4.abs() <= 1e-9
                    && phi.abs() <= 1e-9
                    && (partial_ipl4 - partial_phi).abs() <= bound;
                Ok(check(ok, || {
                    format!(
                        "{} n={n} m={m}: ipl4={} phi={} partial {} vs {}",
                        show(p),
                        g17(ipl4),
                        g17(phi),
                        g17(partial_ipl4),
                        g17(partial_phi)
                    )
                }))
            })
            .collect(),
    );
    rep
}

/// Configurations `(α, β, m, θ)` for the decay-rate checks.
pub const RATE_CONFIGS: [(f64, f64, usize, f64); 3] =
    [(0.0, 0.0, 0, PI / 2.0), (0.3, 1.2, 2, 2.0), (1.5, -0.5, 1, 1.0)];

pub fn asymptotics_suite(opts: &VerifyOptions) -> SuiteReport {
    let mut rep = SuiteReport::new("asymptotics");
    let mut rng = opts.rng(3);

    let n_max = opts.max_degree(200);
    let identity_cases: Vec<_> = (0..opts.count(100))
        .map(|_| {
            let p = params(&mut rng);
            let n = rng.gen_range(1..=n_max);
            let mut m = rng.gen_range(1..=10usize);
            if m == n {
                m = if n > 1 { n - 1 } else { 2 };
            }
            (p, n, m, rng.gen_range(-0.99..=0.99))
        })
        .collect();
    rep.absorb(
        "exact combined identity",
        identity_cases
            .par_iter()
            .map(|&(p, n, m, x)| {
                let r = combined_identity_check(p, n, m, x)?;
                Ok(check(r.relative() <= 1e-10, || {
                    format!("{} n={n} m={m} x={}: lhs={} rhs={}", show(p), g17(x), g17(r.lhs), g17(r.rhs))
                }))
            })
            .collect(),
    );

    if opts.quick {
        rep.notes.push("decay-rate fits need n up to 2000 and are skipped in quick mode".into());
        return rep;
    }

    let grid = geometric_grid(50, 2000, 24);
    rep.absorb(
        "decay exponents",
        RATE_CONFIGS
            .par_iter()
            .map(|&(a, b, m, theta)| {
                let p = JacobiParams::new(a, b)?;
                let w = envelope_window(theta);
                let poly = envelope_decay_fit(&grid, w, |_| true, |n| asymptotics::poly_error(p, n, theta))?;
                let integral = envelope_decay_fit(
                    &grid,
                    w,
                    |n| asymptotics::phase(p, n, theta).abs() >= PHASE_FILTER,
                    |n| asymptotics::integral_error(p, n, m, theta),
                )?;
                let ok = (-1.65..=-1.35).contains(&poly.slope)
                    && poly.r_squared >= 0.98
                    && (-2.65..=-2.35).contains(&integral.slope)
                    && integral.r_squared >= 0.98;
                Ok(check(ok, || {
                    format!(
                        "{} m={m} theta={}: polynomial slope={} r2={} integral slope={} r2={}",
                        show(p),
                        g17(theta),
                        g17(poly.slope),
                        g17(poly.r_squared),
                        g17(integral.slope),
                        g17(integral.r_squared)
                    )
                }))
            })
            .collect(),
    );
    rep.absorb(
        "ratio at n = 1000",
        RATE_CONFIGS
            .par_iter()
            .map(|&(a, b, m, theta)| {
                let p = JacobiParams::new(a, b)?;
                let n = (1000..).find(|&n| asymptotics::phase(p, n, theta).abs() >= PHASE_FILTER).unwrap();
                let exact = partial_integral_jacobi_closed(p, n, m, theta.cos())?.value;
                let est = asymptotics::asymptotic_integral(p, n, m, theta)?;
                let r = (exact / est - 1.0).abs();
                Ok(check(r <= 0.05, || format!("{} m={m} theta={} n={n}: |ratio - 1| = {}", show(p), g17(theta), g17(r))))
            })
            .collect(),
    );
    rep
}

pub fn run_all(opts: &VerifyOptions) -> Vec<SuiteReport> {
    vec![poly_suite(opts), integrals_suite(opts), asymptotics_suite(opts)]
}
