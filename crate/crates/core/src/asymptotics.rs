//! Leading-order large-`n` behaviour of `P_n^{(α,β)}(cos θ)` and of the partial
//! integral `∫_{cos θ}^1 P_n P_m w dt`, and tools to measure how fast the
//! remainders decay.
//!
//! With `N = n + (α+β+1)/2` and `γ = -(α+1/2)π/2`:
//!
//! ```text
//! P_n(cos θ)            ≈ k(θ) n^{-1/2} cos(Nθ + γ)
//! ∫_{cos θ}^1 P_n P_m w ≈ ℓ(θ) n^{-3/2} sin(Nθ + γ)
//! ```

use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::integrals::{self, EigenvalueGap};
use crate::polyeval::{self, JacobiParams, Recurrence};

/// Points with `|sin(Nθ+γ)|` below this are excluded from ratio tests and fits.
pub const PHASE_FILTER: f64 = 0.2;

/// Default angles for convergence studies.
pub const DEFAULT_THETAS: [f64; 5] = [0.5, 1.0, std::f64::consts::FRAC_PI_2, 2.0, 2.6];

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AsymptoticConstants {
    /// `N = n + (α+β+1)/2`
    pub big_n: f64,
    /// `γ = -(α+1/2)π/2`
    pub gamma: f64,
    /// `k(θ) = π^{-1/2} sin(θ/2)^{-α-1/2} cos(θ/2)^{-β-1/2}`
    pub k_theta: f64,
    /// `ℓ(θ) = 2^{α+β+1} π^{-1/2} sin(θ/2)^{α+1/2} cos(θ/2)^{β+1/2} P_m(cos θ)`
    pub ell_theta: f64,
}

impl AsymptoticConstants {
    pub fn new(params: JacobiParams, n: usize, m: usize, theta: f64) -> Result<Self> {
        check_theta(theta)?;
        let (a, b) = (params.alpha(), params.beta());
        let (s, c) = ((0.5 * theta).sin(), (0.5 * theta).cos());
        let pm = polyeval::eval_jacobi(params, m, theta.cos())?;
        Ok(Self {
            big_n: n as f64 + 0.5 * params.shift(),
            gamma: -(a + 0.5) * PI / 2.0,
            k_theta: s.powf(-a - 0.5) * c.powf(-b - 0.5) / PI.sqrt(),
            ell_theta: 2f64.powf(a + b + 1.0) / PI.sqrt()
                * s.powf(a + 0.5)
                * c.powf(b + 0.5)
                * pm,
        })
    }

    /// `Nθ + γ`
    pub fn phase_angle(&self, theta: f64) -> f64 {
        self.big_n * theta + self.gamma
    }
}

fn check_theta(theta: f64) -> Result<()> {
    if theta > 0.0 && theta < PI {
        Ok(())
    } else {
        Err(Error::domain(format!("theta must lie strictly inside (0, pi) (got {theta})")))
    }
}

fn check_degree(n: usize, min: usize) -> Result<()> {
    if n < min {
        Err(Error::domain(format!("asymptotic form needs n >= {min} (got {n})")))
    } else {
        Ok(())
    }
}

/// `sin(Nθ + γ)`, the oscillating factor of the integral asymptotic.
pub fn phase(params: JacobiParams, n: usize, theta: f64) -> f64 {
    let big_n = n as f64 + 0.5 * params.shift();
    let gamma = -(params.alpha() + 0.5) * PI / 2.0;
    (big_n * theta + gamma).sin()
}

/// `k(θ) n^{-1/2} cos(Nθ + γ)`, approximating `P_n^{(α,β)}(cos θ)`.
pub fn asymptotic_poly(params: JacobiParams, n: usize, theta: f64) -> Result<f64> {
    check_degree(n, 1)?;
    let c = AsymptoticConstants::new(params, n, 0, theta)?;
    Ok(c.k_theta / (n as f64).sqrt() * c.phase_angle(theta).cos())
}

/// `sin(θ/2)^{-α-3/2} cos(θ/2)^{-β-3/2} ((n-1)π)^{-1/2} sin(Nθ + γ)`, approximating
/// `P_{n-1}^{(α+1,β+1)}(cos θ)` with `N`, `γ` of the unshifted family.
pub fn asymptotic_shifted_poly(params: JacobiParams, n: usize, theta: f64) -> Result<f64> {
    check_degree(n, 2)?;
    let c = AsymptoticConstants::new(params, n, 0, theta)?;
    let (a, b) = (params.alpha(), params.beta());
    let amplitude = (0.5 * theta).sin().powf(-a - 1.5) * (0.5 * theta).cos().powf(-b - 1.5)
        / ((n as f64 - 1.0) * PI).sqrt();
    Ok(amplitude * c.phase_angle(theta).sin())
}

/// `ℓ(θ) n^{-3/2} sin(Nθ + γ)`, approximating `∫_{cos θ}^1 P_n P_m w dt`.
pub fn asymptotic_integral(params: JacobiParams, n: usize, m: usize, theta: f64) -> Result<f64> {
    check_degree(n, 1)?;
    EigenvalueGap::new(params, n, m)?;
    let c = AsymptoticConstants::new(params, n, m, theta)?;
    Ok(c.ell_theta * (n as f64).powf(-1.5) * c.phase_angle(theta).sin())
}

/// Both sides of the exact identity
/// `C I / ((1-x²) w(x)) = (n+α+β+1)/2 · P_{n-1}^{(α+1,β+1)} P_m - (m+α+β+1)/2 · P_{m-1}^{(α+1,β+1)} P_n`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IdentityResidual {
    pub lhs: f64,
    pub rhs: f64,
}

impl IdentityResidual {
    pub fn abs_diff(&self) -> f64 {
        (self.lhs - self.rhs).abs()
    }

    pub fn relative(&self) -> f64 {
        let scale = self.lhs.abs().max(self.rhs.abs());
        if scale == 0.0 {
            0.0
        } else {
            self.abs_diff() / scale
        }
    }
}

pub fn combined_identity_check(
    params: JacobiParams,
    n: usize,
    m: usize,
    x: f64,
) -> Result<IdentityResidual> {
    if n == 0 || m == 0 {
        return Err(Error::domain(format!(
            "identity needs n, m >= 1 (got n = {n}, m = {m})"
        )));
    }
    if !(x > -1.0 && x < 1.0) {
        return Err(Error::domain(format!("x must lie in (-1, 1) (got {x})")));
    }
    let gap = EigenvalueGap::new(params, n, m)?;
    let integral = integrals::partial_integral_jacobi_closed(params, n, m, x)?.value;
    let weight = polyeval::eval_weight(params, x)?;
    let lhs = gap.value() * integral / ((1.0 - x * x) * weight);

    let raised = params.raised();
    let eval = |p, k| polyeval::eval_jacobi(p, k, x);
    let rhs = 0.5 * (n as f64 + params.shift()) * eval(raised, n - 1)? * eval(params, m)?
        - 0.5 * (m as f64 + params.shift()) * eval(raised, m - 1)? * eval(params, n)?;
    Ok(IdentityResidual { lhs, rhs })
}

/// `|P_n(cos θ) - k(θ) n^{-1/2} cos(Nθ + γ)|`.
pub fn poly_error(params: JacobiParams, n: usize, theta: f64) -> Result<f64> {
    let exact = polyeval::eval_jacobi(params, n, theta.cos())?;
    Ok((exact - asymptotic_poly(params, n, theta)?).abs())
}

/// `|P_{n-1}^{(α+1,β+1)}(cos θ) - asymptotic_shifted_poly|`.
pub fn shifted_poly_error(params: JacobiParams, n: usize, theta: f64) -> Result<f64> {
    let exact = polyeval::eval_jacobi(params.raised(), n - 1, theta.cos())?;
    Ok((exact - asymptotic_shifted_poly(params, n, theta)?).abs())
}

/// `|∫_{cos θ}^1 P_n P_m w - ℓ(θ) n^{-3/2} sin(Nθ + γ)|` with the closed form as exact value.
pub fn integral_error(params: JacobiParams, n: usize, m: usize, theta: f64) -> Result<f64> {
    let exact = integrals::partial_integral_jacobi_closed(params, n, m, theta.cos())?.value;
    Ok((exact - asymptotic_integral(params, n, m, theta)?).abs())
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DecayFit {
    pub slope: f64,
    pub intercept: f64,
    pub r_squared: f64,
    pub n_range: (usize, usize),
    pub points: usize,
}

pub const MIN_FIT_POINTS: usize = 8;

/// Least-squares line through `(ln n, ln err)`.
pub fn fit_decay_exponent(errors: &[(usize, f64)]) -> Result<DecayFit> {
    if errors.len() < MIN_FIT_POINTS {
        return Err(Error::Fit(format!(
            "need at least {MIN_FIT_POINTS} points, got {}",
            errors.len()
        )));
    }
    if let Some(&(n, e)) = errors.iter().find(|&&(n, e)| n == 0 || !e.is_finite() || e <= 0.0) {
        return Err(Error::Fit(format!("nonpositive data point (n = {n}, err = {e})")));
    }
    if errors.windows(2).any(|w| w[1].0 <= w[0].0) {
        return Err(Error::Fit("n must be strictly increasing".into()));
    }
    let k = errors.len() as f64;
    let (xs, ys): (Vec<f64>, Vec<f64>) = errors
        .iter()
        .map(|&(n, e)| ((n as f64).ln(), e.ln()))
        .unzip();
    let mean_x = xs.iter().sum::<f64>() / k;
    let mean_y = ys.iter().sum::<f64>() / k;
    let sxx: f64 = xs.iter().map(|x| (x - mean_x).powi(2)).sum();
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mean_x) * (y - mean_y)).sum();
    let syy: f64 = ys.iter().map(|y| (y - mean_y).powi(2)).sum();
    let slope = sxy / sxx;
    let intercept = mean_y - slope * mean_x;
    let r_squared = if syy == 0.0 {
        1.0
    } else {
        (sxy * sxy / (sxx * syy)).clamp(0.0, 1.0)
    };
    Ok(DecayFit {
        slope,
        intercept,
        r_squared,
        n_range: (errors[0].0, errors[errors.len() - 1].0),
        points: errors.len(),
    })
}

/// `points` geometrically spaced integers from `n_min` to `n_max`, rounded, duplicates dropped.
pub fn geometric_grid(n_min: usize, n_max: usize, points: usize) -> Vec<usize> {
    if points == 0 || n_min == 0 {
        return Vec::new();
    }
    if points == 1 || n_max <= n_min {
        return vec![n_min];
    }
    let ratio = (n_max as f64 / n_min as f64).ln() / (points - 1) as f64;
    let mut grid: Vec<usize> = (0..points)
        .map(|i| (n_min as f64 * (ratio * i as f64).exp()).round() as usize)
        .collect();
    grid.dedup();
    grid
}

/// Consecutive degrees covered by one envelope window at angle `theta`: at least 8
/// and at least one full period `2π/θ` of the oscillation.
pub fn envelope_window(theta: f64) -> usize {
    ((2.0 * PI / theta).ceil() as usize + 1).max(8)
}

/// `max_{n <= k < n + window} err(k)`.
pub fn windowed_envelope(
    n: usize,
    window: usize,
    err: impl Fn(usize) -> Result<f64>,
) -> Result<f64> {
    (n..n + window.max(1)).try_fold(0.0f64, |acc, k| Ok(acc.max(err(k)?)))
}

/// Fit the decay of the windowed error envelope over `grid`, keeping only degrees
/// accepted by `keep`.
pub fn envelope_decay_fit(
    grid: &[usize],
    window: usize,
    keep: impl Fn(usize) -> bool,
    err: impl Fn(usize) -> Result<f64>,
) -> Result<DecayFit> {
    let samples = grid
        .iter()
        .filter(|&&n| keep(n))
        .map(|&n| Ok((n, windowed_envelope(n, window, &err)?)))
        .collect::<Result<Vec<_>>>()?;
    fit_decay_exponent(&samples)
}

/// An angle `θ ∈ (lo, hi)` with `P_m^{(α,β)}(cos θ) = 0`, by bisection. The
/// bracket must contain a sign change.
pub fn root_angle(params: JacobiParams, m: usize, lo: f64, hi: f64) -> Result<f64> {
    check_theta(lo)?;
    check_theta(hi)?;
    let kernel = Recurrence::STANDARD;
    let f = |t: f64| kernel.eval_unchecked(params, m, t.cos());
    let (mut a, mut b) = (lo.min(hi), lo.max(hi));
    let (mut fa, fb) = (f(a), f(b));
    if fa == 0.0 {
        return Ok(a);
    }
    if fb == 0.0 {
        return Ok(b);
    }
    if fa.signum() == fb.signum() {
        return Err(Error::domain(format!(
            "no sign change of P_{m} on theta in [{a}, {b}]"
        )));
    }
    for _ in 0..200 {
        let mid = 0.5 * (a + b);
        if mid <= a || mid >= b {
            break;
        }
        let fm = f(mid);
        if fm == 0.0 {
            return Ok(mid);
        }
        if fm.signum() == fa.signum() {
            a = mid;
            fa = fm;
        } else {
            b = mid;
        }
    }
    Ok(0.5 * (a + b))
}
