//! Jacobi polynomials in the standard normalization `P_n^{(α,β)}(1) = (α+1)_n / n!`.
//!
//! Values come from the three-term recurrence; [`eval_jacobi_explicit`] evaluates the
//! terminating hypergeometric sum and exists as an independent cross-check.

use crate::compensated::DoubleDouble;
use crate::error::{Error, Result};

/// Highest degree accepted by [`eval_jacobi_explicit`].
pub const EXPLICIT_MAX_DEGREE: usize = 30;

/// Exponent pair `(α, β)` of the weight `(1-x)^α (1+x)^β`, both strictly above `-1`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct JacobiParams {
    alpha: f64,
    beta: f64,
}

impl JacobiParams {
    pub fn new(alpha: f64, beta: f64) -> Result<Self> {
        // `!(a > -1)` also rejects NaN
        if !alpha.is_finite() || !beta.is_finite() || alpha <= -1.0 || beta <= -1.0 {
            return Err(Error::ParameterDomain { alpha, beta });
        }
        Ok(Self { alpha, beta })
    }

    /// The Legendre family, `α = β = 0`.
    pub const LEGENDRE: Self = Self {
        alpha: 0.0,
        beta: 0.0,
    };

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    /// `α + β + 1`, the offset appearing in every eigenvalue `n(n+α+β+1)`.
    pub fn shift(&self) -> f64 {
        self.alpha + self.beta + 1.0
    }

    /// Parameters of the derivative family `(α+1, β+1)`.
    pub fn raised(&self) -> Self {
        Self {
            alpha: self.alpha + 1.0,
            beta: self.beta + 1.0,
        }
    }

    /// The mirrored family `(β, α)`.
    pub fn swapped(&self) -> Self {
        Self {
            alpha: self.beta,
            beta: self.alpha,
        }
    }

    /// Eigenvalue `n(n+α+β+1)` of the Jacobi differential operator.
    pub fn eigenvalue(&self, n: usize) -> f64 {
        let n = n as f64;
        n * (n + self.shift())
    }
}

/// Three-term recurrence kernel.
///
/// `perturbation` scales the `P_{n-2}` coefficient by `1 + perturbation`. It is zero
/// for [`Recurrence::STANDARD`]; nonzero values are for mutation testing of the
/// verification suites only.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Recurrence {
    perturbation: f64,
}

impl Default for Recurrence {
    fn default() -> Self {
        Self::STANDARD
    }
}

impl Recurrence {
    pub const STANDARD: Self = Self { perturbation: 0.0 };

    pub fn with_perturbation(perturbation: f64) -> Self {
        Self { perturbation }
    }

    pub fn is_standard(&self) -> bool {
        self.perturbation == 0.0
    }

    /// `P_n^{(α,β)}(x)`.
    pub fn eval(&self, params: JacobiParams, n: usize, x: f64) -> Result<f64> {
        check_finite(x)?;
        Ok(self.eval_unchecked(params, n, x))
    }

    /// `d/dx P_n^{(α,β)}(x) = (n+α+β+1)/2 · P_{n-1}^{(α+1,β+1)}(x)`, zero for `n = 0`.
    pub fn derivative(&self, params: JacobiParams, n: usize, x: f64) -> Result<f64> {
        check_finite(x)?;
        Ok(self.derivative_unchecked(params, n, x))
    }

    pub(crate) fn derivative_unchecked(&self, params: JacobiParams, n: usize, x: f64) -> f64 {
        if n == 0 {
            return 0.0;
        }
        0.5 * (n as f64 + params.shift()) * self.eval_unchecked(params.raised(), n - 1, x)
    }

    /// Second derivative from two applications of the shift formula.
    pub fn second_derivative(&self, params: JacobiParams, n: usize, x: f64) -> Result<f64> {
        check_finite(x)?;
        Ok(self.second_derivative_unchecked(params, n, x))
    }

    pub(crate) fn second_derivative_unchecked(
        &self,
        params: JacobiParams,
        n: usize,
        x: f64,
    ) -> f64 {
        if n < 2 {
            return 0.0;
        }
        let n_f = n as f64;
        let (a, b) = (params.alpha, params.beta);
        0.25 * (n_f + a + b + 1.0)
            * (n_f + a + b + 2.0)
            * self.eval_unchecked(params.raised().raised(), n - 2, x)
    }

    pub(crate) fn eval_unchecked(&self, params: JacobiParams, n: usize, x: f64) -> f64 {
        let (a, b) = (params.alpha, params.beta);
        let p0 = 1.0;
        if n == 0 {
            return p0;
        }
        // The recurrence has a double characteristic root at x = ±1, where rounding
        // errors grow like n²; the endpoint values are known in closed form.
        if self.is_standard() && (x == 1.0 || x == -1.0) {
            return endpoint_value(params, n, x);
        }
        let p1 = (a + 1.0) + 0.5 * (a + b + 2.0) * (x - 1.0);
        if n == 1 {
            return p1;
        }
        let (mut prev, mut cur) = (p0, p1);
        let ab_diff = a * a - b * b;
        for k in 2..=n {
            let k_f = k as f64;
            let c = 2.0 * k_f + a + b;
            let denom = 2.0 * k_f * (k_f + a + b) * (c - 2.0);
            let lin = (c - 1.0) * (c * (c - 2.0) * x + ab_diff);
            let back =
                2.0 * (k_f + a - 1.0) * (k_f + b - 1.0) * c * (1.0 + self.perturbation);
            let next = (lin * cur - back * prev) / denom;
            prev = cur;
            cur = next;
        }
        cur
    }
}

/// `P_n(1) = (α+1)_n / n!`, `P_n(-1) = (-1)^n (β+1)_n / n!`.
fn endpoint_value(params: JacobiParams, n: usize, x: f64) -> f64 {
    let (exp, sign) = if x > 0.0 {
        (params.alpha, 1.0)
    } else {
        (params.beta, if n.is_multiple_of(2) { 1.0 } else { -1.0 })
    };
    sign * (0..n).fold(1.0, |acc, k| acc * (exp + 1.0 + k as f64) / (k + 1) as f64)
}

fn check_finite(x: f64) -> Result<()> {
    if x.is_finite() {
        Ok(())
    } else {
        Err(Error::domain(format!("evaluation point must be finite (got {x})")))
    }
}

/// `P_n^{(α,β)}(x)` by the three-term recurrence.
pub fn eval_jacobi(params: JacobiParams, n: usize, x: f64) -> Result<f64> {
    Recurrence::STANDARD.eval(params, n, x)
}

/// `P_n^{(α,β)}(x)` from the terminating sum
/// `(α+1)_n/n! · Σ_k (-n)_k (n+α+β+1)_k / ((α+1)_k k!) · ((1-x)/2)^k`.
///
/// Accumulated in double-double; limited to `n <= EXPLICIT_MAX_DEGREE`.
pub fn eval_jacobi_explicit(params: JacobiParams, n: usize, x: f64) -> Result<f64> {
    check_finite(x)?;
    if n > EXPLICIT_MAX_DEGREE {
        return Err(Error::AccuracyDomain {
            n,
            max: EXPLICIT_MAX_DEGREE,
        });
    }
    let dd = DoubleDouble::from;
    let half = dd(0.5);
    let y = DoubleDouble::from_sum(1.0, -x) * half;

    // (α+1)_n / n!
    let mut term = DoubleDouble::ONE;
    for k in 0..n {
        let num = DoubleDouble::from_sum(params.alpha, 1.0 + k as f64);
        term = term * num / dd((k + 1) as f64);
    }
    let ab = DoubleDouble::from_sum(params.alpha, params.beta);
    let mut sum = term;
    for k in 0..n {
        let rising_top = ab + dd((n + 1 + k) as f64);
        let rising_bottom = DoubleDouble::from_sum(params.alpha, 1.0 + k as f64);
        let ratio = dd(k as f64 - n as f64) * rising_top / (rising_bottom * dd((k + 1) as f64));
        term = term * ratio * y;
        sum = sum + term;
    }
    Ok(sum.to_f64())
}

/// `d/dx P_n^{(α,β)}(x)` via the shift formula.
pub fn eval_jacobi_derivative(params: JacobiParams, n: usize, x: f64) -> Result<f64> {
    Recurrence::STANDARD.derivative(params, n, x)
}

/// `2^n (n!)² / (2n)!`, the reciprocal leading coefficient of the standard Legendre `P_n`.
pub fn legendre_monic_scale(n: usize) -> f64 {
    (1..=n).fold(1.0, |acc, k| acc * k as f64 / (2 * k - 1) as f64)
}

/// Monic Legendre polynomial.
pub fn eval_legendre_monic(n: usize, x: f64) -> Result<f64> {
    Ok(legendre_monic_scale(n) * eval_jacobi(JacobiParams::LEGENDRE, n, x)?)
}

/// Derivative of the monic Legendre polynomial.
pub fn eval_legendre_monic_derivative(n: usize, x: f64) -> Result<f64> {
    Ok(legendre_monic_scale(n) * eval_jacobi_derivative(JacobiParams::LEGENDRE, n, x)?)
}

/// `w(x) = (1-x)^α (1+x)^β` on `[-1, 1]`.
///
/// At an endpoint whose exponent is negative the weight is infinite and an
/// [`Error::EndpointPole`] is returned instead.
pub fn eval_weight(params: JacobiParams, x: f64) -> Result<f64> {
    if !(-1.0..=1.0).contains(&x) {
        return Err(Error::domain(format!("weight is evaluated on [-1, 1] (got x = {x})")));
    }
    if (x == 1.0 && params.alpha < 0.0) || (x == -1.0 && params.beta < 0.0) {
        return Err(Error::EndpointPole { x });
    }
    Ok(power(1.0 - x, params.alpha) * power(1.0 + x, params.beta))
}

/// `base^exp` with `0^0 = 1`.
pub(crate) fn power(base: f64, exp: f64) -> f64 {
    if exp == 0.0 {
        1.0
    } else {
        base.powf(exp)
    }
}

/// The augmented Wronskian `φ_n(m; α, β, x)` together with its inputs.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WronskianValue {
    pub value: f64,
    pub n: usize,
    pub m: usize,
    pub params: JacobiParams,
    pub x: f64,
}

/// `φ_n(m; α, β, x) = P_m(x) P_n'(x) - P_n(x) P_m'(x)`.
pub fn wronskian(params: JacobiParams, n: usize, m: usize, x: f64) -> Result<WronskianValue> {
    Recurrence::STANDARD.wronskian(params, n, m, x)
}

impl Recurrence {
    pub fn wronskian(
        &self,
        params: JacobiParams,
        n: usize,
        m: usize,
        x: f64,
    ) -> Result<WronskianValue> {
        check_finite(x)?;
        Ok(WronskianValue {
            value: self.wronskian_unchecked(params, n, m, x),
            n,
            m,
            params,
            x,
        })
    }

    pub(crate) fn wronskian_unchecked(&self, params: JacobiParams, n: usize, m: usize, x: f64) -> f64 {
        if n == m {
            return 0.0;
        }
        // Both orders evaluate the same four factors; swapping (n, m) negates exactly.
        let (lo, hi, sign) = if n < m { (n, m, -1.0) } else { (m, n, 1.0) };
        let p_lo = self.eval_unchecked(params, lo, x);
        let p_hi = self.eval_unchecked(params, hi, x);
        let d_lo = self.derivative_unchecked(params, lo, x);
        let d_hi = self.derivative_unchecked(params, hi, x);
        sign * (p_lo * d_hi - p_hi * d_lo)
    }
}
