//! `∫_x^1 P_n P_m w dt` by the Wronskian closed form and by quadrature, plus the
//! orthogonality identities that follow from it.

use crate::error::{Error, Result};
use crate::polyeval::{self, power, JacobiParams, Recurrence};
use crate::quadrature::{self, QuadratureEstimate, QuadratureOptions};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Method {
    ClosedForm,
    Quadrature,
}

impl Method {
    pub fn as_str(&self) -> &'static str {
        match self {
            Method::ClosedForm => "closed_form",
            Method::Quadrature => "quadrature",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IntegralResult {
    pub value: f64,
    pub method: Method,
    /// Summed refinement differences for quadrature; zero for closed forms.
    pub abs_error_estimate: f64,
    pub n: usize,
    pub m: usize,
    pub params: JacobiParams,
    pub lower_limit: f64,
}

/// `C = n(n+α+β+1) - m(m+α+β+1)`, evaluated in the factored form
/// `(n-m)(n+m+α+β+1)`. Nonzero whenever `n != m`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EigenvalueGap(f64);

impl EigenvalueGap {
    pub fn new(params: JacobiParams, n: usize, m: usize) -> Result<Self> {
        if n == m {
            return Err(Error::DegeneratePair { n });
        }
        let diff = n as f64 - m as f64;
        Ok(Self(diff * ((n + m) as f64 + params.shift())))
    }

    pub fn value(&self) -> f64 {
        self.0
    }
}

/// Normalization of the Legendre family used by [`partial_integral_legendre`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum LegendreNormalization {
    /// `P_n(1) = 1`.
    #[default]
    Standard,
    /// Leading coefficient one.
    Monic,
}

impl LegendreNormalization {
    fn value_and_derivative(&self, n: usize, x: f64) -> Result<(f64, f64)> {
        let p = polyeval::eval_jacobi(JacobiParams::LEGENDRE, n, x)?;
        let d = polyeval::eval_jacobi_derivative(JacobiParams::LEGENDRE, n, x)?;
        Ok(match self {
            Self::Standard => (p, d),
            Self::Monic => {
                let s = polyeval::legendre_monic_scale(n);
                (s * p, s * d)
            }
        })
    }
}

/// `∫_x^1 P_n P_m dt = (1-x²)[P_m P_n' - P_n P_m'] / (n(n+1) - m(m+1))` for any finite `x`.
pub fn partial_integral_legendre(
    n: usize,
    m: usize,
    x: f64,
    normalization: LegendreNormalization,
) -> Result<IntegralResult> {
    let gap = EigenvalueGap::new(JacobiParams::LEGENDRE, n, m)?;
    if !x.is_finite() {
        return Err(Error::domain(format!("lower limit must be finite (got {x})")));
    }
    let (pn, dn) = normalization.value_and_derivative(n, x)?;
    let (pm, dm) = normalization.value_and_derivative(m, x)?;
    let value = (1.0 - x) * (1.0 + x) * (pm * dn - pn * dm) / gap.value();
    Ok(IntegralResult {
        value,
        method: Method::ClosedForm,
        abs_error_estimate: 0.0,
        n,
        m,
        params: JacobiParams::LEGENDRE,
        lower_limit: x,
    })
}

/// `∫_x^1 P_n P_m w dt = w(x)(1-x²) φ_n(m; α, β, x) / C` for `x ∈ [-1, 1]`.
///
/// Exactly zero at both endpoints.
pub fn partial_integral_jacobi_closed(
    params: JacobiParams,
    n: usize,
    m: usize,
    x: f64,
) -> Result<IntegralResult> {
    let gap = EigenvalueGap::new(params, n, m)?;
    check_closed_interval(x)?;
    let value = if x == 1.0 || x == -1.0 {
        0.0
    } else {
        let prefactor = power(1.0 - x, params.alpha() + 1.0) * power(1.0 + x, params.beta() + 1.0);
        let phi = Recurrence::STANDARD.wronskian_unchecked(params, n, m, x);
        prefactor * phi / gap.value()
    };
    Ok(IntegralResult {
        value,
        method: Method::ClosedForm,
        abs_error_estimate: 0.0,
        n,
        m,
        params,
        lower_limit: x,
    })
}

fn check_closed_interval(x: f64) -> Result<()> {
    if (-1.0..=1.0).contains(&x) {
        Ok(())
    } else {
        Err(Error::domain(format!("lower limit must lie in [-1, 1] (got {x})")))
    }
}

/// `∫_x^1 P_n P_m w dt` by endpoint-regularised adaptive quadrature; `n = m` allowed.
pub fn partial_integral_quadrature(
    params: JacobiParams,
    n: usize,
    m: usize,
    x: f64,
    tol: f64,
) -> Result<IntegralResult> {
    partial_integral_quadrature_with(Recurrence::STANDARD, params, n, m, x, tol)
}

/// [`partial_integral_quadrature`] with an explicit recurrence kernel.
pub fn partial_integral_quadrature_with(
    kernel: Recurrence,
    params: JacobiParams,
    n: usize,
    m: usize,
    x: f64,
    tol: f64,
) -> Result<IntegralResult> {
    let opts = QuadratureOptions::with_tol(tol).for_degree(n + m);
    let est = quadrature::integrate_jacobi_weighted(
        |p| kernel.eval_unchecked(params, n, p.t) * kernel.eval_unchecked(params, m, p.t),
        x,
        params.alpha(),
        params.beta(),
        &opts,
    )?;
    Ok(IntegralResult {
        value: est.value,
        method: Method::Quadrature,
        abs_error_estimate: est.error_estimate,
        n,
        m,
        params,
        lower_limit: x,
    })
}

/// Quadrature value of `|∫_{-1}^1 P_n P_m w dt|` for `n != m`.
///
/// The closed-form counterpart is identically zero at `x = -1`; this is the
/// nontrivial check.
pub fn orthogonality_residual(params: JacobiParams, n: usize, m: usize, tol: f64) -> Result<f64> {
    orthogonality_residual_with(Recurrence::STANDARD, params, n, m, tol)
}

pub fn orthogonality_residual_with(
    kernel: Recurrence,
    params: JacobiParams,
    n: usize,
    m: usize,
    tol: f64,
) -> Result<f64> {
    EigenvalueGap::new(params, n, m)?;
    let r = partial_integral_quadrature_with(kernel, params, n, m, -1.0, tol)?;
    Ok(r.value.abs())
}

fn check_positive_pair(n: usize, m: usize) -> Result<()> {
    if n == 0 || m == 0 {
        return Err(Error::domain(format!(
            "identity requires n, m >= 1 (got n = {n}, m = {m})"
        )));
    }
    if n == m {
        return Err(Error::DegeneratePair { n });
    }
    Ok(())
}

/// Integrand of the double-integral identity at `x`:
/// `[∫_x^1 P_n w][∫_x^1 P_m w] / ((1-x²) w(x))`, with each inner integral taken from
/// the closed form against `P_0 = 1`.
pub fn double_integral_integrand(params: JacobiParams, n: usize, m: usize, x: f64) -> Result<f64> {
    if x <= -1.0 || x >= 1.0 {
        // inner integrals vanish like (1∓x)^{α+1}, (1±x)^{β+1}
        check_closed_interval(x)?;
        return Ok(0.0);
    }
    let inner_n = partial_integral_jacobi_closed(params, n, 0, x)?.value;
    let inner_m = partial_integral_jacobi_closed(params, m, 0, x)?.value;
    let denom = (1.0 - x) * (1.0 + x) * polyeval::eval_weight(params, x)?;
    if denom == 0.0 {
        return Ok(0.0);
    }
    Ok(inner_n * inner_m / denom)
}

/// `∫_a^1` of [`double_integral_integrand`].
pub fn double_integral_partial(
    params: JacobiParams,
    n: usize,
    m: usize,
    lower: f64,
    tol: f64,
) -> Result<QuadratureEstimate> {
    check_positive_pair(n, m)?;
    // The integrand is (1-x)^{α+1}(1+x)^{β+1} times a polynomial; the substitution
    // uses those exponents and divides them back out of the literal integrand.
    let opts = QuadratureOptions::with_tol(tol).for_degree(2 * (n + m));
    let (a, b) = (params.alpha() + 1.0, params.beta() + 1.0);
    quadrature::integrate_jacobi_weighted(
        |p| {
            let weight = power(p.to_upper, a) * power(p.to_lower, b);
            if weight == 0.0 {
                return 0.0;
            }
            double_integral_integrand(params, n, m, p.t).unwrap_or(f64::NAN) / weight
        },
        lower,
        a,
        b,
        &opts,
    )
}

/// `∫_{-1}^1 [∫_x^1 P_n w][∫_x^1 P_m w] dx / ((1-x²) w(x))`, which vanishes for
/// `n != m`, `n, m >= 1`.
pub fn double_integral_ipl4(params: JacobiParams, n: usize, m: usize, tol: f64) -> Result<f64> {
    Ok(double_integral_partial(params, n, m, -1.0, tol)?.value)
}

/// `∫_a^1 φ_n(0) φ_m(0) (1-t²) w(t) dt`.
pub fn phi_product_partial(
    params: JacobiParams,
    n: usize,
    m: usize,
    lower: f64,
    tol: f64,
) -> Result<QuadratureEstimate> {
    check_positive_pair(n, m)?;
    let opts = QuadratureOptions::with_tol(tol).for_degree(2 * (n + m));
    let kernel = Recurrence::STANDARD;
    quadrature::integrate_jacobi_weighted(
        |p| {
            kernel.wronskian_unchecked(params, n, 0, p.t) * kernel.wronskian_unchecked(params, m, 0, p.t)
        },
        lower,
        params.alpha() + 1.0,
        params.beta() + 1.0,
        &opts,
    )
}

/// `∫_{-1}^1 φ_n(0) φ_m(0) (1-t²) w(t) dt`, zero for `n != m`.
pub fn phi_orthogonality(params: JacobiParams, n: usize, m: usize, tol: f64) -> Result<f64> {
    Ok(phi_product_partial(params, n, m, -1.0, tol)?.value)
}

/// `((n+α+β+1)(m+α+β+1)/4) ∫_a^1 P_{n-1}^{(α+1,β+1)} P_{m-1}^{(α+1,β+1)} w_{α+1,β+1} dt`,
/// the shifted-family form of [`phi_product_partial`].
pub fn shifted_family_partial(
    params: JacobiParams,
    n: usize,
    m: usize,
    lower: f64,
    tol: f64,
) -> Result<QuadratureEstimate> {
    check_positive_pair(n, m)?;
    let scale = 0.25 * (n as f64 + params.shift()) * (m as f64 + params.shift());
    let raised = params.raised();
    let r = partial_integral_quadrature(raised, n - 1, m - 1, lower, tol / scale.abs().max(1.0))?;
    Ok(QuadratureEstimate {
        value: scale * r.value,
        error_estimate: scale.abs() * r.abs_error_estimate,
        nodes: 0,
    })
}

/// Product of eigenvalues `n(n+α+β+1) · m(m+α+β+1)` linking the double integral to
/// the Wronskian-product integral.
pub fn ipl4_to_phi_factor(params: JacobiParams, n: usize, m: usize) -> f64 {
    params.eigenvalue(n) * params.eigenvalue(m)
}
