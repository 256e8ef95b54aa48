//! Adaptive composite Gauss–Legendre quadrature, with power substitutions that
//! absorb algebraic endpoint weights `(1-t)^a (1+t)^b`.
//!
//! Panels are refined worst-first: each panel carries the difference between its
//! single-rule value and the sum over its two halves, and the panel with the largest
//! difference is bisected until the differences sum to less than the tolerance.

use std::cmp::Ordering;
use std::collections::BinaryHeap;
use std::f64::consts::PI;

use crate::error::{Error, Result};

pub const DEFAULT_TOL: f64 = 1e-11;
pub const DEFAULT_MAX_NODES: usize = 1 << 20;
pub const DEFAULT_RULE_POINTS: usize = 20;

#[derive(Debug, Clone)]
pub struct GaussLegendre {
    nodes: Vec<f64>,
    weights: Vec<f64>,
}

impl GaussLegendre {
    /// Nodes and weights on `[-1, 1]` by Newton iteration on `P_points`.
    pub fn new(points: usize) -> Self {
        assert!(points >= 1, "Gauss-Legendre rule needs at least one node");
        let mut nodes = vec![0.0; points];
        let mut weights = vec![0.0; points];
        let n = points as f64;
        for i in 0..points.div_ceil(2) {
            let mut x = (PI * (i as f64 + 0.75) / (n + 0.5)).cos();
            let mut deriv = 0.0;
            for _ in 0..100 {
                let (p, dp) = legendre_with_derivative(points, x);
                deriv = dp;
                let dx = p / dp;
                x -= dx;
                if dx.abs() <= 1e-16 * x.abs().max(1.0) {
                    let (_, dp) = legendre_with_derivative(points, x);
                    deriv = dp;
                    break;
                }
            }
            let w = 2.0 / ((1.0 - x * x) * deriv * deriv);
            nodes[i] = -x;
            nodes[points - 1 - i] = x;
            weights[i] = w;
            weights[points - 1 - i] = w;
        }
        if points % 2 == 1 {
            nodes[points / 2] = 0.0;
        }
        Self { nodes, weights }
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    /// Apply the rule on `[a, b]`.
    pub fn integrate(&self, a: f64, b: f64, f: impl Fn(f64) -> f64) -> f64 {
        let half = 0.5 * (b - a);
        let mid = 0.5 * (a + b);
        let sum: f64 = self
            .nodes
            .iter()
            .zip(&self.weights)
            .map(|(&x, &w)| w * f(mid + half * x))
            .sum();
        half * sum
    }
}

fn legendre_with_derivative(n: usize, x: f64) -> (f64, f64) {
    let (mut p0, mut p1) = (1.0, x);
    for k in 2..=n {
        let k_f = k as f64;
        let p2 = ((2.0 * k_f - 1.0) * x * p1 - (k_f - 1.0) * p0) / k_f;
        p0 = p1;
        p1 = p2;
    }
    let dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, dp)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureOptions {
    /// Absolute tolerance on the summed refinement differences.
    pub tol: f64,
    /// Budget on integrand evaluations across all panels.
    pub max_nodes: usize,
    /// Equal panels each segment starts from.
    pub initial_panels: usize,
    pub rule_points: usize,
}

impl Default for QuadratureOptions {
    fn default() -> Self {
        Self {
            tol: DEFAULT_TOL,
            max_nodes: DEFAULT_MAX_NODES,
            initial_panels: 4,
            rule_points: DEFAULT_RULE_POINTS,
        }
    }
}

impl QuadratureOptions {
    pub fn with_tol(tol: f64) -> Self {
        Self {
            tol,
            ..Self::default()
        }
    }

    /// Start from enough panels to resolve a polynomial factor of the given degree.
    pub fn for_degree(mut self, degree: usize) -> Self {
        self.initial_panels = self.initial_panels.max(degree.div_ceil(12) + 1);
        self
    }

    fn validate(&self) -> Result<()> {
        if !self.tol.is_finite() || self.tol <= 0.0 {
            return Err(Error::domain(format!(
                "quadrature tolerance must be positive (got {})",
                self.tol
            )));
        }
        if self.initial_panels == 0 || self.rule_points == 0 {
            return Err(Error::domain("quadrature needs at least one panel and one node"));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureEstimate {
    pub value: f64,
    pub error_estimate: f64,
    pub nodes: usize,
}

struct Panel {
    segment: usize,
    a: f64,
    b: f64,
    left: f64,
    right: f64,
    err: f64,
}

impl Panel {
    fn value(&self) -> f64 {
        self.left + self.right
    }
}

impl PartialEq for Panel {
    fn eq(&self, other: &Self) -> bool {
        self.err.total_cmp(&other.err) == Ordering::Equal
    }
}
impl Eq for Panel {}
impl PartialOrd for Panel {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Panel {
    fn cmp(&self, other: &Self) -> Ordering {
        self.err.total_cmp(&other.err)
    }
}

/// Worst-first refinement over several mapped segments sharing one budget.
///
/// `eval(segment, u)` is the integrand of segment `segment` in its own variable.
fn refine_segments(
    segments: &[(f64, f64)],
    eval: impl Fn(usize, f64) -> f64,
    opts: &QuadratureOptions,
) -> Result<QuadratureEstimate> {
    opts.validate()?;
    let rule = GaussLegendre::new(opts.rule_points);
    let per_rule = rule.len();
    let mut nodes = 0usize;
    let mut heap = BinaryHeap::new();

    let make_panel = |segment: usize, a: f64, b: f64, coarse: f64, nodes: &mut usize| {
        let mid = 0.5 * (a + b);
        let f = |u: f64| eval(segment, u);
        let left = rule.integrate(a, mid, f);
        let right = rule.integrate(mid, b, f);
        *nodes += 2 * per_rule;
        let err = (coarse - (left + right)).abs();
        Panel {
            segment,
            a,
            b,
            left,
            right,
            err: if err.is_nan() { f64::INFINITY } else { err },
        }
    };

    for (segment, &(lo, hi)) in segments.iter().enumerate() {
        if hi <= lo {
            continue;
        }
        let width = (hi - lo) / opts.initial_panels as f64;
        for i in 0..opts.initial_panels {
            let a = lo + width * i as f64;
            let b = if i + 1 == opts.initial_panels {
                hi
            } else {
                lo + width * (i + 1) as f64
            };
            let coarse = rule.integrate(a, b, |u| eval(segment, u));
            nodes += per_rule;
            heap.push(make_panel(segment, a, b, coarse, &mut nodes));
        }
    }

    let totals = |heap: &BinaryHeap<Panel>| {
        heap.iter()
            .fold((0.0, 0.0), |(v, e), p| (v + p.value(), e + p.err))
    };

    loop {
        let (value, error_estimate) = totals(&heap);
        if error_estimate <= opts.tol {
            return Ok(QuadratureEstimate {
                value,
                error_estimate,
                nodes,
            });
        }
        let exhausted = nodes + 4 * per_rule > opts.max_nodes;
        let worst = heap.peek().expect("nonempty when error is positive");
        let mid = 0.5 * (worst.a + worst.b);
        let unsplittable = mid <= worst.a || mid >= worst.b;
        if exhausted || unsplittable || !value.is_finite() {
            return Err(Error::Convergence {
                best: value,
                error_estimate,
                tol: opts.tol,
                nodes,
            });
        }
        // Refine several panels per pass to amortise the totals scan.
        let batch = (heap.len() / 8).max(1);
        for _ in 0..batch {
            if nodes + 4 * per_rule > opts.max_nodes {
                break;
            }
            let Some(worst) = heap.pop() else { break };
            let mid = 0.5 * (worst.a + worst.b);
            if mid <= worst.a || mid >= worst.b {
                heap.push(worst);
                break;
            }
            heap.push(make_panel(worst.segment, worst.a, mid, worst.left, &mut nodes));
            heap.push(make_panel(worst.segment, mid, worst.b, worst.right, &mut nodes));
        }
    }
}

/// Adaptive composite Gauss–Legendre integral of `f` over `[a, b]`.
pub fn integrate(
    f: impl Fn(f64) -> f64,
    a: f64,
    b: f64,
    opts: &QuadratureOptions,
) -> Result<QuadratureEstimate> {
    if !(a.is_finite() && b.is_finite()) || a > b {
        return Err(Error::domain(format!("invalid interval [{a}, {b}]")));
    }
    refine_segments(&[(a, b)], |_, u| f(u), opts)
}

/// A quadrature abscissa together with its distances to both endpoints, each
/// computed without cancellation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Abscissa {
    pub t: f64,
    /// `1 - t`
    pub to_upper: f64,
    /// `1 + t`
    pub to_lower: f64,
}

/// `∫_lower^1 g(t) (1-t)^a (1+t)^b dt` with `a, b > -1` and `g` smooth.
///
/// On `[max(lower, 0), 1]` the substitution `u = (1-t)^(a+1)` turns `(1-t)^a dt`
/// into `du / (a+1)`; on `[lower, 0]` (when `lower < 0`) `v = (1+t)^(b+1)` does the
/// same for `(1+t)^b`. Neither weight factor is ever evaluated at its singular
/// endpoint.
pub fn integrate_jacobi_weighted(
    g: impl Fn(Abscissa) -> f64,
    lower: f64,
    a: f64,
    b: f64,
    opts: &QuadratureOptions,
) -> Result<QuadratureEstimate> {
    if !(a > -1.0 && b > -1.0) {
        return Err(Error::ParameterDomain { alpha: a, beta: b });
    }
    if !(-1.0..1.0).contains(&lower) {
        return Err(Error::domain(format!(
            "lower limit must lie in [-1, 1) (got {lower})"
        )));
    }
    let split = lower.max(0.0);
    let upper_inv = 1.0 / (a + 1.0);
    let lower_inv = 1.0 / (b + 1.0);
    let mut segments = vec![(0.0, (1.0 - split).powf(a + 1.0))];
    if lower < 0.0 {
        segments.push(((1.0 + lower).powf(b + 1.0), 1.0));
    }
    refine_segments(
        &segments,
        |segment, u| {
            if segment == 0 {
                let s = u.powf(upper_inv);
                let node = Abscissa {
                    t: 1.0 - s,
                    to_upper: s,
                    to_lower: 2.0 - s,
                };
                g(node) * crate::polyeval::power(node.to_lower, b) * upper_inv
            } else {
                let r = u.powf(lower_inv);
                let node = Abscissa {
                    t: r - 1.0,
                    to_upper: 2.0 - r,
                    to_lower: r,
                };
                g(node) * crate::polyeval::power(node.to_upper, a) * lower_inv
            }
        },
        opts,
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn rule_is_exact_for_monomials() {
        let rule = GaussLegendre::new(20);
        for k in 0..40 {
            let exact = if k % 2 == 0 { 2.0 / (k as f64 + 1.0) } else { 0.0 };
            let got = rule.integrate(-1.0, 1.0, |x| x.powi(k));
            assert!((got - exact).abs() < 1e-14, "x^{k}: {got} vs {exact}");
        }
        let weight_sum: f64 = rule.weights().iter().sum();
        assert_relative_eq!(weight_sum, 2.0, max_relative = 1e-15);
    }

    #[test]
    fn odd_rule_has_center_node() {
        let rule = GaussLegendre::new(5);
        assert_eq!(rule.nodes()[2], 0.0);
        assert_relative_eq!(rule.weights()[2], 128.0 / 225.0, max_relative = 1e-15);
    }

    #[test]
    fn adaptive_handles_oscillation() {
        let est = integrate(|x| (50.0 * x).cos(), 0.0, 3.0, &QuadratureOptions::default()).unwrap();
        assert!((est.value - (150.0f64).sin() / 50.0).abs() < 1e-12);
        assert!(est.error_estimate <= 1e-11);
    }

    #[test]
    fn weighted_integral_of_constant() {
        // ∫_{-1}^1 (1-t)^a (1+t)^b dt = 2^{a+b+1} B(a+1, b+1); for a = b = -1/2 it is π.
        let est =
            integrate_jacobi_weighted(|_| 1.0, -1.0, -0.5, -0.5, &QuadratureOptions::default())
                .unwrap();
        assert_relative_eq!(est.value, PI, max_relative = 1e-13);
        // a = 2, b = 0 on [0, 1]: ∫ (1-t)^2 = 1/3
        let est = integrate_jacobi_weighted(|_| 1.0, 0.0, 2.0, 0.0, &QuadratureOptions::default())
            .unwrap();
        assert_relative_eq!(est.value, 1.0 / 3.0, max_relative = 1e-13);
    }

    #[test]
    fn strongly_singular_weight() {
        // ∫_0^1 (1-t)^{-0.9} dt = 10
        let est =
            integrate_jacobi_weighted(|_| 1.0, 0.0, -0.9, 0.0, &QuadratureOptions::default())
                .unwrap();
        assert_relative_eq!(est.value, 10.0, max_relative = 1e-13);
        // with a smooth factor: ∫_0^1 t (1-t)^{-0.9} dt = 10 - 1/1.1 · ... = B(2, 0.1) = 1/(0.1·1.1)
        let est =
            integrate_jacobi_weighted(|p| p.t, 0.0, -0.9, 0.0, &QuadratureOptions::default())
                .unwrap();
        assert_relative_eq!(est.value, 1.0 / (0.1 * 1.1), max_relative = 1e-12);
    }

    #[test]
    fn abscissa_complements_are_consistent() {
        let seen = std::cell::RefCell::new(Vec::new());
        let _ = integrate_jacobi_weighted(
            |p| {
                seen.borrow_mut().push(p);
                1.0
            },
            -0.4,
            0.3,
            0.7,
            &QuadratureOptions::default(),
        )
        .unwrap();
        for p in seen.into_inner() {
            assert!(p.t >= -0.4 - 1e-15 && p.t <= 1.0);
            assert!((p.to_upper - (1.0 - p.t)).abs() < 1e-15);
            assert!((p.to_lower - (1.0 + p.t)).abs() < 1e-15);
        }
    }

    #[test]
    fn budget_exhaustion_is_an_error() {
        let opts = QuadratureOptions {
            tol: 1e-14,
            max_nodes: 500,
            ..QuadratureOptions::default()
        };
        let err = integrate(|x| (400.0 * x).sin().abs(), 0.0, 1.0, &opts).unwrap_err();
        match err {
            Error::Convergence { best, nodes, .. } => {
                assert!(best.is_finite());
                assert!(nodes <= 500);
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn rejects_bad_inputs() {
        assert!(integrate(|x| x, 1.0, 0.0, &QuadratureOptions::default()).is_err());
        assert!(integrate(|x| x, 0.0, 1.0, &QuadratureOptions::with_tol(0.0)).is_err());
        assert!(integrate_jacobi_weighted(|_| 1.0, 1.0, 0.0, 0.0, &QuadratureOptions::default()).is_err());
        assert!(integrate_jacobi_weighted(|_| 1.0, 0.0, -1.0, 0.0, &QuadratureOptions::default()).is_err());
    }
}
