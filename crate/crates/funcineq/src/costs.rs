//! Convex cost functions: the piecewise quadratic/power conjugate pair used
//! by the modified inequalities, the generalized entropy costs for
//! `|x|^alpha log^beta` potentials, pure powers, and numeric
//! Legendre-Fenchel transforms.
//!
//! The conjugate pair is quadratic `x^2/2` on `[-a, a]` and grows like
//! `|x|^alpha` (transport side) or `|x|^beta`, `1/alpha + 1/beta = 1`
//! (entropy side) beyond the threshold; at `alpha = 1` the entropy side is
//! `+infinity` outside `[-a, a]`. Extended-real values are represented as
//! `f64::INFINITY` and propagate through sums and comparisons.

use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::roots::golden_max;

/// JSON wire format for cost functions.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(tag = "family", deny_unknown_fields)]
pub enum CostSpec {
    #[serde(rename = "L")]
    L { a: f64, alpha: f64 },
    #[serde(rename = "H")]
    H { a: f64, alpha: f64 },
    #[serde(rename = "H_general")]
    HGeneral {
        alpha: f64,
        #[serde(default)]
        beta: f64,
    },
}

impl CostSpec {
    pub fn build(&self) -> Result<CostFunction> {
        match *self {
            CostSpec::L { a, alpha } => CostFunction::l_cost(a, alpha),
            CostSpec::H { a, alpha } => CostFunction::h_cost(a, alpha),
            CostSpec::HGeneral { alpha, beta } => CostFunction::h_general(alpha, beta),
        }
    }
}

/// Which side of the conjugate pair a piecewise cost realizes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PairSide {
    Transport,
    Entropy,
}

#[derive(Clone)]
enum Kind {
    /// `x^2/2` on `[-a, a]`; `tail_coeff |x|^tail_exp + tail_offset` beyond,
    /// or `+inf` beyond when `infinite_tail` (entropy side at alpha = 1).
    PiecewisePower {
        a: f64,
        alpha: f64,
        side: PairSide,
        tail_exp: f64,
        tail_coeff: f64,
        tail_offset: f64,
        infinite_tail: bool,
    },
    /// `coeff |x|^p` with `p >= 1`.
    Power { exponent: f64, coeff: f64 },
    /// Generalized entropy cost: `core_coeff x^2` on `[0, 2]`, a named tail
    /// formula beyond, even extension.
    General {
        tail: Arc<dyn Fn(f64) -> f64 + Send + Sync>,
        tail_derivative: Arc<dyn Fn(f64) -> f64 + Send + Sync>,
        core_coeff: f64,
        derivative_mismatch: f64,
        label: String,
    },
    /// `inner(t x)`.
    Scaled { inner: Arc<CostFunction>, t: f64 },
    /// Pointwise numeric Legendre transform of `source`.
    NumericLegendre {
        source: Arc<CostFunction>,
        radius: f64,
    },
}

/// An even, convex, extended-real cost with `c(0) = 0`.
#[derive(Clone)]
pub struct CostFunction {
    kind: Kind,
}

impl std::fmt::Debug for CostFunction {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "CostFunction({})", self.describe())
    }
}

impl CostFunction {
    /// Transport-side cost: `x^2/2` core, `a^(2-alpha) |x|^alpha / alpha +
    /// a^2 (alpha-2) / (2 alpha)` beyond the threshold; at `alpha = 1` the
    /// tail is `a |x| - a^2/2`.
    pub fn l_cost(a: f64, alpha: f64) -> Result<Self> {
        if !(a > 0.0) {
            return Err(Error::ParameterOutOfRange(format!(
                "threshold must be positive, got {a}"
            )));
        }
        if !(1.0..=2.0).contains(&alpha) {
            return Err(Error::ParameterOutOfRange(format!(
                "alpha must lie in [1, 2], got {alpha}"
            )));
        }
        let kind = Kind::PiecewisePower {
            a,
            alpha,
            side: PairSide::Transport,
            tail_exp: alpha,
            tail_coeff: a.powf(2.0 - alpha) / alpha,
            tail_offset: a * a * (alpha - 2.0) / (2.0 * alpha),
            infinite_tail: false,
        };
        let c = CostFunction { kind };
        c.assert_threshold_continuity();
        Ok(c)
    }

    /// Entropy-side cost: same core, `|x|^beta` growth with
    /// `beta = alpha/(alpha-1)` beyond the threshold; `+inf` there when
    /// `alpha = 1`.
    pub fn h_cost(a: f64, alpha: f64) -> Result<Self> {
        if !(a > 0.0) {
            return Err(Error::ParameterOutOfRange(format!(
                "threshold must be positive, got {a}"
            )));
        }
        if !(1.0..=2.0).contains(&alpha) {
            return Err(Error::ParameterOutOfRange(format!(
                "alpha must lie in [1, 2], got {alpha}"
            )));
        }
        let kind = if alpha == 1.0 {
            Kind::PiecewisePower {
                a,
                alpha,
                side: PairSide::Entropy,
                tail_exp: f64::INFINITY,
                tail_coeff: f64::INFINITY,
                tail_offset: 0.0,
                infinite_tail: true,
            }
        } else {
            let beta = alpha / (alpha - 1.0);
            Kind::PiecewisePower {
                a,
                alpha,
                side: PairSide::Entropy,
                tail_exp: beta,
                tail_coeff: a.powf(2.0 - beta) / beta,
                tail_offset: a * a * (beta - 2.0) / (2.0 * beta),
                infinite_tail: false,
            }
        };
        let c = CostFunction { kind };
        c.assert_threshold_continuity();
        Ok(c)
    }

    /// Pure power `coeff |x|^p`, `p >= 1`. `power(2, 0.5)` is the global
    /// quadratic; `power(2, 1)` is the plain Dirichlet integrand.
    pub fn power(exponent: f64, coeff: f64) -> Result<Self> {
        if !(exponent >= 1.0 && coeff > 0.0) {
            return Err(Error::ParameterOutOfRange(format!(
                "power cost needs exponent >= 1 and coeff > 0, got ({exponent}, {coeff})"
            )));
        }
        Ok(CostFunction {
            kind: Kind::Power {
                exponent,
                coeff,
            },
        })
    }

    /// Global `x^2/2`.
    pub fn quadratic() -> Self {
        Self::power(2.0, 0.5).unwrap()
    }

    /// Generalized entropy cost for the `|x|^alpha log^beta` potentials:
    /// the tail formula for `x >= 2` is
    /// `x^(alpha/(alpha-1)) / (ln x)^(beta/(alpha-1))` for `alpha` in `]1, 2[`,
    /// `x^2 exp(x^(1/beta))` for `alpha = 1, beta > 0`, and
    /// `x^2 (ln x)^(-beta)` for `alpha = 2, beta <= 0`.
    /// The core on `[0, 2]` is `c x^2` with `c` fixed by value matching; the
    /// derivative mismatch at the junction is recorded on the object.
    pub fn h_general(alpha: f64, beta: f64) -> Result<Self> {
        let (tail, tail_derivative, label): (
            Arc<dyn Fn(f64) -> f64 + Send + Sync>,
            Arc<dyn Fn(f64) -> f64 + Send + Sync>,
            String,
        ) = if alpha > 1.0 && alpha < 2.0 {
            let p = alpha / (alpha - 1.0);
            let q = beta / (alpha - 1.0);
            (
                Arc::new(move |x: f64| x.powf(p) / x.ln().powf(q)),
                Arc::new(move |x: f64| {
                    x.powf(p - 1.0) * x.ln().powf(-q - 1.0) * (p * x.ln() - q)
                }),
                format!("x^{p:.6}/ln^{q:.6} x"),
            )
        } else if alpha == 1.0 {
            if !(beta > 0.0) {
                return Err(Error::UnsupportedAlphaBeta);
            }
            let ib = 1.0 / beta;
            (
                Arc::new(move |x: f64| x * x * (x.powf(ib)).exp()),
                Arc::new(move |x: f64| {
                    (x.powf(ib)).exp() * (2.0 * x + ib * x.powf(ib + 1.0))
                }),
                format!("x^2 exp(x^{ib:.6})"),
            )
        } else if alpha == 2.0 {
            if !(beta <= 0.0) {
                return Err(Error::UnsupportedAlphaBeta);
            }
            (
                Arc::new(move |x: f64| x * x * x.ln().powf(-beta)),
                Arc::new(move |x: f64| {
                    2.0 * x * x.ln().powf(-beta) - beta * x * x.ln().powf(-beta - 1.0)
                }),
                format!("x^2 ln^{:.6} x", -beta),
            )
        } else {
            return Err(Error::UnsupportedAlphaBeta);
        };
        let v2 = tail(2.0);
        if !v2.is_finite() || v2 <= 0.0 {
            return Err(Error::UnsupportedAlphaBeta);
        }
        let core_coeff = v2 / 4.0;
        let derivative_mismatch = (4.0 * core_coeff - tail_derivative(2.0)).abs();
        Ok(CostFunction {
            kind: Kind::General {
                tail,
                tail_derivative,
                core_coeff,
                derivative_mismatch,
                label,
            },
        })
    }

    /// The cost `x -> self(t x)`; equals `t^2 * (same family, threshold a/t)`
    /// for the piecewise pair.
    pub fn scale(&self, t: f64) -> Result<Self> {
        if !(t > 0.0) {
            return Err(Error::ParameterOutOfRange(format!(
                "scaling factor must be positive, got {t}"
            )));
        }
        Ok(CostFunction {
            kind: Kind::Scaled {
                inner: Arc::new(self.clone()),
                t,
            },
        })
    }

    /// Numeric Legendre-Fenchel transform `y -> sup_x (x y - self(x))`.
    ///
    /// For the piecewise pair the supremum is solved per branch from the
    /// stationarity conditions and the branch candidates are compared;
    /// otherwise a golden-section search over `[-radius, radius]` is used
    /// (valid because `x y - c(x)` is concave for convex `c`). Convexity of
    /// the input is checked by midpoint convexity on `grid_size` points.
    pub fn legendre(&self, search_radius: f64, grid_size: usize) -> Result<Self> {
        if !(search_radius > 0.0) {
            return Err(Error::ParameterOutOfRange(format!(
                "search radius must be positive, got {search_radius}"
            )));
        }
        let n = grid_size.max(3);
        let probe = search_radius.min(1e6);
        let mut prev = self.evaluate(-probe);
        for i in 1..n - 1 {
            let x0 = -probe + 2.0 * probe * (i - 1) as f64 / (n - 1) as f64;
            let x1 = -probe + 2.0 * probe * i as f64 / (n - 1) as f64;
            let x2 = -probe + 2.0 * probe * (i + 1) as f64 / (n - 1) as f64;
            let (f0, f1, f2) = (prev, self.evaluate(x1), self.evaluate(x2));
            if f0.is_finite() && f1.is_finite() && f2.is_finite() {
                let mid = 0.5 * (f0 + f2);
                if f1 > mid + 1e-9 * (1.0 + mid.abs()) {
                    return Err(Error::NonConvexLegendre);
                }
            }
            prev = f1;
            let _ = x0;
        }
        Ok(CostFunction {
            kind: Kind::NumericLegendre {
                source: Arc::new(self.clone()),
                radius: search_radius,
            },
        })
    }

    /// Extended-real evaluation.
    pub fn evaluate(&self, x: f64) -> f64 {
        let ax = x.abs();
        match &self.kind {
            Kind::PiecewisePower {
                a,
                tail_exp,
                tail_coeff,
                tail_offset,
                infinite_tail,
                ..
            } => {
                if ax <= *a {
                    0.5 * ax * ax
                } else if *infinite_tail {
                    f64::INFINITY
                } else {
                    tail_coeff * ax.powf(*tail_exp) + tail_offset
                }
            }
            Kind::Power { exponent, coeff } => coeff * ax.powf(*exponent),
            Kind::General {
                tail, core_coeff, ..
            } => {
                if ax <= 2.0 {
                    core_coeff * ax * ax
                } else {
                    tail(ax)
                }
            }
            Kind::Scaled { inner, t } => inner.evaluate(t * x),
            Kind::NumericLegendre { source, radius } => {
                numeric_conjugate(source, *radius, x)
            }
        }
    }

    /// Derivative where the cost is finite (one-sided at an infinite-tail
    /// threshold).
    pub fn derivative(&self, x: f64) -> f64 {
        let s = x.signum();
        let ax = x.abs();
        match &self.kind {
            Kind::PiecewisePower {
                a,
                tail_exp,
                tail_coeff,
                infinite_tail,
                ..
            } => {
                if ax <= *a || *infinite_tail {
                    // Inside the core (clamped at the threshold for the
                    // infinite tail, where only |x| <= a is finite).
                    s * ax.min(*a)
                } else {
                    s * tail_coeff * tail_exp * ax.powf(tail_exp - 1.0)
                }
            }
            Kind::Power { exponent, coeff } => s * coeff * exponent * ax.powf(exponent - 1.0),
            Kind::General {
                tail_derivative,
                core_coeff,
                ..
            } => {
                if ax <= 2.0 {
                    2.0 * core_coeff * x
                } else {
                    s * tail_derivative(ax)
                }
            }
            Kind::Scaled { inner, t } => t * inner.derivative(t * x),
            Kind::NumericLegendre { .. } => {
                // Central difference on the numeric transform.
                let h = 1e-6 * (1.0 + ax);
                (self.evaluate(x + h) - self.evaluate(x - h)) / (2.0 * h)
            }
        }
    }

    /// Threshold `a` for the piecewise pair.
    pub fn threshold(&self) -> Option<f64> {
        match &self.kind {
            Kind::PiecewisePower { a, .. } => Some(*a),
            _ => None,
        }
    }

    /// `(alpha, beta)` for the piecewise pair (`beta = inf` at `alpha = 1`).
    pub fn exponents(&self) -> Option<(f64, f64)> {
        match &self.kind {
            Kind::PiecewisePower { alpha, .. } => {
                let beta = if *alpha == 1.0 {
                    f64::INFINITY
                } else {
                    alpha / (alpha - 1.0)
                };
                Some((*alpha, beta))
            }
            _ => None,
        }
    }

    /// Interval on which the cost is finite.
    pub fn finite_domain(&self) -> (f64, f64) {
        match &self.kind {
            Kind::PiecewisePower {
                a, infinite_tail, ..
            } if *infinite_tail => (-*a, *a),
            Kind::Scaled { inner, t } => {
                let (lo, hi) = inner.finite_domain();
                (lo / t, hi / t)
            }
            _ => (f64::NEG_INFINITY, f64::INFINITY),
        }
    }

    /// Recorded derivative gap at the junction of a generalized cost.
    pub fn core_derivative_mismatch(&self) -> Option<f64> {
        match &self.kind {
            Kind::General {
                derivative_mismatch,
                ..
            } => Some(*derivative_mismatch),
            _ => None,
        }
    }

    pub fn describe(&self) -> String {
        match &self.kind {
            Kind::PiecewisePower {
                a,
                alpha,
                side,
                ..
            } => match side {
                PairSide::Transport => format!("L(a={a}, alpha={alpha})"),
                PairSide::Entropy => format!("H(a={a}, alpha={alpha})"),
            },
            Kind::Power { exponent, coeff } => format!("{coeff}|x|^{exponent}"),
            Kind::General { label, .. } => format!("H_general[{label}]"),
            Kind::Scaled { inner, t } => format!("{}(. * {t})", inner.describe()),
            Kind::NumericLegendre { source, .. } => {
                format!("legendre[{}]", source.describe())
            }
        }
    }

    fn assert_threshold_continuity(&self) {
        if let Kind::PiecewisePower {
            a,
            tail_coeff,
            tail_exp,
            tail_offset,
            infinite_tail,
            ..
        } = &self.kind
        {
            if !infinite_tail {
                let core = 0.5 * a * a;
                let tail = tail_coeff * a.powf(*tail_exp) + tail_offset;
                debug_assert!(
                    (core - tail).abs() <= 1e-12 * (1.0 + core.abs()),
                    "piecewise branches must be tangent at the threshold"
                );
            }
        }
    }
}

/// `sup_x (x y - c(x))` for a convex even `c`.
fn numeric_conjugate(c: &CostFunction, radius: f64, y: f64) -> f64 {
    if let Kind::PiecewisePower {
        a,
        tail_exp,
        tail_coeff,
        tail_offset,
        infinite_tail,
        ..
    } = &c.kind
    {
        // Branch candidates: stationary point of the core (x = y clamped),
        // stationary point of the tail, and the junction.
        let ay = y.abs();
        let mut best = {
            let x = ay.min(*a);
            x * ay - 0.5 * x * x
        };
        if *infinite_tail {
            return best;
        }
        if *tail_exp > 1.0 {
            let x = (ay / (tail_coeff * tail_exp)).powf(1.0 / (tail_exp - 1.0));
            if x >= *a {
                best = best.max(x * ay - (tail_coeff * x.powf(*tail_exp) + tail_offset));
            }
        } else {
            // Linear tail: slope tail_coeff; beyond it the sup is infinite.
            if ay > *tail_coeff {
                return f64::INFINITY;
            }
        }
        best = best.max(a * ay - 0.5 * a * a);
        return best;
    }
    // Generic concave maximization of x*y - c(x) over the finite domain.
    let (dlo, dhi) = c.finite_domain();
    let mut lo = dlo.max(-radius);
    let mut hi = dhi.min(radius);
    let obj = |x: f64| {
        let v = c.evaluate(x);
        if v.is_finite() {
            x * y - v
        } else {
            f64::NEG_INFINITY
        }
    };
    // Nested coarse scans narrow the bracket (the effective domain may be a
    // small finite window, e.g. a conjugate with linear growth), then golden
    // refinement on the final bracket.
    let n = 64;
    let mut best_x = lo;
    let mut best_v = f64::NEG_INFINITY;
    for _ in 0..4 {
        best_v = f64::NEG_INFINITY;
        for i in 0..=n {
            let x = lo + (hi - lo) * i as f64 / n as f64;
            let v = obj(x);
            if v > best_v {
                best_v = v;
                best_x = x;
            }
        }
        let h = (hi - lo) / n as f64;
        lo = (best_x - h).max(lo);
        hi = (best_x + h).min(hi);
    }
    let (_, v) = golden_max(obj, lo, hi, 1e-13 * (1.0 + best_x.abs()), 200);
    v.max(best_v)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn transport_cost_plug_ins() {
        // alpha = 1 tail is a|x| - a^2/2.
        let l = CostFunction::l_cost(2.0, 1.0).unwrap();
        assert_abs_diff_eq!(l.evaluate(3.0), 4.0, epsilon = 1e-14);
        // alpha = 2 collapses to x^2/2 globally.
        let l = CostFunction::l_cost(1.0, 2.0).unwrap();
        assert_abs_diff_eq!(l.evaluate(5.0), 12.5, epsilon = 1e-14);
        // Continuity at the threshold.
        let l = CostFunction::l_cost(1.0, 1.5).unwrap();
        assert_abs_diff_eq!(l.evaluate(1.0), 0.5, epsilon = 1e-14);
        assert_abs_diff_eq!(l.evaluate(1.0 + 1e-12), 0.5, epsilon = 1e-11);
    }

    #[test]
    fn entropy_cost_plug_ins() {
        let h = CostFunction::h_cost(1.0, 1.0).unwrap();
        assert_abs_diff_eq!(h.evaluate(0.5), 0.125, epsilon = 1e-15);
        assert_eq!(h.evaluate(1.5), f64::INFINITY);
        let h = CostFunction::h_cost(1.0, 2.0).unwrap();
        assert_abs_diff_eq!(h.evaluate(3.0), 4.5, epsilon = 1e-14);
        // beta = 3 branch: 1^(2-3) 2^3/3 + (3-2)/(2*3) = 8/3 + 1/6.
        let h = CostFunction::h_cost(1.0, 1.5).unwrap();
        assert_abs_diff_eq!(h.evaluate(2.0), 8.0 / 3.0 + 1.0 / 6.0, epsilon = 1e-14);
    }

    #[test]
    fn evaluate_is_even_and_zero_at_zero() {
        for c in [
            CostFunction::l_cost(0.5, 1.2).unwrap(),
            CostFunction::h_cost(2.0, 1.5).unwrap(),
            CostFunction::h_general(1.5, 1.0).unwrap(),
            CostFunction::power(3.0, 1.0).unwrap(),
        ] {
            assert_eq!(c.evaluate(0.0), 0.0);
            for x in [0.3, 1.7, 4.0, 9.5] {
                assert_abs_diff_eq!(c.evaluate(x), c.evaluate(-x), epsilon = 1e-14);
            }
        }
    }

    #[test]
    fn c1_at_threshold_for_alpha_above_one() {
        for alpha in [1.2, 1.5, 2.0] {
            for a in [0.5, 1.0, 2.0] {
                let l = CostFunction::l_cost(a, alpha).unwrap();
                let h = CostFunction::h_cost(a, alpha).unwrap();
                for c in [l, h] {
                    let d_in = c.derivative(a - 1e-9);
                    let d_out = c.derivative(a + 1e-9);
                    assert!((d_in - d_out).abs() < 1e-7, "slope jump {}", d_in - d_out);
                }
            }
        }
    }

    #[test]
    fn legendre_matches_conjugate_family() {
        // Numeric transform of L(1, 1.5) against closed-form H(1, 1.5).
        let l = CostFunction::l_cost(1.0, 1.5).unwrap();
        let h = CostFunction::h_cost(1.0, 1.5).unwrap();
        let lt = l.legendre(1e7, 512).unwrap();
        for i in 0..=200 {
            let y = -10.0 + 20.0 * i as f64 / 200.0;
            assert_abs_diff_eq!(lt.evaluate(y), h.evaluate(y), epsilon = 1e-7);
        }
        // H(1,1)^* = L(1,1).
        let h1 = CostFunction::h_cost(1.0, 1.0).unwrap();
        let l1 = CostFunction::l_cost(1.0, 1.0).unwrap();
        let ht = h1.legendre(1e7, 512).unwrap();
        for i in 0..=200 {
            let y = -10.0 + 20.0 * i as f64 / 200.0;
            assert_abs_diff_eq!(ht.evaluate(y), l1.evaluate(y), epsilon = 1e-7);
        }
        // The quadratic is self-dual.
        let q = CostFunction::quadratic();
        let qt = q.legendre(1e3, 512).unwrap();
        for i in 0..=100 {
            let y = -8.0 + 16.0 * i as f64 / 100.0;
            assert_abs_diff_eq!(qt.evaluate(y), 0.5 * y * y, epsilon = 1e-8);
        }
    }

    #[test]
    fn general_cost_formulas() {
        // beta = 0 reduces the ]1,2[ tail to x^(alpha/(alpha-1)).
        let h = CostFunction::h_general(1.5, 0.0).unwrap();
        assert_abs_diff_eq!(h.evaluate(4.0), 64.0, epsilon = 1e-12);
        // Core is value-matched at 2: c = 8/4 = 2.
        assert_abs_diff_eq!(h.evaluate(1.0), 2.0, epsilon = 1e-12);
        assert!(h.core_derivative_mismatch().unwrap() > 0.0);
        // alpha = 2, beta = 0: plain x^2 everywhere, mismatch 0.
        let h = CostFunction::h_general(2.0, 0.0).unwrap();
        for x in [0.5, 1.0, 3.0, 7.0] {
            assert_abs_diff_eq!(h.evaluate(x), x * x, epsilon = 1e-12);
        }
        assert_abs_diff_eq!(h.core_derivative_mismatch().unwrap(), 0.0, epsilon = 1e-12);
        // Ratio identity for alpha = 1.5, beta = 1 at e^2 vs e^4.
        let h = CostFunction::h_general(1.5, 1.0).unwrap();
        let e2 = std::f64::consts::E.powi(2);
        let e4 = std::f64::consts::E.powi(4);
        let expect = std::f64::consts::E.powi(6) / 4.0;
        assert_abs_diff_eq!(h.evaluate(e4) / h.evaluate(e2), expect, epsilon = 1e-9 * expect);
        // Range validation.
        assert!(matches!(
            CostFunction::h_general(1.0, 0.0),
            Err(Error::UnsupportedAlphaBeta)
        ));
        assert!(matches!(
            CostFunction::h_general(2.0, 1.0),
            Err(Error::UnsupportedAlphaBeta)
        ));
        assert!(matches!(
            CostFunction::h_general(2.5, 0.0),
            Err(Error::UnsupportedAlphaBeta)
        ));
    }

    #[test]
    fn scaling_identity() {
        // scale(L(1,1.5), 2)(0.3) = 4 L(0.5,1.5)(0.3)
        let l = CostFunction::l_cost(1.0, 1.5).unwrap();
        let s = l.scale(2.0).unwrap();
        let l_half = CostFunction::l_cost(0.5, 1.5).unwrap();
        assert_abs_diff_eq!(
            s.evaluate(0.3),
            4.0 * l_half.evaluate(0.3),
            epsilon = 1e-12
        );
        // scale(H(1,1.2), 0.5)(4) = 0.25 H(2,1.2)(4)
        let h = CostFunction::h_cost(1.0, 1.2).unwrap();
        let s = h.scale(0.5).unwrap();
        let h2 = CostFunction::h_cost(2.0, 1.2).unwrap();
        assert_abs_diff_eq!(
            s.evaluate(4.0),
            0.25 * h2.evaluate(4.0),
            epsilon = 1e-12
        );
        // Identity scaling.
        let s = h.scale(1.0).unwrap();
        for x in [0.1, 0.9, 2.5] {
            assert_abs_diff_eq!(s.evaluate(x), h.evaluate(x), epsilon = 1e-15);
        }
    }

    #[test]
    fn young_inequality_on_grid() {
        for (a, alpha) in [(0.5, 1.2), (1.0, 1.5), (2.0, 2.0), (1.0, 1.0)] {
            let l = CostFunction::l_cost(a, alpha).unwrap();
            let h = CostFunction::h_cost(a, alpha).unwrap();
            for i in 0..60 {
                for j in 0..60 {
                    let x = -6.0 + 12.0 * i as f64 / 59.0;
                    let y = -6.0 + 12.0 * j as f64 / 59.0;
                    let slack = h.evaluate(x) + l.evaluate(y) - x * y;
                    assert!(slack >= -1e-12, "Young violated at ({x}, {y}): {slack}");
                }
            }
        }
    }

    #[test]
    fn monotone_in_threshold() {
        let grid: Vec<f64> = (0..100).map(|i| 8.0 * i as f64 / 99.0).collect();
        for alpha in [1.0, 1.2, 1.5, 2.0] {
            let l_small = CostFunction::l_cost(0.5, alpha).unwrap();
            let l_big = CostFunction::l_cost(2.0, alpha).unwrap();
            let h_small = CostFunction::h_cost(0.5, alpha).unwrap();
            let h_big = CostFunction::h_cost(2.0, alpha).unwrap();
            for &x in &grid {
                assert!(l_small.evaluate(x) <= l_big.evaluate(x) + 1e-12);
                assert!(h_big.evaluate(x) <= h_small.evaluate(x) + 1e-12);
            }
        }
    }

    #[test]
    fn superlinear_growth() {
        for alpha in [1.2, 1.5, 2.0] {
            let l = CostFunction::l_cost(1.0, alpha).unwrap();
            let h = CostFunction::h_cost(1.0, alpha).unwrap();
            for c in [l, h] {
                let mut first = f64::NAN;
                let mut prev = 0.0;
                for k in 1..=6 {
                    let x = 10f64.powi(k);
                    let ratio = c.evaluate(x) / x;
                    assert!(ratio > prev, "not superlinear at 10^{k}");
                    if k == 1 {
                        first = ratio;
                    }
                    prev = ratio;
                }
                assert!(prev > 10.0 * first, "growth too slow: {first} -> {prev}");
            }
        }
    }

    #[test]
    fn non_convex_input_rejected() {
        // A scaled double-well shape is not convex; emulate with a custom
        // power combination through Scaled of a conjugate trick is not
        // expressible here, so check the guard on a concave-ish power < 1
        // rejected at construction instead.
        assert!(CostFunction::power(0.5, 1.0).is_err());
    }

    #[test]
    fn cost_spec_round_trip() {
        let spec = CostSpec::H { a: 1.0, alpha: 1.5 };
        let s = serde_json::to_string(&spec).unwrap();
        assert_eq!(s, r#"{"family":"H","a":1.0,"alpha":1.5}"#);
        let back: CostSpec = serde_json::from_str(&s).unwrap();
        assert_eq!(back, spec);
        let c = back.build().unwrap();
        assert_eq!(c.threshold(), Some(1.0));
    }
}
