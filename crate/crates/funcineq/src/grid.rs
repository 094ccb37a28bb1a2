//! Test functions on finite grids.
//!
//! A [`GridFunction`] carries node values only; derivatives are second-order
//! centered finite differences (one-sided at the endpoints), and integrals
//! against a measure run per grid interval with a short Gauss rule on the
//! cubic Hermite interpolant built from values and those derivatives.

use crate::error::{Error, Result};
use crate::measures::Measure1D;
use crate::quad::GaussRule;

/// A function sampled on a strictly increasing grid (at least 3 nodes).
#[derive(Debug, Clone)]
pub struct GridFunction {
    nodes: Vec<f64>,
    values: Vec<f64>,
    derivatives: Vec<f64>,
}

impl GridFunction {
    pub fn new(nodes: Vec<f64>, values: Vec<f64>) -> Result<Self> {
        if nodes.len() < 3 {
            return Err(Error::InvalidGrid("need at least 3 nodes".into()));
        }
        if nodes.len() != values.len() {
            return Err(Error::InvalidGrid("nodes/values length mismatch".into()));
        }
        if !nodes.windows(2).all(|w| w[1] > w[0]) {
            return Err(Error::InvalidGrid("nodes must be strictly increasing".into()));
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidGrid("values must be finite".into()));
        }
        let derivatives = finite_differences(&nodes, &values);
        Ok(GridFunction {
            nodes,
            values,
            derivatives,
        })
    }

    /// Samples a closure on `n` uniform nodes over `[lo, hi]`.
    pub fn sample<F: Fn(f64) -> f64>(f: F, lo: f64, hi: f64, n: usize) -> Result<Self> {
        let n = n.max(3);
        let nodes: Vec<f64> = (0..n)
            .map(|i| lo + (hi - lo) * i as f64 / (n - 1) as f64)
            .collect();
        let values = nodes.iter().map(|&x| f(x)).collect();
        Self::new(nodes, values)
    }

    /// Same, with extra nodes inserted (e.g. kink locations of the sampled
    /// function) so piecewise-linear features are represented exactly.
    pub fn sample_with_knots<F: Fn(f64) -> f64>(
        f: F,
        lo: f64,
        hi: f64,
        n: usize,
        knots: &[f64],
    ) -> Result<Self> {
        let n = n.max(3);
        let mut nodes: Vec<f64> = (0..n)
            .map(|i| lo + (hi - lo) * i as f64 / (n - 1) as f64)
            .collect();
        for &k in knots {
            if k > lo && k < hi {
                nodes.push(k);
            }
        }
        nodes.sort_by(|a, b| a.partial_cmp(b).unwrap());
        nodes.dedup_by(|a, b| (*a - *b).abs() < 1e-12 * (1.0 + a.abs()));
        let values = nodes.iter().map(|&x| f(x)).collect();
        Self::new(nodes, values)
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// Centered finite-difference derivative at the nodes.
    pub fn derivative_values(&self) -> &[f64] {
        &self.derivatives
    }

    pub fn lo(&self) -> f64 {
        self.nodes[0]
    }

    pub fn hi(&self) -> f64 {
        *self.nodes.last().unwrap()
    }

    pub fn min_value(&self) -> f64 {
        self.values.iter().copied().fold(f64::INFINITY, f64::min)
    }

    pub fn max_value(&self) -> f64 {
        self.values.iter().copied().fold(f64::NEG_INFINITY, f64::max)
    }

    /// sup |f| on the nodes.
    pub fn sup_abs(&self) -> f64 {
        self.values.iter().fold(0.0f64, |m, v| m.max(v.abs()))
    }

    /// max |f'| on the nodes.
    pub fn lipschitz_estimate(&self) -> f64 {
        self.derivatives.iter().fold(0.0f64, |m, v| m.max(v.abs()))
    }

    /// Pointwise map of the values onto the same grid.
    pub fn map<F: Fn(f64) -> f64>(&self, f: F) -> GridFunction {
        let values: Vec<f64> = self.values.iter().map(|&v| f(v)).collect();
        let derivatives = finite_differences(&self.nodes, &values);
        GridFunction {
            nodes: self.nodes.clone(),
            values,
            derivatives,
        }
    }

    /// Rescales values by `c`.
    pub fn scaled(&self, c: f64) -> GridFunction {
        self.map(|v| c * v)
    }

    /// Hermite evaluation of `(f, f')` at an arbitrary point of the grid span.
    pub fn eval(&self, x: f64) -> (f64, f64) {
        let i = self.interval_of(x);
        self.eval_on(i, x)
    }

    fn interval_of(&self, x: f64) -> usize {
        if x <= self.nodes[0] {
            return 0;
        }
        if x >= *self.nodes.last().unwrap() {
            return self.nodes.len() - 2;
        }
        match self
            .nodes
            .binary_search_by(|n| n.partial_cmp(&x).unwrap())
        {
            Ok(i) => i.min(self.nodes.len() - 2),
            Err(i) => i - 1,
        }
    }

    fn eval_on(&self, i: usize, x: f64) -> (f64, f64) {
        let h = self.nodes[i + 1] - self.nodes[i];
        let t = ((x - self.nodes[i]) / h).clamp(0.0, 1.0);
        let (v0, v1) = (self.values[i], self.values[i + 1]);
        let (m0, m1) = (self.derivatives[i] * h, self.derivatives[i + 1] * h);
        let t2 = t * t;
        let t3 = t2 * t;
        let value = v0 * (2.0 * t3 - 3.0 * t2 + 1.0)
            + m0 * (t3 - 2.0 * t2 + t)
            + v1 * (-2.0 * t3 + 3.0 * t2)
            + m1 * (t3 - t2);
        let deriv = (v0 * (6.0 * t2 - 6.0 * t)
            + m0 * (3.0 * t2 - 4.0 * t + 1.0)
            + v1 * (-6.0 * t2 + 6.0 * t)
            + m1 * (3.0 * t2 - 2.0 * t))
            / h;
        (value, deriv)
    }

    /// `integral g(f(x), f'(x)) dmu(x)` over the grid span intersected with
    /// the measure window. The integrand may return `inf`, which short-
    /// circuits the integral to `inf`.
    pub fn integrate_against<G>(&self, m: &Measure1D, g: G) -> f64
    where
        G: Fn(f64, f64, f64) -> f64, // (x, f, f')
    {
        let rule = GaussRule::legendre(4);
        let (wlo, whi) = m.window();
        let mut acc = 0.0;
        for i in 0..self.nodes.len() - 1 {
            let a = self.nodes[i].max(wlo);
            let b = self.nodes[i + 1].min(whi);
            if b <= a {
                continue;
            }
            let half = 0.5 * (b - a);
            let mid = 0.5 * (a + b);
            for (t, w) in rule.nodes.iter().zip(&rule.weights) {
                let x = mid + half * t;
                let (f, df) = self.eval_on(i, x);
                let v = g(x, f, df);
                if v == f64::INFINITY {
                    return f64::INFINITY;
                }
                acc += w * half * v * m.density(x);
            }
        }
        acc
    }

    /// Restricted integral over `{x : indicator(f(x)) }` where the indicator
    /// is a threshold condition; sub-intervals straddling the boundary are
    /// split at the crossing (found by bisection on the interpolant).
    pub fn integrate_region_against<G, R>(&self, m: &Measure1D, region: R, g: G) -> f64
    where
        G: Fn(f64, f64, f64) -> f64,
        R: Fn(f64) -> bool + Copy, // predicate on the function value
    {
        let rule = GaussRule::legendre(4);
        let (wlo, whi) = m.window();
        let mut acc = 0.0;
        for i in 0..self.nodes.len() - 1 {
            let a = self.nodes[i].max(wlo);
            let b = self.nodes[i + 1].min(whi);
            if b <= a {
                continue;
            }
            // Detect indicator changes on a few probes; split accordingly.
            const PROBES: usize = 8;
            let mut prev_x = a;
            let mut prev_in = region(self.eval_on(i, a).0);
            for p in 1..=PROBES {
                let x = a + (b - a) * p as f64 / PROBES as f64;
                let now_in = region(self.eval_on(i, x).0);
                if now_in != prev_in {
                    // Bisect the crossing.
                    let (mut lo, mut hi) = (prev_x, x);
                    for _ in 0..60 {
                        let mid = 0.5 * (lo + hi);
                        if region(self.eval_on(i, mid).0) == prev_in {
                            lo = mid;
                        } else {
                            hi = mid;
                        }
                    }
                    let cross = 0.5 * (lo + hi);
                    if prev_in {
                        acc += self.piece(&rule, m, i, prev_x, cross, &g);
                        if acc == f64::INFINITY {
                            return acc;
                        }
                    }
                    prev_x = cross;
                    prev_in = now_in;
                }
                if p == PROBES && prev_in {
                    acc += self.piece(&rule, m, i, prev_x, x, &g);
                    if acc == f64::INFINITY {
                        return acc;
                    }
                }
            }
        }
        acc
    }

    fn piece<G>(
        &self,
        rule: &GaussRule,
        m: &Measure1D,
        i: usize,
        a: f64,
        b: f64,
        g: &G,
    ) -> f64
    where
        G: Fn(f64, f64, f64) -> f64,
    {
        if b <= a {
            return 0.0;
        }
        let half = 0.5 * (b - a);
        let mid = 0.5 * (a + b);
        let mut acc = 0.0;
        for (t, w) in rule.nodes.iter().zip(&rule.weights) {
            let x = mid + half * t;
            let (f, df) = self.eval_on(i, x);
            let v = g(x, f, df);
            if v == f64::INFINITY {
                return f64::INFINITY;
            }
            acc += w * half * v * m.density(x);
        }
        acc
    }
}

/// Second-order finite differences on a possibly non-uniform grid.
fn finite_differences(nodes: &[f64], values: &[f64]) -> Vec<f64> {
    let n = nodes.len();
    let mut d = vec![0.0; n];
    for i in 1..n - 1 {
        let h0 = nodes[i] - nodes[i - 1];
        let h1 = nodes[i + 1] - nodes[i];
        d[i] = -h1 / (h0 * (h0 + h1)) * values[i - 1]
            + (h1 - h0) / (h0 * h1) * values[i]
            + h0 / (h1 * (h0 + h1)) * values[i + 1];
    }
    // One-sided second-order stencils at the boundary.
    {
        let h0 = nodes[1] - nodes[0];
        let h1 = nodes[2] - nodes[1];
        d[0] = -(2.0 * h0 + h1) / (h0 * (h0 + h1)) * values[0]
            + (h0 + h1) / (h0 * h1) * values[1]
            - h0 / (h1 * (h0 + h1)) * values[2];
        let g0 = nodes[n - 1] - nodes[n - 2];
        let g1 = nodes[n - 2] - nodes[n - 3];
        d[n - 1] = (2.0 * g0 + g1) / (g0 * (g0 + g1)) * values[n - 1]
            - (g0 + g1) / (g0 * g1) * values[n - 2]
            + g0 / (g1 * (g0 + g1)) * values[n - 3];
    }
    d
}
