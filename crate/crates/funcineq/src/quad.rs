//! Composite Gauss-Legendre quadrature on graded panels.
//!
//! All integrals against a measure `exp(-phi(x)) dx / Z` in this crate go
//! through a fixed panel decomposition of a truncated support. Panel edges
//! sit on signed powers of two so that the kinks of the potentials in scope
//! (`|x|^alpha` at 0, spliced cores at |x| = 1 and 2) always coincide with a
//! panel boundary, and the integrand seen by each panel is analytic. Panels
//! wider than [`MAX_PANEL_WIDTH`] are subdivided so oscillatory potentials
//! (e.g. a `cos` perturbation) stay resolved.

/// Points per panel. 16-point Gauss-Legendre is exact for degree-31
/// polynomials, far more than needed for analytic integrands on short panels.
const PANEL_POINTS: usize = 16;

/// Panels wider than this are cut into equal pieces.
const MAX_PANEL_WIDTH: f64 = 2.0;

/// Finest dyadic edge inserted around an interior kink, `2^-46`.
const MIN_DYADIC_EXP: i32 = -46;

/// Gauss-Legendre nodes and weights on [-1, 1].
#[derive(Debug, Clone)]
pub struct GaussRule {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

impl GaussRule {
    /// Computes the n-point rule by Newton iteration on the Legendre
    /// polynomial, seeded with the Chebyshev-like asymptotic roots.
    pub fn legendre(n: usize) -> Self {
        assert!(n >= 1);
        let mut nodes = vec![0.0; n];
        let mut weights = vec![0.0; n];
        for i in 0..n {
            // Initial guess for the i-th root (descending order).
            let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
            for _ in 0..100 {
                let (p, dp) = legendre_eval(n, x);
                let dx = p / dp;
                x -= dx;
                if dx.abs() < 1e-16 {
                    break;
                }
            }
            let (_, dp) = legendre_eval(n, x);
            nodes[i] = x;
            weights[i] = 2.0 / ((1.0 - x * x) * dp * dp);
        }
        nodes.reverse();
        weights.reverse();
        GaussRule { nodes, weights }
    }

    /// Integrates `f` over `[a, b]` with this rule.
    pub fn integrate<F: Fn(f64) -> f64>(&self, a: f64, b: f64, f: F) -> f64 {
        let half = 0.5 * (b - a);
        let mid = 0.5 * (a + b);
        let mut acc = 0.0;
        for (x, w) in self.nodes.iter().zip(&self.weights) {
            acc += w * f(mid + half * x);
        }
        acc * half
    }
}

/// Legendre polynomial P_n and its derivative at `x` by the three-term recurrence.
fn legendre_eval(n: usize, x: f64) -> (f64, f64) {
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
    let dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, dp)
}

/// Builds the panel edge list for `[lo, hi]`.
///
/// Dyadic points `±2^k` lying strictly inside the interval are inserted, with
/// geometric refinement toward each kink listed in `kinks` (typically just 0).
/// Wide panels are subdivided to `MAX_PANEL_WIDTH`.
pub fn panel_edges(lo: f64, hi: f64, kinks: &[f64]) -> Vec<f64> {
    assert!(lo < hi);
    let mut edges = vec![lo, hi];
    // Signed dyadic ladder covering the interval.
    let mut k = MIN_DYADIC_EXP;
    loop {
        let v = (k as f64).exp2();
        if v > hi.abs().max(lo.abs()) * 2.0 || k > 1200 {
            break;
        }
        if v > lo && v < hi {
            edges.push(v);
        }
        if -v > lo && -v < hi {
            edges.push(-v);
        }
        k += 1;
    }
    for &c in kinks {
        if c > lo && c < hi {
            edges.push(c);
            // Geometric approach to the kink from both sides.
            for j in MIN_DYADIC_EXP..0 {
                let d = (j as f64).exp2();
                if c + d < hi {
                    edges.push(c + d);
                }
                if c - d > lo {
                    edges.push(c - d);
                }
            }
        }
    }
    edges.sort_by(|a, b| a.partial_cmp(b).unwrap());
    edges.dedup_by(|a, b| (*a - *b).abs() <= f64::EPSILON * a.abs().max(1.0));
    // Subdivide anything wider than the cap.
    let mut out = Vec::with_capacity(edges.len() * 2);
    for w in edges.windows(2) {
        let (a, b) = (w[0], w[1]);
        out.push(a);
        let width = b - a;
        if width > MAX_PANEL_WIDTH {
            let parts = (width / MAX_PANEL_WIDTH).ceil() as usize;
            for p in 1..parts {
                out.push(a + width * p as f64 / parts as f64);
            }
        }
    }
    out.push(hi);
    out
}

/// A fixed composite quadrature: panel edges plus flattened nodes/weights.
#[derive(Debug, Clone)]
pub struct PanelQuadrature {
    pub edges: Vec<f64>,
    pub nodes: Vec<f64>,
    /// Plain Lebesgue weights.
    pub weights: Vec<f64>,
    rule: GaussRule,
}

impl PanelQuadrature {
    pub fn new(edges: Vec<f64>) -> Self {
        let rule = GaussRule::legendre(PANEL_POINTS);
        let mut nodes = Vec::with_capacity((edges.len() - 1) * PANEL_POINTS);
        let mut weights = Vec::with_capacity(nodes.capacity());
        for w in edges.windows(2) {
            let half = 0.5 * (w[1] - w[0]);
            let mid = 0.5 * (w[0] + w[1]);
            for (x, wt) in rule.nodes.iter().zip(&rule.weights) {
                nodes.push(mid + half * x);
                weights.push(wt * half);
            }
        }
        PanelQuadrature {
            edges,
            nodes,
            weights,
            rule,
        }
    }

    pub fn lo(&self) -> f64 {
        self.edges[0]
    }

    pub fn hi(&self) -> f64 {
        *self.edges.last().unwrap()
    }

    /// `sum w_i f(x_i)` over the whole window.
    pub fn integrate<F: Fn(f64) -> f64>(&self, f: F) -> f64 {
        self.nodes
            .iter()
            .zip(&self.weights)
            .map(|(x, w)| w * f(*x))
            .sum()
    }

    /// Cumulative integral of `f`: exact panel prefix sums plus a fresh
    /// sub-panel rule for the partial panel containing the query point.
    pub fn cumulative<F: Fn(f64) -> f64 + Copy>(&self, f: F) -> CumulativeIntegral<'_, F> {
        let mut prefix = Vec::with_capacity(self.edges.len());
        prefix.push(0.0);
        let mut acc = 0.0;
        for p in 0..self.edges.len() - 1 {
            let mut panel = 0.0;
            for i in p * PANEL_POINTS..(p + 1) * PANEL_POINTS {
                panel += self.weights[i] * f(self.nodes[i]);
            }
            acc += panel;
            prefix.push(acc);
        }
        CumulativeIntegral {
            quad: self,
            prefix,
            f,
        }
    }
}

/// Prefix sums of a panel quadrature for one fixed integrand.
pub struct CumulativeIntegral<'a, F: Fn(f64) -> f64 + Copy> {
    quad: &'a PanelQuadrature,
    prefix: Vec<f64>,
    f: F,
}

impl<F: Fn(f64) -> f64 + Copy> CumulativeIntegral<'_, F> {
    pub fn total(&self) -> f64 {
        *self.prefix.last().unwrap()
    }

    /// Integral from the left edge to `x` (clamped to the window).
    pub fn eval(&self, x: f64) -> f64 {
        let edges = &self.quad.edges;
        if x <= edges[0] {
            return 0.0;
        }
        if x >= *edges.last().unwrap() {
            return self.total();
        }
        let i = match edges.binary_search_by(|e| e.partial_cmp(&x).unwrap()) {
            Ok(i) => return self.prefix[i],
            Err(i) => i - 1,
        };
        self.prefix[i] + self.quad.rule.integrate(edges[i], x, self.f)
    }
}

/// Integral of `f` over `[a, b]` with panels graded geometrically toward `b`,
/// for integrands whose mass piles up at the right end (e.g. `exp(phi)`).
pub fn integrate_graded_right<F: Fn(f64) -> f64>(a: f64, b: f64, f: F) -> f64 {
    if b <= a {
        return 0.0;
    }
    let rule = GaussRule::legendre(PANEL_POINTS);
    let len = b - a;
    let mut acc = 0.0;
    let mut lo_edge = a;
    for k in 1..=52 {
        let hi_edge = b - len * (-(k as f64)).exp2();
        acc += rule.integrate(lo_edge, hi_edge, &f);
        lo_edge = hi_edge;
    }
    acc + rule.integrate(lo_edge, b, &f)
}

/// Same grading toward the left end `a`.
pub fn integrate_graded_left<F: Fn(f64) -> f64>(a: f64, b: f64, f: F) -> f64 {
    integrate_graded_right(-b, -a, |t| f(-t))
}
