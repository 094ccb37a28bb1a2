//! One-dimensional optimal transport with the piecewise quadratic/power
//! ground costs, the Hopf-Lax infimal convolution, and the transportation
//! inequality checks that connect them to the modified LSI.
//!
//! For a convex even ground cost on the line the monotone (quantile)
//! coupling attains the transport infimum; this classical fact is assumed
//! here and continuously audited against a discrete exhaustive oracle in the
//! test suite.

use std::sync::Arc;

use serde::Serialize;

use crate::costs::CostFunction;
use crate::error::{Error, Result};
use crate::functionals::{dirichlet, variance};
use crate::grid::GridFunction;
use crate::measures::Measure1D;
use crate::report::Verdict;
use crate::roots::golden_min;

/// A probability density with respect to a reference measure, used as the
/// source marginal `F dmu` of a transport problem.
#[derive(Clone)]
pub struct DensityMember {
    pub label: String,
    f: Arc<dyn Fn(f64) -> f64 + Send + Sync>,
}

impl DensityMember {
    pub fn new<F>(label: &str, f: F) -> Self
    where
        F: Fn(f64) -> f64 + Send + Sync + 'static,
    {
        DensityMember {
            label: label.into(),
            f: Arc::new(f),
        }
    }

    pub fn eval(&self, x: f64) -> f64 {
        (self.f)(x)
    }

    /// Translation densities `rho(x - c)/rho(x)` for a full-line measure.
    pub fn translations(m: &Measure1D, shifts: &[f64]) -> Vec<DensityMember> {
        shifts
            .iter()
            .map(|&c| DensityMember {
                label: format!("translate({c:.3})"),
                f: Arc::new({
                    let pot = measure_potential(m);
                    move |x: f64| (pot(x) - pot(x - c)).exp()
                }),
            })
            .collect()
    }

    /// Exponential tilts `exp(lambda x)/MGF(lambda)`.
    pub fn tilts(m: &Measure1D, lambdas: &[f64]) -> Vec<DensityMember> {
        lambdas
            .iter()
            .map(|&l| {
                let mgf = m.integrate(|x| (l * x).exp());
                DensityMember {
                    label: format!("tilt({l:.3})"),
                    f: Arc::new(move |x: f64| (l * x).exp() / mgf),
                }
            })
            .collect()
    }
}

fn measure_potential(m: &Measure1D) -> impl Fn(f64) -> f64 + Send + Sync + 'static {
    let spec = m.spec().clone();
    let built = Measure1D::build(&spec).expect("rebuilding a declarative spec");
    move |x: f64| built.potential(x)
}

/// The monotone rearrangement between `F dmu` and a target measure,
/// materialized on the source quadrature nodes.
pub struct Coupling1D {
    xs: Vec<f64>,
    map: Vec<f64>,
    weights: Vec<f64>,
    source_cdf: Vec<f64>,
    pub renormalized: bool,
}

impl Coupling1D {
    /// Builds `T = quantile_target . cdf_source` on the source nodes.
    /// `F` is renormalized (and flagged) when `int F dmu` strays from 1.
    pub fn monotone(
        m: &Measure1D,
        density: &DensityMember,
        target: &Measure1D,
    ) -> Result<Coupling1D> {
        let (xs_ref, mu_w) = m.nodes_and_weights();
        let xs = xs_ref.to_vec();
        let mut weights: Vec<f64> = xs
            .iter()
            .zip(mu_w)
            .map(|(&x, &w)| w * density.eval(x).max(0.0))
            .collect();
        let (cumulative, mass) = m.weighted_cumulative_at_nodes(|x| density.eval(x));
        if !(mass.is_finite() && mass > 0.0) {
            return Err(Error::InvalidSpec(format!(
                "density {} has non-finite or zero mass",
                density.label
            )));
        }
        let renormalized = (mass - 1.0).abs() > 1e-8;
        weights.iter_mut().for_each(|w| *w /= mass);
        let source_cdf: Vec<f64> = cumulative.iter().map(|&c| (c / mass).min(1.0)).collect();
        let map = target.quantile_sweep(&source_cdf);
        Ok(Coupling1D {
            xs,
            map,
            weights,
            source_cdf,
            renormalized,
        })
    }

    pub fn map_points(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        self.xs.iter().copied().zip(self.map.iter().copied())
    }

    /// `int L(x - T(x)) F(x) dmu(x)`.
    pub fn transport_cost(&self, l: &CostFunction) -> f64 {
        self.xs
            .iter()
            .zip(&self.map)
            .zip(&self.weights)
            .map(|((&x, &t), &w)| w * l.evaluate(x - t))
            .sum()
    }

    /// Largest pushforward defect `|cdf_target(T(x)) - cdf_source(x)|` over
    /// a probe subset of nodes.
    pub fn pushforward_error(&self, target: &Measure1D) -> f64 {
        let stride = (self.xs.len() / 64).max(1);
        let mut err: f64 = 0.0;
        for i in (0..self.xs.len()).step_by(stride) {
            err = err.max((target.cdf(self.map[i]) - self.source_cdf[i]).abs());
        }
        err
    }
}

/// Monotonicity check plus a convexity guard, then the monotone-coupling
/// transport cost `T_L(F dmu, mu)`.
pub fn ot_cost(l: &CostFunction, density: &DensityMember, m: &Measure1D) -> Result<f64> {
    ensure_convex(l)?;
    let coupling = Coupling1D::monotone(m, density, m)?;
    Ok(coupling.transport_cost(l))
}

fn ensure_convex(l: &CostFunction) -> Result<()> {
    // Midpoint convexity on a coarse grid; the built-in families pass by
    // construction, this guards hand-rolled compositions.
    let n = 64;
    for i in 1..n {
        let x0 = -10.0 + 20.0 * (i - 1) as f64 / n as f64;
        let x1 = -10.0 + 20.0 * i as f64 / n as f64;
        let x2 = -10.0 + 20.0 * (i + 1) as f64 / n as f64;
        let (f0, f1, f2) = (l.evaluate(x0), l.evaluate(x1), l.evaluate(x2));
        if f0.is_finite() && f1.is_finite() && f2.is_finite() {
            if f1 > 0.5 * (f0 + f2) + 1e-9 * (1.0 + f1.abs()) {
                return Err(Error::NonConvexTransportCost);
            }
        }
    }
    Ok(())
}

/// Monotone-coupling cost between two equal-weight atom lists (sorted
/// pairing). The exhaustive oracle for this lives in the test suite.
pub fn monotone_coupling_cost_discrete(
    xs: &[f64],
    ys: &[f64],
    l: &CostFunction,
) -> Result<f64> {
    if xs.len() != ys.len() || xs.is_empty() {
        return Err(Error::InvalidSpec("atom lists must match and be nonempty".into()));
    }
    ensure_convex(l)?;
    let mut a = xs.to_vec();
    let mut b = ys.to_vec();
    a.sort_by(|p, q| p.partial_cmp(q).unwrap());
    b.sort_by(|p, q| p.partial_cmp(q).unwrap());
    Ok(a.iter()
        .zip(&b)
        .map(|(&x, &y)| l.evaluate(x - y))
        .sum::<f64>()
        / xs.len() as f64)
}

/// Entropy of a density with respect to `mu`: `int F ln F dmu` (direct
/// formula; `int F dmu = 1` is restored first when violated).
pub fn density_entropy(m: &Measure1D, density: &DensityMember) -> f64 {
    let mass = m.integrate(|x| density.eval(x).max(0.0));
    m.integrate(|x| {
        let f = density.eval(x).max(0.0) / mass;
        if f > 0.0 {
            f * f.ln()
        } else {
            0.0
        }
    })
}

/// Hopf-Lax infimal convolution
/// `Q_t f(x) = inf_y ( f(y) + t L((x - y)/t) )` on the grid of `f`.
///
/// `f` is interpolated piecewise-linearly (exact for the Lipschitz ramp and
/// cap families whose kinks sit on grid nodes); the infimum over each
/// candidate segment is convex and solved by golden section after a global
/// node scan. `t = 0` returns `f` unchanged.
pub fn hopf_lax(f: &GridFunction, l: &CostFunction, t: f64) -> Result<GridFunction> {
    if t < 0.0 {
        return Err(Error::ParameterOutOfRange("Hopf-Lax time must be >= 0".into()));
    }
    if t == 0.0 {
        return GridFunction::new(f.nodes().to_vec(), f.values().to_vec());
    }
    ensure_convex(l)?;
    let ys = f.nodes();
    let vs = f.values();
    let n = ys.len();
    let lin = |i: usize, y: f64| -> f64 {
        // Linear interpolation on segment i.
        let w = (y - ys[i]) / (ys[i + 1] - ys[i]);
        vs[i] * (1.0 - w) + vs[i + 1] * w
    };
    let mut out = Vec::with_capacity(n);
    for &x in ys {
        let node_obj = |j: usize| vs[j] + t * l.evaluate((x - ys[j]) / t);
        let mut best = f64::INFINITY;
        let mut best_j = 0usize;
        let mut nodal = Vec::with_capacity(n);
        for j in 0..n {
            let v = node_obj(j);
            nodal.push(v);
            if v < best {
                best = v;
                best_j = j;
            }
        }
        // Refine every segment adjacent to a discrete local minimum.
        let refine_segment = |i: usize, best: &mut f64| {
            if i >= n - 1 {
                return;
            }
            let (a, b) = (ys[i], ys[i + 1]);
            let obj = |y: f64| lin(i, y) + t * l.evaluate((x - y) / t);
            let (_, v) = golden_min(obj, a, b, 1e-12 * (1.0 + b.abs()), 120);
            if v < *best {
                *best = v;
            }
        };
        for j in 0..n {
            let is_local_min = (j == 0 || nodal[j] <= nodal[j - 1])
                && (j + 1 == n || nodal[j] <= nodal[j + 1]);
            if is_local_min || j == best_j {
                if j > 0 {
                    refine_segment(j - 1, &mut best);
                }
                refine_segment(j, &mut best);
            }
        }
        out.push(best);
    }
    GridFunction::new(ys.to_vec(), out)
}

/// Log-slack of the dual (Bobkov-Goetze) form of the transportation
/// inequality for one test function:
/// `(4/C) int f dmu - ln int exp((4/C) Q_1 f) dmu`, with `Q_1` driven by the
/// transport cost at threshold `a C / 2`. Nonnegative slack supports the
/// inequality for this `f`.
pub fn dual_check(
    m: &Measure1D,
    c: f64,
    a: f64,
    alpha: f64,
    f: &GridFunction,
) -> Result<f64> {
    if !(c > 0.0) {
        return Err(Error::ParameterOutOfRange("constant must be positive".into()));
    }
    let l = CostFunction::l_cost(a * c / 2.0, alpha)?;
    let q1 = hopf_lax(f, &l, 1.0)?;
    let s = f.integrate_against(m, |_, _, _| 1.0);
    let mean = f.integrate_against(m, |_, v, _| v) / s;
    let exp_int = q1.integrate_against(m, |_, v, _| ((4.0 / c) * v).exp()) / s;
    Ok((4.0 / c) * mean - exp_int.ln())
}

/// Per-density outcome of a transportation-inequality check.
#[derive(Debug, Clone, Serialize)]
pub struct TransportCheck {
    pub label: String,
    pub cost: f64,
    pub entropy: f64,
    /// `(C/4) Ent - cost`; nonnegative supports the inequality.
    pub slack: f64,
    pub renormalized: bool,
}

/// Report of `T_L(F dmu, mu) <= (C/4) Ent(F)` over a density family, with
/// the transport threshold `a C / 2` implied by the LSI chain.
#[derive(Debug, Clone, Serialize)]
pub struct TalagrandReport {
    pub constant: f64,
    pub threshold: f64,
    pub alpha: f64,
    pub checks: Vec<TransportCheck>,
    pub max_violation: f64,
    pub verdict: Verdict,
}

pub fn verify_talagrand(
    m: &Measure1D,
    c: f64,
    a: f64,
    alpha: f64,
    densities: &[DensityMember],
    tolerance: f64,
) -> Result<TalagrandReport> {
    if !(c > 0.0 && a > 0.0) {
        return Err(Error::ParameterOutOfRange("need C > 0 and a > 0".into()));
    }
    let threshold = a * c / 2.0;
    let l = CostFunction::l_cost(threshold, alpha)?;
    let mut checks = Vec::with_capacity(densities.len());
    let mut max_violation: f64 = f64::NEG_INFINITY;
    for d in densities {
        let coupling = Coupling1D::monotone(m, d, m)?;
        let cost = coupling.transport_cost(&l);
        let ent = density_entropy(m, d);
        let slack = (c / 4.0) * ent - cost;
        max_violation = max_violation.max(-slack);
        checks.push(TransportCheck {
            label: d.label.clone(),
            cost,
            entropy: ent,
            slack,
            renormalized: coupling.renormalized,
        });
    }
    let verdict = if max_violation <= tolerance {
        Verdict::CertifiedBounded
    } else {
        Verdict::Violated
    };
    Ok(TalagrandReport {
        constant: c / 4.0,
        threshold,
        alpha,
        checks,
        max_violation,
        verdict,
    })
}

/// Marton-style concentration from a transportation inequality:
/// `mu((A_r)^c) <= 2 exp(-L(r)/C)` whenever `mu(A) >= 1/2`, capped at 1.
pub fn marton_bound(c: f64, l: &CostFunction, r: f64) -> f64 {
    assert!(c > 0.0);
    if r < 0.0 {
        return 1.0;
    }
    (2.0 * (-l.evaluate(r) / c).exp()).min(1.0)
}

/// Spectral-gap consequence of a transportation inequality: the family
/// supremum of `Var(g)/int g'^2 dmu` compared against the transport constant.
#[derive(Debug, Clone, Serialize)]
pub struct PoincareFromTransportReport {
    pub constant: f64,
    pub max_ratio: f64,
    pub witness: String,
    pub verdict: Verdict,
}

pub fn t_implies_poincare_check(
    m: &Measure1D,
    c: f64,
    family: &crate::families::TestFamily,
    grid_nodes: usize,
    tolerance: f64,
) -> PoincareFromTransportReport {
    let (lo, hi) = m.window();
    let mut max_ratio: f64 = 0.0;
    let mut witness = String::new();
    for member in &family.members {
        let Ok(grid) = member.materialize(lo, hi, grid_nodes) else {
            continue;
        };
        let num = variance(m, &grid);
        let den = dirichlet(m, &grid);
        if den <= 1e-13 {
            continue; // constants are skipped
        }
        let r = num / den;
        if r > max_ratio {
            max_ratio = r;
            witness = member.label.clone();
        }
    }
    PoincareFromTransportReport {
        constant: c,
        max_ratio,
        witness,
        verdict: if max_ratio <= c + tolerance {
            Verdict::CertifiedBounded
        } else {
            Verdict::Violated
        },
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::measures::MeasureSpec;
    use approx::assert_abs_diff_eq;

    fn mu(alpha: f64) -> Measure1D {
        Measure1D::build(&MeasureSpec::MuAlpha { alpha }).unwrap()
    }

    #[test]
    fn identity_density_has_zero_cost() {
        let m = mu(2.0);
        let one = DensityMember::new("1", |_| 1.0);
        let l = CostFunction::l_cost(5.0, 1.5).unwrap();
        let cost = ot_cost(&l, &one, &m).unwrap();
        assert!(cost.abs() < 1e-12, "cost {cost}");
    }

    #[test]
    fn translation_cost_is_quadratic_shift() {
        // Shift mu_2 by 0.3 with a threshold far out: the monotone map is a
        // translation and the cost is c^2/2.
        let m = mu(2.0);
        let d = &DensityMember::translations(&m, &[0.3])[0];
        let l = CostFunction::l_cost(5.0, 1.5).unwrap();
        let cost = ot_cost(&l, d, &m).unwrap();
        assert_abs_diff_eq!(cost, 0.045, epsilon = 2e-6);
    }

    #[test]
    fn coupling_pushforward_is_tight() {
        let m = mu(2.0);
        let d = &DensityMember::tilts(&m, &[0.8])[0];
        let coupling = Coupling1D::monotone(&m, d, &m).unwrap();
        assert!(coupling.pushforward_error(&m) < 1e-6);
        // The map is nondecreasing.
        let pts: Vec<(f64, f64)> = coupling.map_points().collect();
        assert!(pts.windows(2).all(|w| w[1].1 >= w[0].1 - 1e-12));
    }

    #[test]
    fn cost_monotone_in_ground_cost() {
        let m = mu(2.0);
        let d = &DensityMember::tilts(&m, &[1.0])[0];
        let small = CostFunction::l_cost(0.5, 1.5).unwrap();
        let big = CostFunction::l_cost(2.0, 1.5).unwrap();
        // L(0.5, .) <= L(2, .) pointwise on the relevant range.
        let c_small = ot_cost(&small, d, &m).unwrap();
        let c_big = ot_cost(&big, d, &m).unwrap();
        assert!(c_small <= c_big + 1e-12);
    }

    #[test]
    fn discrete_monotone_cost_sorted_pairing() {
        let l = CostFunction::quadratic();
        let c = monotone_coupling_cost_discrete(&[3.0, 1.0, 2.0], &[1.5, 2.5, 3.5], &l).unwrap();
        // Sorted pairing: (1,1.5),(2,2.5),(3,3.5): cost = 3 * 0.125 / 3.
        assert_abs_diff_eq!(c, 0.125, epsilon = 1e-15);
    }

    #[test]
    fn hopf_lax_moreau_envelope() {
        // f = |x| with quadratic cost at t = 1: x^2/2 inside |x| <= 1,
        // |x| - 1/2 outside.
        let f = GridFunction::sample_with_knots(
            |x: f64| x.abs(),
            -8.0,
            8.0,
            801,
            &[0.0, 0.5, 2.0, -0.5, -2.0, 1.0, -1.0],
        )
        .unwrap();
        let l = CostFunction::l_cost(50.0, 1.5).unwrap(); // quadratic region active
        let q = hopf_lax(&f, &l, 1.0).unwrap();
        let lookup = |x: f64| {
            let i = q.nodes().iter().position(|&n| (n - x).abs() < 1e-12).unwrap();
            q.values()[i]
        };
        assert_abs_diff_eq!(lookup(0.0), 0.0, epsilon = 1e-8);
        assert_abs_diff_eq!(lookup(0.5), 0.125, epsilon = 1e-8);
        assert_abs_diff_eq!(lookup(2.0), 1.5, epsilon = 1e-8);
    }

    #[test]
    fn hopf_lax_basics() {
        let f = GridFunction::sample(|_| 3.0, -5.0, 5.0, 101).unwrap();
        let l = CostFunction::quadratic();
        let q = hopf_lax(&f, &l, 0.7).unwrap();
        for (&v, &orig) in q.values().iter().zip(f.values()) {
            assert_abs_diff_eq!(v, orig, epsilon = 1e-12);
        }
        // Q_t f <= f pointwise (y = x candidate).
        let g = GridFunction::sample(|x: f64| (x * 0.8).sin() + 0.2 * x, -5.0, 5.0, 1201).unwrap();
        let qg = hopf_lax(&g, &l, 0.5).unwrap();
        for (&v, &orig) in qg.values().iter().zip(g.values()) {
            assert!(v <= orig + 1e-10);
        }
        // Semigroup inequality Q_{t+s} f >= Q_t(Q_s f) up to the chord error
        // of the intermediate piecewise-linear representation (~h^2 |Q''|/8).
        let q_full = hopf_lax(&g, &l, 1.0).unwrap();
        let q_comp = hopf_lax(&hopf_lax(&g, &l, 0.5).unwrap(), &l, 0.5).unwrap();
        for (&a, &b) in q_full.values().iter().zip(q_comp.values()) {
            assert!(a >= b - 3e-5, "semigroup violated: {a} < {b}");
        }
    }

    #[test]
    fn dual_check_constants_have_zero_slack() {
        let m = mu(2.0);
        let f = GridFunction::sample(|_| 1.3, m.window().0, m.window().1, 101).unwrap();
        let slack = dual_check(&m, 2.0, 1.0, 2.0, &f).unwrap();
        assert_abs_diff_eq!(slack, 0.0, epsilon = 1e-10);
    }

    #[test]
    fn talagrand_tight_on_gaussian_tilts() {
        // Standard Gaussian with the H-form constant C = 4 and quadratic
        // cost: translations make the inequality an identity.
        let g = Measure1D::build(&MeasureSpec::Gaussian { sigma: 1.0 }).unwrap();
        let tilts = DensityMember::tilts(&g, &[0.4, 0.8, 1.2]);
        let report = verify_talagrand(&g, 4.0, 2.0, 2.0, &tilts, 1e-6).unwrap();
        assert_eq!(report.verdict, Verdict::CertifiedBounded);
        for c in &report.checks {
            assert_abs_diff_eq!(c.slack, 0.0, epsilon = 1e-7);
        }
    }

    #[test]
    fn marton_bound_plug_in() {
        let l = CostFunction::l_cost(1.0, 1.5).unwrap();
        assert_eq!(marton_bound(1.0, &l, 0.0), 1.0);
        let b = marton_bound(1.0, &l, 2.0);
        let expect = 2.0 * (-(2f64.powf(1.5) / 1.5 - 1.0 / 6.0)).exp();
        assert_abs_diff_eq!(b, expect, epsilon = 1e-12);
        assert_abs_diff_eq!(b, 0.3585, epsilon = 5e-4);
    }

    #[test]
    fn marton_quadrature_companion() {
        // A = (-inf, median]; (A_r)^c = [median + r, inf). With the
        // certified chain for mu_2 (C_T = 1/2, threshold 1), the measured
        // tail stays below the bound.
        let m = mu(2.0);
        let median = m.median();
        let l = CostFunction::l_cost(1.0, 2.0).unwrap();
        for r in [0.5, 1.0, 2.0, 4.0] {
            let tail = m.tail_mass(median + r);
            let bound = marton_bound(0.5, &l, r);
            assert!(tail <= bound, "r={r}: {tail} > {bound}");
        }
    }

    #[test]
    fn poincare_from_transport() {
        let m = mu(2.0);
        let fam = crate::families::combine(
            "mix",
            vec![
                crate::families::ramps(-5e5, -5e5, 1, &[1e6], 1.0).unwrap(),
                crate::families::bumps(-1.0, 1.0, 4, &[0.8], 1.0).unwrap(),
            ],
        );
        // Transport constant C = 1/2 from the mu_2 chain; the gap is 1/2.
        let report = t_implies_poincare_check(&m, 0.5, &fam, 2049, 1e-6);
        assert_eq!(report.verdict, Verdict::CertifiedBounded);
        assert_abs_diff_eq!(report.max_ratio, 0.5, epsilon = 1e-6);
    }
}
