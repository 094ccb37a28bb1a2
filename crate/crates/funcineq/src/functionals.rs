//! Entropy, variance, modified Dirichlet energies and the pointwise
//! auxiliary inequalities, evaluated on grid test functions by quadrature
//! against a measure.
//!
//! Conventions: `Ent(f^2) = int f^2 ln f^2 - int f^2 ln int f^2`, all
//! integrals against the measure discretized on the grid span and normalized
//! to unit mass there (so constants have exactly zero entropy, variance and
//! deficit regardless of grid resolution). In energies the degenerate
//! direction `0/0` follows the rule: a zero of `f` with `f' != 0` in the
//! region forces the energy to `+inf`; joint zeros of `(f, f')` contribute
//! nothing (the `f^2` weight vanishes while `f'/f` stays bounded along the
//! limit).

use crate::costs::CostFunction;
use crate::error::{Error, Result};
use crate::grid::GridFunction;
use crate::measures::Measure1D;

/// Region of integration for the restricted energies.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Region {
    All,
    /// `{ f >= 2 }`
    AboveTwo,
    /// The union `{f_+ >= 2 sqrt(int f_+^2)} u {f_- >= 2 sqrt(int f_-^2)}`;
    /// thresholds are computed by quadrature before restriction.
    Omega,
}

/// Threshold below which a function value counts as an exact zero for the
/// 0/0 convention, relative to the sup of |f|.
const ZERO_REL: f64 = 1e-13;

/// Mass of the grid-discretized measure on the grid span; all functionals
/// divide by it so that the discrete measure is a probability measure.
fn grid_mass(m: &Measure1D, f: &GridFunction) -> f64 {
    f.integrate_against(m, |_, _, _| 1.0)
}

/// `Ent_mu(f2) = int f2 ln f2 dmu - (int f2 dmu) ln (int f2 dmu)`.
///
/// `f2` is the already-squared, nonnegative test function.
pub fn entropy(m: &Measure1D, f2: &GridFunction) -> Result<f64> {
    if f2.min_value() < -1e-12 * f2.sup_abs() {
        return Err(Error::InvalidGrid("entropy needs f2 >= 0".into()));
    }
    let s = grid_mass(m, f2);
    let mass = f2.integrate_against(m, |_, v, _| v.max(0.0)) / s;
    if mass <= 0.0 {
        return Err(Error::NullFunction);
    }
    let integral = f2.integrate_against(m, |_, v, _| {
        let v = v.max(0.0);
        if v == 0.0 {
            0.0
        } else {
            v * v.ln()
        }
    }) / s;
    let ent = integral - mass * mass.ln();
    // Clamp quadrature dust on exact constants.
    Ok(if ent < 0.0 && ent > -1e-11 * (1.0 + mass.abs()) {
        0.0
    } else {
        ent
    })
}

/// `Var_mu(f) = int f^2 dmu - (int f dmu)^2`, evaluated as the central
/// second moment to stay translation-safe for near-constant functions.
pub fn variance(m: &Measure1D, f: &GridFunction) -> f64 {
    let s = grid_mass(m, f);
    let mean = f.integrate_against(m, |_, v, _| v) / s;
    let central = f.integrate_against(m, |_, v, _| (v - mean) * (v - mean)) / s;
    central.max(0.0)
}

/// Plain Dirichlet integral `int f'^2 dmu`.
pub fn dirichlet(m: &Measure1D, f: &GridFunction) -> f64 {
    f.integrate_against(m, |_, _, d| d * d) / grid_mass(m, f)
}

/// Modified energy `int_region H(f'/f) f^2 dmu` (extended-real).
pub fn energy(m: &Measure1D, f: &GridFunction, h: &CostFunction, region: Region) -> f64 {
    let zero = ZERO_REL * f.sup_abs().max(1e-300);
    let in_region = |v: f64, tp: f64, tm: f64| match region {
        Region::All => true,
        Region::AboveTwo => v >= 2.0,
        Region::Omega => v >= tp || -v >= tm,
    };
    let s = grid_mass(m, f);
    let (tp, tm) = if region == Region::Omega {
        let plus = f.map(|v| v.max(0.0));
        let minus = f.map(|v| (-v).max(0.0));
        (
            2.0 * (plus.integrate_against(m, |_, v, _| v * v) / s).max(0.0).sqrt(),
            2.0 * (minus.integrate_against(m, |_, v, _| v * v) / s).max(0.0).sqrt(),
        )
    } else {
        (0.0, 0.0)
    };
    // The 0/0 rule is enforced at the nodes: a zero with nonzero
    // finite-difference slope, or a sign change across adjacent nodes,
    // makes the energy infinite when it touches the region.
    let vs = f.values();
    let ds = f.derivative_values();
    for i in 0..vs.len() {
        if in_region(vs[i], tp, tm) && vs[i].abs() <= zero && ds[i].abs() > 1e-9 {
            return f64::INFINITY;
        }
        if i + 1 < vs.len()
            && vs[i] * vs[i + 1] < 0.0
            && (in_region(vs[i], tp, tm) || in_region(vs[i + 1], tp, tm))
        {
            return f64::INFINITY;
        }
    }
    let integrand = move |_x: f64, v: f64, d: f64| -> f64 {
        if v.abs() <= zero {
            // Joint zeros contribute nothing; transversal zeros were caught above.
            if d.abs() <= 1e-9 {
                return 0.0;
            }
            return f64::INFINITY;
        }
        let hval = h.evaluate(d / v);
        if hval == f64::INFINITY {
            return f64::INFINITY;
        }
        hval * v * v
    };
    let raw = match region {
        Region::All => f.integrate_against(m, integrand),
        Region::AboveTwo => f.integrate_region_against(m, |v| v >= 2.0, integrand),
        Region::Omega => f.integrate_region_against(m, move |v| v >= tp || -v >= tm, integrand),
    };
    raw / s
}

/// Restricted power energy `int_region |f'/f|^beta f^2 dmu`, the right-hand
/// side of the two-term modified inequality.
pub fn restricted_power_energy(
    m: &Measure1D,
    f: &GridFunction,
    beta: f64,
    region: Region,
) -> f64 {
    let h = CostFunction::power(beta, 1.0).expect("beta >= 1");
    energy(m, f, &h, region)
}

/// The deficit `int f^2 dmu - (int f^p dmu)^(2/p)` for `p in [1, 2)`.
pub fn latala_deficit(m: &Measure1D, f: &GridFunction, p: f64) -> f64 {
    let s = grid_mass(m, f);
    let second = f.integrate_against(m, |_, v, _| v * v) / s;
    let pmean = f.integrate_against(m, |_, v, _| v.max(0.0).powf(p)) / s;
    second - pmean.powf(2.0 / p)
}

/// A discrete probability space with a nonnegative test function, for the
/// brute-force lemma checks.
#[derive(Debug, Clone)]
pub struct DiscreteInstance {
    pub weights: Vec<f64>,
    pub values: Vec<f64>,
}

impl DiscreteInstance {
    pub fn new(weights: Vec<f64>, values: Vec<f64>) -> Result<Self> {
        if weights.len() != values.len() || weights.is_empty() {
            return Err(Error::InvalidGrid("weights/values mismatch".into()));
        }
        if weights.iter().any(|&w| w < 0.0) || values.iter().any(|&v| v < 0.0) {
            return Err(Error::InvalidGrid(
                "discrete instances need nonnegative weights and values".into(),
            ));
        }
        let total: f64 = weights.iter().sum();
        if total <= 0.0 {
            return Err(Error::InvalidGrid("zero total weight".into()));
        }
        Ok(DiscreteInstance {
            weights: weights.iter().map(|w| w / total).collect(),
            values,
        })
    }

    fn mean<F: Fn(f64) -> f64>(&self, f: F) -> f64 {
        self.weights
            .iter()
            .zip(&self.values)
            .map(|(w, &v)| w * f(v))
            .sum()
    }
}

/// Minimum slacks of the auxiliary pointwise inequalities.
#[derive(Debug, Clone, serde::Serialize)]
pub struct PointwiseLemmaReport {
    /// (a) `5(x-1)^2 + x^2 - 1 + (x-2)_+^2 ln (x-2)_+^2 - x^2 ln x^2 >= 0` on the scalar grid.
    pub quintic_min_slack: f64,
    /// (b) `2 Var(f) - int (f-1)^2 >= 0` over the discrete instances.
    pub squared_deviation_min_slack: f64,
    /// (c) `8 Var(f) - int_{f>=2} f^2 >= 0`.
    pub restricted_mass_min_slack: f64,
    /// (d) `(ln4/(ln4-1)) Ent(f^2) - int_{f>=2} f^2 ln f^2 >= 0`.
    pub restricted_entropy_min_slack: f64,
    /// (e) `x ln x + 1 - x >= 0` on the positive part of the scalar grid.
    pub xlnx_min_slack: f64,
    /// Instances whose `int f^2 = 1` normalization had to be restored.
    pub rescaled_instances: usize,
}

/// Evaluates the five auxiliary inequalities: (a)/(e) on the scalar grid,
/// (b)-(d) on discrete instances normalized to `int f^2 = 1` (rescaled and
/// counted when they are not).
pub fn verify_pointwise_lemmas(
    scalar_grid: &[f64],
    instances: &[DiscreteInstance],
) -> PointwiseLemmaReport {
    let mut quintic = f64::INFINITY;
    let mut xlnx = f64::INFINITY;
    for &x in scalar_grid {
        if x < 0.0 {
            continue;
        }
        let x2lnx2 = if x == 0.0 { 0.0 } else { x * x * (x * x).ln() };
        let then = (x - 2.0).max(0.0);
        let trunc = if then == 0.0 {
            0.0
        } else {
            then * then * (then * then).ln()
        };
        quintic = quintic.min(5.0 * (x - 1.0) * (x - 1.0) + x * x - 1.0 + trunc - x2lnx2);
        if x > 0.0 {
            xlnx = xlnx.min(x * x.ln() + 1.0 - x);
        }
    }

    let ln4 = 4.0f64.ln();
    let mut sq_dev = f64::INFINITY;
    let mut mass = f64::INFINITY;
    let mut rest_ent = f64::INFINITY;
    let mut rescaled = 0usize;
    for inst in instances {
        let norm2 = inst.mean(|v| v * v);
        if norm2 <= 0.0 {
            continue;
        }
        let mut inst = inst.clone();
        if (norm2 - 1.0).abs() > 1e-12 {
            let s = norm2.sqrt();
            inst.values.iter_mut().for_each(|v| *v /= s);
            rescaled += 1;
        }
        let mean = inst.mean(|v| v);
        let var = 1.0 - mean * mean;
        sq_dev = sq_dev.min(2.0 * var - inst.mean(|v| (v - 1.0) * (v - 1.0)));
        let above: f64 = inst
            .weights
            .iter()
            .zip(&inst.values)
            .filter(|(_, &v)| v >= 2.0)
            .map(|(w, &v)| w * v * v)
            .sum();
        mass = mass.min(8.0 * var - above);
        let above_ent: f64 = inst
            .weights
            .iter()
            .zip(&inst.values)
            .filter(|(_, &v)| v >= 2.0)
            .map(|(w, &v)| w * v * v * (v * v).ln())
            .sum();
        let ent: f64 = inst.mean(|v| if v > 0.0 { v * v * (v * v).ln() } else { 0.0 });
        rest_ent = rest_ent.min(ln4 / (ln4 - 1.0) * ent - above_ent);
    }

    PointwiseLemmaReport {
        quintic_min_slack: quintic,
        squared_deviation_min_slack: sq_dev,
        restricted_mass_min_slack: mass,
        restricted_entropy_min_slack: rest_ent,
        xlnx_min_slack: xlnx,
        rescaled_instances: rescaled,
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

    fn grid_of(m: &Measure1D, f: impl Fn(f64) -> f64, n: usize) -> GridFunction {
        let (lo, hi) = m.window();
        GridFunction::sample(f, lo, hi, n).unwrap()
    }

    #[test]
    fn entropy_of_constants_vanishes() {
        let m = mu(1.5);
        let f2 = grid_of(&m, |_| 5.0, 257);
        assert_eq!(entropy(&m, &f2).unwrap(), 0.0);
    }

    #[test]
    fn entropy_closed_form_for_exponential_tilt() {
        // Under exp(-x^2)/sqrt(pi): Ent(e^{lambda x}) = (lambda^2/4) e^{lambda^2/4}.
        let m = mu(2.0);
        let f2 = grid_of(&m, |x| (2.0 * x).exp(), 4097);
        let ent = entropy(&m, &f2).unwrap();
        assert_abs_diff_eq!(ent, std::f64::consts::E, epsilon = 2e-6);
    }

    #[test]
    fn entropy_of_null_function_errors() {
        let m = mu(2.0);
        let f2 = grid_of(&m, |_| 0.0, 65);
        assert!(matches!(entropy(&m, &f2), Err(Error::NullFunction)));
    }

    #[test]
    fn entropy_is_homogeneous_of_degree_one() {
        let m = mu(1.5);
        let f2 = grid_of(&m, |x| 1.0 + 0.5 * (x * 1.3).sin().powi(2), 1025);
        let e1 = entropy(&m, &f2).unwrap();
        let e3 = entropy(&m, &f2.scaled(3.0)).unwrap();
        assert_abs_diff_eq!(e3, 3.0 * e1, epsilon = 1e-10 * (1.0 + e1.abs()));
    }

    #[test]
    fn variance_closed_forms() {
        let m = mu(2.0);
        let f = grid_of(&m, |x| x, 2049);
        assert_abs_diff_eq!(variance(&m, &f), 0.5, epsilon = 1e-8);
        let m1 = mu(1.0);
        let f = grid_of(&m1, |x| x, 4097);
        assert_abs_diff_eq!(variance(&m1, &f), 2.0, epsilon = 1e-6);
        let c = grid_of(&m, |_| 7.0, 65);
        assert_abs_diff_eq!(variance(&m, &c), 0.0, epsilon = 1e-12);
    }

    #[test]
    fn energy_closed_form_for_exponentials() {
        // f = e^{lambda x / 2}: f'/f = lambda/2, H = x^2/2 gives
        // (lambda^2/8) int f^2 dmu = (lambda^2/8) e^{lambda^2/4} under mu_2.
        let m = mu(2.0);
        let f = grid_of(&m, |x| x.exp(), 4097); // lambda = 2
        let h = CostFunction::quadratic();
        let v = energy(&m, &f, &h, Region::All);
        assert_abs_diff_eq!(v, 0.5 * std::f64::consts::E, epsilon = 2e-6);
    }

    #[test]
    fn energy_zero_for_constant_and_empty_region() {
        let m = mu(1.5);
        let f = grid_of(&m, |_| 1.0, 65);
        let h = CostFunction::quadratic();
        assert_abs_diff_eq!(energy(&m, &f, &h, Region::All), 0.0, epsilon = 1e-14);
        // f < 2 everywhere: restricted region empty.
        assert_eq!(energy(&m, &f, &h, Region::AboveTwo), 0.0);
    }

    #[test]
    fn energy_zero_over_zero_convention() {
        let m = mu(2.0);
        let h = CostFunction::quadratic();
        // f = x crosses zero with slope 1: the 0/0 rule forces +inf.
        let f = GridFunction::sample_with_knots(
            |x: f64| x,
            m.window().0,
            m.window().1,
            513,
            &[0.0],
        )
        .unwrap();
        assert_eq!(energy(&m, &f, &h, Region::All), f64::INFINITY);
        // Restricted away from the zero it is finite.
        assert!(energy(&m, &f, &h, Region::AboveTwo).is_finite());
        // The symmetric kink of min(|x|, 1) has zero centered difference at
        // the node: a joint zero of (f, f'), which contributes nothing.
        let cap = GridFunction::sample_with_knots(
            |x: f64| x.abs().min(1.0),
            m.window().0,
            m.window().1,
            513,
            &[-1.0, 0.0, 1.0],
        )
        .unwrap();
        assert!(energy(&m, &cap, &h, Region::All).is_finite());
    }

    #[test]
    fn chain_rule_identity_for_quadratic_energy() {
        // With H = x^2/2 and f = e^{g/2}: energy = (1/8) int g'^2 e^g dmu.
        let m = mu(2.0);
        let g = |x: f64| 0.4 * x + 0.3 * (x * 0.7).sin();
        let dg = |x: f64| 0.4 + 0.21 * (x * 0.7).cos();
        let f = grid_of(&m, |x| (g(x) / 2.0).exp(), 4097);
        let h = CostFunction::quadratic();
        let lhs = energy(&m, &f, &h, Region::All);
        let rhs = 0.125 * m.integrate(|x| dg(x) * dg(x) * g(x).exp());
        assert_abs_diff_eq!(lhs, rhs, epsilon = 1e-6 * rhs);
    }

    #[test]
    fn latala_deficit_ends() {
        let m = mu(1.5);
        // Constants have no deficit.
        let c = grid_of(&m, |_| 3.0, 65);
        assert_abs_diff_eq!(latala_deficit(&m, &c, 1.3), 0.0, epsilon = 1e-10);
        // p = 1 is the variance.
        let f = grid_of(&m, |x| 1.0 + 0.3 * (x * 0.9).cos(), 2049);
        assert_abs_diff_eq!(
            latala_deficit(&m, &f, 1.0),
            variance(&m, &f),
            epsilon = 1e-10
        );
        // p -> 2^-: deficit/(2-p) tends to Ent(f^2)/2, which for a small
        // perturbation 1 + eps g matches Var(f) to O(eps^3).
        let eps = 1e-3;
        let f = grid_of(&m, |x| 1.0 + eps * (x * 1.1).sin(), 2049);
        let p = 1.999;
        let lim = latala_deficit(&m, &f, p) / (2.0 - p);
        assert_abs_diff_eq!(lim, variance(&m, &f), epsilon = 1e-8);
    }

    #[test]
    fn pointwise_lemma_slacks() {
        // (a) at x = 2: slack is 8 - 4 ln 4.
        let report = verify_pointwise_lemmas(&[2.0], &[]);
        assert_abs_diff_eq!(
            report.quintic_min_slack,
            8.0 - 4.0 * 4.0f64.ln(),
            epsilon = 1e-12
        );
        // Constant f = 1: (b) gives 0 <= 0.
        let inst = DiscreteInstance::new(vec![0.25; 4], vec![1.0; 4]).unwrap();
        let report = verify_pointwise_lemmas(&[], &[inst]);
        assert_abs_diff_eq!(report.squared_deviation_min_slack, 0.0, epsilon = 1e-14);
        assert_eq!(report.rescaled_instances, 0);
        // Dense scalar grid: all slacks nonnegative.
        let grid: Vec<f64> = (0..=100_000).map(|i| 100.0 * i as f64 / 100_000.0).collect();
        let report = verify_pointwise_lemmas(&grid, &[]);
        assert!(report.quintic_min_slack >= -1e-12);
        assert!(report.xlnx_min_slack >= -1e-12);
    }

    #[test]
    fn randomized_discrete_lemmas_hold() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha12Rng::seed_from_u64(42);
        let mut instances = Vec::new();
        for _ in 0..2000 {
            let weights: Vec<f64> = (0..8).map(|_| rng.random::<f64>() + 1e-3).collect();
            let values: Vec<f64> = (0..8).map(|_| 4.0 * rng.random::<f64>()).collect();
            instances.push(DiscreteInstance::new(weights, values).unwrap());
        }
        let report = verify_pointwise_lemmas(&[], &instances);
        assert!(report.squared_deviation_min_slack >= -1e-12);
        assert!(report.restricted_mass_min_slack >= -1e-12);
        assert!(report.restricted_entropy_min_slack >= -1e-12);
        assert!(report.rescaled_instances > 0);
    }
}
