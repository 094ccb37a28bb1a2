//! Constant certification: family suprema of entropy/energy and
//! variance/Dirichlet ratios, the exact constant-transfer rules, Herbst tail
//! bounds and their Monte Carlo cross-checks.

use rayon::prelude::*;
use serde::Serialize;
use std::sync::Arc;

use crate::costs::CostFunction;
use crate::error::{Error, Result};
use crate::families::TestFamily;
use crate::functionals::{dirichlet, energy, entropy, latala_deficit, variance, Region};
use crate::grid::GridFunction;
use crate::measures::{Measure1D, MeasureSpec, ProductMeasure};
use crate::report::{Histogram, InequalityReport, Verdict};
use crate::roots::golden_min;

/// Knobs shared by the certification runs.
#[derive(Debug, Clone, Serialize)]
pub struct CertifySettings {
    /// Uniform nodes of the first materialization grid.
    pub grid_nodes: usize,
    /// Doublings allowed when a per-member quantity has not stabilized.
    pub max_refinements: usize,
    /// Relative stabilization target between successive grids.
    pub refine_rel_tol: f64,
    /// Slack beyond which a claimed constant counts as violated.
    pub violation_tolerance: f64,
    /// Optional claimed constant to audit.
    pub claimed_constant: Option<f64>,
}

impl Default for CertifySettings {
    fn default() -> Self {
        CertifySettings {
            grid_nodes: 2049,
            max_refinements: 3,
            refine_rel_tol: 1e-6,
            violation_tolerance: 1e-9,
            claimed_constant: None,
        }
    }
}

/// Numerator/denominator pair of one evaluated family member.
#[derive(Debug, Clone, Copy)]
struct RatioParts {
    num: f64,
    den: f64,
}

enum MemberOutcome {
    Ratio(f64),
    Skipped,
    InfiniteEnergy,
    /// Positive numerator over vanishing denominator: no constant can work.
    ViolatedAnyConstant,
}

fn classify(parts: RatioParts) -> MemberOutcome {
    const DEN_ZERO: f64 = 1e-13;
    const NUM_ZERO: f64 = 1e-10;
    if parts.den == f64::INFINITY {
        return MemberOutcome::InfiniteEnergy;
    }
    if parts.den.abs() <= DEN_ZERO {
        if parts.num.abs() <= NUM_ZERO {
            return MemberOutcome::Skipped;
        }
        return MemberOutcome::ViolatedAnyConstant;
    }
    MemberOutcome::Ratio(parts.num / parts.den)
}

/// Evaluates `quantity` on grids of doubling resolution until it stabilizes.
fn refine<F>(settings: &CertifySettings, quantity: F) -> RatioParts
where
    F: Fn(usize) -> RatioParts,
{
    let mut n = settings.grid_nodes;
    let mut parts = quantity(n);
    for _ in 0..settings.max_refinements {
        if !parts.den.is_finite() {
            return parts;
        }
        let next = quantity(2 * n - 1);
        let stable = |a: f64, b: f64| (a - b).abs() <= settings.refine_rel_tol * b.abs().max(1.0);
        let done = stable(parts.num, next.num) && stable(parts.den, next.den);
        parts = next;
        n = 2 * n - 1;
        if done {
            break;
        }
    }
    parts
}

fn supremize<Q>(
    inequality: &str,
    m: &Measure1D,
    family: &TestFamily,
    settings: &CertifySettings,
    per_member: Q,
) -> Result<InequalityReport>
where
    Q: Fn(&GridFunction) -> RatioParts + Sync,
{
    let (lo, hi) = m.window();
    let outcomes: Vec<(MemberOutcome, &crate::families::FamilyMember)> = family
        .members
        .par_iter()
        .map(|member| {
            let parts = refine(settings, |n| {
                let grid = member
                    .materialize(lo, hi, n)
                    .expect("family member materialization");
                per_member(&grid)
            });
            (classify(parts), member)
        })
        .collect();

    let mut ratios = Vec::new();
    let mut best = f64::NEG_INFINITY;
    let mut witness: Vec<(String, f64)> = Vec::new();
    let mut witness_label = String::new();
    let mut skipped = 0usize;
    let mut infinite = 0usize;
    let mut violated_any = None;
    for (outcome, member) in &outcomes {
        match outcome {
            MemberOutcome::Ratio(r) => {
                ratios.push(*r);
                if *r > best {
                    best = *r;
                    witness = member.params.clone();
                    witness_label = member.label.clone();
                }
            }
            MemberOutcome::Skipped => skipped += 1,
            MemberOutcome::InfiniteEnergy => infinite += 1,
            MemberOutcome::ViolatedAnyConstant => {
                violated_any = Some(member.label.clone());
            }
        }
    }
    if infinite == family.members.len() {
        return Err(Error::FamilyIncompatibleWithCost);
    }

    let mut report = InequalityReport::new(inequality, m.spec().clone());
    report.family_name = family.name.clone();
    report.members_evaluated = ratios.len();
    report.members_skipped = skipped + infinite;
    report.tolerance = settings.violation_tolerance;
    report.claimed_constant = settings.claimed_constant;
    report.ratio_histogram = Histogram::from_values(&ratios, 24);
    if let Some(label) = violated_any {
        report.estimated_constant = f64::INFINITY;
        report.verdict = Verdict::Violated;
        report.note = format!(
            "member {label} has positive numerator and vanishing energy: \
             no finite constant satisfies the inequality"
        );
        return Ok(report);
    }
    if ratios.is_empty() {
        report.verdict = Verdict::Inconclusive;
        return Ok(report);
    }
    report.estimated_constant = best;
    report.witness = witness;
    if !witness_label.is_empty() {
        report.note = format!("{} (witness: {witness_label})", report.note);
    }
    report.verdict = match settings.claimed_constant {
        Some(c) if best > c + settings.violation_tolerance => Verdict::Violated,
        _ => Verdict::CertifiedBounded,
    };
    Ok(report)
}

/// `sup Ent(f^2) / int H(f'/f) f^2 dmu` over the family.
pub fn estimate_lsi_constant(
    m: &Measure1D,
    h: &CostFunction,
    family: &TestFamily,
    settings: &CertifySettings,
) -> Result<InequalityReport> {
    if family.members.iter().any(|mm| !mm.positive) {
        return Err(Error::InvalidSpec(
            "LSI certification requires strictly positive family members".into(),
        ));
    }
    supremize("modified-lsi", m, family, settings, |grid| {
        let f2 = grid.map(|v| v * v);
        let num = entropy(m, &f2).unwrap_or(0.0);
        let den = energy(m, grid, h, Region::All);
        RatioParts { num, den }
    })
}

/// `sup Var(f) / int f'^2 dmu` over the family.
pub fn estimate_poincare_constant(
    m: &Measure1D,
    family: &TestFamily,
    settings: &CertifySettings,
) -> Result<InequalityReport> {
    supremize("poincare", m, family, settings, |grid| RatioParts {
        num: variance(m, grid),
        den: dirichlet(m, grid),
    })
}

/// `sup deficit(p) / ((2-p)^a int f'^2 dmu)` over family x p-grid.
pub fn estimate_latala_constant(
    m: &Measure1D,
    family: &TestFamily,
    a_exponent: f64,
    p_grid: &[f64],
    settings: &CertifySettings,
) -> Result<InequalityReport> {
    supremize("latala-oleszkiewicz", m, family, settings, |grid| {
        let den_dirichlet = dirichlet(m, grid);
        let mut worst = RatioParts { num: 0.0, den: 1.0 };
        let mut best = f64::NEG_INFINITY;
        for &p in p_grid {
            let num = latala_deficit(m, grid, p);
            let den = (2.0 - p).powf(a_exponent) * den_dirichlet;
            if den > 0.0 && num / den > best {
                best = num / den;
                worst = RatioParts { num, den };
            }
        }
        worst
    })
}

/// The exact constant-transfer rules.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum TransferRule {
    /// Product of two spaces: `D = max(C1, C2)`.
    Tensorise { c1: f64, c2: f64 },
    /// Bounded density change: `D = C exp(osc)`.
    Perturb { c: f64, osc: f64 },
    /// Modified LSI implies the spectral gap with `C / 2`.
    LsiToPoincare { c: f64 },
    /// Transportation to LSI on log-concave measures: for `lambda > C`,
    /// the pair `(a / (2 lambda), 4 lambda^2 / (lambda - C))`.
    TToLsi { a: f64, alpha: f64, c: f64, lambda: f64 },
}

/// Output of a transfer: the mapped constant, plus the mapped threshold for
/// the transportation-to-LSI direction.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TransferOutcome {
    pub constant: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub threshold: Option<f64>,
}

pub fn transfer_constants(rule: TransferRule) -> Result<TransferOutcome> {
    match rule {
        TransferRule::Tensorise { c1, c2 } => {
            if c1 < 0.0 || c2 < 0.0 {
                return Err(Error::ParameterOutOfRange("constants must be nonnegative".into()));
            }
            Ok(TransferOutcome {
                constant: c1.max(c2),
                threshold: None,
            })
        }
        TransferRule::Perturb { c, osc } => {
            if c < 0.0 || osc < 0.0 {
                return Err(Error::ParameterOutOfRange(
                    "constant and oscillation must be nonnegative".into(),
                ));
            }
            Ok(TransferOutcome {
                constant: c * osc.exp(),
                threshold: None,
            })
        }
        TransferRule::LsiToPoincare { c } => {
            if c < 0.0 {
                return Err(Error::ParameterOutOfRange("constant must be nonnegative".into()));
            }
            Ok(TransferOutcome {
                constant: c / 2.0,
                threshold: None,
            })
        }
        TransferRule::TToLsi { a, alpha, c, lambda } => {
            if !(a > 0.0) || !(1.0..=2.0).contains(&alpha) || c < 0.0 {
                return Err(Error::ParameterOutOfRange(
                    "need a > 0, alpha in [1,2], C >= 0".into(),
                ));
            }
            if !(lambda > c) {
                return Err(Error::TransferLambdaTooSmall);
            }
            Ok(TransferOutcome {
                constant: 4.0 * lambda * lambda / (lambda - c),
                threshold: Some(a / (2.0 * lambda)),
            })
        }
    }
}

/// Two-regime concentration bound for a measure satisfying the modified LSI
/// with constant `c` and threshold `a`, applied to a Lipschitz statistic.
/// Capped at 1. The large-deviation branch is implemented exactly as
/// printed, including the additive `-a^2 (2-alpha)/(2 alpha)` term; the shift
/// `lambda - a c lip (2-alpha)` is clamped at zero where the printed formula
/// would take a fractional power of a negative number.
pub fn herbst_bound(c: f64, a: f64, alpha: f64, lip: f64, lambda: f64) -> f64 {
    assert!(c > 0.0 && a > 0.0 && lip > 0.0 && (1.0..=2.0).contains(&alpha));
    if lambda < 0.0 {
        return 1.0;
    }
    let threshold = a * c * lip / 2.0;
    let value = if lambda >= threshold {
        let k = 2f64.powf(alpha) * (alpha - 1.0).powf(1.0 - alpha) * a.powf(2.0 - alpha)
            / (alpha * c.powf(alpha - 1.0) * lip.powf(alpha));
        let shifted = (lambda - a * c * lip * (2.0 - alpha)).max(0.0);
        2.0 * (-k * shifted.powf(alpha) - a * a * (2.0 - alpha) / (2.0 * alpha)).exp()
    } else {
        2.0 * (-2.0 * lambda * lambda / (c * lip * lip)).exp()
    };
    value.min(1.0)
}

/// Log of the Laplace-transform bound from the Herbst argument,
/// `ln E exp(t(F - mean)) <= ...`, as printed in the two-regime form.
/// Returns `inf` where the bound is infinite (`alpha = 1`, `t > 2a/lip`).
pub fn herbst_laplace_log_bound(c: f64, a: f64, alpha: f64, lip: f64, t: f64) -> f64 {
    assert!(c > 0.0 && a > 0.0 && lip > 0.0 && (1.0..=2.0).contains(&alpha));
    let t = t.abs();
    if t <= 2.0 * a / lip {
        return c * lip * lip * t * t / 8.0;
    }
    if alpha == 1.0 {
        return f64::INFINITY;
    }
    let beta = alpha / (alpha - 1.0);
    c * t.powf(beta) * lip.powf(beta) * a.powf(2.0 - beta) / (2f64.powf(beta) * beta * (beta - 1.0))
        + c * t * a * lip * (beta - 2.0) / (2.0 * (beta - 1.0))
        - c * a * a * (beta - 2.0) / (2.0 * beta)
}

/// Chernoff optimization of the Laplace bound: `2 min_t exp(L(t) - t lambda)`.
/// A numeric diagnostic for the printed tail bound.
pub fn chernoff_tail_bound(c: f64, a: f64, alpha: f64, lip: f64, lambda: f64) -> f64 {
    if lambda <= 0.0 {
        return 1.0;
    }
    let obj = |t: f64| {
        let l = herbst_laplace_log_bound(c, a, alpha, lip, t);
        if l.is_finite() {
            l - t * lambda
        } else {
            f64::INFINITY
        }
    };
    // Expand the search window past the minimizer, then refine.
    let mut hi = 1.0;
    let mut best = obj(hi);
    for _ in 0..80 {
        let next = obj(hi * 2.0);
        if next.is_finite() && next < best {
            best = next;
            hi *= 2.0;
        } else if !next.is_finite() {
            break;
        } else {
            hi *= 2.0;
            break;
        }
    }
    let (_, v) = golden_min(obj, 0.0, hi, 1e-12 * hi.max(1.0), 300);
    (2.0 * v.min(best).exp()).min(1.0)
}

/// `min(lambda^2, lambda^alpha)`: the exponent shape of the dimension-free
/// product bound.
pub fn product_min_exponent(alpha: f64, lambda: f64) -> f64 {
    let l = lambda.abs();
    (l * l).min(l.powf(alpha))
}

/// Largest `K` with `empirical <= 2 exp(-K min(lambda^2, lambda^alpha))` at
/// every grid point with a positive count; `None` when no point constrains it.
pub fn fit_product_constant(alpha: f64, curve: &TailCurve) -> Option<f64> {
    let mut k = f64::INFINITY;
    for (lam, p) in curve.lambdas.iter().zip(&curve.empirical) {
        if *lam <= 0.0 || *p <= 0.0 {
            continue;
        }
        let shape = product_min_exponent(alpha, *lam);
        if shape > 0.0 {
            k = k.min(-(p / 2.0).ln() / shape);
        }
    }
    if k.is_finite() {
        Some(k)
    } else {
        None
    }
}

/// 95% Wilson score interval for `successes / n`.
pub fn wilson_interval(successes: u64, n: u64, z: f64) -> (f64, f64) {
    if n == 0 {
        return (0.0, 1.0);
    }
    let nf = n as f64;
    let p = successes as f64 / nf;
    let z2 = z * z;
    let denom = 1.0 + z2 / nf;
    let center = (p + z2 / (2.0 * nf)) / denom;
    let half = z * (p * (1.0 - p) / nf + z2 / (4.0 * nf * nf)).sqrt() / denom;
    ((center - half).max(0.0), (center + half).min(1.0))
}

/// A Lipschitz statistic of a product sample with a declared gradient-norm
/// bound (`sum_i |dF/dx_i|^2 <= bound^2`).
#[derive(Clone)]
pub struct LipschitzStatistic {
    pub name: String,
    eval: Arc<dyn Fn(&[f64]) -> f64 + Send + Sync>,
    pub gradient_norm_bound: f64,
    mean_from_factor: Option<Arc<dyn Fn(&Measure1D, usize) -> f64 + Send + Sync>>,
}

impl LipschitzStatistic {
    /// `F(x) = sum x_i / sqrt(n)`; gradient norm exactly 1.
    pub fn normalized_sum(n: usize) -> Self {
        let nf = (n as f64).sqrt();
        LipschitzStatistic {
            name: format!("sum/sqrt({n})"),
            eval: Arc::new(move |x: &[f64]| x.iter().sum::<f64>() / nf),
            gradient_norm_bound: 1.0,
            mean_from_factor: Some(Arc::new(move |m, dim| {
                (dim as f64) * m.integrate(|x| x) / (dim as f64).sqrt()
            })),
        }
    }

    /// First coordinate.
    pub fn coordinate() -> Self {
        LipschitzStatistic {
            name: "x_1".into(),
            eval: Arc::new(|x: &[f64]| x[0]),
            gradient_norm_bound: 1.0,
            mean_from_factor: Some(Arc::new(|m, _| m.integrate(|x| x))),
        }
    }

    /// Constant statistic, for degenerate-tail checks.
    pub fn constant(value: f64) -> Self {
        LipschitzStatistic {
            name: format!("const({value})"),
            eval: Arc::new(move |_: &[f64]| value),
            gradient_norm_bound: 0.0,
            mean_from_factor: Some(Arc::new(move |_, _| value)),
        }
    }

    pub fn custom<F>(name: &str, gradient_norm_bound: f64, f: F) -> Self
    where
        F: Fn(&[f64]) -> f64 + Send + Sync + 'static,
    {
        LipschitzStatistic {
            name: name.into(),
            eval: Arc::new(f),
            gradient_norm_bound,
            mean_from_factor: None,
        }
    }

    pub fn eval(&self, x: &[f64]) -> f64 {
        (self.eval)(x)
    }
}

/// Empirical two-sided tail of a statistic over product samples, with Wilson
/// confidence bands.
#[derive(Debug, Clone, Serialize)]
pub struct TailCurve {
    pub lambdas: Vec<f64>,
    pub empirical: Vec<f64>,
    pub wilson_lo: Vec<f64>,
    pub wilson_hi: Vec<f64>,
    pub samples: usize,
    pub mean_used: f64,
    pub statistic: String,
}

/// Monte Carlo estimate of `P(|F - mean| >= lambda)` on a lambda grid.
/// Deterministic for a fixed seed; sampling is sharded and merged in shard
/// order.
pub fn simulate_concentration(
    pm: &ProductMeasure,
    statistic: &LipschitzStatistic,
    samples: usize,
    seed: u64,
    lambdas: &[f64],
) -> Result<TailCurve> {
    if statistic.gradient_norm_bound > 1.0 + 1e-12 {
        return Err(Error::StatisticOutOfClass);
    }
    let mean = match &statistic.mean_from_factor {
        Some(f) => f(&pm.factor, pm.dimension),
        None => {
            // Fall back to the empirical mean of an independent pilot run.
            let pilot = pm.sample(samples.min(20_000), seed ^ 0x9e37_79b9_7f4a_7c15);
            pilot
                .chunks(pm.dimension)
                .map(|row| statistic.eval(row))
                .sum::<f64>()
                / (pilot.len() / pm.dimension) as f64
        }
    };
    const SHARD: usize = 8192;
    let shards: Vec<usize> = (0..samples.div_ceil(SHARD))
        .map(|s| SHARD.min(samples - s * SHARD))
        .collect();
    let counts: Vec<Vec<u64>> = shards
        .par_iter()
        .enumerate()
        .map(|(s, &count)| {
            let xs = pm.sample(count, seed.wrapping_add(1 + s as u64));
            let mut c = vec![0u64; lambdas.len()];
            for row in xs.chunks(pm.dimension) {
                let dev = (statistic.eval(row) - mean).abs();
                for (i, &lam) in lambdas.iter().enumerate() {
                    if dev >= lam {
                        c[i] += 1;
                    }
                }
            }
            c
        })
        .collect();
    let mut total = vec![0u64; lambdas.len()];
    for c in counts {
        for (t, v) in total.iter_mut().zip(c) {
            *t += v;
        }
    }
    let n = samples as u64;
    let mut empirical = Vec::with_capacity(lambdas.len());
    let mut wlo = Vec::with_capacity(lambdas.len());
    let mut whi = Vec::with_capacity(lambdas.len());
    for &c in &total {
        let (lo, hi) = wilson_interval(c, n, 1.96);
        empirical.push(c as f64 / n as f64);
        wlo.push(lo);
        whi.push(hi);
    }
    Ok(TailCurve {
        lambdas: lambdas.to_vec(),
        empirical,
        wilson_lo: wlo,
        wilson_hi: whi,
        samples,
        mean_used: mean,
        statistic: statistic.name.clone(),
    })
}

/// One row of the (A, B) frontier of the two-term modified inequality.
#[derive(Debug, Clone, Serialize)]
pub struct FrontierPoint {
    pub a: f64,
    pub empirical_b: f64,
    pub witness: Vec<(String, f64)>,
    pub binding_members: usize,
}

/// Report of `Ent <= A Var + B int_{f>=2} |f'/f|^beta f^2` over a family.
#[derive(Debug, Clone, Serialize)]
pub struct ModifiedLsiReport {
    pub alpha: f64,
    pub beta: f64,
    pub frontier: Vec<FrontierPoint>,
    pub members_evaluated: usize,
    pub rescaled_members: usize,
    pub counterexamples: Vec<String>,
    pub verdict: Verdict,
}

/// For each `A` in the sweep, the minimal empirical `B`: the supremum over
/// members (normalized to `int f^2 = 1`) of `(Ent - A Var) / restricted
/// energy` among members where the numerator is positive. Members with a
/// positive numerator but vanishing restricted energy are counterexamples.
pub fn verify_modified_lsi(
    m: &Measure1D,
    family: &TestFamily,
    a_sweep: &[f64],
    settings: &CertifySettings,
) -> Result<ModifiedLsiReport> {
    let alpha = match m.spec() {
        MeasureSpec::MuAlpha { alpha } => *alpha,
        _ => {
            return Err(Error::InvalidSpec(
                "the two-term inequality is certified for the mu_alpha family".into(),
            ))
        }
    };
    if alpha <= 1.0 {
        return Err(Error::ParameterOutOfRange(
            "two-term certification needs alpha > 1 (alpha = 1 uses the Lipschitz form)".into(),
        ));
    }
    let beta = alpha / (alpha - 1.0);
    let (lo, hi) = m.window();

    struct MemberData {
        ent: f64,
        var: f64,
        restricted: f64,
        rescaled: bool,
        label: String,
        params: Vec<(String, f64)>,
    }

    let data: Vec<MemberData> = family
        .members
        .par_iter()
        .map(|member| {
            let eval = |n: usize| {
                let grid = member.materialize(lo, hi, n).expect("materialization");
                if grid.min_value() < 0.0 {
                    return (f64::NAN, f64::NAN, f64::NAN, false);
                }
                let mass = grid.integrate_against(m, |_, v, _| v * v)
                    / grid.integrate_against(m, |_, _, _| 1.0);
                let rescaled = (mass - 1.0).abs() > 1e-12;
                let norm = grid.scaled(1.0 / mass.sqrt());
                let f2 = norm.map(|v| v * v);
                let ent = entropy(m, &f2).unwrap_or(0.0);
                let var = variance(m, &norm);
                let restricted = energy(
                    m,
                    &norm,
                    &CostFunction::power(beta, 1.0).expect("beta >= 1"),
                    Region::AboveTwo,
                );
                (ent, var, restricted, rescaled)
            };
            // Refine until the three functionals stabilize.
            let mut n = settings.grid_nodes;
            let mut cur = eval(n);
            for _ in 0..settings.max_refinements {
                let next = eval(2 * n - 1);
                let stable = |a: f64, b: f64| {
                    (a - b).abs() <= settings.refine_rel_tol.max(1e-9) * b.abs().max(1.0)
                };
                let done =
                    stable(cur.0, next.0) && stable(cur.1, next.1) && stable(cur.2, next.2);
                cur = next;
                n = 2 * n - 1;
                if done {
                    break;
                }
            }
            MemberData {
                ent: cur.0,
                var: cur.1,
                restricted: cur.2,
                rescaled: cur.3,
                label: member.label.clone(),
                params: member.params.clone(),
            }
        })
        .collect();

    let valid: Vec<&MemberData> = data.iter().filter(|d| d.ent.is_finite()).collect();
    let rescaled = valid.iter().filter(|d| d.rescaled).count();
    let mut counterexamples = Vec::new();
    let mut frontier = Vec::new();
    for &a in a_sweep {
        let mut b_hat: f64 = 0.0;
        let mut witness = Vec::new();
        let mut binding = 0usize;
        for d in &valid {
            let excess = d.ent - a * d.var;
            if excess <= settings.violation_tolerance {
                continue;
            }
            if d.restricted <= 1e-13 {
                counterexamples.push(format!(
                    "A={a}: member {} has Ent - A Var = {excess:.3e} with zero restricted energy",
                    d.label
                ));
                continue;
            }
            binding += 1;
            let b = excess / d.restricted;
            if b > b_hat {
                b_hat = b;
                witness = d.params.clone();
            }
        }
        frontier.push(FrontierPoint {
            a,
            empirical_b: b_hat,
            witness,
            binding_members: binding,
        });
    }
    let verdict = if !counterexamples.is_empty() {
        Verdict::Violated
    } else if frontier.iter().all(|p| p.empirical_b.is_finite()) {
        Verdict::CertifiedBounded
    } else {
        Verdict::Inconclusive
    };
    Ok(ModifiedLsiReport {
        alpha,
        beta,
        frontier,
        members_evaluated: valid.len(),
        rescaled_members: rescaled,
        counterexamples,
        verdict,
    })
}

/// Entropy/energy ratio of the product function `f(x, y) = g(x) h(y)` on
/// `mu (x) mu` with coordinate-sum energy, assembled from one-dimensional
/// quadratures (exact for product functions).
pub fn product_lsi_ratio(
    m: &Measure1D,
    g: &GridFunction,
    h: &GridFunction,
    cost: &CostFunction,
) -> f64 {
    let g2 = g.map(|v| v * v);
    let h2 = h.map(|v| v * v);
    let gm = g2.integrate_against(m, |_, v, _| v) / g2.integrate_against(m, |_, _, _| 1.0);
    let hm = h2.integrate_against(m, |_, v, _| v) / h2.integrate_against(m, |_, _, _| 1.0);
    let ent_g = entropy(m, &g2).unwrap_or(0.0);
    let ent_h = entropy(m, &h2).unwrap_or(0.0);
    let e_g = energy(m, g, cost, Region::All);
    let e_h = energy(m, h, cost, Region::All);
    let num = hm * ent_g + gm * ent_h;
    let den = hm * e_g + gm * e_h;
    num / den
}
