//! Hardy-type criteria on the half line and their logarithmic refinements.
//!
//! The two-sided characterization: the best constant `A` in
//! `int (f - f(0))^2 dmu <= A int f'^2 dnu` is finite iff
//! `B = sup_x mu([x, inf)) int_0^x (dnu/dx)^{-1} dt` is, and `B <= A <= 4B`.
//! The weighted-entropy refinement replaces the plain tail mass by
//! `mu-tail * log(1 + kappa / mu-tail)` factors, giving the four suprema
//! `b-, b+, B-, B+` that sandwich the weighted LSI constant.
//!
//! Suprema over the non-compact half line are probed on a log-spaced grid up
//! to the tail-truncation point and classified as divergent when the running
//! supremum still grows at the boundary with positive log-log slope.

use std::sync::Arc;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::measures::Measure1D;
use crate::quad::GaussRule;
use crate::roots::golden_max;

/// Number of log-spaced probe points per supremum.
const PROBE_POINTS: usize = 240;

/// Log-log slope at the window edge above which a supremum is classified as
/// divergent.
const DIVERGENCE_SLOPE: f64 = 0.02;

type Fn1 = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

/// Mass on the positive half line, given by its tail function (possibly
/// non-probability), paired with the Lebesgue density of the absolutely
/// continuous part of the energy measure.
pub struct HardyPair {
    mu_tail: Fn1,
    nu_density: Fn1,
    probe_hi: f64,
    /// Atom locations of a purely atomic `mu`; the criterion supremum is
    /// attained exactly there and is evaluated exactly there.
    atom_locations: Option<Vec<f64>>,
}

impl HardyPair {
    /// General form: the tail `x -> mu([x, inf))` and the density of `nu`.
    pub fn new<M, N>(mu_tail: M, nu_density: N, probe_hi: f64) -> Result<Self>
    where
        M: Fn(f64) -> f64 + Send + Sync + 'static,
        N: Fn(f64) -> f64 + Send + Sync + 'static,
    {
        if !(probe_hi > 0.0) {
            return Err(Error::ParameterOutOfRange("probe window must be positive".into()));
        }
        Ok(HardyPair {
            mu_tail: Arc::new(mu_tail),
            nu_density: Arc::new(nu_density),
            probe_hi,
            atom_locations: None,
        })
    }

    /// Atomic `mu = sum m_i delta_{x_i}` on the half line against a density.
    pub fn from_atoms<N>(atoms: &[(f64, f64)], nu_density: N, probe_hi: f64) -> Result<Self>
    where
        N: Fn(f64) -> f64 + Send + Sync + 'static,
    {
        if atoms.iter().any(|&(x, m)| x <= 0.0 || m < 0.0) {
            return Err(Error::ParameterOutOfRange(
                "atoms need positive locations and nonnegative masses".into(),
            ));
        }
        let mut sorted: Vec<(f64, f64)> = atoms.to_vec();
        sorted.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());
        let locations: Vec<f64> = sorted.iter().map(|&(x, _)| x).collect();
        Ok(HardyPair {
            mu_tail: Arc::new(move |x: f64| {
                sorted
                    .iter()
                    .filter(|&&(xi, _)| xi >= x)
                    .map(|&(_, m)| m)
                    .sum()
            }),
            nu_density: Arc::new(nu_density),
            probe_hi,
            atom_locations: Some(locations),
        })
    }

    pub fn mu_tail(&self, x: f64) -> f64 {
        (self.mu_tail)(x)
    }

    pub fn nu_density(&self, x: f64) -> f64 {
        (self.nu_density)(x)
    }
}

/// Classification of a probed supremum.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Classification {
    Finite,
    Divergent,
}

/// One probed supremum: value, location, classification.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct SupremumEstimate {
    pub x_star: f64,
    pub sup_value: f64,
    pub classification: Classification,
}

impl SupremumEstimate {
    pub fn is_finite(&self) -> bool {
        self.classification == Classification::Finite
    }
}

/// Probes `f` on a log-spaced grid of `[lo, hi]`, refines the best interior
/// point, and classifies boundary growth.
fn probe_supremum<F: Fn(f64) -> f64>(f: F, lo: f64, hi: f64) -> SupremumEstimate {
    let n = PROBE_POINTS;
    let (llo, lhi) = (lo.ln(), hi.ln());
    let mut best_i = 0usize;
    let mut best_v = f64::NEG_INFINITY;
    let mut xs = Vec::with_capacity(n);
    let mut vs = Vec::with_capacity(n);
    for i in 0..n {
        let x = (llo + (lhi - llo) * i as f64 / (n - 1) as f64).exp();
        let v = f(x);
        xs.push(x);
        vs.push(v);
        if v > best_v {
            best_v = v;
            best_i = i;
        }
    }
    // Divergence: the maximum sits at the window edge and the last decade
    // still climbs in log-log.
    if best_i + 3 >= n && vs[n - 1] > 0.0 && vs[n - 8] > 0.0 {
        let slope =
            (vs[n - 1].ln() - vs[n - 8].ln()) / (xs[n - 1].ln() - xs[n - 8].ln());
        if slope > DIVERGENCE_SLOPE {
            return SupremumEstimate {
                x_star: xs[n - 1],
                sup_value: f64::INFINITY,
                classification: Classification::Divergent,
            };
        }
    }
    let a = xs[best_i.saturating_sub(1).max(0)];
    let b = xs[(best_i + 1).min(n - 1)];
    let (x_star, refined) = golden_max(&f, a, b, 1e-10 * b, 200);
    SupremumEstimate {
        x_star,
        sup_value: refined.max(best_v),
        classification: Classification::Finite,
    }
}

/// `int_0^x nu_density(t)^{-1} dt` with panels graded toward the right end,
/// where the integrand of the measures in scope blows up like `exp(phi)`.
fn inverse_density_integral(pair: &HardyPair, x: f64) -> Result<f64> {
    let rule = GaussRule::legendre(16);
    let mut acc = 0.0;
    let mut lo_edge = 0.0;
    for k in 1..=48 {
        let hi_edge = x - x * (-(k as f64)).exp2();
        acc += rule.integrate(lo_edge, hi_edge, |t| {
            let d = pair.nu_density(t);
            if d > 0.0 {
                1.0 / d
            } else {
                f64::INFINITY
            }
        });
        lo_edge = hi_edge;
    }
    acc += rule.integrate(lo_edge, x, |t| {
        let d = pair.nu_density(t);
        if d > 0.0 {
            1.0 / d
        } else {
            f64::INFINITY
        }
    });
    if !acc.is_finite() {
        return Err(Error::CriterionIntegrandDiverges(x));
    }
    Ok(acc)
}

/// The Hardy criterion constant
/// `B = sup_{x>0} mu([x, inf)) int_0^x nu_density(t)^{-1} dt`.
/// The best constant `A` of the inequality then satisfies `B <= A <= 4B`.
pub fn hardy_constant(pair: &HardyPair) -> Result<SupremumEstimate> {
    // Degenerate-density guard on a coarse probe.
    for i in 1..=16 {
        let t = pair.probe_hi * i as f64 / 16.0;
        if !(pair.nu_density(t) > 0.0) {
            return Err(Error::CriterionIntegrandDiverges(t));
        }
    }
    let f = |x: f64| {
        let tail = pair.mu_tail(x);
        if tail <= 0.0 {
            return 0.0;
        }
        match inverse_density_integral(pair, x) {
            Ok(i) => tail * i,
            Err(_) => f64::INFINITY,
        }
    };
    // For atomic mu the supremum sits exactly at an atom (the tail is
    // right-continuous and the inner integral increases in between).
    if let Some(atoms) = &pair.atom_locations {
        let mut best = SupremumEstimate {
            x_star: 0.0,
            sup_value: 0.0,
            classification: Classification::Finite,
        };
        for &x in atoms {
            let v = f(x);
            if v > best.sup_value {
                best = SupremumEstimate {
                    x_star: x,
                    sup_value: v,
                    classification: Classification::Finite,
                };
            }
        }
        return Ok(best);
    }
    Ok(probe_supremum(f, 1e-3, pair.probe_hi))
}

/// Weight in the weighted-Dirichlet energy `int g'^2 h dmu`.
#[derive(Clone)]
pub struct Weight {
    pub name: String,
    f: Fn1,
}

impl Weight {
    pub fn constant_one() -> Self {
        Weight {
            name: "1".into(),
            f: Arc::new(|_| 1.0),
        }
    }

    /// The saturating weight for `mu_alpha`: 1 on `[-1, 1]`, `|x|^(2-alpha)`
    /// beyond. At `alpha = 2` it degenerates to the constant 1.
    pub fn saturating_alpha(alpha: f64) -> Result<Self> {
        if !(alpha > 1.0 && alpha <= 2.0) {
            return Err(Error::ParameterOutOfRange(format!(
                "saturating weight needs alpha in ]1, 2], got {alpha}"
            )));
        }
        Ok(Weight {
            name: format!("max(1, |x|^{})", 2.0 - alpha),
            f: Arc::new(move |x: f64| {
                let ax = x.abs();
                if ax <= 1.0 {
                    1.0
                } else {
                    ax.powf(2.0 - alpha)
                }
            }),
        })
    }

    /// The saturating weight for the log-perturbed family:
    /// `|x|^(2-alpha) / (ln |x|)^beta` for `|x| >= 2`, constant inside.
    pub fn saturating_alpha_beta(alpha: f64, beta: f64) -> Result<Self> {
        if !(alpha > 1.0 && alpha <= 2.0) {
            return Err(Error::ParameterOutOfRange(format!(
                "saturating weight needs alpha in ]1, 2], got {alpha}"
            )));
        }
        let edge = 2f64.powf(2.0 - alpha) / 2f64.ln().powf(beta);
        Ok(Weight {
            name: format!("|x|^{}/ln^{beta}|x|", 2.0 - alpha),
            f: Arc::new(move |x: f64| {
                let ax = x.abs();
                if ax <= 2.0 {
                    edge
                } else {
                    ax.powf(2.0 - alpha) / ax.ln().powf(beta)
                }
            }),
        })
    }

    pub fn custom<F>(name: &str, f: F) -> Self
    where
        F: Fn(f64) -> f64 + Send + Sync + 'static,
    {
        Weight {
            name: name.into(),
            f: Arc::new(f),
        }
    }

    pub fn eval(&self, x: f64) -> f64 {
        (self.f)(x)
    }
}

/// The four suprema of the weighted-entropy criterion. The weighted LSI
/// constant `C_h` satisfies `max(b-, b+) <= C_h <= max(B-, B+)`.
#[derive(Debug, Clone, Serialize)]
pub struct WeightedCriterionReport {
    pub b_minus: SupremumEstimate,
    pub b_plus: SupremumEstimate,
    pub big_b_minus: SupremumEstimate,
    pub big_b_plus: SupremumEstimate,
    pub weight: String,
}

impl WeightedCriterionReport {
    pub fn all_finite(&self) -> bool {
        self.b_minus.is_finite()
            && self.b_plus.is_finite()
            && self.big_b_minus.is_finite()
            && self.big_b_plus.is_finite()
    }

    pub fn lower_bound(&self) -> f64 {
        self.b_minus.sup_value.max(self.b_plus.sup_value)
    }

    pub fn upper_bound(&self) -> f64 {
        self.big_b_minus.sup_value.max(self.big_b_plus.sup_value)
    }
}

/// Computes the four suprema `b-, b+, B-, B+` for a two-sided measure with
/// density `exp(-phi)/Z` and a weight `h`:
/// `sup mu-tail * log(1 + kappa / mu-tail) * int_0^x Z exp(phi(t)) / h(t) dt`
/// with `kappa = 1/2` for the small constants and `e^2` for the large ones.
pub fn barthe_roberto_constants(m: &Measure1D, h: &Weight) -> WeightedCriterionReport {
    let z = m.normalization();
    let (wlo, whi) = m.window();
    let rule = GaussRule::legendre(16);

    // int_0^x Z exp(phi)/h, graded toward x where the integrand peaks.
    let inner = |x: f64| -> f64 {
        let sign = x.signum();
        let ax = x.abs();
        let g = |t: f64| z * (m.potential(sign * t)).exp() / h.eval(sign * t);
        let mut acc = 0.0;
        let mut lo_edge = 0.0;
        for k in 1..=48 {
            let hi_edge = ax - ax * (-(k as f64)).exp2();
            acc += rule.integrate(lo_edge, hi_edge, g);
            lo_edge = hi_edge;
        }
        acc + rule.integrate(lo_edge, ax, g)
    };

    let sup_for = |positive_side: bool, kappa: f64| -> SupremumEstimate {
        let f = |r: f64| {
            let (tail, x) = if positive_side {
                (m.tail_mass(r), r)
            } else {
                (m.head_mass(-r), -r)
            };
            if tail <= 0.0 {
                return 0.0;
            }
            tail * (1.0 + kappa / tail).ln() * inner(x)
        };
        // Stay clear of the truncation edge, where the computed tail mass
        // drops to exact zero and would mask boundary growth.
        let hi = if positive_side { whi * 0.85 } else { -wlo * 0.85 };
        probe_supremum(f, 1e-3, hi.max(1.0))
    };

    WeightedCriterionReport {
        b_minus: sup_for(false, 0.5),
        b_plus: sup_for(true, 0.5),
        big_b_minus: sup_for(false, std::f64::consts::E * std::f64::consts::E),
        big_b_plus: sup_for(true, std::f64::consts::E * std::f64::consts::E),
        weight: h.name.clone(),
    }
}

/// Finite sandwich bounds for the weighted LSI constant, or an error when
/// the criterion diverges over the probe window.
pub fn weighted_lsi_bounds(m: &Measure1D, h: &Weight) -> Result<(f64, f64)> {
    let report = barthe_roberto_constants(m, h);
    if !report.all_finite() {
        return Err(Error::WeightedLsiInfinite);
    }
    Ok((report.lower_bound(), report.upper_bound()))
}
