//! Parametric families of test functions over which inequality constants are
//! supremized. A certification over a family is a lower bound on the true
//! constant; the upper-bound claim is only "no violation found".

use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha12Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::grid::GridFunction;

type Generator = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

/// One member of a family: a closure plus its reporting metadata.
#[derive(Clone)]
pub struct FamilyMember {
    pub label: String,
    pub params: Vec<(String, f64)>,
    f: Generator,
    /// Lipschitz constant when the family tracks one.
    pub lipschitz: Option<f64>,
    /// Whether the member is strictly positive by construction.
    pub positive: bool,
    /// Kink locations to pin onto sampling grids.
    pub knots: Vec<f64>,
}

impl std::fmt::Debug for FamilyMember {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "FamilyMember({})", self.label)
    }
}

impl FamilyMember {
    pub fn eval(&self, x: f64) -> f64 {
        (self.f)(x)
    }

    /// Materializes the member on `n` uniform nodes over `[lo, hi]` plus its
    /// declared knots.
    pub fn materialize(&self, lo: f64, hi: f64, n: usize) -> Result<GridFunction> {
        let f = Arc::clone(&self.f);
        GridFunction::sample_with_knots(move |x| f(x), lo, hi, n, &self.knots)
    }
}

/// A named collection of test functions.
#[derive(Clone, Debug)]
pub struct TestFamily {
    pub name: String,
    pub members: Vec<FamilyMember>,
}

/// JSON wire format for family construction.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(tag = "name", deny_unknown_fields)]
pub enum FamilySpec {
    /// `exp(lambda x / 2)` for `count` lambdas in `[lambda_min, lambda_max]`.
    #[serde(rename = "exponentials")]
    Exponentials {
        lambda_min: f64,
        lambda_max: f64,
        count: usize,
    },
    /// `1 + amplitude exp(-(x-c)^2 / (2 w^2))` over a grid of centers/widths.
    #[serde(rename = "bumps")]
    Bumps {
        center_min: f64,
        center_max: f64,
        centers: usize,
        widths: Vec<f64>,
        amplitude: f64,
    },
    /// `base + clamp((x - c)/w, 0, 1)` ramps (strictly positive).
    #[serde(rename = "ramps")]
    Ramps {
        center_min: f64,
        center_max: f64,
        centers: usize,
        widths: Vec<f64>,
        base: f64,
    },
    /// `min(|x - c|, cap)`: 1-Lipschitz, vanishing at the center.
    #[serde(rename = "lipschitz_caps")]
    LipschitzCaps {
        center_min: f64,
        center_max: f64,
        centers: usize,
        caps: Vec<f64>,
    },
    /// Random positive Fourier sums with a seed.
    #[serde(rename = "fourier")]
    Fourier {
        count: usize,
        modes: usize,
        base: f64,
        max_frequency: f64,
        seed: u64,
    },
}

impl FamilySpec {
    pub fn build(&self) -> Result<TestFamily> {
        match self {
            FamilySpec::Exponentials {
                lambda_min,
                lambda_max,
                count,
            } => Ok(exponentials(*lambda_min, *lambda_max, *count)),
            FamilySpec::Bumps {
                center_min,
                center_max,
                centers,
                widths,
                amplitude,
            } => bumps(*center_min, *center_max, *centers, widths, *amplitude),
            FamilySpec::Ramps {
                center_min,
                center_max,
                centers,
                widths,
                base,
            } => ramps(*center_min, *center_max, *centers, widths, *base),
            FamilySpec::LipschitzCaps {
                center_min,
                center_max,
                centers,
                caps,
            } => Ok(lipschitz_caps(*center_min, *center_max, *centers, caps)),
            FamilySpec::Fourier {
                count,
                modes,
                base,
                max_frequency,
                seed,
            } => fourier(*count, *modes, *base, *max_frequency, *seed),
        }
    }
}

/// `f(x) = exp(lambda x / 2)`; `f'/f` is constant `lambda/2`.
pub fn exponentials(lambda_min: f64, lambda_max: f64, count: usize) -> TestFamily {
    let count = count.max(1);
    let members = (0..count)
        .map(|i| {
            let lambda = if count == 1 {
                lambda_min
            } else {
                lambda_min + (lambda_max - lambda_min) * i as f64 / (count - 1) as f64
            };
            FamilyMember {
                label: format!("exp(lambda={lambda:.4})"),
                params: vec![("lambda".into(), lambda)],
                f: Arc::new(move |x: f64| (0.5 * lambda * x).exp()),
                lipschitz: None,
                positive: true,
                knots: vec![],
            }
        })
        .collect();
    TestFamily {
        name: "exponentials".into(),
        members,
    }
}

/// Gaussian bump translates over a baseline of 1.
pub fn bumps(
    center_min: f64,
    center_max: f64,
    centers: usize,
    widths: &[f64],
    amplitude: f64,
) -> Result<TestFamily> {
    if amplitude <= -1.0 {
        return Err(Error::ParameterOutOfRange(
            "bump amplitude must keep 1 + A e^... positive".into(),
        ));
    }
    let mut members = Vec::new();
    for i in 0..centers.max(1) {
        let c = if centers <= 1 {
            center_min
        } else {
            center_min + (center_max - center_min) * i as f64 / (centers - 1) as f64
        };
        for &w in widths {
            if w <= 0.0 {
                return Err(Error::ParameterOutOfRange("bump width must be positive".into()));
            }
            members.push(FamilyMember {
                label: format!("bump(c={c:.3}, w={w:.3})"),
                params: vec![("center".into(), c), ("width".into(), w)],
                f: Arc::new(move |x: f64| {
                    1.0 + amplitude * (-(x - c) * (x - c) / (2.0 * w * w)).exp()
                }),
                lipschitz: Some(amplitude.abs() / w * 0.6066), // exp(-1/2)
                positive: true,
                knots: vec![],
            });
        }
    }
    Ok(TestFamily {
        name: "bumps".into(),
        members,
    })
}

/// Strictly positive ramps `base + clamp((x-c)/w, 0, 1)`.
pub fn ramps(
    center_min: f64,
    center_max: f64,
    centers: usize,
    widths: &[f64],
    base: f64,
) -> Result<TestFamily> {
    if base <= 0.0 {
        return Err(Error::ParameterOutOfRange(
            "ramp base must be positive".into(),
        ));
    }
    let mut members = Vec::new();
    for i in 0..centers.max(1) {
        let c = if centers <= 1 {
            center_min
        } else {
            center_min + (center_max - center_min) * i as f64 / (centers - 1) as f64
        };
        for &w in widths {
            if w <= 0.0 {
                return Err(Error::ParameterOutOfRange("ramp width must be positive".into()));
            }
            members.push(FamilyMember {
                label: format!("ramp(c={c:.3}, w={w:.3})"),
                params: vec![("center".into(), c), ("width".into(), w)],
                f: Arc::new(move |x: f64| base + ((x - c) / w).clamp(0.0, 1.0)),
                lipschitz: Some(1.0 / w),
                positive: true,
                knots: vec![c, c + w],
            });
        }
    }
    Ok(TestFamily {
        name: "ramps".into(),
        members,
    })
}

/// `min(|x - c|, cap)`: 1-Lipschitz, bounded, zero at the center.
pub fn lipschitz_caps(
    center_min: f64,
    center_max: f64,
    centers: usize,
    caps: &[f64],
) -> TestFamily {
    let mut members = Vec::new();
    for i in 0..centers.max(1) {
        let c = if centers <= 1 {
            center_min
        } else {
            center_min + (center_max - center_min) * i as f64 / (centers - 1) as f64
        };
        for &cap in caps {
            members.push(FamilyMember {
                label: format!("cap(c={c:.3}, M={cap:.3})"),
                params: vec![("center".into(), c), ("cap".into(), cap)],
                f: Arc::new(move |x: f64| (x - c).abs().min(cap)),
                lipschitz: Some(1.0),
                positive: false,
                knots: vec![c - cap, c, c + cap],
            });
        }
    }
    TestFamily {
        name: "lipschitz_caps".into(),
        members,
    }
}

/// Random smooth Fourier sums `base + sum a_k cos(w_k x + t_k)` with
/// `sum |a_k| <= base - 0.1`, hence strictly positive.
pub fn fourier(
    count: usize,
    modes: usize,
    base: f64,
    max_frequency: f64,
    seed: u64,
) -> Result<TestFamily> {
    if base <= 0.2 {
        return Err(Error::ParameterOutOfRange(
            "fourier base must exceed 0.2".into(),
        ));
    }
    let mut rng = ChaCha12Rng::seed_from_u64(seed);
    let mut members = Vec::new();
    for i in 0..count {
        let modes = modes.max(1);
        let mut amps: Vec<f64> = (0..modes).map(|_| rng.random::<f64>()).collect();
        let total: f64 = amps.iter().sum();
        let budget = base - 0.1;
        amps.iter_mut().for_each(|a| *a *= budget / total.max(1e-12));
        let freqs: Vec<f64> = (0..modes)
            .map(|_| 0.2 + (max_frequency - 0.2).max(0.0) * rng.random::<f64>())
            .collect();
        let phases: Vec<f64> =
            (0..modes).map(|_| std::f64::consts::TAU * rng.random::<f64>()).collect();
        let lip: f64 = amps.iter().zip(&freqs).map(|(a, w)| a * w).sum();
        let (a, w, p) = (amps.clone(), freqs.clone(), phases.clone());
        members.push(FamilyMember {
            label: format!("fourier(seed={seed}, i={i})"),
            params: vec![("index".into(), i as f64)],
            f: Arc::new(move |x: f64| {
                let mut v = base;
                for k in 0..a.len() {
                    v += a[k] * (w[k] * x + p[k]).cos();
                }
                v
            }),
            lipschitz: Some(lip),
            positive: true,
            knots: vec![],
        });
    }
    Ok(TestFamily {
        name: "fourier".into(),
        members,
    })
}

/// Merges families for combined certification sweeps.
pub fn combine(name: &str, families: Vec<TestFamily>) -> TestFamily {
    TestFamily {
        name: name.into(),
        members: families.into_iter().flat_map(|f| f.members).collect(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn family_sizes_and_positivity() {
        let f = exponentials(0.1, 3.0, 40);
        assert_eq!(f.members.len(), 40);
        assert!(f.members.iter().all(|m| m.positive));
        let b = bumps(-3.0, 3.0, 10, &[0.5, 1.0], 0.8).unwrap();
        assert_eq!(b.members.len(), 20);
        for m in &b.members {
            for i in 0..100 {
                let x = -8.0 + 16.0 * i as f64 / 99.0;
                assert!(m.eval(x) > 0.0);
            }
        }
    }

    #[test]
    fn fourier_members_are_positive_and_seeded() {
        let f1 = fourier(5, 4, 1.1, 2.0, 9).unwrap();
        let f2 = fourier(5, 4, 1.1, 2.0, 9).unwrap();
        for (a, b) in f1.members.iter().zip(&f2.members) {
            for i in 0..50 {
                let x = -10.0 + 20.0 * i as f64 / 49.0;
                assert_eq!(a.eval(x), b.eval(x));
                assert!(a.eval(x) > 0.0);
            }
        }
        let f3 = fourier(5, 4, 1.1, 2.0, 10).unwrap();
        assert_ne!(f1.members[0].eval(0.3), f3.members[0].eval(0.3));
    }

    #[test]
    fn caps_report_unit_lipschitz() {
        let f = lipschitz_caps(-2.0, 2.0, 5, &[1.0, 3.0]);
        assert!(f.members.iter().all(|m| m.lipschitz == Some(1.0)));
        let m = &f.members[0];
        let g = m.materialize(-8.0, 8.0, 257).unwrap();
        assert!(g.lipschitz_estimate() <= 1.0 + 1e-9);
    }

    #[test]
    fn family_spec_round_trip() {
        let spec = FamilySpec::Exponentials {
            lambda_min: 0.1,
            lambda_max: 3.0,
            count: 25,
        };
        let s = serde_json::to_string(&spec).unwrap();
        let back: FamilySpec = serde_json::from_str(&s).unwrap();
        assert_eq!(back, spec);
        assert_eq!(back.build().unwrap().members.len(), 25);
    }
}
