//! Acceptance suite: every certified property of the toolkit, one test per
//! criterion, each printing a single pass line with the measured values
//! (run with `--nocapture` to see them). Expected values are either exact
//! plug-ins or frozen from the independent oracles in `common`.

mod common;

use std::time::Instant;

use funcineq::certify::{
    self, CertifySettings, LipschitzStatistic, TransferRule,
};
use funcineq::costs::CostFunction;
use funcineq::families;
use funcineq::functionals::{self, DiscreteInstance};
use funcineq::hardy::{self, HardyPair, Weight};
use funcineq::measures::{Measure1D, MeasureSpec, ProductMeasure};
use funcineq::report::Verdict;
use funcineq::transport::{self, DensityMember};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha12Rng;

fn mu_alpha(alpha: f64) -> Measure1D {
    Measure1D::build(&MeasureSpec::MuAlpha { alpha }).unwrap()
}

fn standard_gaussian() -> Measure1D {
    Measure1D::build(&MeasureSpec::Gaussian { sigma: 1.0 }).unwrap()
}

fn pass(criterion: u32, elapsed: std::time::Duration, detail: &str) {
    println!(
        "[criterion {criterion:2}] PASS ({:7.2}s) {detail}",
        elapsed.as_secs_f64()
    );
}

/// Criterion 1: the numeric Legendre transform of the transport cost matches
/// the closed-form entropy cost to 1e-7 sup-norm on [-10, 10] over the
/// (a, alpha) lattice, and the double transform returns the original to 1e-6.
#[test]
fn criterion_01_legendre_duality() {
    let t0 = Instant::now();
    let mut sup_single: f64 = 0.0;
    let mut sup_double: f64 = 0.0;
    for &a in &[0.5, 1.0, 2.0] {
        for &alpha in &[1.0, 1.2, 1.5, 2.0] {
            let l = CostFunction::l_cost(a, alpha).unwrap();
            let h = CostFunction::h_cost(a, alpha).unwrap();
            let lt = l.legendre(1e7, 257).unwrap();
            let ltt = lt.legendre(1e7, 257).unwrap();
            let ht = h.legendre(1e7, 257).unwrap();
            let htt = ht.legendre(1e7, 257).unwrap();
            for i in 0..=400 {
                let y = -10.0 + 20.0 * i as f64 / 400.0;
                let href = h.evaluate(y);
                let lref = l.evaluate(y);
                // L* = H (compare where H is finite; the alpha = 1 entropy
                // cost is +inf outside [-a, a] and the numeric transform
                // grows without bound there).
                if href.is_finite() {
                    sup_single = sup_single.max((lt.evaluate(y) - href).abs());
                    sup_double = sup_double.max((htt.evaluate(y) - href).abs());
                } else {
                    assert!(lt.evaluate(y) > 1e3);
                }
                // H* = L and the double transform of L.
                sup_single = sup_single.max((ht.evaluate(y) - lref).abs());
                sup_double = sup_double.max((ltt.evaluate(y) - lref).abs());
            }
        }
    }
    assert!(sup_single < 1e-7, "single-transform sup error {sup_single}");
    assert!(sup_double < 1e-6, "double-transform sup error {sup_double}");
    let elapsed = t0.elapsed();
    assert!(elapsed.as_secs_f64() < 5.0, "runtime {elapsed:?} >= 5s");
    pass(1, elapsed, &format!("sup|L*-H| = {sup_single:.2e}, sup|c**-c| = {sup_double:.2e}"));
}

/// Criterion 2: the scaling identity `L(a,alpha)(t x) = t^2 L(a/t,alpha)(x)`
/// holds to 1e-12 on 1000 random draws (and likewise for the entropy cost).
#[test]
fn criterion_02_scaling_identity() {
    let t0 = Instant::now();
    let mut rng = ChaCha12Rng::seed_from_u64(2);
    let mut worst: f64 = 0.0;
    for _ in 0..1000 {
        let t = 0.25 + 3.75 * rng.random::<f64>();
        let x = -10.0 + 20.0 * rng.random::<f64>();
        let a = 0.2 + 2.8 * rng.random::<f64>();
        let alpha = 1.0 + rng.random::<f64>();
        let l = CostFunction::l_cost(a, alpha).unwrap();
        let scaled = l.scale(t).unwrap();
        let reference = CostFunction::l_cost(a / t, alpha).unwrap();
        let lhs = scaled.evaluate(x);
        let rhs = t * t * reference.evaluate(x);
        let err = (lhs - rhs).abs() / rhs.abs().max(1.0);
        worst = worst.max(err);
        let h = CostFunction::h_cost(a, alpha).unwrap();
        let h_scaled = h.scale(t).unwrap();
        let h_ref = CostFunction::h_cost(a / t, alpha).unwrap();
        let (lh, rh) = (h_scaled.evaluate(x), t * t * h_ref.evaluate(x));
        if lh.is_finite() || rh.is_finite() {
            let err = (lh - rh).abs() / rh.abs().max(1.0);
            worst = worst.max(if err.is_nan() { 1.0 } else { err });
        }
    }
    assert!(worst <= 1e-12, "scaling identity error {worst}");
    let elapsed = t0.elapsed();
    assert!(elapsed.as_secs_f64() < 1.0, "runtime {elapsed:?} >= 1s");
    pass(2, elapsed, &format!("max relative error {worst:.2e} over 1000 draws"));
}

/// Criterion 3: with the plain |x|^2 energy, exponential ratios certify the
/// constant 2 for the standard Gaussian (1e-5, never exceeded over >= 200
/// members) and 1 for mu_2.
#[test]
fn criterion_03_gaussian_lsi_constants() {
    let t0 = Instant::now();
    let gross = CostFunction::power(2.0, 1.0).unwrap();
    let settings = CertifySettings::default();

    let run = |m: &Measure1D, expect: f64| {
        let expos = families::exponentials(0.1, 3.0, 60);
        let r = certify::estimate_lsi_constant(m, &gross, &expos, &settings).unwrap();
        assert!(
            (r.estimated_constant - expect).abs() < 1e-5,
            "exponential sup {} != {expect}",
            r.estimated_constant
        );
        // Every exponential ratio sits at the constant: the histogram floor
        // matches too.
        assert!(
            (r.ratio_histogram.lo - expect).abs() < 1e-5,
            "ratio floor {} != {expect}",
            r.ratio_histogram.lo
        );
        let (lo, hi) = m.window();
        let combined = families::combine(
            "combined",
            vec![
                families::exponentials(0.1, 3.0, 60),
                families::bumps(lo * 0.5, hi * 0.5, 20, &[0.4, 0.8, 1.6], 2.0).unwrap(),
                families::ramps(lo * 0.5, hi * 0.5, 15, &[0.5, 1.0], 0.5).unwrap(),
                families::fourier(50, 5, 1.2, 2.0, 3).unwrap(),
            ],
        );
        assert!(combined.members.len() >= 200);
        let rc = certify::estimate_lsi_constant(m, &gross, &combined, &settings).unwrap();
        assert!(
            rc.estimated_constant <= expect + 1e-5,
            "family sup {} exceeds {expect}",
            rc.estimated_constant
        );
        (r.estimated_constant, rc.members_evaluated + rc.members_skipped)
    };

    let (c_gauss, n1) = run(&standard_gaussian(), 2.0);
    let (c_mu2, n2) = run(&mu_alpha(2.0), 1.0);
    let elapsed = t0.elapsed();
    assert!(elapsed.as_secs_f64() < 30.0, "runtime {elapsed:?} >= 30s");
    pass(
        3,
        elapsed,
        &format!("N(0,1): {c_gauss:.6} (n={n1}), mu_2: {c_mu2:.6} (n={n2})"),
    );
}

/// Criterion 4: on 100 random 6-atom discrete pairs the eigensolver oracle
/// constant A sits inside [B, 4B]; the exponential pair gives B = 1.
#[test]
fn criterion_04_hardy_sandwich() {
    let t0 = Instant::now();
    let mut rng = ChaCha12Rng::seed_from_u64(4);
    let mut min_low_slack = f64::INFINITY;
    let mut min_high_slack = f64::INFINITY;
    for _ in 0..100 {
        // Random atoms and a random piecewise-constant energy density.
        let mut xs: Vec<f64> = (0..6).map(|_| 0.1 + 4.9 * rng.random::<f64>()).collect();
        xs.sort_by(|a, b| a.partial_cmp(b).unwrap());
        xs.dedup_by(|a, b| (*a - *b).abs() < 1e-6);
        while xs.len() < 6 {
            xs.push(xs.last().unwrap() + 0.1);
        }
        let masses: Vec<f64> = (0..6).map(|_| 0.05 + rng.random::<f64>()).collect();
        let dens: Vec<f64> = (0..6).map(|_| 0.2 + 1.8 * rng.random::<f64>()).collect();
        let atoms: Vec<(f64, f64)> = xs.iter().cloned().zip(masses.iter().cloned()).collect();
        let (xs_c, dens_c) = (xs.clone(), dens.clone());
        let rho = move |t: f64| -> f64 {
            for (i, &x) in xs_c.iter().enumerate() {
                if t <= x {
                    return dens_c[i];
                }
            }
            *dens_c.last().unwrap()
        };
        let pair = HardyPair::from_atoms(&atoms, rho, 6.0).unwrap();
        let b = hardy::hardy_constant(&pair).unwrap().sup_value;
        // Exact resistances of the piecewise-constant density.
        let mut resistances = Vec::with_capacity(6);
        let mut prev = 0.0;
        for (i, &x) in xs.iter().enumerate() {
            resistances.push((x - prev) / dens[i]);
            prev = x;
        }
        let a = common::discrete_hardy_best_constant(&masses, &resistances);
        min_low_slack = min_low_slack.min(a - b);
        min_high_slack = min_high_slack.min(4.0 * b - a);
    }
    assert!(min_low_slack >= -1e-10, "A >= B violated: {min_low_slack}");
    assert!(min_high_slack >= -1e-10, "A <= 4B violated: {min_high_slack}");

    let pair = HardyPair::new(|x: f64| (-x).exp(), |t: f64| (-t).exp(), 40.0).unwrap();
    let b = hardy::hardy_constant(&pair).unwrap().sup_value;
    assert!((b - 1.0).abs() <= 1e-6, "exponential pair B = {b}");

    let elapsed = t0.elapsed();
    assert!(elapsed.as_secs_f64() < 60.0, "runtime {elapsed:?} >= 60s");
    pass(
        4,
        elapsed,
        &format!(
            "min(A-B) = {min_low_slack:.3e}, min(4B-A) = {min_high_slack:.3e}, exp-pair B = {b:.9}"
        ),
    );
}

/// Criterion 5: the weighted criterion is finite for the saturating weight
/// at alpha in (1.2, 1.5) and classified divergent for the flat weight.
#[test]
fn criterion_05_weight_saturation() {
    let t0 = Instant::now();
    let mut bounds = Vec::new();
    for alpha in [1.2, 1.5] {
        let m = mu_alpha(alpha);
        let h = Weight::saturating_alpha(alpha).unwrap();
        let report = hardy::barthe_roberto_constants(&m, &h);
        assert!(report.all_finite(), "alpha={alpha}: {report:?}");
        bounds.push((alpha, report.lower_bound(), report.upper_bound()));
    }
    let m = mu_alpha(1.5);
    let flat = hardy::barthe_roberto_constants(&m, &Weight::constant_one());
    assert!(
        !flat.big_b_plus.is_finite() || !flat.big_b_minus.is_finite(),
        "flat weight should diverge: {flat:?}"
    );
    let elapsed = t0.elapsed();
    assert!(elapsed.as_secs_f64() < 30.0, "runtime {elapsed:?} >= 30s");
    pass(
        5,
        elapsed,
        &format!("sandwiches {bounds:?}; flat weight divergent as required"),
    );
}

/// Criterion 6: the quintic pointwise bound on [0, 100] at 1e5 grid points
/// and the three discrete lemmas on 1e4 random instances, slack >= -1e-12.
#[test]
fn criterion_06_pointwise_lemmas() {
    let t0 = Instant::now();
    let grid: Vec<f64> = (0..100_000).map(|i| 100.0 * i as f64 / 99_999.0).collect();
    let mut rng = ChaCha12Rng::seed_from_u64(6);
    let mut instances = Vec::with_capacity(10_000);
    for _ in 0..10_000 {
        let weights: Vec<f64> = (0..8).map(|_| rng.random::<f64>() + 1e-3).collect();
        let values: Vec<f64> = (0..8).map(|_| 4.0 * rng.random::<f64>()).collect();
        instances.push(DiscreteInstance::new(weights, values).unwrap());
    }
    let report = functionals::verify_pointwise_lemmas(&grid, &instances);
    assert!(report.quintic_min_slack >= -1e-12, "{report:?}");
    assert!(report.squared_deviation_min_slack >= -1e-12, "{report:?}");
    assert!(report.restricted_mass_min_slack >= -1e-12, "{report:?}");
    assert!(report.restricted_entropy_min_slack >= -1e-12, "{report:?}");
    assert!(report.xlnx_min_slack >= -1e-12, "{report:?}");
    let elapsed = t0.elapsed();
    assert!(elapsed.as_secs_f64() < 30.0, "runtime {elapsed:?} >= 30s");
    pass(
        6,
        elapsed,
        &format!(
            "min slacks: quintic {:.2e}, (b) {:.2e}, (c) {:.2e}, (d) {:.2e}, xlnx {:.2e}",
            report.quintic_min_slack,
            report.squared_deviation_min_slack,
            report.restricted_mass_min_slack,
            report.restricted_entropy_min_slack,
            report.xlnx_min_slack
        ),
    );
}

/// Criterion 7: at A = 34 the empirical B over >= 200 combined members is
/// finite, positive-binding, and moves less than 5% between the 2048- and
/// 4096-node grids, for alpha in (1.2, 1.5).
#[test]
fn criterion_07_modified_lsi_frontier() {
    let t0 = Instant::now();
    let mut details = Vec::new();
    for alpha in [1.2, 1.5] {
        let m = mu_alpha(alpha);
        let (lo, hi) = m.window();
        let lambda_max = (alpha * (0.6 * hi).powf(alpha - 1.0)).min(3.0);
        let family = families::combine(
            "combined",
            vec![
                families::exponentials(0.2, lambda_max, 80),
                families::bumps(lo * 0.5, hi * 0.5, 16, &[0.3, 0.6, 1.0, 1.6, 2.4], 6.0)
                    .unwrap(),
                families::fourier(48, 5, 1.2, 2.0, 7).unwrap(),
            ],
        );
        assert!(family.members.len() >= 200);
        let coarse = CertifySettings {
            grid_nodes: 2049,
            max_refinements: 0,
            ..CertifySettings::default()
        };
        let fine = CertifySettings {
            grid_nodes: 4097,
            max_refinements: 0,
            ..CertifySettings::default()
        };
        let r1 = certify::verify_modified_lsi(&m, &family, &[34.0], &coarse).unwrap();
        let r2 = certify::verify_modified_lsi(&m, &family, &[34.0], &fine).unwrap();
        assert!(r1.counterexamples.is_empty(), "{:?}", r1.counterexamples);
        assert!(r2.counterexamples.is_empty(), "{:?}", r2.counterexamples);
        let (b1, b2) = (r1.frontier[0].empirical_b, r2.frontier[0].empirical_b);
        assert!(b1.is_finite() && b2.is_finite());
        assert!(
            r2.frontier[0].binding_members > 0,
            "no member binds at A = 34 for alpha = {alpha}"
        );
        let rel = (b1 - b2).abs() / b1.abs().max(b2.abs());
        assert!(rel <= 0.05, "alpha={alpha}: B moved {rel:.3} between grids");
        details.push(format!("alpha={alpha}: B = {b2:.4} (drift {rel:.4})"));
    }
    let elapsed = t0.elapsed();
    assert!(elapsed.as_secs_f64() < 120.0, "runtime {elapsed:?} >= 2min");
    pass(7, elapsed, &details.join("; "));
}

/// Criterion 8: the transportation inequality at the certified mu_2 constant
/// holds on translations and tilts to 1e-6, and the Gaussian translation
/// probe is tight to 1e-8.
#[test]
fn criterion_08_lsi_to_talagrand_chain() {
    let t0 = Instant::now();
    // Certify the conjugate-pair constant for mu_2 over exponentials.
    let m = mu_alpha(2.0);
    let h = CostFunction::h_cost(1.0, 2.0).unwrap();
    let expos = families::exponentials(0.2, 3.0, 40);
    let c_hat = certify::estimate_lsi_constant(&m, &h, &expos, &CertifySettings::default())
        .unwrap()
        .estimated_constant;
    assert!((c_hat - 2.0).abs() < 1e-5, "mu_2 conjugate-pair constant {c_hat}");

    let mut densities = DensityMember::translations(&m, &[0.15, 0.3, 0.6, 1.0]);
    densities.extend(DensityMember::tilts(&m, &[0.4, 0.8, 1.5, 2.2]));
    let report =
        transport::verify_talagrand(&m, c_hat, 1.0, 2.0, &densities, 1e-6).unwrap();
    assert_eq!(report.verdict, Verdict::CertifiedBounded, "{report:?}");

    // Exact tightness on pure translations of a Gaussian: the quadratic
    // transport inequality is an identity there.
    let g = standard_gaussian();
    let probes = DensityMember::tilts(&g, &[0.5, 1.0, 1.5]);
    let tight = transport::verify_talagrand(&g, 4.0, 2.0, 2.0, &probes, 1e-6).unwrap();
    let mut max_abs_slack: f64 = 0.0;
    for c in &tight.checks {
        max_abs_slack = max_abs_slack.max(c.slack.abs());
    }
    assert!(max_abs_slack <= 1e-8, "tightness slack {max_abs_slack}");

    let elapsed = t0.elapsed();
    assert!(elapsed.as_secs_f64() < 60.0, "runtime {elapsed:?} >= 60s");
    pass(
        8,
        elapsed,
        &format!(
            "C_hat = {c_hat:.6}, worst violation {:.2e}, Gaussian tightness {max_abs_slack:.2e}",
            report.max_violation
        ),
    );
}

/// Criterion 9: the dual Hopf-Lax inequality holds with certified constants
/// over the Lipschitz family (log-slack >= -1e-6), the Moreau closed form is
/// reproduced at 1e-8, and an undersized constant is caught violating.
#[test]
fn criterion_09_dual_hopf_lax() {
    let t0 = Instant::now();
    let m = mu_alpha(2.0);
    let (lo, hi) = m.window();
    let mut family = families::lipschitz_caps(-1.5, 1.5, 7, &[0.5, 1.0, 2.0]);
    family
        .members
        .extend(families::ramps(-2.0, 2.0, 7, &[0.5, 1.5], 0.5).unwrap().members);
    let mut min_slack = f64::INFINITY;
    for member in &family.members {
        let grid = member.materialize(lo, hi, 2049).unwrap();
        let slack = transport::dual_check(&m, 2.0, 1.0, 2.0, &grid).unwrap();
        min_slack = min_slack.min(slack);
    }
    assert!(min_slack >= -1e-6, "dual slack {min_slack}");

    // Moreau envelope of |x| at t = 1 under the quadratic cost.
    let f = funcineq::grid::GridFunction::sample_with_knots(
        |x: f64| x.abs(),
        -8.0,
        8.0,
        1601,
        &[-2.0, -1.0, -0.5, 0.0, 0.5, 1.0, 2.0],
    )
    .unwrap();
    let q = transport::hopf_lax(&f, &CostFunction::l_cost(50.0, 2.0).unwrap(), 1.0).unwrap();
    let lookup = |x: f64| {
        let i = q
            .nodes()
            .iter()
            .position(|&n| (n - x).abs() < 1e-12)
            .unwrap();
        q.values()[i]
    };
    let mut moreau_err: f64 = 0.0;
    for (x, expect) in [(0.0, 0.0), (0.5, 0.125), (2.0, 1.5)] {
        moreau_err = moreau_err.max((lookup(x) - expect).abs());
    }
    assert!(moreau_err <= 1e-8, "Moreau error {moreau_err}");

    // A deliberately undersized constant produces a witnessed violation.
    let mut worst = f64::INFINITY;
    for member in &family.members {
        let grid = member.materialize(lo, hi, 2049).unwrap();
        worst = worst.min(transport::dual_check(&m, 0.2, 1.0, 2.0, &grid).unwrap());
    }
    assert!(worst < -1e-3, "undersized constant not caught: {worst}");

    let elapsed = t0.elapsed();
    assert!(elapsed.as_secs_f64() < 30.0, "runtime {elapsed:?} >= 30s");
    pass(
        9,
        elapsed,
        &format!(
            "min slack {min_slack:.2e}, Moreau error {moreau_err:.2e}, \
             undersized-C witness {worst:.3}"
        ),
    );
}

/// Criterion 10: Monte Carlo tails of the normalized sum over mu_1.5^(x20)
/// stay below `2 exp(-K min(lambda^2, lambda^1.5))` for a fitted K > 0, and
/// the one-dimensional mu_2 case stays below the printed two-regime bound.
#[test]
fn criterion_10_concentration_tails() {
    let t0 = Instant::now();
    let pm = ProductMeasure::new(mu_alpha(1.5), 20).unwrap();
    let stat = LipschitzStatistic::normalized_sum(20);
    let lambdas: Vec<f64> = (1..=16).map(|i| 0.25 * i as f64).collect();
    let curve = certify::simulate_concentration(&pm, &stat, 100_000, 10, &lambdas).unwrap();
    let k = certify::fit_product_constant(1.5, &curve).expect("positive counts exist");
    assert!(k > 0.0, "fitted K = {k}");
    for (i, &lam) in curve.lambdas.iter().enumerate() {
        let bound = (2.0 * (-k * certify::product_min_exponent(1.5, lam)).exp()).min(1.0);
        assert!(
            curve.wilson_lo[i] <= bound,
            "lambda={lam}: lower CI {} above bound {bound}",
            curve.wilson_lo[i]
        );
    }

    // 1D Gaussian factor against the printed bound with the H-form constant.
    let pm1 = ProductMeasure::new(mu_alpha(2.0), 1).unwrap();
    let stat1 = LipschitzStatistic::coordinate();
    let curve1 = certify::simulate_concentration(&pm1, &stat1, 100_000, 11, &lambdas).unwrap();
    for (i, &lam) in curve1.lambdas.iter().enumerate() {
        let bound = certify::herbst_bound(2.0, 1.0, 2.0, 1.0, lam);
        assert!(
            curve1.wilson_lo[i] <= bound,
            "gaussian lambda={lam}: lower CI {} above printed bound {bound}",
            curve1.wilson_lo[i]
        );
    }
    let elapsed = t0.elapsed();
    assert!(elapsed.as_secs_f64() < 120.0, "runtime {elapsed:?} >= 2min");
    pass(
        10,
        elapsed,
        &format!("fitted K = {k:.4} over 1e5 samples of mu_1.5^(x20); 1D bound respected"),
    );
}

/// Criterion 11: on 100 random 5-atom instances the monotone coupling equals
/// the exhaustive permutation oracle for convex ground costs.
#[test]
fn criterion_11_monotone_coupling_optimality() {
    let t0 = Instant::now();
    let mut rng = ChaCha12Rng::seed_from_u64(11);
    let mut worst: f64 = 0.0;
    for trial in 0..100 {
        let xs: Vec<f64> = (0..5).map(|_| -4.0 + 8.0 * rng.random::<f64>()).collect();
        let ys: Vec<f64> = (0..5).map(|_| -4.0 + 8.0 * rng.random::<f64>()).collect();
        let a = 0.3 + 2.7 * rng.random::<f64>();
        let alpha = 1.0 + rng.random::<f64>();
        let l = if trial % 3 == 0 {
            CostFunction::quadratic()
        } else {
            CostFunction::l_cost(a, alpha).unwrap()
        };
        let monotone = transport::monotone_coupling_cost_discrete(&xs, &ys, &l).unwrap();
        let oracle = common::lp_transport_oracle(&xs, &ys, &l);
        worst = worst.max((monotone - oracle).abs() / oracle.abs().max(1.0));
    }
    assert!(worst <= 1e-12, "monotone vs LP oracle gap {worst}");
    let elapsed = t0.elapsed();
    assert!(elapsed.as_secs_f64() < 10.0, "runtime {elapsed:?} >= 10s");
    pass(11, elapsed, &format!("max relative gap {worst:.2e} over 100 instances"));
}

/// Criterion 12: transfer arithmetic is exact, and the tensorised and
/// perturbed families never violate the transferred constants.
#[test]
fn criterion_12_constant_transfer() {
    let t0 = Instant::now();
    // Exact plug-ins.
    assert_eq!(
        certify::transfer_constants(TransferRule::Tensorise { c1: 3.0, c2: 5.0 })
            .unwrap()
            .constant,
        5.0
    );
    assert_eq!(
        certify::transfer_constants(TransferRule::Perturb { c: 2.0, osc: 0.0 })
            .unwrap()
            .constant,
        2.0
    );
    let p = certify::transfer_constants(TransferRule::Perturb { c: 1.5, osc: 0.8 }).unwrap();
    assert!((p.constant - 1.5 * 0.8f64.exp()).abs() < 1e-14);
    assert_eq!(
        certify::transfer_constants(TransferRule::LsiToPoincare { c: 3.0 })
            .unwrap()
            .constant,
        1.5
    );
    let t = certify::transfer_constants(TransferRule::TToLsi {
        a: 1.0,
        alpha: 1.5,
        c: 1.0,
        lambda: 2.0,
    })
    .unwrap();
    assert_eq!(t.constant, 16.0);
    assert_eq!(t.threshold, Some(0.25));

    // Tensorisation consistency: 2D product ratios never exceed the 1D
    // certified constant.
    let m = mu_alpha(2.0);
    let h = CostFunction::h_cost(1.0, 2.0).unwrap();
    let family = families::combine(
        "mix",
        vec![
            families::exponentials(0.3, 2.4, 6),
            families::bumps(-1.5, 1.5, 4, &[0.6, 1.2], 1.5).unwrap(),
        ],
    );
    let settings = CertifySettings::default();
    let c1 = certify::estimate_lsi_constant(&m, &h, &family, &settings)
        .unwrap()
        .estimated_constant;
    let (lo, hi) = m.window();
    let mut max_product_ratio: f64 = 0.0;
    for g_m in &family.members {
        for h_m in &family.members {
            let g = g_m.materialize(lo, hi, 2049).unwrap();
            let hh = h_m.materialize(lo, hi, 2049).unwrap();
            let r = certify::product_lsi_ratio(&m, &g, &hh, &h);
            max_product_ratio = max_product_ratio.max(r);
        }
    }
    assert!(
        max_product_ratio <= c1 + 1e-6,
        "tensorised ratio {max_product_ratio} exceeds {c1}"
    );

    // Perturbation consistency: ratios under e^h dmu stay below C e^osc.
    let perturbed = m.perturb(|x: f64| 0.4 * (1.3 * x).sin()).unwrap();
    let osc = perturbed.oscillation_record().unwrap();
    let transferred = certify::transfer_constants(TransferRule::Perturb { c: c1, osc })
        .unwrap()
        .constant;
    let r_pert = certify::estimate_lsi_constant(&perturbed, &h, &family, &settings)
        .unwrap()
        .estimated_constant;
    assert!(
        r_pert <= transferred + 1e-6,
        "perturbed ratio {r_pert} exceeds transferred {transferred}"
    );

    // LSI -> Poincare: small-perturbation ratios stay below C/2 + 1e-2.
    let poincare_cap = certify::transfer_constants(TransferRule::LsiToPoincare { c: c1 })
        .unwrap()
        .constant;
    let report = transport::t_implies_poincare_check(&m, poincare_cap + 1e-2, &family, 2049, 0.0);
    assert_eq!(report.verdict, Verdict::CertifiedBounded, "{report:?}");

    let elapsed = t0.elapsed();
    assert!(elapsed.as_secs_f64() < 60.0, "runtime {elapsed:?} >= 60s");
    pass(
        12,
        elapsed,
        &format!(
            "plug-ins exact; tensorised sup {max_product_ratio:.6} <= {c1:.6}; \
             perturbed sup {r_pert:.6} <= {transferred:.6}"
        ),
    );
}
