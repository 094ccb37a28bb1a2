//! Independent oracles for the integration suites. Nothing here may call
//! into the code paths it is used to check: quadrature is adaptive Simpson,
//! the discrete Hardy constant is an eigensolve, transport is exhaustive
//! enumeration, entropies are direct sums.

use funcineq::costs::CostFunction;
use nalgebra::DMatrix;

/// Adaptive Simpson quadrature, the reference integrator.
pub fn adaptive_simpson<F: Fn(f64) -> f64 + Copy>(f: F, a: f64, b: f64, tol: f64) -> f64 {
    fn simpson<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> f64 {
        (b - a) / 6.0 * (f(a) + 4.0 * f(0.5 * (a + b)) + f(b))
    }
    fn rec<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, whole: f64, tol: f64, depth: u32) -> f64 {
        let m = 0.5 * (a + b);
        let left = simpson(f, a, m);
        let right = simpson(f, m, b);
        if depth == 0 || (left + right - whole).abs() <= 15.0 * tol {
            return left + right + (left + right - whole) / 15.0;
        }
        rec(f, a, m, left, tol / 2.0, depth - 1) + rec(f, m, b, right, tol / 2.0, depth - 1)
    }
    let whole = simpson(&f, a, b);
    rec(&f, a, b, whole, tol, 48)
}

/// Standard normal CDF (reference implementation from statrs).
pub fn normal_cdf(x: f64) -> f64 {
    use statrs::distribution::ContinuousCDF;
    statrs::distribution::Normal::new(0.0, 1.0).unwrap().cdf(x)
}

/// Best constant `A` of the discrete Hardy inequality
/// `sum m_i (f_i - f_0)^2 <= A sum (f_j - f_{j-1})^2 / r_j` with `f_0 = 0`:
/// the largest eigenvalue of the pencil `M v = lambda K v`, where `K` is the
/// resistance Laplacian grounded at the origin. Optimal interpolation
/// between atoms is built into the resistance form, so this equals the best
/// constant over all functions.
pub fn discrete_hardy_best_constant(masses: &[f64], resistances: &[f64]) -> f64 {
    let n = masses.len();
    assert_eq!(resistances.len(), n);
    // K[i][i] = 1/r_i + 1/r_{i+1} (no r_{n+1} term at the free end),
    // off-diagonal K[i][i+1] = -1/r_{i+1}; grounding at f(0) = 0 keeps K SPD.
    let mut k = DMatrix::<f64>::zeros(n, n);
    for i in 0..n {
        k[(i, i)] += 1.0 / resistances[i];
        if i + 1 < n {
            k[(i, i)] += 1.0 / resistances[i + 1];
            k[(i, i + 1)] -= 1.0 / resistances[i + 1];
            k[(i + 1, i)] -= 1.0 / resistances[i + 1];
        }
    }
    let chol = k.clone().cholesky().expect("resistance Laplacian is SPD");
    let l_inv = chol
        .l()
        .try_inverse()
        .expect("triangular factor invertible");
    let m = DMatrix::<f64>::from_diagonal(&nalgebra::DVector::from_vec(masses.to_vec()));
    let sym = &l_inv * m * l_inv.transpose();
    let eig = nalgebra::SymmetricEigen::new(sym);
    eig.eigenvalues.iter().cloned().fold(f64::MIN, f64::max)
}

/// Exhaustive minimum of the transport cost over all couplings of two
/// equal-weight 5-atom lists; the vertices of the Birkhoff polytope are the
/// permutation matrices, enumerated in full.
pub fn lp_transport_oracle(xs: &[f64], ys: &[f64], l: &CostFunction) -> f64 {
    let n = xs.len();
    assert!(n <= 8, "factorial enumeration only");
    let mut idx: Vec<usize> = (0..n).collect();
    let mut best = f64::INFINITY;
    permute(&mut idx, 0, &mut |perm: &[usize]| {
        let cost: f64 = perm
            .iter()
            .enumerate()
            .map(|(i, &j)| l.evaluate(xs[i] - ys[j]))
            .sum::<f64>()
            / n as f64;
        if cost < best {
            best = cost;
        }
    });
    best
}

fn permute<F: FnMut(&[usize])>(idx: &mut Vec<usize>, k: usize, visit: &mut F) {
    if k == idx.len() {
        visit(idx);
        return;
    }
    for i in k..idx.len() {
        idx.swap(k, i);
        permute(idx, k + 1, visit);
        idx.swap(k, i);
    }
}

/// Direct-summation entropy of a discrete `f^2` against probability weights.
pub fn discrete_entropy(weights: &[f64], f2: &[f64]) -> f64 {
    let mass: f64 = weights.iter().zip(f2).map(|(w, v)| w * v).sum();
    let integral: f64 = weights
        .iter()
        .zip(f2)
        .map(|(w, &v)| if v > 0.0 { w * v * v.ln() } else { 0.0 })
        .sum();
    integral - mass * mass.ln()
}

/// Kolmogorov-Smirnov statistic of a sample against a reference CDF.
pub fn ks_statistic<F: Fn(f64) -> f64>(sample: &mut [f64], cdf: F) -> f64 {
    sample.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let n = sample.len() as f64;
    let mut d: f64 = 0.0;
    for (i, &x) in sample.iter().enumerate() {
        let c = cdf(x);
        d = d.max((c - i as f64 / n).abs());
        d = d.max(((i + 1) as f64 / n - c).abs());
    }
    d
}
