//! Brute-force quadratures that share no code with [`crate::ims`], used to
//! cross-check it and to witness the circle-integral asymptotics
//! `∫dθ/|1 − re^{iθ}|^ϰ ≍ (1−r)^{1−ϰ}, log 1/(1−r), 1` for `ϰ > 1, = 1, < 1`.

use std::f64::consts::{PI, TAU};

use num_complex::Complex64 as C64;
use serde::Serialize;

use crate::ims::AnalyticDerivative;
use crate::numerics::KahanSum;

/// Geometric ratio between consecutive panels of the graded mesh.
const GRADING: f64 = 1.01;

/// Composite Simpson on `[0, len]` over a mesh that is uniform on
/// `[0, δ]` and geometric beyond, for integrands peaked at the left end
/// on the scale `δ`.
fn graded_simpson(g: &dyn Fn(f64) -> f64, len: f64, delta: f64) -> f64 {
    let mut nodes = Vec::new();
    let d = delta.min(len);
    for i in 0..=32 {
        nodes.push(d * i as f64 / 32.0);
    }
    let mut x = d;
    while x < len {
        x = (x * GRADING).min(len);
        nodes.push(x);
    }
    let mut acc = KahanSum::new();
    for w in nodes.windows(2) {
        let (a, b) = (w[0], w[1]);
        acc.add((b - a) / 6.0 * (g(a) + 4.0 * g(0.5 * (a + b)) + g(b)));
    }
    acc.value()
}

/// `∫_{−a}^{a} dθ/|1 − re^{iθ}|^ϰ`.
pub fn singular_circle_integral(kappa: f64, window: f64, r: f64) -> f64 {
    assert!(window > 0.0 && window <= PI && (0.0..1.0).contains(&r));
    if kappa == 0.0 {
        return 2.0 * window;
    }
    // |1 − re^{iθ}|² = (1−r)² + 4r sin²(θ/2)
    let g = |t: f64| {
        let s = (0.5 * t).sin();
        ((1.0 - r).powi(2) + 4.0 * r * s * s).powf(-0.5 * kappa)
    };
    2.0 * graded_simpson(&g, window, (1.0 - r) / 4.0)
}

/// `∫_0^{2π} h(θ) dθ` for an integrand peaked at the given angles on the
/// scale `delta`; the circle is cut at midpoints between peaks.
fn peaked_circle_integral(h: &dyn Fn(f64) -> f64, peaks: &[f64], delta: f64) -> f64 {
    let mut p: Vec<f64> = peaks.iter().map(|a| a.rem_euclid(TAU)).collect();
    p.sort_by(|a, b| a.total_cmp(b));
    let n = p.len();
    let mut acc = KahanSum::new();
    for i in 0..n {
        let next = if i + 1 < n { p[i + 1] } else { p[0] + TAU };
        let prev = if i > 0 { p[i - 1] } else { p[n - 1] - TAU };
        let (right, left) = (0.5 * (next - p[i]), 0.5 * (p[i] - prev));
        acc.add(graded_simpson(&|t| h(p[i] + t), right, delta));
        acc.add(graded_simpson(&|t| h(p[i] - t), left, delta));
    }
    acc.value()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum GrowthModel {
    /// `(1−r)^{1−ϰ}`.
    Power,
    /// `log 1/(1−r)`.
    Log,
    Const,
}

impl GrowthModel {
    fn eval(self, kappa: f64, r: f64) -> f64 {
        match self {
            GrowthModel::Power => (1.0 - r).powf(1.0 - kappa),
            GrowthModel::Log => (1.0 / (1.0 - r)).ln(),
            GrowthModel::Const => 1.0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Verdict {
    Stable,
    Drifting,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AsymptoticCheck {
    pub kappa_exponent: f64,
    pub model: GrowthModel,
    pub radii: Vec<f64>,
    /// Observed integral divided by the model.
    pub ratios: Vec<f64>,
    pub verdict: Verdict,
}

/// Largest spread `max/min` allowed over the last five ladder ratios.
pub const STABILITY_SPREAD: f64 = 1.10;

fn ladder_check(kappa: f64, model: GrowthModel, integral: &dyn Fn(f64) -> f64) -> AsymptoticCheck {
    let radii: Vec<f64> = (6..=16).map(|k| 1.0 - 0.5f64.powi(k)).collect();
    let ratios: Vec<f64> = radii.iter().map(|&r| integral(r) / model.eval(kappa, r)).collect();
    let tail = &ratios[ratios.len() - 5..];
    let max = tail.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let min = tail.iter().cloned().fold(f64::INFINITY, f64::min);
    let verdict = if min > 0.0 && max / min <= STABILITY_SPREAD {
        Verdict::Stable
    } else {
        Verdict::Drifting
    };
    AsymptoticCheck {
        kappa_exponent: kappa,
        model,
        radii,
        ratios,
        verdict,
    }
}

/// Ratios of `∫_{−π}^{π} dθ/|1 − re^{iθ}|^ϰ` to the model along
/// `r_k = 1 − 2^{−k}`, `k = 6..16`.
pub fn asymptotic_check(kappa: f64, model: GrowthModel) -> AsymptoticCheck {
    ladder_check(kappa, model, &|r| singular_circle_integral(kappa, PI, r))
}

/// `f(z) = (z−1)(z+1)/(1 − z/2)`: two simple zeros on the circle and a
/// factor bounded above and below near them.
pub fn two_point_instance(z: C64) -> C64 {
    (z - 1.0) * (z + 1.0) / (1.0 - 0.5 * z)
}

/// [`asymptotic_check`] for `∫dθ/|f(re^{iθ})|^ϰ` with `f` from
/// [`two_point_instance`].
pub fn two_point_check(kappa: f64, model: GrowthModel) -> AsymptoticCheck {
    ladder_check(kappa, model, &|r| {
        let h = |t: f64| two_point_instance(C64::from_polar(r, t)).norm().powf(-kappa);
        peaked_circle_integral(&h, &[0.0, PI], (1.0 - r) / 4.0)
    })
}

/// Plain `M`-point periodic Riemann sum of `∫|f′(re^{iθ})^τ| dθ`. For
/// non-real `τ` the argument of `f′` comes from its own radial Simpson
/// integration of `N_f`.
pub fn riemann_cross_check(f: &dyn AnalyticDerivative, tau: C64, r: f64, m: usize) -> f64 {
    assert!(m >= 1 << 14, "at least 2^14 points");
    let origin = f.derivative(C64::new(0.0, 0.0)).ln();
    let mut acc = KahanSum::new();
    for j in 0..m {
        let t = TAU * j as f64 / m as f64;
        let z = C64::from_polar(r, t);
        let log_mod = f.ln_abs_derivative(z);
        let v = if tau.im == 0.0 {
            (tau.re * log_mod).exp()
        } else {
            let arg = radial_argument(f, t, r) + origin.im;
            (tau.re * log_mod - tau.im * arg).exp()
        };
        acc.add(v);
    }
    TAU * acc.value() / m as f64
}

/// `Im ∫_0^r N_f(ρe^{iθ}) e^{iθ} dρ` by Simpson on a mesh graded toward `r`.
fn radial_argument(f: &dyn AnalyticDerivative, t: f64, r: f64) -> f64 {
    let e = C64::from_polar(1.0, t);
    let g = |s: f64| (f.pre_schwarzian((r - s) * e) * e).im;
    graded_simpson(&g, r, (1.0 - r).max(1e-12))
}

/// `(1 − θ²/2, 1 − θ²/4)`, which bracket `cos θ` on `[0, π/2]`.
pub fn cos_bounds(theta: f64) -> (f64, f64) {
    (1.0 - theta * theta / 2.0, 1.0 - theta * theta / 4.0)
}

/// `((Σ|a_k|)^p, n^{p−1} Σ|a_k|^p)`; the first never exceeds the second
/// for `p ≥ 1`.
pub fn power_mean_sides(a: &[f64], p: f64) -> (f64, f64) {
    let n = a.len() as f64;
    let lhs = a.iter().map(|x| x.abs()).sum::<f64>().powf(p);
    let rhs = n.powf(p - 1.0) * a.iter().map(|x| x.abs().powf(p)).sum::<f64>();
    (lhs, rhs)
}
