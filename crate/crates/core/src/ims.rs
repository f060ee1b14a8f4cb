//! Integral means `I(r) = ∫ |f′(re^{iθ})^τ| dθ` and the radial slope estimate
//! of the spectrum `β_f(τ) = limsup log I(r) / |log(1−r)|`.
//!
//! For complex `τ` the power is `exp(τ log f′)` with the branch normalised by
//! `log f′(0) = Log f′(0)`; the branch is anchored by integrating `N_f`
//! along a radius and carried around the circle by phase unwrapping.

use std::f64::consts::PI;

use num_complex::Complex64 as C64;
use rayon::prelude::*;
use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::numerics::{fit_line, gauss_legendre, pairwise_sum};
use crate::poly::{FactoredRational, RationalFn};
use crate::roots::RootConfig;

const TWO_PI: f64 = 2.0 * PI;

/// A map known through its derivative.
///
/// Implementors guarantee `f′(0)` is finite and nonzero and that `f′` has
/// no zeros or poles in the annulus `annulus_start() < |z| < 1`.
pub trait AnalyticDerivative: Send + Sync {
    fn derivative(&self, z: C64) -> C64;

    /// `N_f = f″/f′`.
    fn pre_schwarzian(&self, z: C64) -> C64;

    /// Derivative of `N_f`.
    fn pre_schwarzian_prime(&self, z: C64) -> C64;

    /// `S_f = N_f′ − N_f²/2`.
    fn schwarzian(&self, z: C64) -> C64 {
        let n = self.pre_schwarzian(z);
        self.pre_schwarzian_prime(z) - 0.5 * n * n
    }

    fn ln_abs_derivative(&self, z: C64) -> f64 {
        self.derivative(z).norm().ln()
    }

    /// The branch of `log f′` with `log f′(0) = Log f′(0)`, when a closed form
    /// is available on the whole disk.
    fn log_derivative(&self, _z: C64) -> Option<C64> {
        None
    }

    /// Angles of zeros and poles of `f′` on the unit circle.
    fn singular_angles(&self) -> Vec<f64>;

    /// Angles toward which quadrature panels are graded; defaults to the
    /// singular angles.
    fn feature_angles(&self) -> Vec<f64> {
        self.singular_angles()
    }

    /// Radius below which `f′` may have zeros or poles.
    fn annulus_start(&self) -> f64 {
        0.0
    }
}

impl<T: AnalyticDerivative + ?Sized> AnalyticDerivative for &T {
    fn derivative(&self, z: C64) -> C64 {
        (**self).derivative(z)
    }
    fn pre_schwarzian(&self, z: C64) -> C64 {
        (**self).pre_schwarzian(z)
    }
    fn pre_schwarzian_prime(&self, z: C64) -> C64 {
        (**self).pre_schwarzian_prime(z)
    }
    fn schwarzian(&self, z: C64) -> C64 {
        (**self).schwarzian(z)
    }
    fn ln_abs_derivative(&self, z: C64) -> f64 {
        (**self).ln_abs_derivative(z)
    }
    fn log_derivative(&self, z: C64) -> Option<C64> {
        (**self).log_derivative(z)
    }
    fn singular_angles(&self) -> Vec<f64> {
        (**self).singular_angles()
    }
    fn feature_angles(&self) -> Vec<f64> {
        (**self).feature_angles()
    }
    fn annulus_start(&self) -> f64 {
        (**self).annulus_start()
    }
}

impl<T: AnalyticDerivative + ?Sized> AnalyticDerivative for Box<T> {
    fn derivative(&self, z: C64) -> C64 {
        (**self).derivative(z)
    }
    fn pre_schwarzian(&self, z: C64) -> C64 {
        (**self).pre_schwarzian(z)
    }
    fn pre_schwarzian_prime(&self, z: C64) -> C64 {
        (**self).pre_schwarzian_prime(z)
    }
    fn schwarzian(&self, z: C64) -> C64 {
        (**self).schwarzian(z)
    }
    fn ln_abs_derivative(&self, z: C64) -> f64 {
        (**self).ln_abs_derivative(z)
    }
    fn log_derivative(&self, z: C64) -> Option<C64> {
        (**self).log_derivative(z)
    }
    fn singular_angles(&self) -> Vec<f64> {
        (**self).singular_angles()
    }
    fn feature_angles(&self) -> Vec<f64> {
        (**self).feature_angles()
    }
    fn annulus_start(&self) -> f64 {
        (**self).annulus_start()
    }
}

/// The derivative of a rational map (or a rational derivative), evaluated in
/// factored form `c·Π(z − w_j)^{m_j}` so that values stay accurate next to
/// circle singularities.
#[derive(Debug, Clone)]
pub struct RationalDerivative {
    derivative: RationalFn,
    lead: C64,
    /// Zeros (`m > 0`) and poles (`m < 0`) of the derivative.
    factors: Vec<(C64, i32)>,
    circle_tol: f64,
}

impl RationalDerivative {
    /// From the map `R`.
    pub fn from_map(r: &RationalFn, cfg: &RootConfig) -> Result<Self> {
        let fr = FactoredRational::derivative_of(r, cfg)?;
        let d = fr.to_rational(r.num().is_real() && r.den().is_real())?;
        Self::from_parts(d, fr, cfg)
    }

    /// From a rational `f′` directly.
    pub fn from_derivative(d: RationalFn, cfg: &RootConfig) -> Result<Self> {
        if d.is_zero() {
            return Err(Error::DegenerateInput("derivative vanishes identically".into()));
        }
        let fr = FactoredRational::new(&d, cfg)?;
        Self::from_parts(d, fr, cfg)
    }

    fn from_parts(d: RationalFn, fr: FactoredRational, cfg: &RootConfig) -> Result<Self> {
        let FactoredRational { lead, factors } = fr;
        if let Some((w, _)) = factors.iter().find(|(w, _)| w.norm() == 0.0) {
            return Err(Error::DegenerateInput(format!(
                "derivative has a zero or pole at the origin ({w})"
            )));
        }
        Ok(Self {
            derivative: d,
            lead,
            factors,
            circle_tol: cfg.circle_tol,
        })
    }

    pub fn rational(&self) -> &RationalFn {
        &self.derivative
    }

    pub fn factors(&self) -> &[(C64, i32)] {
        &self.factors
    }

    fn inside(&self) -> impl Iterator<Item = &(C64, i32)> {
        self.factors
            .iter()
            .filter(move |(w, _)| w.norm() < 1.0 - self.circle_tol)
    }
}

impl AnalyticDerivative for RationalDerivative {
    fn derivative(&self, z: C64) -> C64 {
        self.factors
            .iter()
            .fold(self.lead, |acc, &(w, m)| acc * (z - w).powi(m))
    }

    fn ln_abs_derivative(&self, z: C64) -> f64 {
        self.factors
            .iter()
            .fold(self.lead.norm().ln(), |acc, &(w, m)| {
                acc + m as f64 * (z - w).norm().ln()
            })
    }

    fn pre_schwarzian(&self, z: C64) -> C64 {
        self.factors
            .iter()
            .map(|&(w, m)| m as f64 / (z - w))
            .sum()
    }

    fn pre_schwarzian_prime(&self, z: C64) -> C64 {
        self.factors
            .iter()
            .map(|&(w, m)| {
                let d = z - w;
                -(m as f64) / (d * d)
            })
            .sum()
    }

    fn log_derivative(&self, z: C64) -> Option<C64> {
        if self.inside().next().is_some() {
            return None;
        }
        let one = C64::new(1.0, 0.0);
        let at_zero = self.derivative(C64::new(0.0, 0.0)).ln();
        Some(
            self.factors
                .iter()
                .fold(at_zero, |acc, &(w, m)| acc + m as f64 * (one - z / w).ln()),
        )
    }

    fn singular_angles(&self) -> Vec<f64> {
        let mut a: Vec<f64> = self
            .factors
            .iter()
            .filter(|(w, _)| (w.norm() - 1.0).abs() <= self.circle_tol)
            .map(|(w, _)| normalize_angle(w.arg()))
            .collect();
        sort_dedup_angles(&mut a);
        a
    }

    fn feature_angles(&self) -> Vec<f64> {
        let mut a: Vec<f64> = self
            .factors
            .iter()
            .filter(|(w, _)| w.norm() <= 1.5)
            .map(|(w, _)| normalize_angle(w.arg()))
            .collect();
        sort_dedup_angles(&mut a);
        a
    }

    fn annulus_start(&self) -> f64 {
        self.inside().map(|(w, _)| w.norm()).fold(0.0, f64::max)
    }
}

pub fn normalize_angle(t: f64) -> f64 {
    let a = t.rem_euclid(TWO_PI);
    if a >= TWO_PI {
        0.0
    } else {
        a
    }
}

pub fn sort_dedup_angles(a: &mut Vec<f64>) {
    a.sort_by(f64::total_cmp);
    a.dedup_by(|x, y| (*x - *y).abs() < 1e-12);
    if a.len() > 1 && (a[0] + TWO_PI - a[a.len() - 1]).abs() < 1e-12 {
        a.pop();
    }
}

/// Quadrature settings shared by the integral-means routines.
#[derive(Debug, Clone, Copy)]
pub struct QuadConfig {
    /// Relative change allowed between a panel and its two halves.
    pub quad_tol: f64,
    /// Gauss–Legendre nodes per panel.
    pub order: usize,
    pub max_panels: usize,
}

impl Default for QuadConfig {
    fn default() -> Self {
        Self {
            quad_tol: 1e-9,
            order: 16,
            max_panels: 400_000,
        }
    }
}

/// `log f′(z) − Log f′(0)` by Gauss–Legendre integration of `N_f` along `[0, z]`,
/// with panels graded toward the endpoint.
pub fn radial_log_derivative(f: &dyn AnalyticDerivative, z: C64) -> C64 {
    let rho = z.norm();
    if rho == 0.0 {
        return C64::new(0.0, 0.0);
    }
    let dir = z / rho;
    let rule = gauss_legendre(20);
    let gap = (1.0 - rho).max(1e-300);
    let mut edges = vec![0.0];
    let mut d = rho / 2.0;
    while d > gap / 2.0 {
        edges.push(rho - d);
        d /= 2.0;
    }
    edges.push(rho);
    let mut total = C64::new(0.0, 0.0);
    for w in edges.windows(2) {
        let (a, b) = (w[0], w[1]);
        let (h, c) = (0.5 * (b - a), 0.5 * (b + a));
        for &(x, wt) in &rule {
            let t = c + h * x;
            total += f.pre_schwarzian(dir * t) * dir * (wt * h);
        }
    }
    total
}

/// Continues a renormalised `log f′` along the circle `|z| = r`.
struct BranchTracker<'a> {
    f: &'a dyn AnalyticDerivative,
    r: f64,
    /// `Log f′(0)` split into modulus and argument parts.
    ln_abs0: f64,
    arg0: f64,
}

impl<'a> BranchTracker<'a> {
    fn new(f: &'a dyn AnalyticDerivative, r: f64) -> Self {
        let d0 = f.derivative(C64::new(0.0, 0.0));
        Self {
            f,
            r,
            ln_abs0: d0.norm().ln(),
            arg0: d0.arg(),
        }
    }

    fn local(&self, theta: f64) -> C64 {
        let z = C64::from_polar(self.r, theta);
        C64::new(
            self.f.ln_abs_derivative(z) - self.ln_abs0,
            self.f.derivative(z).arg() - self.arg0,
        )
    }

    fn anchor(&self, theta: f64) -> C64 {
        let z = C64::from_polar(self.r, theta);
        let integrated = radial_log_derivative(self.f, z);
        // the modulus part is evaluated directly; the radial integral fixes the sheet
        let local = self.local(theta);
        C64::new(local.re, unwrap_near(local.im, integrated.im))
    }

    /// Value at `theta` continued from the known value `from_val` at `from`.
    fn continue_to(&self, from: f64, from_val: C64, theta: f64, depth: u32) -> Result<C64> {
        let local = self.local(theta);
        let im = unwrap_near(local.im, from_val.im);
        if (im - from_val.im).abs() <= PI / 4.0 {
            return Ok(C64::new(local.re, im));
        }
        if depth > 60 {
            return Err(Error::BranchTrackingFailed(f64::INFINITY));
        }
        let mid = 0.5 * (from + theta);
        let mid_val = self.continue_to(from, from_val, mid, depth + 1)?;
        self.continue_to(mid, mid_val, theta, depth + 1)
    }
}

fn unwrap_near(phase: f64, target: f64) -> f64 {
    phase + TWO_PI * ((target - phase) / TWO_PI).round()
}

/// Samples of the continuous `log f′(re^{iθ}) − Log f′(0)` on a mesh.
#[derive(Debug, Clone)]
pub struct BranchedLog {
    pub angles: Vec<f64>,
    pub values: Vec<C64>,
    pub closure_defect: f64,
}

pub fn branched_log_derivative(
    f: &dyn AnalyticDerivative,
    r: f64,
    grid: &[f64],
) -> Result<BranchedLog> {
    check_radius(f, r)?;
    let tracker = BranchTracker::new(f, r);
    let start = tracker.anchor(0.0);
    let mut angles = Vec::with_capacity(grid.len());
    let mut values = Vec::with_capacity(grid.len());
    let (mut at, mut val) = (0.0, start);
    for &t in grid {
        if !(0.0..TWO_PI).contains(&t) || t < at {
            return Err(Error::Invalid("grid must be sorted within [0, 2π)".into()));
        }
        val = tracker.continue_to(at, val, t, 0)?;
        at = t;
        angles.push(t);
        values.push(val);
    }
    let end = tracker.continue_to(at, val, TWO_PI, 0)?;
    let defect = (end - start).norm();
    if defect > 1e-6 {
        return Err(Error::BranchTrackingFailed(defect));
    }
    Ok(BranchedLog {
        angles,
        values,
        closure_defect: defect,
    })
}

fn check_radius(f: &dyn AnalyticDerivative, r: f64) -> Result<()> {
    if !(r > f.annulus_start() && r < 1.0) {
        return Err(Error::Invalid(format!(
            "radius {r} outside ({}, 1)",
            f.annulus_start()
        )));
    }
    Ok(())
}

/// Panel edges on `[0, 2π]`: geometric grading toward every feature angle
/// down to width `(1−r)/8`, uniform panels elsewhere.
fn initial_panels(features: &[f64], r: f64) -> Vec<f64> {
    let floor = (1.0 - r) / 8.0;
    let mut cuts: Vec<f64> = vec![0.0];
    cuts.extend(features.iter().copied());
    sort_dedup_angles(&mut cuts);
    let mut edges = Vec::new();
    let n = cuts.len();
    for i in 0..n {
        let a = cuts[i];
        let b = if i + 1 < n { cuts[i + 1] } else { TWO_PI };
        let len = b - a;
        let grade_left = features.iter().any(|&s| (s - a).abs() < 1e-12)
            || (a == 0.0 && features.iter().any(|&s| s.abs() < 1e-12));
        let grade_right = features.iter().any(|&s| (s - b).abs() < 1e-12)
            || (b == TWO_PI && features.iter().any(|&s| s.abs() < 1e-12));
        let mut pts = vec![a];
        let half = 0.5 * len;
        if grade_left {
            let mut w = floor;
            while w < half {
                pts.push(a + w);
                w *= 2.0;
            }
        }
        let mut right = Vec::new();
        if grade_right {
            let mut w = floor;
            while w < half {
                right.push(b - w);
                w *= 2.0;
            }
        }
        // fill the middle with panels no wider than π/8
        let lo = *pts.last().unwrap();
        let hi = right.last().copied().unwrap_or(b);
        let m = ((hi - lo) / (PI / 8.0)).ceil().max(1.0) as usize;
        for j in 1..m {
            pts.push(lo + (hi - lo) * j as f64 / m as f64);
        }
        right.reverse();
        pts.extend(right);
        edges.extend(pts);
    }
    edges.push(TWO_PI);
    edges.dedup_by(|x, y| (*x - *y).abs() <= 0.0);
    edges
}

struct Integrator<'a> {
    rule: Vec<(f64, f64)>,
    tol: f64,
    abs_floor: f64,
    budget: usize,
    used: usize,
    r: f64,
    integrand: &'a dyn Fn(f64, C64) -> f64,
    tracker: Option<&'a BranchTracker<'a>>,
}

impl Integrator<'_> {
    fn gl(&self, a: f64, b: f64, start: C64) -> Result<f64> {
        let (h, c) = (0.5 * (b - a), 0.5 * (b + a));
        let mut s = 0.0;
        for &(x, w) in &self.rule {
            let t = c + h * x;
            let l = match self.tracker {
                Some(tr) => tr.continue_to(a, start, t, 0)?,
                None => C64::new(0.0, 0.0),
            };
            s += w * (self.integrand)(t, l);
        }
        Ok(s * h)
    }

    fn midpoint_value(&self, a: f64, start: C64, m: f64) -> Result<C64> {
        match self.tracker {
            Some(tr) => tr.continue_to(a, start, m, 0),
            None => Ok(C64::new(0.0, 0.0)),
        }
    }

    fn adaptive(&mut self, a: f64, b: f64, start: C64, whole: f64, depth: u32) -> Result<f64> {
        let m = 0.5 * (a + b);
        let mid = self.midpoint_value(a, start, m)?;
        let left = self.gl(a, m, start)?;
        let right = self.gl(m, b, mid)?;
        self.used += 2;
        if self.used > self.budget {
            return Err(Error::QuadratureBudgetExceeded {
                r: self.r,
                panels: self.used,
            });
        }
        let both = left + right;
        let diff = (both - whole).abs();
        if diff <= self.tol * both.abs() || diff <= self.abs_floor * (b - a) || depth >= 40 {
            return Ok(both);
        }
        Ok(self.adaptive(a, m, start, left, depth + 1)? + self.adaptive(m, b, mid, right, depth + 1)?)
    }
}

/// `I(r) = ∫_0^{2π} |exp(τ log f′(re^{iθ}))| dθ`.
pub fn integral_means(f: &dyn AnalyticDerivative, tau: C64, r: f64, q: &QuadConfig) -> Result<f64> {
    check_radius(f, r)?;
    if tau == C64::new(0.0, 0.0) {
        return Ok(TWO_PI);
    }
    let edges = initial_panels(&f.feature_angles(), r);
    let real = tau.im == 0.0;
    let tracker = BranchTracker::new(f, r);
    let integrand_real = |t: f64, _l: C64| {
        let z = C64::from_polar(r, t);
        (tau.re * f.ln_abs_derivative(z)).exp()
    };
    // for complex τ the modulus of f′(0)^τ is restored after the sweep
    let integrand_complex = |_t: f64, l: C64| (tau * l).re.exp();
    let integrand: &dyn Fn(f64, C64) -> f64 = if real {
        &integrand_real
    } else {
        &integrand_complex
    };
    let mut integ = Integrator {
        rule: gauss_legendre(q.order),
        tol: q.quad_tol,
        abs_floor: 0.0,
        budget: q.max_panels,
        used: 0,
        r,
        integrand,
        tracker: if real { None } else { Some(&tracker) },
    };
    let anchor = if real {
        C64::new(0.0, 0.0)
    } else {
        tracker.anchor(0.0)
    };
    // coarse pass: panel estimates and the branch value at each edge
    let mut starts = Vec::with_capacity(edges.len());
    let mut coarse = Vec::with_capacity(edges.len());
    let mut val = anchor;
    for w in edges.windows(2) {
        starts.push(val);
        coarse.push(integ.gl(w[0], w[1], val)?);
        if !real {
            val = tracker.continue_to(w[0], val, w[1], 0)?;
        }
    }
    if !real {
        let defect = (val - anchor).norm();
        if defect > 1e-6 {
            return Err(Error::BranchTrackingFailed(defect));
        }
    }
    let scale = pairwise_sum(&coarse).abs() / TWO_PI;
    integ.abs_floor = 1e-3 * q.quad_tol * scale;
    let mut parts = Vec::with_capacity(coarse.len());
    for (i, w) in edges.windows(2).enumerate() {
        parts.push(integ.adaptive(w[0], w[1], starts[i], coarse[i], 0)?);
    }
    let total = pairwise_sum(&parts);
    if real {
        Ok(total)
    } else {
        let d0 = f.derivative(C64::new(0.0, 0.0));
        Ok(total * (tau * d0.ln()).re.exp())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LadderPoint {
    pub k: u32,
    pub r: f64,
    #[serde(rename = "logI")]
    pub log_i: f64,
    /// `−log(1 − r)`.
    pub abscissa: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SpectrumEstimate {
    pub tau: C64,
    pub ladder: Vec<LadderPoint>,
    pub slope: f64,
    pub residual: f64,
    pub log_regime: bool,
}

impl SpectrumEstimate {
    /// The slope, or zero when the growth was identified as logarithmic.
    pub fn value(&self) -> f64 {
        if self.log_regime {
            0.0
        } else {
            self.slope
        }
    }

    pub fn ladder_csv(&self) -> String {
        let mut s = String::from("k,r,logI,abscissa\n");
        for p in &self.ladder {
            s.push_str(&format!(
                "{},{:.16e},{:.16e},{:.16e}\n",
                p.k, p.r, p.log_i, p.abscissa
            ));
        }
        s
    }
}

impl Serialize for SpectrumEstimate {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut st = s.serialize_struct("SpectrumEstimate", 5)?;
        st.serialize_field("tau_re", &self.tau.re)?;
        st.serialize_field("tau_im", &self.tau.im)?;
        st.serialize_field("slope", &self.slope)?;
        st.serialize_field("residual", &self.residual)?;
        st.serialize_field("log_regime", &self.log_regime)?;
        st.end()
    }
}

/// Fitted slopes below this are candidates for logarithmic growth. A pure
/// `log(1/(1−r))` law still fits slopes near `1/log(1/(1−r)) ≈ 0.09` at
/// `k = 16`, so the ceiling sits well above that.
pub const LOG_REGIME_MAX_SLOPE: f64 = 0.25;

pub fn estimate_spectrum(
    f: &dyn AnalyticDerivative,
    tau: C64,
    k_min: u32,
    k_max: u32,
    q: &QuadConfig,
) -> Result<SpectrumEstimate> {
    if k_min < 3 || k_max > 24 || k_min >= k_max {
        return Err(Error::Invalid(format!(
            "ladder bounds must satisfy 3 ≤ k_min < k_max ≤ 24, got {k_min}..{k_max}"
        )));
    }
    let start = f.annulus_start();
    let ks: Vec<u32> = (k_min..=k_max)
        .filter(|&k| 1.0 - (0.5f64).powi(k as i32) > start)
        .collect();
    let ladder: Vec<LadderPoint> = ks
        .par_iter()
        .map(|&k| {
            let r = 1.0 - (0.5f64).powi(k as i32);
            let i = integral_means(f, tau, r, q)?;
            Ok(LadderPoint {
                k,
                r,
                log_i: i.ln(),
                abscissa: k as f64 * std::f64::consts::LN_2,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let m = (((k_max - k_min) / 2) as usize).max(4).min(ladder.len());
    if m < 2 {
        return Err(Error::Invalid("ladder too short for a slope fit".into()));
    }
    let tail = &ladder[ladder.len() - m..];
    let x: Vec<f64> = tail.iter().map(|p| p.abscissa).collect();
    let y: Vec<f64> = tail.iter().map(|p| p.log_i).collect();
    let fit = fit_line(&x, &y);
    let log_regime = detect_log_regime(&x, &y, fit.slope, fit.rms);
    Ok(SpectrumEstimate {
        tau,
        ladder,
        slope: fit.slope,
        residual: fit.rms,
        log_regime,
    })
}

/// `I(r) ≍ log(1/(1−r))`: `log I` is affine in `log(−log(1−r))` with an
/// exponent near one, and that fit beats the power-law fit. Bounded ladders
/// have a log-log exponent near zero and are not flagged.
fn detect_log_regime(x: &[f64], y: &[f64], slope: f64, rms: f64) -> bool {
    let grows = y.last().unwrap() > y.first().unwrap();
    if !grows || slope >= LOG_REGIME_MAX_SLOPE {
        return false;
    }
    let lx: Vec<f64> = x.iter().map(|v| v.ln()).collect();
    let loglog = fit_line(&lx, y);
    loglog.slope >= 0.5 && loglog.rms < rms
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CoefficientGrowth {
    /// `max(2p + 1, 0)`.
    pub beta: f64,
    /// Fitted exponent `p` in `|c_n| ≈ C nᵖ`.
    pub exponent: f64,
    /// Set when every coefficient in the fit window vanished.
    pub degenerate: bool,
}

/// Growth of the Taylor coefficients of `(f′/f′(0))^{τ/2}`:
/// `(f′)^{τ/2}` lies in the weighted Hardy space `H²_α` exactly when
/// `α > 2p`, so the spectrum is `max(2p + 1, 0)`.
pub fn coefficient_growth_spectrum(
    derivative: &RationalFn,
    tau: C64,
    n: usize,
) -> Result<CoefficientGrowth> {
    if n < 256 {
        return Err(Error::Invalid("coefficient growth needs N ≥ 256".into()));
    }
    let a = derivative.taylor(n)?;
    if a[0] == C64::new(0.0, 0.0) {
        return Err(Error::DegenerateInput("f′(0) = 0".into()));
    }
    let a0 = a[0];
    let a: Vec<C64> = a.iter().map(|c| c / a0).collect();
    let p = tau / 2.0;
    let mut b = vec![C64::new(0.0, 0.0); n + 1];
    b[0] = C64::new(1.0, 0.0);
    for m in 1..=n {
        let mut acc = C64::new(0.0, 0.0);
        for k in 1..=m {
            acc += ((p + 1.0) * k as f64 - m as f64) * a[k] * b[m - k];
        }
        b[m] = acc / m as f64;
    }
    let (mut xs, mut ys) = (Vec::new(), Vec::new());
    for (m, c) in b.iter().enumerate().skip(n / 2) {
        let v = c.norm();
        if v > 1e-300 {
            xs.push((m as f64).ln());
            ys.push(v.ln());
        }
    }
    if xs.len() < 2 {
        return Ok(CoefficientGrowth {
            beta: 0.0,
            exponent: f64::NEG_INFINITY,
            degenerate: true,
        });
    }
    let fit = fit_line(&xs, &ys);
    Ok(CoefficientGrowth {
        beta: (2.0 * fit.slope + 1.0).max(0.0),
        exponent: fit.slope,
        degenerate: false,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    fn map(num: &[f64], den: &[f64]) -> RationalDerivative {
        RationalDerivative::from_map(&RationalFn::from_real(num, den).unwrap(), &RootConfig::default())
            .unwrap()
    }

    fn koebe() -> RationalDerivative {
        map(&[0.0, 1.0], &[1.0, -2.0, 1.0])
    }

    fn identity() -> RationalDerivative {
        map(&[0.0, 1.0], &[1.0])
    }

    fn e1() -> RationalDerivative {
        RationalDerivative::from_derivative(
            RationalFn::from_real(&[1.0], &[1.0, -1.0]).unwrap(),
            &RootConfig::default(),
        )
        .unwrap()
    }

    #[test]
    fn identity_log_is_zero() {
        let grid: Vec<f64> = (0..64).map(|j| TWO_PI * j as f64 / 64.0).collect();
        let b = branched_log_derivative(&identity(), 0.9, &grid).unwrap();
        assert!(b.values.iter().all(|v| v.norm() == 0.0));
    }

    #[test]
    fn koebe_log_on_the_real_axis() {
        let k = koebe();
        for r in [0.3, 0.9, 0.999] {
            let got = radial_log_derivative(&k, c(r, 0.0));
            let want = (1.0 + r).ln() - 3.0 * (1.0 - r).ln();
            assert!((got.re - want).abs() < 1e-12 * want.abs().max(1.0), "{got} vs {want}");
            assert!(got.im.abs() < 1e-14);
        }
    }

    #[test]
    fn koebe_closure_defect() {
        let grid: Vec<f64> = (0..4096).map(|j| TWO_PI * j as f64 / 4096.0).collect();
        let b = branched_log_derivative(&koebe(), 0.9, &grid).unwrap();
        assert!(b.closure_defect <= 1e-10);
        // agrees with the closed-form branch everywhere on the mesh
        for (t, v) in b.angles.iter().zip(&b.values) {
            let exact = koebe().log_derivative(C64::from_polar(0.9, *t)).unwrap();
            assert!((v - exact).norm() < 1e-9);
        }
    }

    #[test]
    fn tau_zero_gives_the_circle_length() {
        let i = integral_means(&koebe(), c(0.0, 0.0), 0.99, &QuadConfig::default()).unwrap();
        assert_eq!(i, TWO_PI);
    }

    #[test]
    fn parseval_for_the_log_koebe_map() {
        let r = 0.999;
        let i = integral_means(&e1(), c(2.0, 0.0), r, &QuadConfig::default()).unwrap();
        let want = TWO_PI / (1.0 - r * r);
        assert!(((i - want) / want).abs() <= 1e-8, "{i} vs {want}");
    }

    #[test]
    fn identity_with_complex_power() {
        let i = integral_means(&identity(), c(3.0, 4.0), 0.9, &QuadConfig::default()).unwrap();
        assert!((i - TWO_PI).abs() < 1e-12);
    }

    #[test]
    fn complex_power_matches_closed_branch() {
        // |κ′^τ| = exp(Re(τ log κ′)) with the closed-form branch, summed on a
        // fine uniform mesh
        let k = koebe();
        let r = 0.9;
        let tau = c(0.5, 0.7);
        let m = 20000;
        let s: f64 = (0..m)
            .map(|j| {
                let z = C64::from_polar(r, TWO_PI * j as f64 / m as f64);
                (tau * k.log_derivative(z).unwrap()).re.exp()
            })
            .sum::<f64>()
            * TWO_PI
            / m as f64;
        let i = integral_means(&k, tau, r, &QuadConfig::default()).unwrap();
        assert!(((i - s) / s).abs() < 1e-9, "{i} vs {s}");
    }

    #[test]
    fn koebe_slope_at_minus_two() {
        let e = estimate_spectrum(&koebe(), c(-2.0, 0.0), 4, 16, &QuadConfig::default()).unwrap();
        assert!((e.value() - 1.0).abs() <= 0.05, "{e:?}");
    }

    #[test]
    fn identity_has_flat_ladder() {
        let e = estimate_spectrum(&identity(), c(7.0, 0.0), 4, 16, &QuadConfig::default()).unwrap();
        assert!(e.slope.abs() < 1e-12 && e.residual < 1e-12);
    }

    #[test]
    fn log_koebe_slope_at_two() {
        let e = estimate_spectrum(&e1(), c(2.0, 0.0), 4, 16, &QuadConfig::default()).unwrap();
        assert!((e.value() - 1.0).abs() <= 0.05, "{e:?}");
    }

    #[test]
    fn coefficient_growth_examples() {
        let kd = RationalFn::from_real(&[1.0, 1.0], &[1.0, -3.0, 3.0, -1.0]).unwrap();
        let g = coefficient_growth_spectrum(&kd, c(1.0, 0.0), 1024).unwrap();
        assert!((g.beta - 2.0).abs() < 0.01, "{g:?}");
        let g = coefficient_growth_spectrum(&kd, c(-2.0, 0.0), 1024).unwrap();
        assert!((g.beta - 1.0).abs() < 0.01, "{g:?}");
        let one = RationalFn::from_real(&[1.0], &[1.0]).unwrap();
        let g = coefficient_growth_spectrum(&one, c(3.0, 0.0), 256).unwrap();
        assert!(g.degenerate && g.beta == 0.0);
    }

    #[test]
    fn ladder_csv_header() {
        let e = estimate_spectrum(&identity(), c(1.0, 0.0), 3, 7, &QuadConfig::default()).unwrap();
        assert!(e.ladder_csv().starts_with("k,r,logI,abscissa\n3,"));
    }
}
