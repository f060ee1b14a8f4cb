//! Pre-Schwarzian `N_f = f″/f′`, Schwarzian `S_f = N_f′ − N_f²/2`, their
//! weighted sup norms `‖φ‖_{E_j} = sup |φ(z)|(1 − |z|²)^j`, and the power
//! deformation `F′ = (f′)^{1+ε}`.

use num_complex::Complex64 as C64;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::ims::{normalize_angle, radial_log_derivative, sort_dedup_angles, AnalyticDerivative};
use crate::numerics::richardson_halving;
use crate::poly::{ComplexPoly, FactoredRational, RationalFn};
use crate::roots::RootConfig;

/// `Π (z − w_i)^{e_i}`.
fn product(roots: &[C64], exps: &[usize]) -> ComplexPoly {
    roots.iter().zip(exps).fold(ComplexPoly::one(), |acc, (&w, &e)| {
        acc.mul(&ComplexPoly::new(vec![-w, C64::new(1.0, 0.0)]).pow(e))
    })
}

fn is_real(r: &RationalFn) -> bool {
    r.num().is_real() && r.den().is_real()
}

fn finish(num: ComplexPoly, den: ComplexPoly, real: bool) -> Result<RationalFn> {
    if real {
        RationalFn::new_unreduced(num.real_part(), den.real_part())
    } else {
        RationalFn::new_unreduced(num, den)
    }
}

/// `N = Σ m_j/(z − w_j)` over the zeros and poles of `R′`.
pub fn pre_schwarzian(r: &RationalFn) -> Result<RationalFn> {
    let fr = FactoredRational::derivative_of(r, &RootConfig::default())?;
    let roots: Vec<C64> = fr.factors.iter().map(|f| f.0).collect();
    let ones = vec![1usize; roots.len()];
    let mut num = ComplexPoly::zero();
    for (i, &(_, m)) in fr.factors.iter().enumerate() {
        let mut e = ones.clone();
        e[i] = 0;
        num = num.add(&product(&roots, &e).scale(C64::new(m as f64, 0.0)));
    }
    finish(num, product(&roots, &ones), is_real(r))
}

/// `S = N′ − N²/2` in partial fractions: a double pole with coefficient
/// `−m − m²/2` and a simple pole with residue `−Σ_{k≠j} m_j m_k/(w_j − w_k)`
/// at every `w_j`. Simple poles of `R` (`m = −2`) are removable.
pub fn schwarzian(r: &RationalFn) -> Result<RationalFn> {
    let fr = FactoredRational::derivative_of(r, &RootConfig::default())?;
    let kept: Vec<(C64, f64, C64)> = fr
        .factors
        .iter()
        .enumerate()
        .filter(|(_, f)| f.1 != -2)
        .map(|(j, &(w, m))| {
            let m = m as f64;
            let res = fr
                .factors
                .iter()
                .enumerate()
                .filter(|(k, _)| *k != j)
                .fold(C64::new(0.0, 0.0), |acc, (_, &(v, mk))| {
                    acc - m * mk as f64 / (w - v)
                });
            (w, -m - 0.5 * m * m, res)
        })
        .collect();
    let roots: Vec<C64> = kept.iter().map(|k| k.0).collect();
    let twos = vec![2usize; roots.len()];
    let mut num = ComplexPoly::zero();
    for (i, &(_, c, d)) in kept.iter().enumerate() {
        let mut e = twos.clone();
        e[i] = 0;
        num = num.add(&product(&roots, &e).scale(C64::new(c, 0.0)));
        e[i] = 1;
        num = num.add(&product(&roots, &e).scale(d));
    }
    finish(num, product(&roots, &twos), is_real(r))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RadialLimit {
    pub angle: f64,
    /// Extrapolated `lim_{r→1} |φ(re^{iθ})|(1 − r²)^j`; infinite when the
    /// weighted values keep growing.
    pub limit: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct WeightedSupNorm {
    pub value: f64,
    pub witness: C64,
    pub radial_limits: Vec<RadialLimit>,
}

impl Serialize for WeightedSupNorm {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut st = s.serialize_struct("WeightedSupNorm", 4)?;
        st.serialize_field("value", &self.value)?;
        st.serialize_field("witness_re", &self.witness.re)?;
        st.serialize_field("witness_im", &self.witness.im)?;
        st.serialize_field("radial_limits", &self.radial_limits)?;
        st.end()
    }
}

/// Grid settings for the sup-norm search.
#[derive(Debug, Clone, Copy)]
pub struct NormGrid {
    /// Uniform angular samples per radial level.
    pub angles: usize,
    /// Deepest radial level `r = 1 − 2^{−k_max}`.
    pub k_max: u32,
}

impl Default for NormGrid {
    fn default() -> Self {
        Self {
            angles: 1024,
            k_max: 20,
        }
    }
}

/// `sup_{r₀ ≤ |z| < 1} |φ(z)|(1 − |z|²)^j` for an evaluator `φ` whose only
/// boundary singularities sit at `singular_angles`.
pub fn weighted_sup_norm_fn(
    phi: &(dyn Fn(C64) -> C64 + Sync),
    singular_angles: &[f64],
    j: u32,
    r0: f64,
    grid: &NormGrid,
) -> WeightedSupNorm {
    let weighted = |z: C64| phi(z).norm() * (1.0 - z.norm_sqr()).powi(j as i32);
    let mut singular: Vec<f64> = singular_angles.iter().map(|&a| normalize_angle(a)).collect();
    sort_dedup_angles(&mut singular);

    let mut levels: Vec<f64> = [0.0, 0.25, 0.5]
        .into_iter()
        .chain((2..=grid.k_max).map(|k| 1.0 - 0.5f64.powi(k as i32)))
        .filter(|&r| r >= r0)
        .collect();
    if levels.first().is_none_or(|&r| r > r0) {
        levels.insert(0, r0);
    }
    let offsets = [0.0, 0.125, 0.25, 0.5, 1.0, 2.0, 4.0, 8.0, 16.0, 32.0];
    let per_level: Vec<(f64, C64)> = levels
        .par_iter()
        .map(|&r| {
            let mut thetas: Vec<f64> = (0..grid.angles)
                .map(|i| std::f64::consts::TAU * i as f64 / grid.angles as f64)
                .collect();
            for &s in &singular {
                for &o in &offsets {
                    thetas.push(s + o * (1.0 - r));
                    thetas.push(s - o * (1.0 - r));
                }
            }
            let mut best = (f64::NEG_INFINITY, C64::new(r, 0.0));
            for t in thetas {
                let z = C64::from_polar(r, t);
                let v = weighted(z);
                if v > best.0 {
                    best = (v, z);
                }
            }
            best
        })
        .collect();
    // first maximum in level order keeps the witness independent of threading
    let mut best = (0.0, C64::new(0.0, 0.0));
    for &(v, z) in &per_level {
        if v > best.0 {
            best = (v, z);
        }
    }
    let radial_limits: Vec<RadialLimit> = singular
        .iter()
        .map(|&a| RadialLimit {
            angle: a,
            limit: radial_limit(&weighted, a),
        })
        .collect();
    let mut value = best.0;
    for l in &radial_limits {
        if l.limit > value {
            value = l.limit;
        }
    }
    WeightedSupNorm {
        value,
        witness: best.1,
        radial_limits,
    }
}

fn radial_limit(weighted: &dyn Fn(C64) -> f64, angle: f64) -> f64 {
    let samples: Vec<f64> = (10..=20)
        .map(|k| weighted(C64::from_polar(1.0 - 0.5f64.powi(k), angle)))
        .collect();
    let (first, last) = (samples[0], samples[samples.len() - 1]);
    if last > 4.0 * first.max(1e-300) && last > 1e-12 {
        return f64::INFINITY;
    }
    richardson_halving(&samples[samples.len() - 5..], 4).max(0.0)
}

/// Weighted sup norm of a rational `φ`, evaluated in factored form.
pub fn weighted_sup_norm(phi: &RationalFn, j: u32, grid: &NormGrid) -> Result<WeightedSupNorm> {
    if phi.is_zero() {
        return Ok(WeightedSupNorm {
            value: 0.0,
            witness: C64::new(0.0, 0.0),
            radial_limits: Vec::new(),
        });
    }
    let cfg = RootConfig::default();
    let fr = FactoredRational::new(phi, &cfg)?;
    if let Some(p) = fr.poles().find(|p| p.norm() < 1.0 - cfg.circle_tol) {
        return Err(Error::PoleInDisk(p));
    }
    let angles: Vec<f64> = fr
        .factors
        .iter()
        .filter(|(w, _)| (w.norm() - 1.0).abs() <= cfg.circle_tol)
        .map(|(w, _)| w.arg())
        .collect();
    Ok(weighted_sup_norm_fn(&|z| fr.eval(z), &angles, j, 0.0, grid))
}

/// `‖N_f‖_{E_1}`.
pub fn pre_schwarzian_norm(f: &dyn AnalyticDerivative, grid: &NormGrid) -> WeightedSupNorm {
    weighted_sup_norm_fn(
        &|z| f.pre_schwarzian(z),
        &f.singular_angles(),
        1,
        f.annulus_start(),
        grid,
    )
}

/// `‖S_f‖_{E_2}`.
pub fn schwarzian_norm(f: &dyn AnalyticDerivative, grid: &NormGrid) -> WeightedSupNorm {
    weighted_sup_norm_fn(
        &|z| f.schwarzian(z),
        &f.singular_angles(),
        2,
        f.annulus_start(),
        grid,
    )
}

/// `sup_{r₀ < |z| < 1} |N_g(z) − N_f(z)|(1 − |z|²)`.
pub fn pre_schwarzian_gap(
    f: &dyn AnalyticDerivative,
    g: &dyn AnalyticDerivative,
    r0: f64,
    grid: &NormGrid,
) -> Result<f64> {
    if !(0.0..1.0).contains(&r0) {
        return Err(Error::Invalid(format!("r0 = {r0} outside [0, 1)")));
    }
    let mut angles = f.singular_angles();
    angles.extend(g.singular_angles());
    let r0 = r0.max(f.annulus_start()).max(g.annulus_start());
    Ok(weighted_sup_norm_fn(
        &|z| g.pre_schwarzian(z) - f.pre_schwarzian(z),
        &angles,
        1,
        r0,
        grid,
    )
    .value)
}

/// `F′ = (f′)^{1+ε}` on the branch of `log f′` fixed at the origin.
#[derive(Debug, Clone)]
pub struct PowerDeformation<F> {
    base: F,
    eps: f64,
}

pub fn power_deformation<F: AnalyticDerivative>(f: F, eps: f64) -> Result<PowerDeformation<F>> {
    if !(eps > -1.0) {
        return Err(Error::Invalid(format!("deformation exponent ε = {eps} must exceed −1")));
    }
    Ok(PowerDeformation { base: f, eps })
}

impl<F: AnalyticDerivative> PowerDeformation<F> {
    pub fn base(&self) -> &F {
        &self.base
    }

    pub fn eps(&self) -> f64 {
        self.eps
    }

    fn base_log(&self, z: C64) -> C64 {
        self.base.log_derivative(z).unwrap_or_else(|| {
            radial_log_derivative(&self.base, z) + self.base.derivative(C64::new(0.0, 0.0)).ln()
        })
    }
}

impl<F: AnalyticDerivative> AnalyticDerivative for PowerDeformation<F> {
    fn derivative(&self, z: C64) -> C64 {
        ((1.0 + self.eps) * self.base_log(z)).exp()
    }

    fn ln_abs_derivative(&self, z: C64) -> f64 {
        (1.0 + self.eps) * self.base.ln_abs_derivative(z)
    }

    fn pre_schwarzian(&self, z: C64) -> C64 {
        (1.0 + self.eps) * self.base.pre_schwarzian(z)
    }

    fn pre_schwarzian_prime(&self, z: C64) -> C64 {
        (1.0 + self.eps) * self.base.pre_schwarzian_prime(z)
    }

    fn log_derivative(&self, z: C64) -> Option<C64> {
        Some((1.0 + self.eps) * self.base_log(z))
    }

    fn singular_angles(&self) -> Vec<f64> {
        self.base.singular_angles()
    }

    fn feature_angles(&self) -> Vec<f64> {
        self.base.feature_angles()
    }

    fn annulus_start(&self) -> f64 {
        self.base.annulus_start()
    }
}
