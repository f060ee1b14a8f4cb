//! Weighted Bergman norms `‖φ‖²_α = Σ w_n(α)|a_n|²`,
//! `w_n(α) = n!Γ(α+2)/Γ(n+α+2)`, and lower bounds for the norm of the
//! multiplier `φ ↦ S·φ` from `ℋ²_α` to `ℋ²_{α+4}`.

use num_complex::Complex64 as C64;
use rayon::prelude::*;
use serde::Serialize;
use statrs::function::gamma::{gamma, ln_gamma};

use crate::error::{Error, Result};
use crate::numerics::{richardson_halving, KahanSum};
use crate::poly::{series_quotient, RationalFn};

fn check_alpha(alpha: f64) -> Result<()> {
    if alpha > -1.0 && alpha.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidWeight(alpha))
    }
}

/// `w_n(α)` from log-gamma differences; finite for any `n` the code uses.
pub fn weight(n: usize, alpha: f64) -> f64 {
    if n == 0 {
        return 1.0;
    }
    let n = n as f64;
    (ln_gamma(n + 1.0) + ln_gamma(alpha + 2.0) - ln_gamma(n + alpha + 2.0)).exp()
}

pub fn weights(alpha: f64, len: usize) -> Vec<f64> {
    (0..len).map(|n| weight(n, alpha)).collect()
}

/// Geometric extrapolation of a nonnegative series from its last two blocks
/// of ten terms. Blocks instead of single terms so that series supported on
/// a residue class (even functions) are handled.
fn geometric_tail(terms: &[f64]) -> f64 {
    const B: usize = 10;
    if terms.len() < 2 * B {
        return if terms.iter().any(|&t| t > 0.0) { f64::INFINITY } else { 0.0 };
    }
    let n = terms.len();
    let last: f64 = terms[n - B..].iter().sum();
    let prev: f64 = terms[n - 2 * B..n - B].iter().sum();
    if last == 0.0 {
        return 0.0;
    }
    let q = last / prev;
    if !(q < 1.0) {
        return f64::INFINITY;
    }
    last * q / (1.0 - q)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct WeightedSeriesNorm {
    pub alpha: f64,
    pub truncation: usize,
    /// Squared norm `Σ_{n<N} w_n(α)|a_n|²`.
    pub value: f64,
    pub tail_bound: f64,
}

fn weighted_terms(coeffs: &[C64], alpha: f64) -> Vec<f64> {
    coeffs
        .iter()
        .enumerate()
        .map(|(n, a)| weight(n, alpha) * a.norm_sqr())
        .collect()
}

/// Squared `ℋ²_α` norm from the first `n` Taylor coefficients.
pub fn coeff_norm(coeffs: &[C64], alpha: f64, n: usize) -> Result<WeightedSeriesNorm> {
    check_alpha(alpha)?;
    let n = n.min(coeffs.len());
    let terms = weighted_terms(&coeffs[..n], alpha);
    let mut sum = KahanSum::new();
    for &t in &terms {
        sum.add(t);
    }
    Ok(WeightedSeriesNorm {
        alpha,
        truncation: n,
        value: sum.value(),
        // a short slice holding the whole sequence is a polynomial
        tail_bound: if n < 20 && n == coeffs.len() { 0.0 } else { geometric_tail(&terms) },
    })
}

/// The squared norm as an area integral
/// `(α+1)/π ∬|φ|²(1−|z|²)^α dA`, with Gauss–Jacobi in `s = |z|²` and the
/// trapezoid rule in angle. Orders double until two passes agree.
pub fn area_norm_oracle(phi: &(dyn Fn(C64) -> C64 + Sync), alpha: f64) -> Result<f64> {
    check_alpha(alpha)?;
    let pass = |order: usize, angles: usize| -> f64 {
        let rule = gauss_quad::GaussJacobi::new(order, alpha, 0.0).expect("order ≥ 2, α > −1");
        let circle_mean = |s: f64| {
            let rho = s.max(0.0).sqrt();
            let mut acc = KahanSum::new();
            for j in 0..angles {
                let t = std::f64::consts::TAU * j as f64 / angles as f64;
                acc.add(phi(C64::from_polar(rho, t)).norm_sqr());
            }
            acc.value() / angles as f64
        };
        // ∫₀¹(1−s)^α F ds = 2^{−α}·integrate(0, 1, F) in the library's scaling
        (alpha + 1.0) * rule.integrate(0.0, 1.0, circle_mean) * 2f64.powf(-alpha)
    };
    let mut prev = pass(16, 64);
    let (mut order, mut angles) = (32, 128);
    while order <= 1024 {
        let cur = pass(order, angles);
        if (cur - prev).abs() <= 1e-13 * cur.abs().max(1e-300) {
            return Ok(cur);
        }
        prev = cur;
        order *= 2;
        angles *= 2;
    }
    Err(Error::QuadratureBudgetExceeded { r: 1.0, panels: order / 2 })
}

/// Taylor coefficients of `(1 − rz)^{−γ}`.
pub fn binomial_series(gamma_: C64, r: f64, n: usize) -> Vec<C64> {
    let mut out = Vec::with_capacity(n);
    let mut c = C64::new(1.0, 0.0);
    for k in 0..n {
        out.push(c);
        c = c * (k as f64 + gamma_) / (k as f64 + 1.0) * r;
    }
    out
}

/// `‖(1 − r z^m)^{−λ}‖²_α` summed in place, with the term ratio
/// `t_{k+1}/t_k = (k+λ)² r² w_{m(k+1)}/((k+1)² w_{mk})`; no coefficient storage,
/// so radii very close to one are affordable.
pub fn test_function_norm(family: TestFamily, lambda: f64, r: f64, alpha: f64) -> Result<f64> {
    check_alpha(alpha)?;
    if !(0.0..1.0).contains(&r) || !(lambda > 0.0) {
        return Err(Error::Invalid(format!("need 0 ≤ r < 1 and λ > 0 (got r = {r}, λ = {lambda})")));
    }
    let m = family.power() as f64;
    let mut sum = KahanSum::new();
    let mut t = 1.0;
    let mut k = 0.0;
    loop {
        sum.add(t);
        // w_{m(k+1)}/w_{mk} = Π_{i<m} (mk+i+1)/(mk+i+α+2)
        let mut ratio = (k + lambda) * (k + lambda) * r * r / ((k + 1.0) * (k + 1.0));
        for i in 0..family.power() {
            let n = m * k + i as f64;
            ratio *= (n + 1.0) / (n + alpha + 2.0);
        }
        t *= ratio;
        k += 1.0;
        if ratio < 1.0 && t < 1e-18 * sum.value() * (1.0 - ratio) {
            return Ok(sum.value());
        }
    }
}

/// `Γ(α+2)Γ(2λ−α−2)/Γ(λ)²`, the limit of `‖(1−rz)^{−λ}‖²_α (1−r²)^{2λ−α−2}`.
pub fn binomial_norm_constant(lambda: f64, alpha: f64) -> f64 {
    gamma(alpha + 2.0) * gamma(2.0 * lambda - alpha - 2.0) / gamma(lambda).powi(2)
}

/// The `(1 − rz²)^{−λ}` analogue of [`binomial_norm_constant`], smaller by
/// `2^{α+1}`.
pub fn even_binomial_norm_constant(lambda: f64, alpha: f64) -> f64 {
    binomial_norm_constant(lambda, alpha) / 2f64.powf(alpha + 1.0)
}

/// Coefficients of `S(ρz)·φ(z)` from `Q(ρz)·c = P(ρz)·φ`, so the cost is
/// linear in the truncation.
fn multiplied_coeffs(s: &RationalFn, rho: f64, phi: &[C64]) -> Result<Vec<C64>> {
    let sd = s.dilate(C64::new(rho, 0.0))?;
    if sd.den().coeff(0) == C64::new(0.0, 0.0) {
        return Err(Error::ExpansionAtPole);
    }
    let p = sd.num().coeffs();
    Ok(series_quotient(
        |n| {
            p.iter()
                .enumerate()
                .take_while(|(k, _)| *k <= n)
                .fold(C64::new(0.0, 0.0), |acc, (k, pk)| acc + pk * phi[n - k])
        },
        sd.den().coeffs(),
        phi.len(),
    ))
}

/// `‖S(ρz)φ(z)‖²_{α+4} / ‖φ‖²_α` from the first `n` coefficients. The
/// denominator includes its tail estimate so the ratio errs low.
pub fn multiplier_ratio(s: &RationalFn, rho: f64, phi: &[C64], alpha: f64, n: usize) -> Result<f64> {
    check_alpha(alpha)?;
    if !(rho > 0.0 && rho <= 1.0) {
        return Err(Error::Invalid(format!("dilation {rho} outside (0, 1]")));
    }
    if s.is_zero() {
        return Ok(0.0);
    }
    let phi = &phi[..n.min(phi.len())];
    let den = coeff_norm(phi, alpha, phi.len())?;
    let prod = multiplied_coeffs(s, rho, phi)?;
    let num = coeff_norm(&prod, alpha + 4.0, prod.len())?;
    for part in [&num, &den] {
        if !(part.tail_bound <= 0.01 * part.value) {
            return Err(Error::TruncationUnreliable {
                tail: part.tail_bound,
                partial: part.value,
            });
        }
    }
    Ok(num.value / (den.value + den.tail_bound))
}

/// Test functions `(1 − r z^m)^{−λ}` with `S` dilated by `r^{1/m}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum TestFamily {
    /// `(1 − rz)^{−λ}`.
    Linear,
    /// `(1 − rz²)^{−λ}`.
    Quadratic,
}

impl TestFamily {
    fn power(self) -> usize {
        match self {
            TestFamily::Linear => 1,
            TestFamily::Quadratic => 2,
        }
    }

    /// Coefficients of `(1 − r z^m)^{−λ}`, truncated at `n`.
    pub fn coeffs(self, lambda: f64, r: f64, n: usize) -> Vec<C64> {
        let m = self.power();
        let base = binomial_series(C64::new(lambda, 0.0), r, n.div_ceil(m));
        let mut out = vec![C64::new(0.0, 0.0); n];
        for (k, c) in base.into_iter().enumerate() {
            if k * m < n {
                out[k * m] = c;
            }
        }
        out
    }

    pub fn dilation(self, r: f64) -> f64 {
        r.powf(1.0 / self.power() as f64)
    }

    /// Enough terms for the weighted tails at radius `r` to fall below the
    /// 1% cut.
    fn truncation(self, r: f64, base: usize) -> usize {
        let decay = -(self.dilation(r)).ln();
        base.max((30.0 / decay).ceil() as usize)
    }
}

/// `lim_{r→1⁻}` of the multiplier ratio along one family at fixed `λ` (with
/// `2λ > α+2`, so both norms diverge). By Abel summation the limit equals
/// that of the ratio of coefficient blocks `n ∈ [M, 2M)`, which converges
/// like `1/M`; two block sizes are combined by Richardson.
pub fn radial_limit_ratio(s: &RationalFn, family: TestFamily, lambda: f64, alpha: f64) -> Result<f64> {
    check_alpha(alpha)?;
    if !(2.0 * lambda > alpha + 2.0) {
        return Err(Error::Invalid(format!(
            "λ = {lambda} too small for divergent norms at α = {alpha}"
        )));
    }
    if s.is_zero() {
        return Ok(0.0);
    }
    const M: usize = 1 << 15;
    let phi = family.coeffs(lambda, 1.0, 4 * M);
    let prod = multiplied_coeffs(s, 1.0, &phi)?;
    let block = |m: usize| {
        let (mut a, mut b) = (KahanSum::new(), KahanSum::new());
        for n in m..2 * m {
            a.add(weight(n, alpha + 4.0) * prod[n].norm_sqr());
            b.add(weight(n, alpha) * phi[n].norm_sqr());
        }
        a.value() / b.value()
    };
    Ok(richardson_halving(&[block(M), block(2 * M)], 1))
}

/// `36(α+3)(α+5)/((α+2)(α+4))`, the squared multiplier norm for the Koebe
/// Schwarzian.
pub fn koebe_target(alpha: f64) -> f64 {
    36.0 * (alpha + 3.0) * (alpha + 5.0) / ((alpha + 2.0) * (alpha + 4.0))
}

#[derive(Debug, Clone, Serialize)]
pub struct MultiplierGrid {
    /// Radii `1 − 2^{−k}`.
    pub k_range: (u32, u32),
    /// Exponents `λ = α/2 + 1 + 2^{−j}`.
    pub j_range: (u32, u32),
    pub families: Vec<TestFamily>,
    /// Also take the `r → 1⁻` limit for every `(family, λ)`.
    pub radial_limits: bool,
    pub truncation: usize,
}

impl Default for MultiplierGrid {
    fn default() -> Self {
        Self {
            k_range: (4, 12),
            j_range: (1, 8),
            families: vec![TestFamily::Linear, TestFamily::Quadratic],
            radial_limits: true,
            truncation: 20_000,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MultiplierWitness {
    pub family: TestFamily,
    pub lambda: f64,
    /// `None` for a radial limit.
    pub r: Option<f64>,
    pub ratio: f64,
}

/// Largest multiplier ratio over the test grid, with its witness.
pub fn multiplier_lower_bound(s: &RationalFn, alpha: f64, grid: &MultiplierGrid) -> Result<MultiplierWitness> {
    check_alpha(alpha)?;
    let mut points: Vec<(TestFamily, f64, Option<f64>)> = Vec::new();
    for &fam in &grid.families {
        for j in grid.j_range.0..=grid.j_range.1 {
            let lambda = alpha / 2.0 + 1.0 + 0.5f64.powi(j as i32);
            for k in grid.k_range.0..=grid.k_range.1 {
                points.push((fam, lambda, Some(1.0 - 0.5f64.powi(k as i32))));
            }
            if grid.radial_limits {
                points.push((fam, lambda, None));
            }
        }
    }
    let results: Vec<Result<MultiplierWitness>> = points
        .par_iter()
        .map(|&(family, lambda, r)| {
            let ratio = match r {
                Some(r) => {
                    let n = family.truncation(r, grid.truncation);
                    let phi = family.coeffs(lambda, r, n);
                    multiplier_ratio(s, family.dilation(r), &phi, alpha, n)?
                }
                None => radial_limit_ratio(s, family, lambda, alpha)?,
            };
            Ok(MultiplierWitness { family, lambda, r, ratio })
        })
        .collect();
    let mut best: Option<MultiplierWitness> = None;
    for res in results {
        let w = res?;
        if best.is_none_or(|b| w.ratio > b.ratio) {
            best = Some(w);
        }
    }
    best.ok_or_else(|| Error::Invalid("empty multiplier grid".into()))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ShimorinRow {
    pub alpha: f64,
    pub lower_bound: f64,
    pub target: f64,
    pub margin: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ShimorinReport {
    pub rows: Vec<ShimorinRow>,
    pub tol: f64,
}

impl ShimorinReport {
    /// Lower bounds can only refute the criterion `‖𝓜‖² ≤ target`, never
    /// certify it.
    pub const NOTE: &'static str =
        "lower bounds from test functions can falsify the multiplier criterion but cannot certify it";

    pub fn consistent(&self) -> bool {
        self.rows.iter().all(|r| r.margin >= -self.tol)
    }

    pub fn verdict(&self) -> &'static str {
        if self.consistent() {
            "consistent"
        } else {
            "violated"
        }
    }
}

impl Serialize for ShimorinReport {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.rows.serialize(s)
    }
}

pub fn shimorin_report(s: &RationalFn, alphas: &[f64], grid: &MultiplierGrid, tol: f64) -> Result<ShimorinReport> {
    let mut rows = Vec::with_capacity(alphas.len());
    for &alpha in alphas {
        if !(alpha > 0.0) {
            return Err(Error::Invalid(format!("α = {alpha} must be positive")));
        }
        let lower_bound = multiplier_lower_bound(s, alpha, grid)?.ratio;
        let target = koebe_target(alpha);
        rows.push(ShimorinRow {
            alpha,
            lower_bound,
            target,
            margin: target - lower_bound,
        });
    }
    Ok(ShimorinReport { rows, tol })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::schwarzian::schwarzian;
    use proptest::prelude::*;

    fn rat(num: &[f64], den: &[f64]) -> RationalFn {
        RationalFn::from_real(num, den).unwrap()
    }

    fn s_koebe() -> RationalFn {
        schwarzian(&rat(&[0.0, 1.0], &[1.0, -2.0, 1.0])).unwrap()
    }

    fn s_e2() -> RationalFn {
        schwarzian(&rat(&[0.0, 1.0, -0.5], &[1.0])).unwrap()
    }

    fn s_p3() -> RationalFn {
        schwarzian(&rat(&[0.0, 1.0, 0.0, -1.0 / 3.0], &[1.0])).unwrap()
    }

    fn close(a: f64, b: f64, rel: f64) -> bool {
        (a - b).abs() <= rel * b.abs()
    }

    #[test]
    fn weights_match_the_product_recurrence() {
        for alpha in [-0.5, 0.0, 1.0, 5.0] {
            let mut w = 1.0;
            for n in 0..20_000usize {
                assert!(close(weight(n, alpha), w, 1e-9), "n={n} α={alpha}");
                w *= (n as f64 + 1.0) / (n as f64 + alpha + 2.0);
            }
        }
        assert!(weight(1_000_000, 5.0) > 0.0);
    }

    #[test]
    fn constant_and_identity_norms() {
        for alpha in [0.0, 0.5, 1.0, 2.0] {
            let one = coeff_norm(&[C64::new(1.0, 0.0)], alpha, 10).unwrap();
            assert_eq!(one.value, 1.0);
            assert_eq!(one.tail_bound, 0.0);
            let z = coeff_norm(&[C64::new(0.0, 0.0), C64::new(1.0, 0.0)], alpha, 10).unwrap();
            // (α+1)·2∫ρ³(1−ρ²)^α dρ = 1/(α+2)
            assert!(close(z.value, 1.0 / (alpha + 2.0), 1e-14));
        }
        assert!(matches!(coeff_norm(&[], -1.0, 1), Err(Error::InvalidWeight(_))));
    }

    #[test]
    fn dual_method_agreement() {
        type Phi = Box<dyn Fn(C64) -> C64 + Sync>;
        let cases: [(&str, Phi); 4] = [
            ("1", Box::new(|_| C64::new(1.0, 0.0))),
            ("z", Box::new(|z| z)),
            ("z^3", Box::new(|z| z * z * z)),
            ("(1-z/2)^-2", Box::new(|z| (1.0 - 0.5 * z).powi(-2))),
        ];
        let coeffs = |name: &str| -> Vec<C64> {
            match name {
                "1" => vec![C64::new(1.0, 0.0)],
                "z" => vec![C64::new(0.0, 0.0), C64::new(1.0, 0.0)],
                "z^3" => {
                    let mut v = vec![C64::new(0.0, 0.0); 4];
                    v[3] = C64::new(1.0, 0.0);
                    v
                }
                _ => binomial_series(C64::new(2.0, 0.0), 0.5, 200),
            }
        };
        for alpha in [0.5, 1.0, 2.0] {
            for (name, f) in &cases {
                let series = coeff_norm(&coeffs(name), alpha, 200).unwrap().value;
                let area = area_norm_oracle(f.as_ref(), alpha).unwrap();
                assert!(close(series, area, 1e-6), "{name} α={alpha}: {series} vs {area}");
            }
        }
    }

    #[test]
    fn binomial_examples() {
        for (n, c) in binomial_series(C64::new(1.0, 0.0), 0.3, 20).iter().enumerate() {
            assert!((c - 0.3f64.powi(n as i32)).norm() < 1e-15);
        }
        for (n, c) in binomial_series(C64::new(2.0, 0.0), 1.0, 50).iter().enumerate() {
            assert_eq!(c.re, n as f64 + 1.0);
        }
        let c = binomial_series(C64::new(1.5, 0.0), 1.0, 3);
        assert!((c[2].re - 15.0 / 8.0).abs() < 1e-15);
    }

    #[test]
    fn koebe_target_values() {
        assert_eq!(koebe_target(1.0), 57.6);
        assert_eq!(koebe_target(0.0), 67.5);
        assert!((koebe_target(1e9) - 36.0).abs() < 1e-6);
    }

    #[test]
    fn zero_multiplier() {
        let z = RationalFn::from_poly(crate::poly::ComplexPoly::zero());
        let phi = binomial_series(C64::new(2.0, 0.0), 0.5, 100);
        assert_eq!(multiplier_ratio(&z, 0.5, &phi, 1.0, 100).unwrap(), 0.0);
        let b = multiplier_lower_bound(&z, 1.0, &MultiplierGrid::default()).unwrap();
        assert_eq!(b.ratio, 0.0);
    }

    #[test]
    fn undilated_circle_pole_without_decay_is_rejected() {
        let phi = binomial_series(C64::new(3.0, 0.0), 1.0, 2000);
        assert!(matches!(
            multiplier_ratio(&s_koebe(), 1.0, &phi, 1.0, 2000),
            Err(Error::TruncationUnreliable { .. })
        ));
    }

    #[test]
    fn radial_limit_matches_the_gamma_asymptotics() {
        // S_ℰ₂ = −(3/2)(1−z)^{−2}: the limit is
        // (9/4)·Γ(α+6)Γ(2λ−α−2)/(Γ(λ+2)²) / (Γ(α+2)Γ(2λ−α−2)/Γ(λ)²)
        for alpha in [0.5f64, 1.0, 2.0] {
            let lambda = alpha / 2.0 + 1.25;
            let exact = 9.0 * (alpha + 2.0) * (alpha + 3.0) * (alpha + 4.0) * (alpha + 5.0)
                / (4.0 * (lambda * (lambda + 1.0)).powi(2));
            let lim = radial_limit_ratio(&s_e2(), TestFamily::Linear, lambda, alpha).unwrap();
            assert!(close(lim, exact, 1e-6), "α={alpha}: {lim} vs {exact}");
        }
    }

    #[test]
    fn finite_radius_ratios_increase_toward_the_limit() {
        let (alpha, lambda) = (1.0, 1.75);
        let lim = radial_limit_ratio(&s_e2(), TestFamily::Linear, lambda, alpha).unwrap();
        let mut prev = 0.0;
        for k in 4..=12 {
            let r = 1.0 - 0.5f64.powi(k);
            let n = TestFamily::Linear.truncation(r, 20_000);
            let phi = TestFamily::Linear.coeffs(lambda, r, n);
            let v = multiplier_ratio(&s_e2(), r, &phi, alpha, n).unwrap();
            assert!(v > prev && v < lim, "k={k}: {v} (limit {lim})");
            prev = v;
        }
    }

    #[test]
    fn streaming_norm_matches_coefficient_norm() {
        for fam in [TestFamily::Linear, TestFamily::Quadratic] {
            for alpha in [0.5, 2.0] {
                let (lambda, r) = (alpha / 2.0 + 1.25, 0.99);
                let n = 60_000;
                let direct = coeff_norm(&fam.coeffs(lambda, r, n), alpha, n).unwrap();
                let stream = test_function_norm(fam, lambda, r, alpha).unwrap();
                assert!(close(direct.value, stream, 1e-9), "{fam:?} α={alpha}: {} vs {stream}", direct.value);
            }
        }
    }

    #[test]
    fn asymptotic_constants_close_to_the_boundary() {
        for alpha in [0.5, 1.0, 2.0] {
            let lambda = alpha / 2.0 + 1.25;
            let r: f64 = 1.0 - 1e-6;
            let scale = (1.0 - r * r).powf(2.0 * lambda - alpha - 2.0);
            let lin = test_function_norm(TestFamily::Linear, lambda, r, alpha).unwrap() * scale;
            assert!(close(lin, binomial_norm_constant(lambda, alpha), 0.02), "α={alpha}: {lin}");
            let quad = test_function_norm(TestFamily::Quadratic, lambda, r, alpha).unwrap() * scale;
            assert!(close(quad, even_binomial_norm_constant(lambda, alpha), 0.02), "α={alpha}: {quad}");
        }
    }

    #[test]
    fn pointwise_domination_gives_ratio_domination() {
        let (sk, se) = (s_koebe(), s_e2());
        for i in 0..100 {
            for j in 0..100 {
                let z = C64::from_polar(0.995 * i as f64 / 99.0, std::f64::consts::TAU * j as f64 / 100.0);
                assert!(se.eval(z).unwrap().norm() <= sk.eval(z).unwrap().norm() * (1.0 + 1e-12));
            }
        }
        for lambda in [1.6, 1.9, 2.5] {
            for r in [0.5, 0.9, 0.99] {
                let phi = TestFamily::Linear.coeffs(lambda, r, 20_000);
                let a = multiplier_ratio(&se, r, &phi, 1.0, 20_000).unwrap();
                let b = multiplier_ratio(&sk, r, &phi, 1.0, 20_000).unwrap();
                assert!(a <= b + 1e-9, "λ={lambda} r={r}: {a} > {b}");
            }
        }
    }

    #[test]
    fn lower_bounds_approach_the_koebe_target_from_below() {
        for s in [s_koebe(), s_e2(), s_p3()] {
            let b = multiplier_lower_bound(&s, 1.0, &MultiplierGrid::default()).unwrap();
            assert!(b.ratio >= 0.99 * 57.6 && b.ratio <= 57.6 * (1.0 + 1e-6), "{b:?}");
        }
    }

    #[test]
    fn shimorin_report_for_zero_and_koebe() {
        let g = MultiplierGrid::default();
        let zero = RationalFn::from_poly(crate::poly::ComplexPoly::zero());
        let rep = shimorin_report(&zero, &[0.5, 1.0], &g, 1e-4).unwrap();
        assert!(rep.consistent());
        for row in &rep.rows {
            assert_eq!(row.margin, row.target);
        }
        let rep = shimorin_report(&s_koebe(), &[1.0], &g, 1e-4).unwrap();
        assert!(rep.consistent() && rep.rows[0].margin < 0.01 * 57.6);
        assert!(serde_json::to_string(&rep).unwrap().starts_with('['));
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(16))]

        #[test]
        fn partial_sums_are_nondecreasing(c in prop::collection::vec((-3.0f64..3.0, -3.0f64..3.0), 1..40), alpha in -0.9f64..4.0) {
            let coeffs: Vec<C64> = c.iter().map(|&(a, b)| C64::new(a, b)).collect();
            let mut prev = 0.0;
            for n in 1..=coeffs.len() {
                let v = coeff_norm(&coeffs, alpha, n).unwrap().value;
                prop_assert!(v >= prev);
                prev = v;
            }
        }

        #[test]
        fn scaling_is_quadratic(re in -3.0f64..3.0, im in -3.0f64..3.0, r in 0.1f64..0.9) {
            let c = C64::new(re, im);
            let s = s_koebe();
            let phi = binomial_series(C64::new(1.8, 0.0), r, 2000);
            let a = multiplier_ratio(&s.scale(c), r, &phi, 1.0, 2000).unwrap();
            let b = multiplier_ratio(&s, r, &phi, 1.0, 2000).unwrap();
            prop_assert!((a - c.norm_sqr() * b).abs() <= 1e-12 * a.abs().max(1e-300));
        }
    }
}
