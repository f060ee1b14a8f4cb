//! Complex polynomials and rational functions with coefficient-level arithmetic.
//!
//! Rational functions are kept reduced (no approximate common roots) with a
//! monic denominator. Reduction is done by matching roots of numerator and
//! denominator, see [`RationalFn::reduce_gcd`].

use std::fmt;

use num_complex::Complex64 as C64;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::roots::{find_roots, RootConfig};

/// Default relative tolerance for cancelling common roots.
pub const DEFAULT_GCD_TOL: f64 = 1e-6;

/// Polynomial with complex coefficients in ascending degree.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct ComplexPoly {
    coeffs: Vec<C64>,
}

impl ComplexPoly {
    pub fn new(mut coeffs: Vec<C64>) -> Self {
        while coeffs.last().is_some_and(|c| *c == C64::new(0.0, 0.0)) {
            coeffs.pop();
        }
        Self { coeffs }
    }

    pub fn from_real(coeffs: &[f64]) -> Self {
        Self::new(coeffs.iter().map(|&c| C64::new(c, 0.0)).collect())
    }

    pub fn zero() -> Self {
        Self { coeffs: Vec::new() }
    }

    pub fn constant(c: C64) -> Self {
        Self::new(vec![c])
    }

    pub fn one() -> Self {
        Self::constant(C64::new(1.0, 0.0))
    }

    /// The monomial `z`.
    pub fn z() -> Self {
        Self::from_real(&[0.0, 1.0])
    }

    /// Monic polynomial with the given roots.
    pub fn from_roots(roots: &[C64]) -> Self {
        let mut p = Self::one();
        for &w in roots {
            p = p.mul(&Self::new(vec![-w, C64::new(1.0, 0.0)]));
        }
        p
    }

    pub fn coeffs(&self) -> &[C64] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree, or `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> C64 {
        self.coeffs.last().copied().unwrap_or_default()
    }

    pub fn coeff(&self, k: usize) -> C64 {
        self.coeffs.get(k).copied().unwrap_or_default()
    }

    pub fn max_abs(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm()).fold(0.0, f64::max)
    }

    pub fn eval(&self, z: C64) -> C64 {
        self.coeffs
            .iter()
            .rev()
            .fold(C64::new(0.0, 0.0), |acc, &c| acc * z + c)
    }

    /// `Σ |a_k| |z|^k`, the scale against which evaluation round-off is measured.
    pub fn eval_abs(&self, z: C64) -> f64 {
        let r = z.norm();
        self.coeffs.iter().rev().fold(0.0, |acc, c| acc * r + c.norm())
    }

    pub fn derivative(&self) -> Self {
        Self::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, &c)| c * k as f64)
                .collect(),
        )
    }

    pub fn nth_derivative(&self, n: usize) -> Self {
        (0..n).fold(self.clone(), |p, _| p.derivative())
    }

    pub fn add(&self, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        let sum = (0..n).map(|k| self.coeff(k) + other.coeff(k)).collect();
        // cancellation of leading terms leaves round-off behind; clear it
        let scale = self.max_abs().max(other.max_abs());
        Self::new(sum).trimmed(scale * 64.0 * f64::EPSILON)
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(C64::new(-1.0, 0.0)))
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        let mut out = vec![C64::new(0.0, 0.0); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Self::new(out)
    }

    pub fn scale(&self, c: C64) -> Self {
        Self::new(self.coeffs.iter().map(|&a| a * c).collect())
    }

    pub fn pow(&self, n: usize) -> Self {
        (0..n).fold(Self::one(), |acc, _| acc.mul(self))
    }

    /// `p(ρz)`: coefficients `c_n ↦ c_n ρⁿ`.
    pub fn dilate(&self, rho: C64) -> Self {
        let mut f = C64::new(1.0, 0.0);
        let mut out = Vec::with_capacity(self.coeffs.len());
        for &c in &self.coeffs {
            out.push(c * f);
            f *= rho;
        }
        Self::new(out)
    }

    /// Drops leading coefficients whose magnitude is at most `abs_tol`.
    /// Drops imaginary parts of all coefficients.
    pub fn real_part(&self) -> Self {
        Self::new(self.coeffs.iter().map(|c| C64::new(c.re, 0.0)).collect())
    }

    pub fn is_real(&self) -> bool {
        self.coeffs.iter().all(|c| c.im == 0.0)
    }

    pub fn trimmed(mut self, abs_tol: f64) -> Self {
        while self.coeffs.last().is_some_and(|c| c.norm() <= abs_tol) {
            self.coeffs.pop();
        }
        self
    }

    /// Divides by `(z − w)` and discards the remainder. Forward synthetic
    /// division for `|w| ≤ 1`, backward for `|w| > 1`.
    pub fn deflate(&self, w: C64) -> Self {
        let n = match self.degree() {
            None | Some(0) => return Self::zero(),
            Some(n) => n,
        };
        let a = &self.coeffs;
        let mut q = vec![C64::new(0.0, 0.0); n];
        if w.norm() <= 1.0 {
            q[n - 1] = a[n];
            for k in (1..n).rev() {
                q[k - 1] = a[k] + w * q[k];
            }
        } else {
            q[0] = -a[0] / w;
            for k in 1..n {
                q[k] = (q[k - 1] - a[k]) / w;
            }
        }
        Self::new(q)
    }

    /// Quotient and remainder of division by `(z − w)`.
    pub fn div_linear(&self, w: C64) -> (Self, C64) {
        let q = self.deflate(w);
        (q, self.eval(w))
    }

    /// Composition `self(q(z))` by Horner's scheme.
    pub fn compose(&self, q: &Self) -> Self {
        self.coeffs
            .iter()
            .rev()
            .fold(Self::zero(), |acc, &c| acc.mul(q).add(&Self::constant(c)))
    }
}

impl fmt::Display for ComplexPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate() {
            if *c == C64::new(0.0, 0.0) {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            if c.im == 0.0 {
                write!(f, "{}", c.re)?;
            } else {
                write!(f, "({}{:+}i)", c.re, c.im)?;
            }
            match k {
                0 => {}
                1 => write!(f, "·z")?,
                _ => write!(f, "·z^{k}")?,
            }
        }
        Ok(())
    }
}

#[derive(Deserialize)]
#[serde(untagged)]
enum CoeffRepr {
    Real(f64),
    Pair([f64; 2]),
}

impl Serialize for ComplexPoly {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        // `+ 0.0` turns negative zeros into zeros
        let pairs: Vec<[f64; 2]> = self.coeffs.iter().map(|c| [c.re + 0.0, c.im + 0.0]).collect();
        pairs.serialize(s)
    }
}

impl<'de> Deserialize<'de> for ComplexPoly {
    /// Accepts `[re, im]` pairs or bare reals.
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let raw = Vec::<CoeffRepr>::deserialize(d)?;
        Ok(Self::new(
            raw.into_iter()
                .map(|c| match c {
                    CoeffRepr::Real(x) => C64::new(x, 0.0),
                    CoeffRepr::Pair([re, im]) => C64::new(re, im),
                })
                .collect(),
        ))
    }
}

/// Quotient of polynomials, reduced, with monic denominator.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RationalFn {
    num: ComplexPoly,
    den: ComplexPoly,
}

#[derive(Deserialize)]
struct RationalRepr {
    num: ComplexPoly,
    #[serde(default = "ComplexPoly::one")]
    den: ComplexPoly,
}

impl<'de> Deserialize<'de> for RationalFn {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let raw = RationalRepr::deserialize(d)?;
        RationalFn::new(raw.num, raw.den).map_err(serde::de::Error::custom)
    }
}

impl RationalFn {
    /// Builds and reduces `num/den` with the default gcd tolerance.
    pub fn new(num: ComplexPoly, den: ComplexPoly) -> Result<Self> {
        Self::new_unreduced(num, den)?.reduce_gcd(DEFAULT_GCD_TOL)
    }

    /// Normalizes the denominator to be monic without cancelling common roots.
    pub fn new_unreduced(num: ComplexPoly, den: ComplexPoly) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::Invalid("zero denominator".into()));
        }
        let lead = den.leading();
        let inv = C64::new(1.0, 0.0) / lead;
        let mut den = den.scale(inv);
        // exact monic leading coefficient
        if let Some(d) = den.degree() {
            den.coeffs[d] = C64::new(1.0, 0.0);
        }
        Ok(Self {
            num: num.scale(inv),
            den,
        })
    }

    pub fn from_poly(p: ComplexPoly) -> Self {
        Self {
            num: p,
            den: ComplexPoly::one(),
        }
    }

    pub fn from_real(num: &[f64], den: &[f64]) -> Result<Self> {
        Self::new(ComplexPoly::from_real(num), ComplexPoly::from_real(den))
    }

    pub fn num(&self) -> &ComplexPoly {
        &self.num
    }

    pub fn den(&self) -> &ComplexPoly {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    /// Evaluates `num(z)/den(z)`; fails if the denominator vanishes to round-off.
    pub fn eval(&self, z: C64) -> Result<C64> {
        let q = self.den.eval(z);
        if q.norm() <= 16.0 * f64::EPSILON * self.den.eval_abs(z) {
            return Err(Error::PoleAtPoint(z));
        }
        Ok(self.num.eval(z) / q)
    }

    /// Evaluation without the pole check, for hot loops away from poles.
    pub fn eval_unchecked(&self, z: C64) -> C64 {
        self.num.eval(z) / self.den.eval(z)
    }

    /// Cancels numerator/denominator roots that agree within `tol`
    /// (relative to `max(1, |w|)`).
    pub fn reduce_gcd(&self, tol: f64) -> Result<Self> {
        if self.num.is_zero() {
            return Ok(Self {
                num: ComplexPoly::zero(),
                den: ComplexPoly::one(),
            });
        }
        let (Some(dn), Some(dd)) = (self.num.degree(), self.den.degree()) else {
            unreachable!("nonzero polynomials have a degree")
        };
        if dn == 0 || dd == 0 {
            return Self::new_unreduced(self.num.clone(), self.den.clone());
        }
        // common powers of z cancel exactly
        let low = |p: &ComplexPoly| p.coeffs.iter().take_while(|c| **c == C64::new(0.0, 0.0)).count();
        let shift = low(&self.num).min(low(&self.den));
        let num0 = ComplexPoly::new(self.num.coeffs[shift..].to_vec());
        let den0 = ComplexPoly::new(self.den.coeffs[shift..].to_vec());
        if num0.degree() == Some(0) || den0.degree() == Some(0) {
            return Self::new_unreduced(num0, den0);
        }
        let real = num0.is_real() && den0.is_real();
        let cfg = RootConfig::default();
        let nr = find_roots(&num0, &cfg)?;
        let dr = find_roots(&den0, &cfg)?;
        let mut num = num0.clone();
        let mut den = den0.clone();
        let mut den_used = vec![0usize; dr.roots.len()];
        for a in &nr.roots {
            let mut left = a.multiplicity;
            for (j, b) in dr.roots.iter().enumerate() {
                if left == 0 {
                    break;
                }
                let avail = b.multiplicity - den_used[j];
                if avail == 0 {
                    continue;
                }
                if (a.value - b.value).norm() <= tol * a.value.norm().max(1.0) {
                    let k = avail.min(left);
                    for _ in 0..k {
                        num = num.deflate(a.value);
                        den = den.deflate(b.value);
                    }
                    den_used[j] += k;
                    left -= k;
                }
            }
        }
        if real {
            // conjugate pairs deflate to real factors; drop the rounding residue
            num = num.real_part();
            den = den.real_part();
        }
        Self::new_unreduced(num, den)
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        let num = self.num.mul(&other.den).add(&other.num.mul(&self.den));
        Self::new(num, self.den.mul(&other.den))
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.scale(C64::new(-1.0, 0.0)))
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        Self::new(self.num.mul(&other.num), self.den.mul(&other.den))
    }

    pub fn div(&self, other: &Self) -> Result<Self> {
        if other.is_zero() {
            return Err(Error::Invalid("division by the zero function".into()));
        }
        Self::new(self.num.mul(&other.den), self.den.mul(&other.num))
    }

    pub fn scale(&self, c: C64) -> Self {
        if c == C64::new(0.0, 0.0) {
            return Self::from_poly(ComplexPoly::zero());
        }
        Self {
            num: self.num.scale(c),
            den: self.den.clone(),
        }
    }

    /// `R(ρz)`.
    pub fn dilate(&self, rho: C64) -> Result<Self> {
        Self::new_unreduced(self.num.dilate(rho), self.den.dilate(rho))
    }

    /// Derivative by the quotient rule, then reduced.
    pub fn derivative(&self) -> Result<Self> {
        let num = self
            .num
            .derivative()
            .mul(&self.den)
            .sub(&self.num.mul(&self.den.derivative()));
        Self::new(num, self.den.mul(&self.den))
    }

    /// Composition `self ∘ inner`.
    pub fn compose(&self, inner: &Self) -> Result<Self> {
        let d = self
            .num
            .degree()
            .unwrap_or(0)
            .max(self.den.degree().unwrap_or(0));
        // homogenize: P(p/q) q^d = Σ a_k p^k q^{d−k}
        let homog = |poly: &ComplexPoly| {
            let mut acc = ComplexPoly::zero();
            for (k, &a) in poly.coeffs().iter().enumerate() {
                let term = inner.num.pow(k).mul(&inner.den.pow(d - k)).scale(a);
                acc = acc.add(&term);
            }
            acc
        };
        Self::new(homog(&self.num), homog(&self.den))
    }

    /// First `n + 1` Taylor coefficients at the origin.
    pub fn taylor(&self, n: usize) -> Result<Vec<C64>> {
        let q0 = self.den.coeff(0);
        if q0 == C64::new(0.0, 0.0) {
            return Err(Error::ExpansionAtPole);
        }
        Ok(series_quotient(
            |k| self.num.coeff(k),
            self.den.coeffs(),
            n + 1,
        ))
    }
}

/// A rational function stored as `c·Π(z − w_j)^{m_j}` for accurate evaluation
/// close to its zeros and poles.
#[derive(Debug, Clone, PartialEq)]
pub struct FactoredRational {
    pub lead: C64,
    /// Zeros (`m > 0`) and poles (`m < 0`); circle roots snapped to modulus one.
    pub factors: Vec<(C64, i32)>,
}

impl FactoredRational {
    pub fn new(r: &RationalFn, cfg: &RootConfig) -> Result<Self> {
        let mut factors = Vec::new();
        for (poly, sign) in [(r.num(), 1i32), (r.den(), -1i32)] {
            if poly.degree().unwrap_or(0) == 0 {
                continue;
            }
            for root in find_roots(poly, cfg)?.roots {
                let w = if root.region == crate::roots::Region::OnCircle {
                    root.value / root.value.norm()
                } else {
                    root.value
                };
                factors.push((w, sign * root.multiplicity as i32));
            }
        }
        Ok(Self {
            lead: r.num().leading(),
            factors,
        })
    }

    /// Factored `R′` for `R = P/Q`, built from the roots of `P′Q − PQ′` and
    /// of `Q` rather than from the expanded quotient, so repeated poles keep
    /// full accuracy.
    pub fn derivative_of(r: &RationalFn, cfg: &RootConfig) -> Result<Self> {
        let (p, q) = (r.num(), r.den());
        let a = p.derivative().mul(q).sub(&p.mul(&q.derivative()));
        if a.is_zero() {
            return Err(Error::DegenerateInput("derivative vanishes identically".into()));
        }
        let snap = |root: &crate::roots::Root| {
            if root.region == crate::roots::Region::OnCircle {
                root.value / root.value.norm()
            } else {
                root.value
            }
        };
        let mut factors: Vec<(C64, i32)> = Vec::new();
        if q.degree().unwrap_or(0) > 0 {
            for root in find_roots(q, cfg)?.roots {
                factors.push((snap(&root), -2 * root.multiplicity as i32));
            }
        }
        if a.degree().unwrap_or(0) > 0 {
            for root in find_roots(&a, cfg)?.roots {
                let w = snap(&root);
                let m = root.multiplicity as i32;
                // zeros of the numerator at a repeated pole cancel against it
                match factors
                    .iter_mut()
                    .find(|(v, e)| *e < 0 && (w - *v).norm() <= DEFAULT_GCD_TOL * v.norm().max(1.0))
                {
                    Some(f) => f.1 += m,
                    None => factors.push((w, m)),
                }
            }
        }
        factors.retain(|&(_, m)| m != 0);
        Ok(Self {
            lead: a.leading() / q.leading().powi(2),
            factors,
        })
    }

    /// Expanded form; imaginary rounding residue is dropped when `real` is set.
    pub fn to_rational(&self, real: bool) -> Result<RationalFn> {
        let mut num = ComplexPoly::constant(self.lead);
        let mut den = ComplexPoly::one();
        for &(w, m) in &self.factors {
            let lin = ComplexPoly::new(vec![-w, C64::new(1.0, 0.0)]);
            if m > 0 {
                num = num.mul(&lin.pow(m as usize));
            } else {
                den = den.mul(&lin.pow((-m) as usize));
            }
        }
        if real {
            num = num.real_part();
            den = den.real_part();
        }
        RationalFn::new_unreduced(num, den)
    }

    pub fn eval(&self, z: C64) -> C64 {
        self.factors
            .iter()
            .fold(self.lead, |acc, &(w, m)| acc * (z - w).powi(m))
    }

    pub fn poles(&self) -> impl Iterator<Item = C64> + '_ {
        self.factors.iter().filter(|(_, m)| *m < 0).map(|(w, _)| *w)
    }
}

/// Coefficients of `A(z)/Q(z)` given the coefficients of `A` as a function of
/// the index, via `q₀cₙ = aₙ − Σ_{k≥1} q_k c_{n−k}`.
pub fn series_quotient(a: impl Fn(usize) -> C64, q: &[C64], len: usize) -> Vec<C64> {
    let inv = C64::new(1.0, 0.0) / q[0];
    let mut c: Vec<C64> = Vec::with_capacity(len);
    for n in 0..len {
        let mut acc = a(n);
        for (k, &qk) in q.iter().enumerate().skip(1) {
            if k > n {
                break;
            }
            acc -= qk * c[n - k];
        }
        c.push(acc * inv);
    }
    c
}

impl fmt::Display for RationalFn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}) / ({})", self.num, self.den)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn c(re: f64) -> C64 {
        C64::new(re, 0.0)
    }

    fn close(a: &[C64], b: &[C64], tol: f64) -> bool {
        a.len() == b.len() && a.iter().zip(b).all(|(x, y)| (x - y).norm() <= tol)
    }

    fn assert_same_function(r: &RationalFn, num: &[f64], den: &[f64]) {
        let expected = RationalFn::new_unreduced(
            ComplexPoly::from_real(num),
            ComplexPoly::from_real(den),
        )
        .unwrap();
        assert!(
            close(r.num().coeffs(), expected.num().coeffs(), 1e-12)
                && close(r.den().coeffs(), expected.den().coeffs(), 1e-12),
            "got {r}, expected {expected}"
        );
    }

    #[test]
    fn derivative_of_p2() {
        let p = ComplexPoly::from_real(&[0.0, 1.0, -0.5]);
        assert_eq!(p.derivative(), ComplexPoly::from_real(&[1.0, -1.0]));
    }

    #[test]
    fn koebe_vanishes_at_origin() {
        let k = RationalFn::from_real(&[0.0, 1.0], &[1.0, -2.0, 1.0]).unwrap();
        assert_eq!(k.eval(c(0.0)).unwrap(), c(0.0));
    }

    #[test]
    fn dilation_scales_coefficients() {
        let p = ComplexPoly::from_real(&[1.0, 2.0]).dilate(c(0.5));
        assert_eq!(p, ComplexPoly::from_real(&[1.0, 1.0]));
    }

    #[test]
    fn evaluating_at_a_pole_reports_the_point() {
        let r = RationalFn::from_real(&[0.0, 1.0], &[1.0, -1.0]).unwrap();
        match r.eval(c(1.0)) {
            Err(Error::PoleAtPoint(z)) => assert_eq!(z, c(1.0)),
            other => panic!("expected PoleAtPoint, got {other:?}"),
        }
    }

    #[test]
    fn exact_common_factor_cancels() {
        let r = RationalFn::from_real(&[0.0, -1.0, 1.0], &[0.0, 1.0]).unwrap();
        assert_same_function(&r, &[-1.0, 1.0], &[1.0]);
    }

    #[test]
    fn coprime_quotient_is_unchanged() {
        let r = RationalFn::from_real(&[0.0, 1.0], &[1.0, -2.0, 1.0]).unwrap();
        assert_same_function(&r, &[0.0, 1.0], &[1.0, -2.0, 1.0]);
    }

    #[test]
    fn nearby_roots_cancel_within_tolerance() {
        let num = ComplexPoly::from_roots(&[c(1.0000000001), c(-2.0)]);
        let den = ComplexPoly::from_roots(&[c(1.0)]);
        let r = RationalFn::new_unreduced(num, den)
            .unwrap()
            .reduce_gcd(1e-6)
            .unwrap();
        assert_eq!(r.den().degree(), Some(0));
        // symbolic cancellation of the matched root leaves z + 2
        assert!(close(r.num().coeffs(), &[c(2.0), c(1.0)], 1e-9));
    }

    #[test]
    fn derivative_of_r1() {
        let r1 = RationalFn::from_real(&[0.0, 1.0], &[1.0, -1.0]).unwrap();
        assert_same_function(&r1.derivative().unwrap(), &[1.0], &[1.0, -2.0, 1.0]);
    }

    #[test]
    fn derivative_of_koebe() {
        let k = RationalFn::from_real(&[0.0, 1.0], &[1.0, -2.0, 1.0]).unwrap();
        // (1+z)/(1−z)³
        assert_same_function(&k.derivative().unwrap(), &[1.0, 1.0], &[1.0, -3.0, 3.0, -1.0]);
    }

    #[test]
    fn derivative_of_identity() {
        let id = RationalFn::from_poly(ComplexPoly::z());
        assert_same_function(&id.derivative().unwrap(), &[1.0], &[1.0]);
    }

    #[test]
    fn simple_circle_poles_become_double_in_the_derivative() {
        let k2 = RationalFn::from_real(&[0.0, 1.0], &[1.0, 0.0, -1.0]).unwrap();
        let d = k2.derivative().unwrap();
        assert_eq!(d.den().degree(), Some(4));
        // (1+z²)/(1−z²)²
        assert_same_function(&d, &[1.0, 0.0, 1.0], &[1.0, 0.0, -2.0, 0.0, 1.0]);
    }

    #[test]
    fn taylor_examples() {
        let geo = RationalFn::from_real(&[1.0], &[1.0, -1.0]).unwrap();
        assert!(close(&geo.taylor(3).unwrap(), &[c(1.0); 4], 1e-15));
        let sq = RationalFn::from_real(&[1.0], &[1.0, -2.0, 1.0]).unwrap();
        assert!(close(
            &sq.taylor(3).unwrap(),
            &[c(1.0), c(2.0), c(3.0), c(4.0)],
            1e-14
        ));
        let kd = RationalFn::from_real(&[1.0, 1.0], &[1.0, -3.0, 3.0, -1.0]).unwrap();
        assert!(close(&kd.taylor(2).unwrap(), &[c(1.0), c(4.0), c(9.0)], 1e-13));
    }

    #[test]
    fn taylor_at_a_pole_is_rejected() {
        let r = RationalFn::from_real(&[1.0], &[0.0, 1.0]).unwrap();
        assert!(matches!(r.taylor(3), Err(Error::ExpansionAtPole)));
    }

    #[test]
    fn json_round_trip_accepts_bare_reals() {
        let r: RationalFn = serde_json::from_str(r#"{"num":[0,1],"den":[[1,0],[-1,0]]}"#).unwrap();
        let s = serde_json::to_string(&r).unwrap();
        assert_eq!(s, r#"{"num":[[0.0,0.0],[-1.0,0.0]],"den":[[-1.0,0.0],[1.0,0.0]]}"#);
        let back: RationalFn = serde_json::from_str(&s).unwrap();
        assert_eq!(back, r);
    }

    #[test]
    fn composition_with_a_mobius_map() {
        // σ(w) = 1/w composed with z/(1−z) gives (1−z)/z
        let sigma = RationalFn::from_real(&[1.0], &[0.0, 1.0]).unwrap();
        let r1 = RationalFn::from_real(&[0.0, 1.0], &[1.0, -1.0]).unwrap();
        let comp = sigma.compose(&r1).unwrap();
        let z = C64::new(0.3, 0.2);
        let direct = C64::new(1.0, 0.0) / r1.eval(z).unwrap();
        assert!((comp.eval(z).unwrap() - direct).norm() < 1e-13);
    }

    fn small_poly() -> impl Strategy<Value = ComplexPoly> {
        prop::collection::vec((-3.0f64..3.0, -3.0f64..3.0), 1..6)
            .prop_map(|v| ComplexPoly::new(v.into_iter().map(|(a, b)| C64::new(a, b)).collect()))
    }

    proptest! {
        #[test]
        fn product_rule(f in small_poly(), g in small_poly()) {
            let lhs = f.mul(&g).derivative();
            let rhs = f.derivative().mul(&g).add(&f.mul(&g.derivative()));
            let n = lhs.coeffs().len().max(rhs.coeffs().len());
            for k in 0..n {
                prop_assert!((lhs.coeff(k) - rhs.coeff(k)).norm() <= 1e-11);
            }
        }

        #[test]
        fn taylor_of_product_is_convolution(
            a in prop::collection::vec(-2.0f64..2.0, 1..4),
            b in prop::collection::vec(-2.0f64..2.0, 1..4),
            ra in 1.3f64..3.0, rb in 1.3f64..3.0,
        ) {
            let f = RationalFn::from_real(&a, &[1.0, -1.0 / ra]).unwrap();
            let g = RationalFn::from_real(&b, &[1.0, 0.0, 1.0 / (rb * rb)]).unwrap();
            let n = 30;
            let fg = f.mul(&g).unwrap().taylor(n).unwrap();
            let tf = f.taylor(n).unwrap();
            let tg = g.taylor(n).unwrap();
            for k in 0..=n {
                let conv: C64 = (0..=k).map(|j| tf[j] * tg[k - j]).sum();
                prop_assert!((fg[k] - conv).norm() <= 1e-12 * conv.norm().max(1.0));
            }
        }

        #[test]
        fn reduce_is_idempotent(
            roots in prop::collection::vec((-2.0f64..2.0, -2.0f64..2.0), 1..4),
            extra in (-2.0f64..2.0, -2.0f64..2.0),
        ) {
            let common: Vec<C64> = roots.iter().map(|&(a, b)| C64::new(a, b)).collect();
            let mut num_roots = common.clone();
            num_roots.push(C64::new(extra.0, extra.1) + C64::new(5.0, 0.0));
            let once = RationalFn::new_unreduced(
                ComplexPoly::from_roots(&num_roots),
                ComplexPoly::from_roots(&common).mul(&ComplexPoly::from_real(&[3.0, 1.0])),
            ).unwrap().reduce_gcd(1e-6).unwrap();
            let twice = once.reduce_gcd(1e-6).unwrap();
            prop_assert_eq!(once.num().degree(), twice.num().degree());
            prop_assert_eq!(once.den().degree(), twice.den().degree());
            prop_assert!(close(once.num().coeffs(), twice.num().coeffs(), 1e-9));
            prop_assert!(close(once.den().coeffs(), twice.den().coeffs(), 1e-9));
        }
    }
}
