//! Boundary classification of rational maps and their closed-form spectra.
//!
//! A rational `R` with no poles in the open disk is sorted by the orders of
//! its poles on the unit circle: none (`L_I`), only simple (`L_II`), or at
//! worst double (`L_III`). Independently, `R` belongs to `R_O` when every
//! zero of `R′` on the circle is simple; `s` counts those zeros. For such
//! maps the integral means spectrum is piecewise linear in real `τ`.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::poly::{ComplexPoly, RationalFn};
use crate::roots::{circle_partition, find_roots, Region, RootConfig, RootSet};

#[derive(Debug, Clone, PartialEq)]
pub struct DerivativeFactorization {
    /// `R′` in reduced form.
    pub derivative: RationalFn,
    /// Simple zeros of `R′` on the circle, snapped to modulus one.
    pub on_circle_zeros: RootSet,
    /// Numerator of `R′` with the circle zeros divided out.
    pub cofactor_num: ComplexPoly,
    /// Denominator of `R′` (monic).
    pub den: ComplexPoly,
    /// Poles of `R′` on the circle with their orders.
    pub den_on_circle: RootSet,
}

impl DerivativeFactorization {
    pub fn s(&self) -> usize {
        self.on_circle_zeros.roots.len()
    }

    /// `Π(z) = Π_j (z − z_j)`, identically one when `s = 0`.
    pub fn circle_factor(&self) -> ComplexPoly {
        ComplexPoly::from_roots(&self.on_circle_zeros.expanded())
    }
}

/// Splits `R′ = Π(z)·P_n(z)/P_m(z)` with `Π` collecting the circle zeros.
pub fn factor_derivative(r: &RationalFn, cfg: &RootConfig) -> Result<DerivativeFactorization> {
    if let Some(inside) = roots_or_empty(r.den(), cfg)?
        .roots
        .iter()
        .find(|w| w.region == Region::Inside)
    {
        return Err(Error::PoleInDisk(inside.value));
    }
    let d = r.derivative()?;
    if d.is_zero() {
        return Err(Error::DegenerateInput("derivative vanishes identically".into()));
    }
    let (_, on_zeros, _) = circle_partition(&roots_or_empty(d.num(), cfg)?);
    if let Some(multiple) = on_zeros.roots.iter().find(|w| w.multiplicity > 1) {
        return Err(Error::NotInRO(multiple.value));
    }
    let mut cofactor = d.num().clone();
    for w in &on_zeros.roots {
        cofactor = cofactor.deflate(w.value);
    }
    let (_, den_on, _) = circle_partition(&roots_or_empty(d.den(), cfg)?);
    Ok(DerivativeFactorization {
        derivative: d.clone(),
        on_circle_zeros: on_zeros,
        cofactor_num: cofactor,
        den: d.den().clone(),
        den_on_circle: den_on,
    })
}

fn roots_or_empty(p: &ComplexPoly, cfg: &RootConfig) -> Result<RootSet> {
    match p.degree() {
        None | Some(0) => Ok(RootSet::default()),
        Some(_) => find_roots(p, cfg),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Family {
    #[serde(rename = "L_I")]
    LI,
    #[serde(rename = "L_II")]
    LII,
    #[serde(rename = "L_III")]
    LIII,
    NotClassified,
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Family::LI => "L_I",
            Family::LII => "L_II",
            Family::LIII => "L_III",
            Family::NotClassified => "NotClassified",
        };
        f.write_str(s)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassLabel {
    pub family: Family,
    pub in_r_o: bool,
    /// Distinct critical points on the circle.
    pub s: usize,
    /// Simple circle poles for `L_II`, double circle poles for `L_III`.
    pub l: usize,
    /// Simple circle poles accompanying the double ones (`L_III` only).
    pub t: usize,
}

/// Full classification, including the circle pole orders of `R`.
#[derive(Debug, Clone, PartialEq)]
pub struct Classification {
    pub label: ClassLabel,
    pub circle_poles: RootSet,
    /// `None` when `R′` has a multiple zero on the circle.
    pub factorization: Option<DerivativeFactorization>,
}

pub fn classify(r: &RationalFn, cfg: &RootConfig) -> Result<Classification> {
    let (inside, on, _) = circle_partition(&roots_or_empty(r.den(), cfg)?);
    if let Some(p) = inside.roots.first() {
        return Err(Error::PoleInDisk(p.value));
    }
    let simple = on.roots.iter().filter(|p| p.multiplicity == 1).count();
    let double = on.roots.iter().filter(|p| p.multiplicity == 2).count();
    let higher = on.roots.iter().any(|p| p.multiplicity >= 3);
    let (family, l, t) = if higher {
        (Family::NotClassified, 0, 0)
    } else if double > 0 {
        (Family::LIII, double, simple)
    } else if simple > 0 {
        (Family::LII, simple, 0)
    } else {
        (Family::LI, 0, 0)
    };
    let (factorization, in_r_o, s) = match factor_derivative(r, cfg) {
        Ok(fd) => {
            let s = fd.s();
            (Some(fd), true, s)
        }
        Err(Error::NotInRO(_)) => {
            let d = r.derivative()?;
            let (_, z, _) = circle_partition(&roots_or_empty(d.num(), cfg)?);
            (None, false, z.roots.len())
        }
        Err(e) => return Err(e),
    };
    Ok(Classification {
        label: ClassLabel {
            family,
            in_r_o,
            s,
            l,
            t,
        },
        circle_poles: on,
        factorization,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Formula {
    Zero,
    #[serde(rename = "abs_tau_minus_1")]
    AbsTauMinus1,
    #[serde(rename = "two_tau_minus_1")]
    TwoTauMinus1,
    #[serde(rename = "three_tau_minus_1")]
    ThreeTauMinus1,
}

impl Formula {
    pub fn eval(self, tau: f64) -> f64 {
        match self {
            Formula::Zero => 0.0,
            Formula::AbsTauMinus1 => tau.abs() - 1.0,
            Formula::TwoTauMinus1 => 2.0 * tau - 1.0,
            Formula::ThreeTauMinus1 => 3.0 * tau - 1.0,
        }
    }
}

/// One piece on the half-open interval `(tau_min, tau_max]`; `None` stands
/// for an infinite endpoint.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Piece {
    pub tau_min: Option<f64>,
    pub tau_max: Option<f64>,
    pub formula: Formula,
}

impl Piece {
    fn contains(&self, tau: f64) -> bool {
        self.tau_min.is_none_or(|a| tau > a) && self.tau_max.is_none_or(|b| tau <= b)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ClosedFormSpectrum {
    pub pieces: Vec<Piece>,
}

impl ClosedFormSpectrum {
    pub fn eval(&self, tau: f64) -> f64 {
        let piece = self
            .pieces
            .iter()
            .find(|p| p.contains(tau))
            .expect("pieces cover the real line");
        piece.formula.eval(tau)
    }
}

fn check_label(label: &ClassLabel) -> Result<()> {
    if !label.in_r_o {
        return Err(Error::Unsupported(
            "closed form requires simple critical points on the circle".into(),
        ));
    }
    if label.family == Family::NotClassified {
        return Err(Error::Unsupported(
            "closed form requires circle poles of order at most two".into(),
        ));
    }
    Ok(())
}

pub fn closed_form_spectrum(label: &ClassLabel, tau: f64) -> Result<f64> {
    check_label(label)?;
    let v = if tau == 0.0 {
        0.0
    } else if tau < 0.0 {
        if label.s == 0 {
            0.0
        } else {
            (tau.abs() - 1.0).max(0.0)
        }
    } else {
        match label.family {
            Family::LI => 0.0,
            Family::LII => (2.0 * tau - 1.0).max(0.0),
            Family::LIII => (3.0 * tau - 1.0).max(0.0),
            Family::NotClassified => unreachable!(),
        }
    };
    Ok(v)
}

pub fn closed_form_pieces(label: &ClassLabel) -> Result<ClosedFormSpectrum> {
    check_label(label)?;
    let mut pieces = Vec::new();
    let mut push = |tau_min: Option<f64>, tau_max: Option<f64>, formula: Formula| {
        match pieces.last_mut() {
            Some(Piece { tau_max: m, formula: f, .. }) if *f == formula => *m = tau_max,
            _ => pieces.push(Piece {
                tau_min,
                tau_max,
                formula,
            }),
        }
    };
    if label.s >= 1 {
        push(None, Some(-1.0), Formula::AbsTauMinus1);
        push(Some(-1.0), Some(0.0), Formula::Zero);
    } else {
        push(None, Some(0.0), Formula::Zero);
    }
    match label.family {
        Family::LI => push(Some(0.0), None, Formula::Zero),
        Family::LII => {
            push(Some(0.0), Some(0.5), Formula::Zero);
            push(Some(0.5), None, Formula::TwoTauMinus1);
        }
        Family::LIII => {
            push(Some(0.0), Some(1.0 / 3.0), Formula::Zero);
            push(Some(1.0 / 3.0), None, Formula::ThreeTauMinus1);
        }
        Family::NotClassified => unreachable!(),
    }
    Ok(ClosedFormSpectrum { pieces })
}

#[cfg(test)]
mod tests {
    use num_complex::Complex64 as C64;
    use super::*;
    use proptest::prelude::*;

    fn rat(num: &[f64], den: &[f64]) -> RationalFn {
        RationalFn::from_real(num, den).unwrap()
    }

    fn label_of(r: &RationalFn) -> ClassLabel {
        classify(r, &RootConfig::default()).unwrap().label
    }

    fn koebe() -> RationalFn {
        rat(&[0.0, 1.0], &[1.0, -2.0, 1.0])
    }

    #[test]
    fn koebe_factorization() {
        let fd = factor_derivative(&koebe(), &RootConfig::default()).unwrap();
        assert_eq!(fd.s(), 1);
        assert!((fd.on_circle_zeros.roots[0].value - C64::new(-1.0, 0.0)).norm() < 1e-15);
        // R′ = −(z+1)/(z−1)³ in monic-denominator form
        assert_eq!(fd.cofactor_num.degree(), Some(0));
        assert!((fd.cofactor_num.coeff(0) + 1.0).norm() < 1e-12);
        let expected_den = ComplexPoly::from_real(&[-1.0, 3.0, -3.0, 1.0]);
        for k in 0..4 {
            assert!((fd.den.coeff(k) - expected_den.coeff(k)).norm() < 1e-12);
        }
        assert_eq!(fd.den_on_circle.roots.len(), 1);
        assert_eq!(fd.den_on_circle.roots[0].multiplicity, 3);
        // Π·P_n/P_m reproduces R′
        let z = C64::new(0.31, -0.42);
        let rebuilt = fd.circle_factor().eval(z) * fd.cofactor_num.eval(z) / fd.den.eval(z);
        assert!((rebuilt - fd.derivative.eval(z).unwrap()).norm() < 1e-12);
    }

    #[test]
    fn r1_has_no_circle_critical_points() {
        let fd = factor_derivative(&rat(&[0.0, 1.0], &[1.0, -1.0]), &RootConfig::default()).unwrap();
        assert_eq!(fd.s(), 0);
        assert_eq!(fd.circle_factor(), ComplexPoly::one());
    }

    #[test]
    fn p2_factorization() {
        let fd = factor_derivative(&rat(&[0.0, 1.0, -0.5], &[1.0]), &RootConfig::default()).unwrap();
        assert_eq!(fd.circle_factor(), ComplexPoly::from_real(&[-1.0, 1.0]));
        assert!((fd.cofactor_num.coeff(0) + 1.0).norm() < 1e-15);
        assert_eq!(fd.cofactor_num.degree(), Some(0));
    }

    #[test]
    fn example_labels() {
        let p2 = label_of(&rat(&[0.0, 1.0, -0.5], &[1.0]));
        assert_eq!((p2.family, p2.s), (Family::LI, 1));
        let r2 = label_of(&rat(&[0.0, 3.0, 1.0], &[3.0, -3.0]));
        assert_eq!((r2.family, r2.s, r2.l), (Family::LII, 1, 1));
        let k = label_of(&koebe());
        assert_eq!((k.family, k.s, k.l, k.t), (Family::LIII, 1, 1, 0));
        assert!(k.in_r_o);
    }

    #[test]
    fn interior_pole_is_rejected() {
        let r = rat(&[0.0, 1.0], &[1.0, -2.0]);
        assert!(matches!(classify(&r, &RootConfig::default()), Err(Error::PoleInDisk(_))));
    }

    #[test]
    fn triple_circle_pole_is_not_classified() {
        let r = rat(&[0.0, 1.0], &[1.0, -3.0, 3.0, -1.0]);
        assert_eq!(label_of(&r).family, Family::NotClassified);
    }

    #[test]
    fn double_circle_critical_point_leaves_r_o() {
        // R′ = (1 − z)², so R = z − z² + z³/3
        let r = rat(&[0.0, 1.0, -1.0, 1.0 / 3.0], &[1.0]);
        let c = classify(&r, &RootConfig::default()).unwrap();
        assert!(!c.label.in_r_o);
        assert!(closed_form_spectrum(&c.label, -2.0).is_err());
    }

    #[test]
    fn closed_form_examples() {
        let k = label_of(&koebe());
        assert_eq!(closed_form_spectrum(&k, -2.0).unwrap(), 1.0);
        assert_eq!(closed_form_spectrum(&k, 1.0).unwrap(), 2.0);
        let r1 = label_of(&rat(&[0.0, 1.0], &[1.0, -1.0]));
        assert_eq!(closed_form_spectrum(&r1, -2.0).unwrap(), 0.0);
        for l in [k, r1] {
            assert_eq!(closed_form_spectrum(&l, 0.0).unwrap(), 0.0);
        }
    }

    #[test]
    fn pieces_serialize_as_records() {
        let k = label_of(&koebe());
        let s = serde_json::to_string(&closed_form_pieces(&k).unwrap()).unwrap();
        assert_eq!(
            s,
            r#"{"pieces":[{"tau_min":null,"tau_max":-1.0,"formula":"abs_tau_minus_1"},{"tau_min":-1.0,"tau_max":0.3333333333333333,"formula":"zero"},{"tau_min":0.3333333333333333,"tau_max":null,"formula":"three_tau_minus_1"}]}"#
        );
    }

    fn any_label() -> impl Strategy<Value = ClassLabel> {
        (0usize..3, 0usize..4, 1usize..3).prop_map(|(f, s, l)| {
            let family = [Family::LI, Family::LII, Family::LIII][f];
            ClassLabel {
                family,
                in_r_o: true,
                s,
                l: if family == Family::LI { 0 } else { l },
                t: 0,
            }
        })
    }

    proptest! {
        #[test]
        fn pieces_agree_with_pointwise_formula(label in any_label(), tau in -6.0f64..6.0) {
            let pw = closed_form_pieces(&label).unwrap();
            prop_assert!((pw.eval(tau) - closed_form_spectrum(&label, tau).unwrap()).abs() < 1e-15);
        }

        #[test]
        fn pieces_are_continuous(label in any_label()) {
            let pw = closed_form_pieces(&label).unwrap();
            for p in &pw.pieces {
                if let Some(b) = p.tau_max {
                    let left = p.formula.eval(b);
                    let right = pw.eval(b + 1e-12);
                    prop_assert!((left - right).abs() < 1e-9);
                }
            }
        }

        #[test]
        fn ray_monotonicity(label in any_label(), t in 0.0f64..5.0, dt in 1e-3f64..1.0, tau0 in 1.0f64..4.0) {
            let f = |tau: f64| closed_form_spectrum(&label, tau).unwrap();
            if label.s >= 1 {
                let t0 = -tau0;
                prop_assert!(f(t0 * (1.0 + t + dt)) > f(t0 * (1.0 + t)));
            }
            let threshold = match label.family {
                Family::LII => Some(0.5),
                Family::LIII => Some(1.0 / 3.0),
                _ => None,
            };
            if let Some(th) = threshold {
                let t0 = th + tau0 * 0.1;
                prop_assert!(f(t0 * (1.0 + t + dt)) > f(t0 * (1.0 + t)));
            }
        }

        #[test]
        fn at_most_the_universal_value_where_known(label in any_label(), tau in 0.4f64..6.0) {
            prop_assert!(closed_form_spectrum(&label, tau).unwrap() <= 3.0 * tau - 1.0);
        }

        #[test]
        fn affine_post_composition_keeps_the_label(
            a in (0.2f64..3.0, -3.0f64..3.0), b in (-2.0f64..2.0, -2.0f64..2.0), which in 0usize..4
        ) {
            let base = [
                rat(&[0.0, 1.0, -0.5], &[1.0]),
                rat(&[0.0, 1.0], &[1.0, -1.0]),
                rat(&[0.0, 3.0, 1.0], &[3.0, -3.0]),
                koebe(),
            ][which].clone();
            let a = C64::from_polar(a.0, a.1);
            let shifted = RationalFn::new(
                base.num().scale(a).add(&base.den().scale(C64::new(b.0, b.1))),
                base.den().clone(),
            ).unwrap();
            prop_assert_eq!(label_of(&shifted), label_of(&base));
        }
    }
}
