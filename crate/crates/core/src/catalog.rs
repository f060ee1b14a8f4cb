//! Example maps with their expected facts, a boundary self-intersection
//! probe, and the table of known universal spectrum values.

use std::collections::BTreeMap;
use std::f64::consts::{PI, TAU};
use std::path::Path;

use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

use crate::classifier::Family;
use crate::error::{Error, Result};
use crate::ims::{normalize_angle, sort_dedup_angles, AnalyticDerivative, RationalDerivative};
use crate::poly::{ComplexPoly, RationalFn};
use crate::roots::RootConfig;

const BUILTIN: &str = include_str!("catalog.toml");

/// `κ_T(z) = z/(1 − z^T)^{2/T}`, through
/// `κ_T′ = (1 + z^T)(1 − z^T)^{−1−2/T}` on principal branches.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KappaT {
    pub t: u32,
}

impl KappaT {
    pub fn new(t: u32) -> Result<Self> {
        if t == 0 {
            return Err(Error::Invalid("κ_T needs T ≥ 1".into()));
        }
        Ok(Self { t })
    }

    fn log(&self, z: C64) -> C64 {
        let zt = z.powu(self.t);
        let one = C64::new(1.0, 0.0);
        (one + zt).ln() - (1.0 + 2.0 / self.t as f64) * (one - zt).ln()
    }

    /// The closed form `(2(T²−1)z^{3T−2} − 2(T²+2)z^{2T−2} + 2(T²−1)z^{T−2})/(1 − z^{2T})²`.
    pub fn schwarzian_closed_form(&self, z: C64) -> C64 {
        let t = self.t as i32;
        let a = 2.0 * (t * t - 1) as f64;
        let b = 2.0 * (t * t + 2) as f64;
        let num = a * z.powi(3 * t - 2) - b * z.powi(2 * t - 2) + a * z.powi(t - 2);
        let d = 1.0 - z.powi(2 * t);
        num / (d * d)
    }
}

impl AnalyticDerivative for KappaT {
    fn derivative(&self, z: C64) -> C64 {
        self.log(z).exp()
    }

    fn ln_abs_derivative(&self, z: C64) -> f64 {
        self.log(z).re
    }

    fn log_derivative(&self, z: C64) -> Option<C64> {
        Some(self.log(z))
    }

    fn pre_schwarzian(&self, z: C64) -> C64 {
        let t = self.t as f64;
        let zt = z.powu(self.t);
        let zt1 = z.powu(self.t - 1);
        t * zt1 / (1.0 + zt) + (t + 2.0) * zt1 / (1.0 - zt)
    }

    fn pre_schwarzian_prime(&self, z: C64) -> C64 {
        let t = self.t as f64;
        let zt = z.powu(self.t);
        let z2t2 = z.powu(2 * self.t - 2);
        // (T−1)z^{T−2} term, absent for T = 1
        let low = if self.t >= 2 {
            (t - 1.0) * z.powu(self.t - 2)
        } else {
            C64::new(0.0, 0.0)
        };
        let p = 1.0 + zt;
        let m = 1.0 - zt;
        t * (low - z2t2) / (p * p) + (t + 2.0) * (low + z2t2) / (m * m)
    }

    fn singular_angles(&self) -> Vec<f64> {
        let t = self.t as f64;
        let mut a: Vec<f64> = (0..self.t)
            .flat_map(|k| {
                let k = k as f64;
                [TAU * k / t, (2.0 * k + 1.0) * PI / t]
            })
            .map(normalize_angle)
            .collect();
        sort_dedup_angles(&mut a);
        a
    }
}

/// `f_γ(z) = z(1 − z)^{−2e^{iγ}cos γ}`, through
/// `f_γ′ = (1 + ze^{2iγ})(1 − z)^{−b}`, `b = 2 + e^{2iγ}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Spiral {
    pub gamma: f64,
}

impl Spiral {
    pub fn new(gamma: f64) -> Result<Self> {
        if !(gamma.abs() < PI / 2.0) {
            return Err(Error::Invalid(format!("spiral angle γ = {gamma} outside (−π/2, π/2)")));
        }
        Ok(Self { gamma })
    }

    fn rot(&self) -> C64 {
        C64::from_polar(1.0, 2.0 * self.gamma)
    }

    fn b(&self) -> C64 {
        2.0 + self.rot()
    }

    fn log(&self, z: C64) -> C64 {
        let one = C64::new(1.0, 0.0);
        (one + z * self.rot()).ln() - self.b() * (one - z).ln()
    }
}

impl AnalyticDerivative for Spiral {
    fn derivative(&self, z: C64) -> C64 {
        self.log(z).exp()
    }

    fn ln_abs_derivative(&self, z: C64) -> f64 {
        self.log(z).re
    }

    fn log_derivative(&self, z: C64) -> Option<C64> {
        Some(self.log(z))
    }

    fn pre_schwarzian(&self, z: C64) -> C64 {
        let e = self.rot();
        e / (1.0 + z * e) + self.b() / (1.0 - z)
    }

    fn pre_schwarzian_prime(&self, z: C64) -> C64 {
        let e = self.rot();
        let p = 1.0 + z * e;
        let m = 1.0 - z;
        -e * e / (p * p) + self.b() / (m * m)
    }

    fn singular_angles(&self) -> Vec<f64> {
        let mut a = vec![0.0, normalize_angle(PI - 2.0 * self.gamma)];
        sort_dedup_angles(&mut a);
        a
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum EntryFunction {
    /// The map itself.
    Rational(RationalFn),
    /// A rational derivative of a non-rational map.
    Derivative(RationalFn),
    KappaT(KappaT),
    Spiral(Spiral),
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Expected {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub class: Option<Family>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub s: Option<usize>,
    /// Circle critical points as `[re, im]`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub critical_points: Option<Vec<[f64; 2]>>,
    /// `[τ, β(τ)]` samples.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub spectrum: Vec<[f64; 2]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub schwarzian_norm: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub pre_schwarzian_norm: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub univalent: Option<bool>,
    /// Two parameters on the circle with equal images.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub self_intersection: Option<Vec<[f64; 2]>>,
    #[serde(default)]
    pub provenance: BTreeMap<String, String>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CatalogEntry {
    pub name: String,
    pub aliases: Vec<String>,
    pub function: EntryFunction,
    pub expected: Expected,
}

impl CatalogEntry {
    pub fn kind(&self) -> &'static str {
        match self.function {
            EntryFunction::Rational(_) => "rational",
            EntryFunction::Derivative(_) => "derivative",
            EntryFunction::KappaT(_) | EntryFunction::Spiral(_) => "formula",
        }
    }

    /// The rational map, for entries that are one.
    pub fn rational(&self) -> Option<&RationalFn> {
        match &self.function {
            EntryFunction::Rational(r) => Some(r),
            _ => None,
        }
    }

    pub fn derivative(&self) -> Result<Box<dyn AnalyticDerivative>> {
        let cfg = RootConfig::default();
        Ok(match &self.function {
            EntryFunction::Rational(r) => Box::new(RationalDerivative::from_map(r, &cfg)?),
            EntryFunction::Derivative(d) => Box::new(RationalDerivative::from_derivative(d.clone(), &cfg)?),
            EntryFunction::KappaT(k) => Box::new(*k),
            EntryFunction::Spiral(s) => Box::new(*s),
        })
    }

    fn answers_to(&self, name: &str) -> bool {
        self.name == name || self.aliases.iter().any(|a| a == name)
    }
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawEntry {
    name: String,
    #[serde(default)]
    aliases: Vec<String>,
    kind: String,
    num: Option<ComplexPoly>,
    den: Option<ComplexPoly>,
    formula: Option<String>,
    #[serde(default)]
    params: BTreeMap<String, f64>,
    #[serde(default)]
    expected: Expected,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawCatalog {
    #[serde(default)]
    entry: Vec<RawEntry>,
}

impl RawEntry {
    fn build(self) -> Result<CatalogEntry> {
        let bad = |msg: &str| Error::Config(format!("entry `{}`: {msg}", self.name));
        let rational = || -> Result<RationalFn> {
            match (&self.num, &self.den) {
                (Some(n), Some(d)) => RationalFn::new(n.clone(), d.clone()),
                _ => Err(bad("needs num and den")),
            }
        };
        let param = |key: &str| -> Result<f64> {
            self.params
                .get(key)
                .copied()
                .ok_or_else(|| bad(&format!("missing parameter `{key}`")))
        };
        let function = match self.kind.as_str() {
            "rational" => EntryFunction::Rational(rational()?),
            "derivative" => EntryFunction::Derivative(rational()?),
            "formula" => match self.formula.as_deref() {
                Some("kappa_t") => {
                    let t = param("t")?;
                    if t.fract() != 0.0 || t < 1.0 {
                        return Err(bad("t must be a positive integer"));
                    }
                    EntryFunction::KappaT(KappaT::new(t as u32)?)
                }
                Some("spiral") => EntryFunction::Spiral(Spiral::new(param("gamma")?)?),
                Some(other) => return Err(bad(&format!("unknown formula `{other}`"))),
                None => return Err(bad("formula entries need `formula`")),
            },
            other => return Err(bad(&format!("unknown kind `{other}`"))),
        };
        Ok(CatalogEntry {
            name: self.name,
            aliases: self.aliases,
            function,
            expected: self.expected,
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Catalog {
    entries: Vec<CatalogEntry>,
}

impl Catalog {
    pub fn builtin() -> Self {
        Self::from_toml_str(BUILTIN).expect("embedded catalog is valid")
    }

    pub fn from_toml_str(s: &str) -> Result<Self> {
        let raw: RawCatalog = toml::from_str(s).map_err(|e| Error::Config(e.to_string()))?;
        let mut cat = Catalog { entries: Vec::new() };
        for e in raw.entry {
            cat.push(e.build()?)?;
        }
        Ok(cat)
    }

    /// The built-in entries plus those in a TOML file of the same schema.
    pub fn with_extension(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        let mut cat = Self::builtin();
        for e in Self::from_toml_str(&text)?.entries {
            cat.push(e)?;
        }
        Ok(cat)
    }

    fn push(&mut self, e: CatalogEntry) -> Result<()> {
        for n in std::iter::once(&e.name).chain(&e.aliases) {
            if self.entries.iter().any(|x| x.answers_to(n)) {
                return Err(Error::Config(format!("duplicate catalog name `{n}`")));
            }
        }
        self.entries.push(e);
        Ok(())
    }

    pub fn lookup(&self, name: &str) -> Result<&CatalogEntry> {
        self.entries
            .iter()
            .find(|e| e.answers_to(name))
            .ok_or_else(|| Error::UnknownEntry(name.to_string()))
    }

    pub fn names(&self) -> Vec<&str> {
        self.entries.iter().map(|e| e.name.as_str()).collect()
    }

    pub fn entries(&self) -> &[CatalogEntry] {
        &self.entries
    }
}

/// Closest approach between boundary image points with parameters at least
/// [`MIN_PARAMETER_GAP`] apart. Sampling plus Newton refinement, so a
/// heuristic rather than a proof either way.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SelfIntersectionProbe {
    pub theta1: f64,
    pub theta2: f64,
    pub distance: f64,
    pub self_intersects: bool,
    pub heuristic: bool,
}

pub const MIN_PARAMETER_GAP: f64 = 0.2;
/// Image distance below which the probe reports a self-intersection.
pub const INTERSECTION_TOL: f64 = 1e-6;

fn circle_gap(a: f64, b: f64) -> f64 {
    let d = (a - b).rem_euclid(TAU);
    d.min(TAU - d)
}

pub fn boundary_selfintersection_probe(entry: &CatalogEntry, samples: usize) -> Result<SelfIntersectionProbe> {
    let r = entry
        .rational()
        .ok_or_else(|| Error::Unsupported(format!("`{}` is not a rational map", entry.name)))?;
    let dr = r.derivative()?;
    let thetas: Vec<f64> = (0..samples).map(|i| TAU * i as f64 / samples as f64).collect();
    let pts: Vec<C64> = thetas
        .iter()
        .map(|&t| r.eval(C64::from_polar(1.0, t)))
        .collect::<Result<_>>()
        .map_err(|_| Error::Unsupported(format!("`{}` has a pole on the circle", entry.name)))?;
    let (mut best, mut bi, mut bj) = (f64::INFINITY, 0, 0);
    for i in 0..samples {
        for j in i + 1..samples {
            if circle_gap(thetas[i], thetas[j]) < MIN_PARAMETER_GAP {
                continue;
            }
            let d = (pts[i] - pts[j]).norm();
            if d < best {
                (best, bi, bj) = (d, i, j);
            }
        }
    }
    // Newton on F(θ₁, θ₂) = R(e^{iθ₁}) − R(e^{iθ₂})
    let (mut t1, mut t2) = (thetas[bi], thetas[bj]);
    let value = |t: f64| r.eval_unchecked(C64::from_polar(1.0, t));
    let tangent = |t: f64| {
        let z = C64::from_polar(1.0, t);
        C64::new(0.0, 1.0) * z * dr.eval_unchecked(z)
    };
    for _ in 0..50 {
        let f = value(t1) - value(t2);
        let (a, b) = (tangent(t1), -tangent(t2));
        let det = a.re * b.im - a.im * b.re;
        if det.abs() < 1e-300 {
            break;
        }
        let d1 = (f.re * b.im - f.im * b.re) / det;
        let d2 = (a.re * f.im - a.im * f.re) / det;
        let (n1, n2) = (t1 - d1, t2 - d2);
        if circle_gap(n1, n2) < 0.5 * MIN_PARAMETER_GAP || !(n1.is_finite() && n2.is_finite()) {
            break;
        }
        (t1, t2) = (n1, n2);
        if d1.abs() + d2.abs() < 1e-15 {
            break;
        }
    }
    let refined = (value(t1) - value(t2)).norm();
    let (theta1, theta2, distance) = if refined < best {
        (normalize_angle(t1), normalize_angle(t2), refined)
    } else {
        (thetas[bi], thetas[bj], best)
    };
    Ok(SelfIntersectionProbe {
        theta1,
        theta2,
        distance,
        self_intersects: distance < INTERSECTION_TOL,
        heuristic: true,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ReferenceModel {
    /// What is proven about `B(τ)` over the whole univalent class.
    Universal,
    /// What is proven about `B_b(τ)` over bounded univalent maps.
    Bounded,
    /// The conjectured `B_b(τ) = τ²/4` on `[−2, 2]`, `|τ| − 1` outside.
    Kraetzer,
}

/// A known value (`lower == upper`) or bracket; `upper = None` means no
/// numeric upper bound is available.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ReferenceSpectrum {
    pub tau: f64,
    pub model: ReferenceModel,
    pub lower: f64,
    pub upper: Option<f64>,
}

impl ReferenceSpectrum {
    pub fn exact(&self) -> Option<f64> {
        self.upper.filter(|&u| u == self.lower)
    }
}

pub fn reference_universal_spectrum(tau: f64, model: ReferenceModel) -> ReferenceSpectrum {
    let point = |v: f64| (v, Some(v));
    let (lower, upper) = match model {
        ReferenceModel::Universal => {
            if tau >= 0.4 {
                point(3.0 * tau - 1.0)
            } else if tau == 0.0 {
                point(0.0)
            } else if tau > 0.0 {
                (tau * tau / 5.0, None)
            } else {
                // |τ| − 1 is attained by the Koebe function; the exact value is
                // only known below an unidentified threshold τ* ≤ −2
                ((tau.abs() - 1.0).max(0.0), None)
            }
        }
        ReferenceModel::Bounded => {
            if tau >= 2.0 {
                point(tau - 1.0)
            } else if tau == 0.0 {
                point(0.0)
            } else {
                ((tau.abs() - 1.0).max(0.0), None)
            }
        }
        ReferenceModel::Kraetzer => {
            if tau.abs() <= 2.0 {
                point(tau * tau / 4.0)
            } else {
                point(tau.abs() - 1.0)
            }
        }
    };
    ReferenceSpectrum {
        tau,
        model,
        lower,
        upper,
    }
}
