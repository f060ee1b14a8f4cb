//! Polynomial roots with multiplicities, labelled by position relative to
//! the unit circle.
//!
//! Aberth–Ehrlich simultaneous iteration, Newton polishing, then clustering:
//! two approximations are merged when their inclusion disks
//! `n|p(w_i)| / |a_n Π_{j≠i}(w_i − w_j)|` overlap (or they lie within
//! `cluster_tol`). A multiple root perturbs into a small ring whose
//! inclusion disks always overlap, while well-separated simple roots have
//! radii at round-off level. The centroid of a cluster is accurate to
//! round-off even when the individual members are not.

use std::f64::consts::PI;

use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::poly::ComplexPoly;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RootConfig {
    pub circle_tol: f64,
    pub residual_tol: f64,
    pub cluster_tol: f64,
    pub max_iters: usize,
}

impl Default for RootConfig {
    fn default() -> Self {
        Self {
            circle_tol: 1e-9,
            residual_tol: 1e-10,
            cluster_tol: 1e-8,
            max_iters: 500,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Region {
    Inside,
    OnCircle,
    Outside,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Root {
    pub value: C64,
    pub multiplicity: usize,
    pub region: Region,
}

impl Serialize for Root {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut st = s.serialize_struct("Root", 4)?;
        st.serialize_field("re", &(self.value.re + 0.0))?;
        st.serialize_field("im", &(self.value.im + 0.0))?;
        st.serialize_field("mult", &self.multiplicity)?;
        st.serialize_field("region", &self.region)?;
        st.end()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Default)]
pub struct RootSet {
    pub roots: Vec<Root>,
    /// Largest `|p(w)| / Σ|a_k||w|^k` over the reported roots.
    #[serde(skip)]
    pub residual: f64,
}

impl RootSet {
    pub fn total_multiplicity(&self) -> usize {
        self.roots.iter().map(|r| r.multiplicity).sum()
    }

    pub fn with_region(&self, region: Region) -> RootSet {
        RootSet {
            roots: self.roots.iter().filter(|r| r.region == region).copied().collect(),
            residual: self.residual,
        }
    }

    /// All roots repeated by multiplicity.
    pub fn expanded(&self) -> Vec<C64> {
        self.roots
            .iter()
            .flat_map(|r| std::iter::repeat_n(r.value, r.multiplicity))
            .collect()
    }
}

pub fn find_roots(p: &ComplexPoly, cfg: &RootConfig) -> Result<RootSet> {
    let n = match p.degree() {
        None | Some(0) => {
            return Err(Error::Invalid("root finding needs degree ≥ 1".into()));
        }
        Some(n) => n,
    };
    let zero_mult = p.coeffs().iter().take_while(|c| c.norm() == 0.0).count();
    let q = ComplexPoly::new(p.coeffs()[zero_mult..].to_vec());
    let mut clusters: Vec<(C64, usize)> = Vec::new();
    if zero_mult > 0 {
        clusters.push((C64::new(0.0, 0.0), zero_mult));
    }
    if n > zero_mult {
        let approx = aberth(&q, cfg.max_iters)?;
        let polished: Vec<C64> = approx.iter().map(|&w| newton_polish(&q, w, 4)).collect();
        clusters.extend(cluster(&q, &polished, cfg.cluster_tol));
    }
    let mut roots = Vec::with_capacity(clusters.len());
    let mut residual: f64 = 0.0;
    for (w, m) in clusters {
        let w = if m > 1 { refine_multiple(p, w, m) } else { w };
        let region = classify_point(w, cfg.circle_tol);
        // measured against Σ|a_k||w|^k, the round-off scale of evaluating p at w
        residual = residual.max(p.eval(w).norm() / p.eval_abs(w));
        roots.push(Root {
            value: w,
            multiplicity: m,
            region,
        });
    }
    if residual > cfg.residual_tol {
        return Err(Error::RootFindingFailed(format!(
            "residual {residual:e} exceeds {:e} for {p}",
            cfg.residual_tol
        )));
    }
    sort_roots(&mut roots);
    Ok(RootSet { roots, residual })
}

/// Splits a root set into `(inside, on, outside)`, snapping circle roots to
/// modulus one.
pub fn circle_partition(rs: &RootSet) -> (RootSet, RootSet, RootSet) {
    let mut on = rs.with_region(Region::OnCircle);
    for r in &mut on.roots {
        r.value /= r.value.norm();
    }
    (rs.with_region(Region::Inside), on, rs.with_region(Region::Outside))
}

pub fn classify_point(w: C64, circle_tol: f64) -> Region {
    let m = w.norm();
    if (m - 1.0).abs() <= circle_tol {
        Region::OnCircle
    } else if m < 1.0 {
        Region::Inside
    } else {
        Region::Outside
    }
}

/// Sort by modulus, then argument in `[-π, π)`; moduli agreeing to 1e-9 are
/// treated as equal so conjugate pairs order by argument.
pub fn sort_roots(roots: &mut [Root]) {
    roots.sort_by(|a, b| {
        let (ma, mb) = (a.value.norm(), b.value.norm());
        if (ma - mb).abs() > 1e-9 * ma.max(mb).max(1.0) {
            return ma.total_cmp(&mb);
        }
        arg_key(a.value).total_cmp(&arg_key(b.value))
    });
}

fn arg_key(w: C64) -> f64 {
    let a = w.arg();
    if a >= PI {
        a - 2.0 * PI
    } else {
        a
    }
}

fn aberth(p: &ComplexPoly, max_iters: usize) -> Result<Vec<C64>> {
    let n = p.degree().unwrap();
    let a = p.coeffs();
    let dp = p.derivative();
    if n == 1 {
        return Ok(vec![-a[0] / a[1]]);
    }
    // initial circle through the geometric mean of the root moduli
    let radius = (a[0].norm() / a[n].norm()).powf(1.0 / n as f64).max(1e-3);
    let mut w: Vec<C64> = (0..n)
        .map(|k| {
            let t = 2.0 * PI * k as f64 / n as f64 + 0.4;
            C64::from_polar(radius, t)
        })
        .collect();
    let mut done = vec![false; n];
    for _ in 0..max_iters {
        let mut all_done = true;
        for i in 0..n {
            if done[i] {
                continue;
            }
            let pv = p.eval(w[i]);
            let noise = 4.0 * n as f64 * f64::EPSILON * p.eval_abs(w[i]);
            if pv.norm() <= noise {
                done[i] = true;
                continue;
            }
            let ratio = pv / dp.eval(w[i]);
            let mut s = C64::new(0.0, 0.0);
            for j in 0..n {
                if j != i {
                    s += 1.0 / (w[i] - w[j]);
                }
            }
            let step = ratio / (1.0 - ratio * s);
            if !step.is_finite() {
                // coincident approximations: nudge apart deterministically
                let bump = C64::new(1e-7, 1e-7) * w[i].norm().max(1.0);
                w[i] += bump;
                all_done = false;
                continue;
            }
            w[i] -= step;
            if step.norm() <= 2.0 * f64::EPSILON * w[i].norm() {
                done[i] = true;
            } else {
                all_done = false;
            }
        }
        if all_done {
            return Ok(w);
        }
    }
    // multiple roots converge slowly; accept if every approximation is near a root
    let worst = (0..n)
        .map(|i| p.eval(w[i]).norm() / p.eval_abs(w[i]).max(f64::MIN_POSITIVE))
        .fold(0.0, f64::max);
    if worst < 1e-6 {
        Ok(w)
    } else {
        Err(Error::RootFindingFailed(format!(
            "Aberth iteration did not converge (relative residual {worst:e})"
        )))
    }
}

fn newton_polish(p: &ComplexPoly, mut w: C64, steps: usize) -> C64 {
    let dp = p.derivative();
    let mut best = p.eval(w).norm();
    for _ in 0..steps {
        let d = dp.eval(w);
        if d.norm() == 0.0 {
            break;
        }
        let cand = w - p.eval(w) / d;
        let r = p.eval(cand).norm();
        if !(r < best) {
            break;
        }
        best = r;
        w = cand;
    }
    w
}

fn cluster(p: &ComplexPoly, w: &[C64], cluster_tol: f64) -> Vec<(C64, usize)> {
    let n = w.len();
    let lead = p.leading().norm();
    let radius: Vec<f64> = (0..n)
        .map(|i| {
            let noise = 4.0 * n as f64 * f64::EPSILON * p.eval_abs(w[i]);
            let num = n as f64 * (p.eval(w[i]).norm() + noise);
            let mut den = lead;
            for j in 0..n {
                if j != i {
                    den *= (w[i] - w[j]).norm();
                }
            }
            if den > 0.0 {
                num / den
            } else {
                f64::INFINITY
            }
        })
        .collect();
    // union-find over overlapping disks
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(parent: &mut [usize], i: usize) -> usize {
        let mut r = i;
        while parent[r] != r {
            r = parent[r];
        }
        parent[i] = r;
        r
    }
    for i in 0..n {
        for j in (i + 1)..n {
            let d = (w[i] - w[j]).norm();
            let reach = (radius[i] + radius[j]).min(1e-2 * w[i].norm().max(1.0));
            if d <= reach || d <= cluster_tol * w[i].norm().max(1.0) {
                let (ri, rj) = (find(&mut parent, i), find(&mut parent, j));
                if ri != rj {
                    parent[rj] = ri;
                }
            }
        }
    }
    let mut groups: Vec<(usize, Vec<usize>)> = Vec::new();
    for i in 0..n {
        let r = find(&mut parent, i);
        match groups.iter_mut().find(|(root, _)| *root == r) {
            Some((_, members)) => members.push(i),
            None => groups.push((r, vec![i])),
        }
    }
    groups
        .into_iter()
        .map(|(_, members)| {
            let m = members.len();
            let c = members.iter().map(|&i| w[i]).sum::<C64>() / m as f64;
            (c, m)
        })
        .collect()
}

/// Newton on `p^{(m−1)}`, which has a simple root at an m-fold root of `p`.
fn refine_multiple(p: &ComplexPoly, w: C64, m: usize) -> C64 {
    let q = p.nth_derivative(m - 1);
    let polished = newton_polish(&q, w, 3);
    if p.eval(polished).norm() <= p.eval(w).norm() {
        polished
    } else {
        w
    }
}
