//! Orbit-space models: the skewed strip with its deck map, and the
//! suspension of a hyperbolic torus automorphism.
//!
//! The strip is charted by leaf coordinates `(s, u)`: stable leaves are
//! `{s = c}`, unstable leaves `{u = c}`, and the orbit space is the band
//! `|s - u| < 1`. An unstable leaf `u` meets exactly the stable leaves in
//! `J_u = (u - 1, u + 1)`.

use std::f64::consts::PI;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum OrbitModelError {
    #[error("pinch {0} outside (0, 1/pi)")]
    Epsilon(f64),
    #[error("point ({s}, {u}) is outside the strip |s - u| < 1")]
    NotInStrip { s: f64, u: f64 },
    #[error("point ({s}, {u}) is not fixed by the deck map")]
    NotFixed { s: f64, u: f64 },
    #[error("window must be at least 1")]
    Window,
    #[error("the points are equal")]
    IdenticalPoints,
    #[error("the points lie on the same flow line")]
    SameOrbit,
    #[error("monodromy {0:?} is not hyperbolic with determinant 1")]
    Monodromy([[i64; 2]; 2]),
    #[error("unknown flow descriptor {0:?}")]
    UnknownDescriptor(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StripModel {
    epsilon: f64,
}

impl Default for StripModel {
    fn default() -> Self {
        StripModel { epsilon: 0.2 }
    }
}

impl StripModel {
    pub fn new(epsilon: f64) -> Result<Self, OrbitModelError> {
        if !(epsilon > 0.0 && epsilon < 1.0 / PI) {
            return Err(OrbitModelError::Epsilon(epsilon));
        }
        Ok(StripModel { epsilon })
    }

    pub fn epsilon(&self) -> f64 {
        self.epsilon
    }

    /// `f(t) = t + eps sin^2(pi t)`, increasing with fixed set the integers.
    pub fn pinch(&self, t: f64) -> f64 {
        t + self.displacement(t)
    }

    fn displacement(&self, t: f64) -> f64 {
        self.epsilon * (PI * t).sin().powi(2)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OrbitPoint {
    pub s: f64,
    pub u: f64,
}

impl OrbitPoint {
    pub fn new(s: f64, u: f64) -> Result<Self, OrbitModelError> {
        if (s - u).abs() < 1.0 {
            Ok(OrbitPoint { s, u })
        } else {
            Err(OrbitModelError::NotInStrip { s, u })
        }
    }

    /// The interval of stable leaves met by this point's unstable leaf.
    pub fn stable_interval(&self) -> (f64, f64) {
        (self.u - 1.0, self.u + 1.0)
    }

    /// Position in the drawing chart: the strip `(0, 1) x R` with stable
    /// leaves horizontal.
    pub fn chart(&self) -> [f64; 2] {
        [(self.s - self.u + 1.0) / 2.0, self.s]
    }
}

/// The deck transformation `(s, u) -> (f(s), f(u))`.
pub fn g_apply(m: &StripModel, p: OrbitPoint) -> OrbitPoint {
    OrbitPoint {
        s: m.pinch(p.s),
        u: m.pinch(p.u),
    }
}

pub fn is_fixed(m: &StripModel, p: OrbitPoint) -> bool {
    g_apply(m, p) == p
}

fn fixed_index(m: &StripModel, p: OrbitPoint) -> Result<i64, OrbitModelError> {
    if p.s == p.u && p.s.fract() == 0.0 && is_fixed(m, p) {
        Ok(p.s as i64)
    } else {
        Err(OrbitModelError::NotFixed { s: p.s, u: p.u })
    }
}

/// Orientation of the fixed orbit `(i, i)` relative to `(0, 0)`.
pub fn orientation(index: i64) -> i8 {
    if index.rem_euclid(2) == 0 {
        1
    } else {
        -1
    }
}

/// The fixed orbit on the upper boundary leaf of `J_u`.
pub fn next_orbit(m: &StripModel, p: OrbitPoint) -> Result<OrbitPoint, OrbitModelError> {
    fixed_index(m, p)?;
    let s = p.stable_interval().1;
    Ok(OrbitPoint { s, u: s })
}

/// The fixed orbit on the lower boundary leaf of `J_u`.
pub fn prev_orbit(m: &StripModel, p: OrbitPoint) -> Result<OrbitPoint, OrbitModelError> {
    fixed_index(m, p)?;
    let s = p.stable_interval().0;
    Ok(OrbitPoint { s, u: s })
}

fn grid(lo: i64, hi: i64, steps_per_unit: i64) -> impl Iterator<Item = f64> {
    let scale = steps_per_unit as f64;
    (lo * steps_per_unit..=hi * steps_per_unit).map(move |n| n as f64 / scale)
}

fn steps(resolution: f64) -> i64 {
    (1.0 / resolution).round().max(1.0) as i64
}

/// Zeros of `sin(pi t)` bracketed on the grid, refined by bisection. The
/// displacement of `f` is `eps sin^2(pi t)`, so these are its fixed points.
fn bracketed_roots(lo: i64, hi: i64, resolution: f64) -> Vec<f64> {
    let q = |t: f64| (PI * t).sin();
    let pts: Vec<f64> = grid(lo, hi, steps(resolution)).collect();
    let mut roots = Vec::new();
    for w in pts.windows(2) {
        let (mut a, mut b) = (w[0], w[1]);
        let (qa, qb) = (q(a), q(b));
        if qa == 0.0 {
            roots.push(a);
            continue;
        }
        if qa.signum() == qb.signum() {
            continue;
        }
        for _ in 0..80 {
            let c = 0.5 * (a + b);
            if q(c).signum() == qa.signum() {
                a = c;
            } else {
                b = c;
            }
        }
        roots.push(0.5 * (a + b));
    }
    roots
}

/// Snap a root within `1e-9` of an exact fixed point to it.
fn snap(m: &StripModel, r: f64) -> f64 {
    let n = r.round();
    if (r - n).abs() < 1e-9 && m.pinch(n) == n {
        n
    } else {
        r
    }
}

/// Fixed points of the pinch map in `[lo, hi]` found by a grid scan at the
/// given resolution.
pub fn fixed_points_in(m: &StripModel, lo: i64, hi: i64, resolution: f64) -> Vec<f64> {
    let mut out: Vec<f64> = bracketed_roots(lo - 1, hi + 1, resolution)
        .into_iter()
        .map(|r| snap(m, r))
        .filter(|r| *r >= lo as f64 && *r <= hi as f64 && m.displacement(*r) < 1e-12)
        .collect();
    out.dedup();
    out
}

/// Stable leaves `{s = c}` with `c` in `[-n, n]` left invariant by `g`.
pub fn invariant_stable_leaves(m: &StripModel, n: i64) -> Result<Vec<f64>, OrbitModelError> {
    if n < 1 {
        return Err(OrbitModelError::Window);
    }
    Ok(fixed_points_in(m, -n, n, 1e-4))
}

/// Grid points strictly between `i` and `i + 1` whose stable leaf is not
/// moved by `g`, including brackets of a sign change. Empty for the pinch map.
pub fn invariant_leaves_between(m: &StripModel, i: i64, resolution: f64) -> Vec<f64> {
    let pts: Vec<f64> = grid(i, i + 1, steps(resolution)).collect();
    let inner = &pts[1..pts.len() - 1];
    let mut found: Vec<f64> = inner.iter().copied().filter(|t| m.pinch(*t) <= *t).collect();
    found.extend(bracketed_roots(i, i + 1, resolution).into_iter().map(|r| snap(m, r)).filter(|r| *r > i as f64 && *r < (i + 1) as f64));
    found
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ClassEntry {
    pub index: i64,
    pub point: OrbitPoint,
    pub orientation: i8,
}

/// The fixed orbits `(i, i)`, `|i| <= k`, reached from `(0, 0)` by stepping
/// to boundary leaves; all are freely homotopic to the base orbit up to
/// orientation.
pub fn enumerate_class(m: &StripModel, k: usize) -> Vec<ClassEntry> {
    let origin = OrbitPoint { s: 0.0, u: 0.0 };
    let mut up = vec![origin];
    let mut down = Vec::new();
    let (mut a, mut b) = (origin, origin);
    for _ in 0..k {
        a = next_orbit(m, a).expect("fixed orbit");
        b = prev_orbit(m, b).expect("fixed orbit");
        up.push(a);
        down.push(b);
    }
    down.reverse();
    down.into_iter()
        .chain(up)
        .map(|p| {
            let index = p.s as i64;
            ClassEntry {
                index,
                point: p,
                orientation: orientation(index),
            }
        })
        .collect()
}

/// Drawing data for the strip: stable leaves `l_i`, unstable leaves through
/// the ladder, and the ladder of fixed orbits.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StripScene {
    pub schema_version: u32,
    pub epsilon: f64,
    pub k: usize,
    pub stable_leaves: Vec<f64>,
    pub unstable_leaves: Vec<f64>,
    pub ladder: Vec<ClassEntry>,
}

pub fn strip_scene(m: &StripModel, k: usize) -> StripScene {
    let ladder = enumerate_class(m, k);
    let leaves: Vec<f64> = ladder.iter().map(|e| e.point.s).collect();
    StripScene {
        schema_version: 1,
        epsilon: m.epsilon,
        k,
        stable_leaves: leaves.clone(),
        unstable_leaves: leaves,
        ladder,
    }
}

/// Suspension of a hyperbolic automorphism of the torus, with the lifted
/// metric `lambda1^(2t) dx^2 + lambda2^(-2t) dy^2 + dt^2`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SuspensionModel {
    monodromy: [[i64; 2]; 2],
    lambda1: f64,
    lambda2: f64,
}

impl SuspensionModel {
    pub fn new(monodromy: [[i64; 2]; 2]) -> Result<Self, OrbitModelError> {
        let [[a, b], [c, d]] = monodromy;
        let tr = a + d;
        if a * d - b * c != 1 || tr.abs() <= 2 {
            return Err(OrbitModelError::Monodromy(monodromy));
        }
        let t = tr.abs() as f64;
        let lambda = (t + (t * t - 4.0).sqrt()) / 2.0;
        Ok(SuspensionModel {
            monodromy,
            lambda1: lambda,
            lambda2: lambda,
        })
    }

    pub fn cat_map() -> Self {
        SuspensionModel::new([[2, 1], [1, 1]]).expect("cat map is hyperbolic")
    }

    pub fn monodromy(&self) -> [[i64; 2]; 2] {
        self.monodromy
    }

    pub fn lambda1(&self) -> f64 {
        self.lambda1
    }

    pub fn lambda2(&self) -> f64 {
        self.lambda2
    }
}

/// Point `(x, y, t)` of the universal cover.
pub type SpacePoint = [f64; 3];

pub fn suspension_flow(_sm: &SuspensionModel, p: SpacePoint, t: f64) -> SpacePoint {
    [p[0], p[1], p[2] + t]
}

fn gaps(p: SpacePoint, q: SpacePoint) -> Result<(f64, f64, f64), OrbitModelError> {
    if p == q {
        return Err(OrbitModelError::IdenticalPoints);
    }
    Ok(((p[0] - q[0]).abs(), (p[1] - q[1]).abs(), (p[2] - q[2]).abs()))
}

/// `max(lambda1^h |dx|, lambda2^-h |dy|, |dt|)` for the flowed points, with
/// `h` the height at which each coordinate gap is least expanded.
pub fn separation_lower_bound(sm: &SuspensionModel, p: SpacePoint, q: SpacePoint, t: f64) -> Result<f64, OrbitModelError> {
    let (dx, dy, dt) = gaps(p, q)?;
    let lo = p[2].min(q[2]) + t;
    let hi = p[2].max(q[2]) + t;
    Ok((sm.lambda1.powf(lo) * dx).max(sm.lambda2.powf(-hi) * dy).max(dt))
}

/// Lower bound for the distance between the flowed points over all paths.
///
/// A path that leaves the height band widened by `delta` has length at least
/// `2 delta`; one that stays inside pays at least the coordinate gaps at the
/// worst height of the band. The bound is the best `delta`.
pub fn ambient_separation_lower_bound(sm: &SuspensionModel, p: SpacePoint, q: SpacePoint, t: f64) -> Result<f64, OrbitModelError> {
    let (dx, dy, dt) = gaps(p, q)?;
    let lo = p[2].min(q[2]) + t;
    let hi = p[2].max(q[2]) + t;
    let inside = |d: f64| (sm.lambda1.powf(lo - d) * dx).max(sm.lambda2.powf(-hi - d) * dy);
    let (mut a, mut b) = (0.0_f64, inside(0.0) / 2.0);
    for _ in 0..200 {
        let c = 0.5 * (a + b);
        if 2.0 * c < inside(c) {
            a = c;
        } else {
            b = c;
        }
    }
    Ok((2.0 * a).max(dt))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SingletonReport {
    pub horizon: f64,
    pub samples: usize,
    pub sup_bound: f64,
    pub sup_time: f64,
    /// Least-squares slope of the log bound over `[0, T]`.
    pub forward_rate: f64,
    /// Same, over `[-T, 0]` against `-t`.
    pub backward_rate: f64,
    pub ambient_sup: f64,
    pub log_lambda1: f64,
    pub log_lambda2: f64,
    pub unbounded: bool,
}

fn slope(ts: &[f64], ys: &[f64]) -> f64 {
    let n = ts.len() as f64;
    let mt = ts.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let cov: f64 = ts.iter().zip(ys).map(|(t, y)| (t - mt) * (y - my)).sum();
    let var: f64 = ts.iter().map(|t| (t - mt).powi(2)).sum();
    cov / var
}

/// Sample the separation of the orbits through `p` and `q` over `[-T, T]`.
/// Distinct orbits separate exponentially in one time direction, so the
/// class of a closed orbit of a suspension is a single orbit.
pub fn singleton_check(sm: &SuspensionModel, p: SpacePoint, q: SpacePoint, horizon: f64) -> Result<SingletonReport, OrbitModelError> {
    let (dx, dy, _) = gaps(p, q)?;
    if dx == 0.0 && dy == 0.0 {
        return Err(OrbitModelError::SameOrbit);
    }
    let n = 2000;
    let times: Vec<f64> = (0..=n).map(|i| horizon * i as f64 / n as f64).collect();
    let fwd: Vec<f64> = times.iter().map(|t| separation_lower_bound(sm, p, q, *t)).collect::<Result<_, _>>()?;
    let bwd: Vec<f64> = times.iter().map(|t| separation_lower_bound(sm, p, q, -*t)).collect::<Result<_, _>>()?;
    let logs = |v: &[f64]| v.iter().map(|b| b.ln()).collect::<Vec<_>>();
    let forward_rate = slope(&times, &logs(&fwd));
    let backward_rate = slope(&times, &logs(&bwd));
    let (mut sup_bound, mut sup_time) = (f64::NEG_INFINITY, 0.0);
    for (i, t) in times.iter().enumerate() {
        for (b, s) in [(fwd[i], *t), (bwd[i], -*t)] {
            if b > sup_bound {
                sup_bound = b;
                sup_time = s;
            }
        }
    }
    let ambient_sup = ambient_separation_lower_bound(sm, p, q, horizon)?.max(ambient_separation_lower_bound(sm, p, q, -horizon)?);
    let (l1, l2) = (sm.lambda1.ln(), sm.lambda2.ln());
    Ok(SingletonReport {
        horizon,
        samples: 2 * n + 1,
        sup_bound,
        sup_time,
        forward_rate,
        backward_rate,
        ambient_sup,
        log_lambda1: l1,
        log_lambda2: l2,
        unbounded: forward_rate.max(backward_rate) > 0.5 * l1.min(l2),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum FlowDescriptor {
    Geodesic,
    SurgeredGeodesic,
    Suspension,
}

impl FromStr for FlowDescriptor {
    type Err = OrbitModelError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "geodesic" => Ok(FlowDescriptor::Geodesic),
            "surgered-geodesic" => Ok(FlowDescriptor::SurgeredGeodesic),
            "suspension" => Ok(FlowDescriptor::Suspension),
            _ => Err(OrbitModelError::UnknownDescriptor(s.to_string())),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ModelKind {
    Product,
    Skewed,
}

pub fn model_kind(desc: FlowDescriptor) -> ModelKind {
    match desc {
        FlowDescriptor::Suspension => ModelKind::Product,
        FlowDescriptor::Geodesic | FlowDescriptor::SurgeredGeodesic => ModelKind::Skewed,
    }
}
