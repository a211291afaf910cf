//! Geometric intersection numbers of closed geodesics.
//!
//! The count `i(w, v)` is the number of double cosets `<w> g <v>` for which
//! the axis of `g v g^-1` crosses the axis of `w`. Every crossing happens in
//! some tile `K P` meeting one period of the axis of `w`, where the crossing
//! lift is `K` applied to a translate of the axis of `v` through `P`. Both
//! families of tiles come from breadth-first searches restricted to thin
//! corridors, and the search depth plays the role of the radius. A count is reported once it agrees at radius `r` and
//! `r + 2` and the corridor was exhausted.

use std::collections::{HashSet, VecDeque};

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::domain::{domain_sequence, FundamentalDomain};
use crate::hyperbolic::{
    angular_distance, axis_endpoints, disk_distance, evaluate, normalize_angle, poincare_to_klein, translation_length,
    Axis, FuchsianRep, GeometryError, Mat2,
};
use crate::trace::{segment_crossing, trace_in_domain, GeodesicTrace, TraceError};
use crate::word::{
    canonical_conjugacy_form, dehn_reduce, invert, is_primitive, shortlex, CyclicWord, Letter, Word,
    WordError,
};

#[derive(Debug, Error)]
pub enum IntersectionError {
    #[error(transparent)]
    Word(#[from] WordError),
    #[error(transparent)]
    Geometry(#[from] GeometryError),
    #[error(transparent)]
    Trace(#[from] TraceError),
    #[error("axes share an endpoint: the geodesics are not transverse")]
    SharedAxis,
    #[error("both words give the same closed geodesic")]
    SameCurve,
    #[error("intersection count did not stabilise up to radius {cap} (last count {last_count})")]
    RadiusExhausted { cap: usize, last_count: usize },
    #[error("{0} is a proper power")]
    NotPrimitive(CyclicWord),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct IntersectionResult {
    pub count: usize,
    /// One `g` per double coset, in the coordinates of the input words.
    pub certificates: Vec<Word>,
    pub radius_used: usize,
    pub stable: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Linking {
    Linked,
    Unlinked,
    Same,
    SharedEndpoint,
}

fn linking(x: &Axis, y: &Axis) -> Linking {
    const EPS: f64 = 1e-9;
    let same = |p: f64, q: f64| angular_distance(p, q) < EPS;
    let shared = [
        same(x.attracting, y.attracting),
        same(x.attracting, y.repelling),
        same(x.repelling, y.attracting),
        same(x.repelling, y.repelling),
    ];
    match shared.iter().filter(|s| **s).count() {
        0 => {
            let rel = |t: f64| normalize_angle(t - x.repelling);
            let a = rel(x.attracting);
            let inside = |t: f64| rel(t) < a;
            if inside(y.attracting) != inside(y.repelling) {
                Linking::Linked
            } else {
                Linking::Unlinked
            }
        }
        1 => Linking::SharedEndpoint,
        _ => Linking::Same,
    }
}

/// Whether the endpoints of `y` separate those of `x` on the circle.
/// Endpoints within `1e-9` of each other mean a shared axis, which is an
/// error: such geodesics are not transverse.
pub fn axes_linked(x: &Axis, y: &Axis) -> Result<bool, IntersectionError> {
    match linking(x, y) {
        Linking::Linked => Ok(true),
        Linking::Unlinked => Ok(false),
        Linking::Same | Linking::SharedEndpoint => Err(IntersectionError::SharedAxis),
    }
}

/// Radius used when none is supplied.
pub fn default_radius(w: &CyclicWord, v: &CyclicWord, genus: usize) -> usize {
    w.len() + v.len() + 4 * genus
}

struct Lift {
    depth: usize,
    certificate: Word,
    key: (f64, f64),
}

struct Enumeration {
    lifts: Vec<Lift>,
    truncated: bool,
}

impl Enumeration {
    fn count_at(&self, r: usize) -> usize {
        self.lifts.iter().filter(|l| l.depth <= r).count()
    }
}

/// Conjugate `w` so its axis meets the regular polygon: returns the reduced
/// conjugate `t^-1 w t`, its translation length and `t`.
fn centred(w: &Word, rep: &FuchsianRep, domain: &FundamentalDomain) -> Result<(Word, f64, Word), GeometryError> {
    let m = evaluate(w, rep);
    let axis = axis_endpoints(&m)?;
    let ell = translation_length(&m)?;
    let (_, t, _) = domain.reduce_point(axis.closest_to_origin());
    let conj = dehn_reduce(&invert(&t).concat(w).concat(&t), rep.presentation());
    Ok((conj, ell, t))
}

struct Tile {
    /// Isometry taking the tile's coordinates to those centred at the point
    /// at signed distance `s` along the corridor axis, which becomes the
    /// real diameter.
    local: Mat2,
    s: f64,
    letters: Vec<Letter>,
    /// `H^-1 c H` for the corridor element `c`, reduced.
    conj: Word,
}

/// Tiles `H P` within `width` of one period of the axis of `c` (a reduced
/// word whose axis meets `P`), by breadth-first search up to `max_depth`
/// letters. The flag reports tiles left unreached.
///
/// The view from each tile is rebuilt from the short word `H^-1 c H`, whose
/// axis passes near `P`, instead of from the product of the path matrices,
/// so its accuracy does not decay along the corridor.
fn corridor(rep: &FuchsianRep, c: &Word, half: f64, width: f64, max_depth: usize) -> Result<(Vec<Tile>, bool), GeometryError> {
    let p = rep.presentation();
    let origin = Complex64::new(0.0, 0.0);
    let view = |conj: &Word| -> Result<Mat2, GeometryError> {
        Ok(axis_endpoints(&evaluate(conj, rep))?.frame().inverse())
    };
    let transverse = |local: &Mat2| 2.0 * local.apply_disk(origin).im.atanh();
    let key_of = |s: f64, y: f64| ((s * 1e5).round() as i64, (y * 1e5).round() as i64);
    let alphabet = p.alphabet();
    let gens: Vec<Mat2> = alphabet.iter().map(|l| rep.generator(*l)).collect();
    let local0 = view(c)?;
    let mut visited: HashSet<(i64, i64)> = HashSet::new();
    visited.insert(key_of(0.0, transverse(&local0)));
    let mut queue = VecDeque::new();
    queue.push_back(Tile {
        local: local0,
        s: 0.0,
        letters: Vec::new(),
        conj: c.clone(),
    });
    let mut out = Vec::new();
    let mut truncated = false;
    while let Some(tile) = queue.pop_front() {
        let depth = tile.letters.len();
        for (i, m) in gens.iter().enumerate() {
            let moved = tile.local * *m;
            let k = poincare_to_klein(moved.apply_disk(origin));
            let d = k[0].clamp(-1.0 + 1e-16, 1.0 - 1e-16).atanh();
            let s = tile.s + d;
            let y = 2.0 * Mat2::disk_translation(-d).apply_disk(moved.apply_disk(origin)).im.atanh();
            let off = (s.abs() - half).max(0.0);
            // Fermi coordinates: distance from (s, y) to the segment
            if (y.cosh() * off.cosh()).acosh() > width {
                continue;
            }
            let key = key_of(s, y);
            if visited.contains(&key) {
                continue;
            }
            if depth == max_depth {
                truncated = true;
                continue;
            }
            visited.insert(key);
            let g = alphabet[i];
            let conj = dehn_reduce(&Word::new(vec![g.inverse()]).concat(&tile.conj).concat(&Word::new(vec![g])), p);
            let local = view(&conj)?;
            let mut letters = tile.letters.clone();
            letters.push(g);
            queue.push_back(Tile { local, s, letters, conj });
        }
        out.push(tile);
    }
    Ok((out, truncated))
}

fn enumerate_lifts(w: &Word, v: &Word, rep: &FuchsianRep, max_depth: usize) -> Result<Enumeration, IntersectionError> {
    let domain = FundamentalDomain::from_rep(rep);
    let (cw, ell_w, tw) = centred(w, rep, &domain)?;
    let (cv, ell_v, tv) = centred(v, rep, &domain)?;
    if ell_v < ell_w - 1e-9 {
        // the corridor runs along the shorter axis; <v> g <w> pairs with <w> g^-1 <v>
        let mut e = enumerate_lifts(v, w, rep, max_depth)?;
        for l in &mut e.lifts {
            l.certificate = invert(&l.certificate);
        }
        return Ok(e);
    }
    let width = rep.circumradius() + 0.05;
    let origin = Complex64::new(0.0, 0.0);
    let diameter = Axis {
        attracting: 0.0,
        repelling: std::f64::consts::PI,
    };

    // translates H^-1 axis(v) = axis(H^-1 v H) passing through the polygon
    let (v_tiles, v_trunc) = corridor(rep, &cv, ell_v / 2.0, width, max_depth)?;
    let mut local: Vec<(Axis, usize, Word)> = Vec::new();
    for t in &v_tiles {
        let a = axis_endpoints(&evaluate(&t.conj, rep))?;
        if disk_distance(origin, a.closest_to_origin()) > width {
            continue;
        }
        let dup = local.iter().any(|(b, _, _)| {
            angular_distance(a.attracting, b.attracting) < 1e-7 && angular_distance(a.repelling, b.repelling) < 1e-7
        });
        if !dup {
            local.push((a, t.letters.len(), invert(&Word::new(t.letters.clone()))));
        }
    }

    let (w_tiles, w_trunc) = corridor(rep, &cw, ell_w / 2.0, width, max_depth)?;
    let tv_inv = invert(&tv);
    let per_tile: Vec<Result<Vec<Lift>, IntersectionError>> = w_tiles
        .par_iter()
        .map(|t| {
            let mut out = Vec::new();
            for (a, depth_v, h_inv) in &local {
                let lift = a.transformed(&t.local);
                match linking(&diameter, &lift) {
                    Linking::Linked => {}
                    // the lift is the axis of w itself: the trivial coset
                    Linking::Unlinked | Linking::Same => continue,
                    Linking::SharedEndpoint => return Err(IntersectionError::SharedAxis),
                }
                let (p, q) = (lift.attracting_point(), lift.repelling_point());
                let x = p.re + (q.re - p.re) * (-p.im) / (q.im - p.im);
                let offset = x.clamp(-1.0 + 1e-16, 1.0 - 1e-16).atanh();
                let direction = lift.transformed(&Mat2::disk_translation(-offset)).attracting;
                let s = (t.s + offset).rem_euclid(ell_w);
                out.push(Lift {
                    depth: t.letters.len().max(*depth_v),
                    certificate: tw.concat(&Word::new(t.letters.clone())).concat(h_inv).concat(&tv_inv),
                    key: (s, direction),
                });
            }
            Ok(out)
        })
        .collect();
    let mut found = Vec::new();
    for r in per_tile {
        found.extend(r?);
    }
    // keep the shallowest representative of each lift: a lift is fixed by
    // where it crosses the axis of w, modulo the period, and its direction.
    // The crossing point is ill-conditioned at shallow angles, so positions
    // are compared by the lateral offset they cause.
    found.sort_by_key(|l| l.depth);
    let mut lifts: Vec<Lift> = Vec::new();
    for l in found {
        let dup = lifts.iter().any(|o| {
            let ds = (o.key.0 - l.key.0).abs();
            let ds = ds.min(ell_w - ds);
            angular_distance(o.key.1, l.key.1) < 1e-7 && ds < 1e-3 && ds * l.key.1.sin().abs() < 1e-7
        });
        if !dup {
            lifts.push(l);
        }
    }
    Ok(Enumeration {
        lifts,
        truncated: v_trunc || w_trunc,
    })
}

/// Count of distinct crossing lifts found within each search depth
/// `0..=max_depth`, and whether the corridor was exhausted by `max_depth`.
pub fn intersection_profile(
    w: &CyclicWord,
    v: &CyclicWord,
    rep: &FuchsianRep,
    max_depth: usize,
) -> Result<(Vec<usize>, bool), IntersectionError> {
    let e = enumerate_lifts(&w.to_word(), &v.to_word(), rep, max_depth)?;
    Ok(((0..=max_depth).map(|r| e.count_at(r)).collect(), !e.truncated))
}

/// Geometric intersection number `i(w, v)`. For `v` equal to `w` or its
/// inverse this is twice the self-intersection number.
pub fn intersection_number(
    w: &CyclicWord,
    v: &CyclicWord,
    rep: &FuchsianRep,
    radius: Option<usize>,
) -> Result<IntersectionResult, IntersectionError> {
    let default = default_radius(w, v, rep.genus());
    let mut r = radius.unwrap_or(default).max(1);
    let cap = (2 * default).max(r);
    let p = rep.presentation();
    loop {
        let e = enumerate_lifts(&w.to_word(), &v.to_word(), rep, r + 2)?;
        let (at_r, at_r2) = (e.count_at(r), e.count_at(r + 2));
        log::debug!("i({w}, {v}) radius {r}: {at_r} / {at_r2}, truncated {}", e.truncated);
        if at_r == at_r2 && !e.truncated {
            let mut certificates: Vec<Word> = e.lifts.iter().map(|l| dehn_reduce(&l.certificate, p)).collect();
            certificates.sort_by(|a, b| shortlex(a.letters(), b.letters()));
            return Ok(IntersectionResult {
                count: at_r2,
                certificates,
                radius_used: r,
                stable: true,
            });
        }
        if r >= cap {
            return Err(IntersectionError::RadiusExhausted { cap, last_count: at_r2 });
        }
        r = (2 * r).min(cap);
    }
}

/// Number of transverse double points of the closed geodesic of `w`:
/// half the count of nontrivial double cosets `<w> g <w>` with linked axes.
pub fn self_intersection_number(w: &CyclicWord, rep: &FuchsianRep, radius: Option<usize>) -> Result<usize, IntersectionError> {
    require_primitive(w, rep)?;
    Ok(intersection_number(w, w, rep, radius)?.count / 2)
}

fn same_curve(w: &CyclicWord, v: &CyclicWord, rep: &FuchsianRep) -> Result<bool, WordError> {
    let p = rep.presentation();
    let inv = canonical_conjugacy_form(&invert(&v.to_word()), p)?;
    let cw = canonical_conjugacy_form(&w.to_word(), p)?;
    let cv = canonical_conjugacy_form(&v.to_word(), p)?;
    Ok(cw == cv || cw == inv)
}

fn require_primitive(w: &CyclicWord, rep: &FuchsianRep) -> Result<(), IntersectionError> {
    if is_primitive(w, rep.presentation())? {
        Ok(())
    } else {
        Err(IntersectionError::NotPrimitive(w.clone()))
    }
}

/// Run `f` on the regular polygon and then on the nudged Dirichlet domains
/// until one avoids every degeneracy.
pub fn with_generic_domain<T>(
    rep: &FuchsianRep,
    mut f: impl FnMut(&FundamentalDomain) -> Result<T, TraceError>,
) -> Result<T, IntersectionError> {
    let domains = domain_sequence(rep);
    for (i, d) in domains.iter().enumerate() {
        match f(d) {
            Ok(t) => return Ok(t),
            Err(TraceError::Degenerate) => log::debug!("domain {i} degenerate, trying the next"),
            Err(e) => return Err(e.into()),
        }
    }
    Err(TraceError::Degenerate.into())
}

fn crossings(a: &GeodesicTrace, b: &GeodesicTrace) -> Result<usize, TraceError> {
    let mut n = 0;
    for s in &a.segments {
        for t in &b.segments {
            if segment_crossing(s, t)?.is_some() {
                n += 1;
            }
        }
    }
    Ok(n)
}

fn self_crossings(a: &GeodesicTrace) -> Result<usize, TraceError> {
    let mut n = 0;
    for (i, s) in a.segments.iter().enumerate() {
        for t in &a.segments[i + 1..] {
            if segment_crossing(s, t)?.is_some() {
                n += 1;
            }
        }
    }
    Ok(n)
}

/// Self-intersection count from traced arcs in a fundamental domain.
pub fn tracing_self_count(w: &CyclicWord, rep: &FuchsianRep) -> Result<usize, IntersectionError> {
    require_primitive(w, rep)?;
    let word = w.to_word();
    with_generic_domain(rep, |d| self_crossings(&trace_in_domain(&word, rep, d)?))
}

/// Intersection count from traced arcs, independent of the lift search.
pub fn tracing_oracle_count(w: &CyclicWord, v: &CyclicWord, rep: &FuchsianRep) -> Result<usize, IntersectionError> {
    require_primitive(w, rep)?;
    require_primitive(v, rep)?;
    if same_curve(w, v, rep)? {
        return Err(IntersectionError::SameCurve);
    }
    let (ww, vw) = (w.to_word(), v.to_word());
    with_generic_domain(rep, |d| crossings(&trace_in_domain(&ww, rep, d)?, &trace_in_domain(&vw, rep, d)?))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hyperbolic::build_regular_rep;
    use crate::word::SurfacePresentation;

    fn class(p: &SurfacePresentation, s: &str) -> CyclicWord {
        canonical_conjugacy_form(&p.parse(s).unwrap(), p).unwrap()
    }

    #[test]
    fn linking_of_diameters() {
        let x = Axis { attracting: 0.0, repelling: std::f64::consts::PI };
        let y = Axis { attracting: 1.0, repelling: 4.0 };
        let z = Axis { attracting: 1.0, repelling: 2.0 };
        assert!(axes_linked(&x, &y).unwrap());
        assert!(!axes_linked(&x, &z).unwrap());
        assert!(matches!(axes_linked(&x, &x.reversed()), Err(IntersectionError::SharedAxis)));
        assert!(matches!(
            axes_linked(&x, &Axis { attracting: 0.0, repelling: 2.0 }),
            Err(IntersectionError::SharedAxis)
        ));
    }

    #[test]
    fn standard_generators() {
        let rep = build_regular_rep(2).unwrap();
        let p = rep.presentation().clone();
        let n = |a: &str, b: &str| intersection_number(&class(&p, a), &class(&p, b), &rep, None).unwrap().count;
        assert_eq!(n("a1", "b1"), 1);
        assert_eq!(n("a1", "a2"), 0);
        assert_eq!(n("a1", "b2"), 0);
        assert_eq!(n("a1", "a1"), 0);
        assert_eq!(n("b1", "A1"), 1);
    }

    #[test]
    fn certificates_conjugate_into_crossings() {
        let rep = build_regular_rep(2).unwrap();
        let p = rep.presentation().clone();
        let (w, v) = (class(&p, "a1b1a2"), class(&p, "b1b2"));
        let res = intersection_number(&w, &v, &rep, None).unwrap();
        assert_eq!(res.certificates.len(), res.count);
        let aw = axis_endpoints(&evaluate(&w.to_word(), &rep)).unwrap();
        for g in &res.certificates {
            let gvg = g.concat(&v.to_word()).concat(&invert(g));
            let ax = axis_endpoints(&evaluate(&gvg, &rep)).unwrap();
            assert!(axes_linked(&aw, &ax).unwrap());
        }
    }

    #[test]
    fn agrees_with_tracing() {
        let rep = build_regular_rep(2).unwrap();
        let p = rep.presentation().clone();
        for (a, b) in [("a1b1", "a1B1"), ("a1a1b1", "b1"), ("a1b2", "b1a2"), ("a1b1A1", "a2B2")] {
            let (w, v) = (class(&p, a), class(&p, b));
            let fast = intersection_number(&w, &v, &rep, None).unwrap().count;
            let slow = tracing_oracle_count(&w, &v, &rep).unwrap();
            assert_eq!(fast, slow, "{a} {b}");
        }
    }

    #[test]
    fn self_intersection_of_a_squared_b_squared() {
        let rep = build_regular_rep(2).unwrap();
        let p = rep.presentation().clone();
        let w = class(&p, "a1a1b1b1");
        let si = self_intersection_number(&w, &rep, None).unwrap();
        assert_eq!(si, tracing_self_count(&w, &rep).unwrap());
        assert_eq!(si, 1);
    }
}
