//! Cutting a closed geodesic into arcs inside a fundamental domain.

use serde::Serialize;
use thiserror::Error;

use crate::domain::FundamentalDomain;
use crate::hyperbolic::{
    axis_endpoints, evaluate, klein_distance, klein_to_poincare, poincare_to_klein,
    translation_length, FuchsianRep, GeometryError,
};
use crate::tolerance;
use crate::word::{dehn_reduce, invert, CyclicWord, Word};

#[derive(Debug, Error)]
pub enum TraceError {
    #[error(transparent)]
    Geometry(#[from] GeometryError),
    #[error("geodesic meets a domain vertex or a crossing sits on the domain boundary")]
    Degenerate,
    #[error("trace did not close after {0} arcs")]
    NoClosure(usize),
    #[error("arcs of the two geodesics overlap")]
    SharedAxis,
}

/// One arc of the geodesic inside the domain, oriented along the flow.
#[derive(Debug, Clone, Serialize)]
pub struct TraceSegment {
    pub start: [f64; 2],
    pub end: [f64; 2],
    /// Index of the domain edge the arc leaves through.
    pub exit_edge: usize,
    /// Group element across the exit edge.
    pub exit_label: Word,
    pub length: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct GeodesicTrace {
    pub segments: Vec<TraceSegment>,
    /// Product of the exit labels; translates the traced lift by one period.
    pub period: Word,
    pub length: f64,
    pub closure_defect: f64,
}

fn on_circle(t: f64) -> [f64; 2] {
    [t.cos(), t.sin()]
}

fn lerp(p: [f64; 2], q: [f64; 2], t: f64) -> [f64; 2] {
    [p[0] + t * (q[0] - p[0]), p[1] + t * (q[1] - p[1])]
}

fn euclid(p: [f64; 2], q: [f64; 2]) -> f64 {
    ((p[0] - q[0]).powi(2) + (p[1] - q[1]).powi(2)).sqrt()
}

/// Portion of the chord `pa -> pb` inside the domain, with the exit edge.
fn clip_chord(domain: &FundamentalDomain, pa: [f64; 2], pb: [f64; 2]) -> Result<(f64, f64, usize), TraceError> {
    let (mut lin, mut lout, mut exit) = (0.0_f64, 1.0_f64, None);
    for (i, e) in domain.edges().iter().enumerate() {
        let (fa, fb) = (e.side_value(pa), e.side_value(pb));
        let den = fb - fa;
        if den.abs() < 1e-15 {
            if fa < 0.0 {
                return Err(TraceError::Degenerate);
            }
            continue;
        }
        let t = -fa / den;
        if den > 0.0 {
            lin = lin.max(t);
        } else if t < lout {
            lout = t;
            exit = Some(i);
        }
    }
    match exit {
        Some(i) if lout - lin > tolerance::DEGENERACY => Ok((lin, lout, i)),
        _ => Err(TraceError::Degenerate),
    }
}

/// Trace the closed geodesic of `w` through `domain`.
///
/// The chord in the domain at each step is recomputed from the conjugate of
/// `w` it is the axis of, kept as a reduced word, so rounding errors do not
/// grow along the flow.
pub fn trace_in_domain(w: &Word, rep: &FuchsianRep, domain: &FundamentalDomain) -> Result<GeodesicTrace, TraceError> {
    let p = rep.presentation();
    let m = evaluate(w, rep);
    let axis = axis_endpoints(&m)?;
    let ell = translation_length(&m)?;
    let (_, t, _) = domain.reduce_point(axis.closest_to_origin());
    // the lift through the domain is the axis of t^-1 w t
    let first = dehn_reduce(&invert(&t).concat(w).concat(&t), p);
    let mut current = first.clone();
    let vertices = domain.vertices();
    let near_vertex = |p: [f64; 2]| vertices.iter().any(|v| euclid(*v, p) < tolerance::DEGENERACY);
    let cap = 4096 + 64 * w.len();
    let mut segments: Vec<TraceSegment> = Vec::new();
    let mut period = Vec::new();
    loop {
        if segments.len() >= cap {
            return Err(TraceError::NoClosure(cap));
        }
        let chord = axis_endpoints(&evaluate(&current, rep))?;
        let (pa, pb) = (on_circle(chord.repelling), on_circle(chord.attracting));
        let (lin, lout, exit) = clip_chord(domain, pa, pb)?;
        let (start, end) = (lerp(pa, pb, lin), lerp(pa, pb, lout));
        if near_vertex(start) || near_vertex(end) {
            return Err(TraceError::Degenerate);
        }
        let edge = &domain.edges()[exit];
        segments.push(TraceSegment {
            start,
            end,
            exit_edge: exit,
            exit_label: edge.label.clone(),
            length: klein_distance(start, end),
        });
        period.extend_from_slice(edge.label.letters());
        current = dehn_reduce(&invert(&edge.label).concat(&current).concat(&edge.label), p);
        if current == first {
            break;
        }
    }
    let last = segments.last().expect("at least one arc");
    let back = domain.edges()[last.exit_edge].matrix.inverse();
    let wrapped = poincare_to_klein(back.apply_disk(klein_to_poincare(last.end)));
    let closure_defect = klein_distance(wrapped, segments[0].start);
    let length: f64 = segments.iter().map(|s| s.length).sum();
    if closure_defect > tolerance::CLOSURE || (length - ell).abs() > tolerance::CLOSURE * ell.max(1.0) {
        return Err(TraceError::NoClosure(segments.len()));
    }
    Ok(GeodesicTrace {
        segments,
        period: Word::new(period),
        length,
        closure_defect,
    })
}

/// Trace through the regular polygon of the representation.
pub fn geodesic_trace(w: &CyclicWord, rep: &FuchsianRep) -> Result<GeodesicTrace, TraceError> {
    trace_in_domain(&w.to_word(), rep, &FundamentalDomain::from_rep(rep))
}

fn cross(u: [f64; 2], v: [f64; 2]) -> f64 {
    u[0] * v[1] - u[1] * v[0]
}

/// Transverse crossing of two arcs, as the parameters along each arc.
/// Crossings on an arc endpoint are degenerate: they lie on the domain
/// boundary and would be seen from both sides.
pub fn segment_crossing(p: &TraceSegment, q: &TraceSegment) -> Result<Option<(f64, f64)>, TraceError> {
    let r = [p.end[0] - p.start[0], p.end[1] - p.start[1]];
    let u = [q.end[0] - q.start[0], q.end[1] - q.start[1]];
    let d = [q.start[0] - p.start[0], q.start[1] - p.start[1]];
    let den = cross(r, u);
    let (lr, lu) = (euclid(p.start, p.end), euclid(q.start, q.end));
    if den.abs() < 1e-13 * lr * lu {
        if cross(d, r).abs() < tolerance::DEGENERACY * lr {
            let t0 = (d[0] * r[0] + d[1] * r[1]) / (lr * lr);
            let t1 = t0 + (u[0] * r[0] + u[1] * r[1]) / (lr * lr);
            if t0.max(t1) > 0.0 && t0.min(t1) < 1.0 {
                return Err(TraceError::SharedAxis);
            }
        }
        return Ok(None);
    }
    let s = cross(d, u) / den;
    let t = cross(d, r) / den;
    let (es, et) = (tolerance::DEGENERACY / lr, tolerance::DEGENERACY / lu);
    if s < -es || s > 1.0 + es || t < -et || t > 1.0 + et {
        return Ok(None);
    }
    if s < es || s > 1.0 - es || t < et || t > 1.0 - et {
        return Err(TraceError::Degenerate);
    }
    Ok(Some((s, t)))
}

/// Point at parameter `s` along an arc.
pub fn segment_point(p: &TraceSegment, s: f64) -> [f64; 2] {
    lerp(p.start, p.end, s)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hyperbolic::build_regular_rep;
    use crate::word::{canonical_conjugacy_form, SurfacePresentation};

    #[test]
    fn trace_closes_with_the_right_length() {
        let rep = build_regular_rep(2).unwrap();
        let p = SurfacePresentation::new(2).unwrap();
        for s in ["a1b1", "a1a1b2", "a1B1a2", "b1A2B2a1b2"] {
            let w = canonical_conjugacy_form(&p.parse(s).unwrap(), &p).unwrap();
            let t = match geodesic_trace(&w, &rep) {
                Ok(t) => t,
                Err(TraceError::Degenerate) => continue,
                Err(e) => panic!("{s}: {e}"),
            };
            let ell = translation_length(&evaluate(&w.to_word(), &rep)).unwrap();
            assert!((t.length - ell).abs() < 1e-6, "{s}");
            assert!(t.closure_defect < 1e-6);
            let period = canonical_conjugacy_form(&t.period, &p).unwrap();
            assert_eq!(period, w, "{s}");
        }
    }

    #[test]
    fn generator_axis_is_a_single_arc() {
        // a1 translates between the midpoints of paired sides; its geodesic
        // is a side bisector and avoids the vertices
        let rep = build_regular_rep(2).unwrap();
        let p = SurfacePresentation::new(2).unwrap();
        let w = canonical_conjugacy_form(&p.parse("a1").unwrap(), &p).unwrap();
        let t = geodesic_trace(&w, &rep).unwrap();
        assert_eq!(t.segments.len(), 1);
    }
}
