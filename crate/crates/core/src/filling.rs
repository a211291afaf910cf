//! Fat graph of a closed geodesic and the topology of its complement.
//!
//! Vertices are the self-intersection points of the geodesic, edges the arcs
//! between them. Each boundary walk of the ribbon neighbourhood carries the
//! product of edge holonomies along it; a walk bounds a disk exactly when
//! that product is trivial in the surface group.

use serde::Serialize;
use thiserror::Error;

use crate::domain::FundamentalDomain;
use crate::hyperbolic::FuchsianRep;
use crate::intersection::{with_generic_domain, IntersectionError};
use crate::trace::{segment_crossing, segment_point, trace_in_domain, GeodesicTrace, TraceError};
use crate::word::{
    canonical_conjugacy_form, dehn_reduce, enumerate_classes, invert, is_primitive, CyclicWord, Word, WordError,
};

#[derive(Debug, Error)]
pub enum FillingError {
    #[error(transparent)]
    Word(#[from] WordError),
    #[error(transparent)]
    Intersection(#[from] IntersectionError),
    #[error("{0} is a proper power")]
    NotPrimitive(CyclicWord),
    #[error("{0} fills the surface; the complement is a union of disks")]
    Fills(CyclicWord),
}

/// A point where the curve passes, as arc index and parameter along the arc.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct Occurrence {
    pub segment: usize,
    pub param: f64,
    pub vertex: usize,
}

#[derive(Debug, Clone, Serialize)]
pub struct FatEdge {
    pub from: usize,
    pub to: usize,
    /// Product of the side pairings crossed along the edge.
    pub holonomy: Word,
}

/// Half-edge: `forward` darts leave their vertex along the curve.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Dart {
    pub edge: usize,
    pub forward: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct FatGraph {
    pub curve: CyclicWord,
    pub genus: usize,
    pub vertex_count: usize,
    pub edges: Vec<FatEdge>,
    /// Darts around each vertex in counterclockwise order.
    pub rotation: Vec<Vec<Dart>>,
    /// Period word of the traced lift, conjugate to the curve.
    pub period: Word,
}

#[derive(Debug, Clone, Serialize)]
pub struct Walk {
    pub darts: Vec<Dart>,
    pub holonomy: Word,
    pub is_disk: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum TriState {
    True,
    False,
    Indeterminate,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct EulerData {
    pub vertices: usize,
    pub edges: usize,
    pub surface_chi: i64,
    pub graph_chi: i64,
    pub complement_chi: i64,
}

#[derive(Debug, Clone, Serialize)]
pub struct ComplementReport {
    pub walks: Vec<Walk>,
    pub fills: bool,
    pub nonannular_complement: TriState,
    pub euler_data: EulerData,
    pub disk_walks: usize,
    pub remaining_chi: i64,
}

fn curve_order(trace: &GeodesicTrace) -> Result<(Vec<Occurrence>, usize), TraceError> {
    let segs = &trace.segments;
    let mut occ = Vec::new();
    let mut v = 0;
    for i in 0..segs.len() {
        for j in i + 1..segs.len() {
            if let Some((s, t)) = segment_crossing(&segs[i], &segs[j])? {
                occ.push(Occurrence {
                    segment: i,
                    param: s,
                    vertex: v,
                });
                occ.push(Occurrence {
                    segment: j,
                    param: t,
                    vertex: v,
                });
                v += 1;
            }
        }
    }
    occ.sort_by(|a, b| a.segment.cmp(&b.segment).then(a.param.total_cmp(&b.param)));
    Ok((occ, v))
}

fn direction(trace: &GeodesicTrace, segment: usize) -> f64 {
    let s = &trace.segments[segment];
    (s.end[1] - s.start[1]).atan2(s.end[0] - s.start[0])
}

fn build_in(curve: &CyclicWord, rep: &FuchsianRep, domain: &FundamentalDomain) -> Result<FatGraph, TraceError> {
    let trace = trace_in_domain(&curve.to_word(), rep, domain)?;
    let (occ, vertex_count) = curve_order(&trace)?;
    let m = trace.segments.len();
    let n = occ.len();
    let mut edges = Vec::with_capacity(n);
    for k in 0..n {
        let (a, b) = (occ[k], occ[(k + 1) % n]);
        // arcs a.segment .. b.segment, wrapping once for the last edge
        let mut letters = Vec::new();
        let mut seg = a.segment;
        let wraps = k + 1 == n;
        let mut steps = if wraps { b.segment + m - a.segment } else { b.segment - a.segment };
        if n == 1 {
            steps = m;
        }
        for _ in 0..steps {
            letters.extend_from_slice(trace.segments[seg].exit_label.letters());
            seg = (seg + 1) % m;
        }
        edges.push(FatEdge {
            from: a.vertex,
            to: b.vertex,
            holonomy: Word::new(letters),
        });
    }
    if n == 0 {
        // a simple curve: one closed edge without vertices
        edges.push(FatEdge {
            from: 0,
            to: 0,
            holonomy: trace.period.clone(),
        });
    }
    let mut rotation: Vec<Vec<(f64, Dart)>> = vec![Vec::new(); vertex_count];
    for k in 0..n {
        let o = occ[k];
        let theta = direction(&trace, o.segment);
        rotation[o.vertex].push((
            theta,
            Dart {
                edge: k,
                forward: true,
            },
        ));
        rotation[o.vertex].push((
            theta + std::f64::consts::PI,
            Dart {
                edge: (k + n - 1) % n,
                forward: false,
            },
        ));
    }
    let rotation = rotation
        .into_iter()
        .map(|mut darts| {
            for d in &mut darts {
                d.0 = d.0.rem_euclid(2.0 * std::f64::consts::PI);
            }
            darts.sort_by(|a, b| a.0.total_cmp(&b.0));
            darts.into_iter().map(|(_, d)| d).collect()
        })
        .collect();
    Ok(FatGraph {
        curve: curve.clone(),
        genus: rep.genus(),
        vertex_count,
        edges,
        rotation,
        period: trace.period,
    })
}

/// Fat graph of the closed geodesic of a primitive class.
pub fn build_fatgraph(curve: &CyclicWord, rep: &FuchsianRep) -> Result<FatGraph, FillingError> {
    if !is_primitive(curve, rep.presentation())? {
        return Err(FillingError::NotPrimitive(curve.clone()));
    }
    Ok(with_generic_domain(rep, |d| build_in(curve, rep, d))?)
}

impl FatGraph {
    /// Euler characteristic of the graph (a circle when there are no
    /// crossings).
    pub fn graph_chi(&self) -> i64 {
        if self.vertex_count == 0 {
            0
        } else {
            self.vertex_count as i64 - self.edges.len() as i64
        }
    }

    fn end_vertex(&self, d: Dart) -> usize {
        let e = &self.edges[d.edge];
        if d.forward {
            e.to
        } else {
            e.from
        }
    }
}

/// Boundary walks of the ribbon neighbourhood with their holonomies.
pub fn boundary_walks(g: &FatGraph, rep: &FuchsianRep) -> Vec<Walk> {
    let p = rep.presentation();
    if g.vertex_count == 0 {
        return [(g.period.clone(), true), (invert(&g.period), false)]
            .into_iter()
            .map(|(w, forward)| {
                let h = dehn_reduce(&w, p);
                Walk {
                    darts: vec![Dart { edge: 0, forward }],
                    is_disk: h.is_empty(),
                    holonomy: h,
                }
            })
            .collect();
    }
    let darts: Vec<Dart> = (0..g.edges.len())
        .flat_map(|e| [Dart { edge: e, forward: true }, Dart { edge: e, forward: false }])
        .collect();
    let index = |d: Dart| 2 * d.edge + usize::from(!d.forward);
    let mut seen = vec![false; darts.len()];
    let mut walks = Vec::new();
    for &start in &darts {
        if seen[index(start)] {
            continue;
        }
        let mut d = start;
        let mut path = Vec::new();
        let mut letters = Vec::new();
        loop {
            seen[index(d)] = true;
            path.push(d);
            let h = &g.edges[d.edge].holonomy;
            if d.forward {
                letters.extend_from_slice(h.letters());
            } else {
                letters.extend_from_slice(invert(h).letters());
            }
            // arrive at the far end, then turn to the next dart counterclockwise
            let v = g.end_vertex(d);
            let arrived = Dart {
                edge: d.edge,
                forward: !d.forward,
            };
            let around = &g.rotation[v];
            let pos = around.iter().position(|x| *x == arrived).expect("dart in rotation");
            d = around[(pos + 1) % around.len()];
            if d == start {
                break;
            }
        }
        let h = dehn_reduce(&Word::new(letters), p);
        walks.push(Walk {
            darts: path,
            is_disk: h.is_empty(),
            holonomy: h,
        });
    }
    walks
}

/// Pure χ bookkeeping: `true` when the non-disk part of the complement has
/// negative Euler characteristic.
pub fn complement_verdict(genus: usize, vertices: usize, disk_walks: usize) -> (i64, TriState) {
    let total = 2 - 2 * genus as i64 + vertices as i64;
    let remaining = total - disk_walks as i64;
    let verdict = if remaining < 0 { TriState::True } else { TriState::Indeterminate };
    (remaining, verdict)
}

/// Full complement report of a primitive class.
pub fn complement_report(curve: &CyclicWord, rep: &FuchsianRep) -> Result<ComplementReport, FillingError> {
    let g = build_fatgraph(curve, rep)?;
    Ok(report_for(&g, rep))
}

pub fn report_for(g: &FatGraph, rep: &FuchsianRep) -> ComplementReport {
    let walks = boundary_walks(g, rep);
    let fills = walks.iter().all(|w| w.is_disk);
    let disk_walks = walks.iter().filter(|w| w.is_disk).count();
    let surface_chi = 2 - 2 * g.genus as i64;
    let graph_chi = g.graph_chi();
    let (remaining_chi, verdict) = complement_verdict(g.genus, g.vertex_count, disk_walks);
    ComplementReport {
        fills,
        nonannular_complement: if fills { TriState::False } else { verdict },
        euler_data: EulerData {
            vertices: g.vertex_count,
            edges: g.edges.len(),
            surface_chi,
            graph_chi,
            complement_chi: surface_chi - graph_chi,
        },
        disk_walks,
        remaining_chi,
        walks,
    }
}

/// Whether the geodesic fills the surface.
pub fn fills(curve: &CyclicWord, rep: &FuchsianRep) -> Result<bool, FillingError> {
    Ok(complement_report(curve, rep)?.fills)
}

/// Whether some complementary component is neither a disk nor an annulus.
pub fn has_nonannular_complement(curve: &CyclicWord, rep: &FuchsianRep) -> Result<TriState, FillingError> {
    let r = complement_report(curve, rep)?;
    if r.fills {
        return Err(FillingError::Fills(curve.clone()));
    }
    Ok(r.nonannular_complement)
}

/// First primitive class, in shortlex order of canonical forms up to length
/// `max_len`, that uses every generator and fills the surface.
pub fn find_filling_word(rep: &FuchsianRep, max_len: usize) -> Result<Option<(CyclicWord, ComplementReport)>, FillingError> {
    let p = rep.presentation();
    let need = 2 * rep.genus();
    for len in need..=max_len {
        for c in enumerate_classes(p, len).into_iter().filter(|c| c.len() == len) {
            let mut gens: Vec<usize> = c.letters().iter().map(|l| l.generator()).collect();
            gens.sort_unstable();
            gens.dedup();
            if gens.len() < need || !is_primitive(&c, p)? {
                continue;
            }
            let r = complement_report(&c, rep)?;
            if r.fills {
                return Ok(Some((c, r)));
            }
        }
    }
    Ok(None)
}

/// Canonical class of a word string.
pub fn parse_class(s: &str, rep: &FuchsianRep) -> Result<CyclicWord, WordError> {
    canonical_conjugacy_form(&rep.presentation().parse(s)?, rep.presentation())
}

/// Crossing point of two occurrences of a vertex, for drawing.
pub fn vertex_points(curve: &CyclicWord, rep: &FuchsianRep) -> Result<Vec<[f64; 2]>, FillingError> {
    Ok(with_generic_domain(rep, |d| {
        let t = trace_in_domain(&curve.to_word(), rep, d)?;
        let (occ, v) = curve_order(&t)?;
        let mut pts = vec![[0.0; 2]; v];
        for o in occ {
            pts[o.vertex] = segment_point(&t.segments[o.segment], o.param);
        }
        Ok(pts)
    })?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hyperbolic::build_regular_rep;
    use crate::intersection::self_intersection_number;

    #[test]
    fn generator_is_a_single_edge() {
        let rep = build_regular_rep(2).unwrap();
        let a = parse_class("a1", &rep).unwrap();
        let g = build_fatgraph(&a, &rep).unwrap();
        assert_eq!(g.vertex_count, 0);
        let walks = boundary_walks(&g, &rep);
        assert_eq!(walks.len(), 2);
        assert!(walks.iter().all(|w| !w.is_disk));
        assert!(!fills(&a, &rep).unwrap());
        assert_eq!(has_nonannular_complement(&a, &rep).unwrap(), TriState::True);
    }

    #[test]
    fn vertex_count_matches_self_intersection() {
        let rep = build_regular_rep(2).unwrap();
        for s in ["a1a1b1b1", "a1b1A1B1", "a1b2a1B2", "a1a1b1a2b2"] {
            let c = parse_class(s, &rep).unwrap();
            let g = build_fatgraph(&c, &rep).unwrap();
            assert_eq!(g.vertex_count, self_intersection_number(&c, &rep, None).unwrap(), "{s} {c}");
            assert!(g.rotation.iter().all(|r| r.len() == 4));
            let walks = boundary_walks(&g, &rep);
            let used: usize = walks.iter().map(|w| w.darts.len()).sum();
            assert_eq!(used, 2 * g.edges.len());
        }
    }

    #[test]
    fn proper_powers_are_rejected() {
        let rep = build_regular_rep(2).unwrap();
        let c = parse_class("a1b1a1b1", &rep).unwrap();
        assert!(matches!(build_fatgraph(&c, &rep), Err(FillingError::NotPrimitive(_))));
    }

    #[test]
    fn verdict_arithmetic() {
        assert_eq!(complement_verdict(2, 0, 0), (-2, TriState::True));
        assert_eq!(complement_verdict(2, 2, 0), (0, TriState::Indeterminate));
        assert_eq!(complement_verdict(2, 3, 2), (-1, TriState::True));
    }
}
