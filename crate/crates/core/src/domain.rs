//! Fundamental domains as convex polygons in the Klein model.
//!
//! Every edge carries the group element whose translate of the domain lies
//! across it. The regular 4g-gon of a [`FuchsianRep`] is one such domain;
//! Dirichlet domains centred at points other than the origin give
//! combinatorially different domains for the same group, which is how
//! traces avoid passing through a vertex.

use std::collections::{HashMap, HashSet, VecDeque};
use std::f64::consts::PI;
use std::sync::{Arc, Mutex, OnceLock};

use num_complex::Complex64;

use crate::hyperbolic::{
    disk_distance, evaluate, klein_to_poincare, poincare_to_klein, FuchsianRep, GeometryError, Mat2,
};
use crate::word::{dehn_reduce, Word};

/// Centres for the nudged Dirichlet domains, tried in order.
pub const NUDGED_CENTERS: [(f64, f64); 4] = [(0.037, 0.61), (0.029, 2.3), (0.051, 4.1), (0.043, 5.5)];

#[derive(Debug, Clone)]
pub struct DomainEdge {
    pub label: Word,
    pub matrix: Mat2,
    pub start: [f64; 2],
    pub end: [f64; 2],
    // inside is n[0] + n[1] x + n[2] y >= 0, with (n[1], n[2]) a unit vector
    normal: [f64; 3],
}

impl DomainEdge {
    pub fn side_value(&self, k: [f64; 2]) -> f64 {
        self.normal[0] + self.normal[1] * k[0] + self.normal[2] * k[1]
    }
}

#[derive(Debug, Clone)]
pub struct FundamentalDomain {
    center: Complex64,
    edges: Vec<DomainEdge>,
}

fn hyperboloid(z: Complex64) -> [f64; 3] {
    let r = z.norm_sqr();
    let s = 1.0 / (1.0 - r);
    [(1.0 + r) * s, 2.0 * z.re * s, 2.0 * z.im * s]
}

/// Half-plane of points at least as close to `c` as to `gc`.
fn bisector(c: Complex64, gc: Complex64) -> [f64; 3] {
    let (x, y) = (hyperboloid(c), hyperboloid(gc));
    let n = [-(x[0] - y[0]), x[1] - y[1], x[2] - y[2]];
    let scale = (n[1] * n[1] + n[2] * n[2]).sqrt();
    [n[0] / scale, n[1] / scale, n[2] / scale]
}

struct Candidate {
    word: Word,
    matrix: Mat2,
    distance: f64,
}

impl FundamentalDomain {
    /// The regular polygon of the representation, centred at the origin.
    pub fn from_rep(rep: &FuchsianRep) -> Self {
        let n = rep.polygon().len();
        let origin = Complex64::new(0.0, 0.0);
        let edges = (0..n)
            .map(|k| {
                let label = rep.side_labels()[k];
                let matrix = rep.generator(label);
                DomainEdge {
                    label: Word::new(vec![label]),
                    matrix,
                    start: poincare_to_klein(rep.polygon()[k]),
                    end: poincare_to_klein(rep.polygon()[(k + 1) % n]),
                    normal: bisector(origin, matrix.apply_disk(origin)),
                }
            })
            .collect();
        FundamentalDomain {
            center: origin,
            edges,
        }
    }

    /// Dirichlet domain centred at `center`, built from the group elements
    /// moving `center` by at most `reach` and checked against the expected
    /// area.
    pub fn dirichlet(rep: &FuchsianRep, center: Complex64, reach: f64) -> Result<Self, GeometryError> {
        let candidates = ball_elements(rep, center, reach);
        let mut poly: Vec<([f64; 2], Option<usize>)> = vec![
            ([-1.5, -1.5], None),
            ([1.5, -1.5], None),
            ([1.5, 1.5], None),
            ([-1.5, 1.5], None),
        ];
        let normals: Vec<[f64; 3]> = candidates
            .iter()
            .map(|c| bisector(center, c.matrix.apply_disk(center)))
            .collect();
        for (idx, n) in normals.iter().enumerate() {
            poly = clip(&poly, *n, idx);
            if poly.len() < 3 {
                return Err(GeometryError::InvalidRepresentation("empty Dirichlet domain".into()));
            }
        }
        let mut edges = Vec::with_capacity(poly.len());
        for i in 0..poly.len() {
            let (start, label) = poly[i];
            let end = poly[(i + 1) % poly.len()].0;
            let idx = label.ok_or_else(|| {
                GeometryError::InvalidRepresentation("Dirichlet domain not closed; raise reach".into())
            })?;
            let c = &candidates[idx];
            edges.push(DomainEdge {
                label: c.word.clone(),
                matrix: c.matrix,
                start,
                end,
                normal: normals[idx],
            });
        }
        let domain = FundamentalDomain { center, edges };
        let expected = 4.0 * PI * (rep.genus() as f64 - 1.0);
        let area = domain.area();
        if (area - expected).abs() > 1e-6 {
            return Err(GeometryError::InvalidRepresentation(format!(
                "Dirichlet domain area {area}, expected {expected}"
            )));
        }
        Ok(domain)
    }

    /// Dirichlet domain at the `index`-th nudged centre.
    pub fn nudged(rep: &FuchsianRep, index: usize) -> Result<Self, GeometryError> {
        let (r, theta) = NUDGED_CENTERS[index % NUDGED_CENTERS.len()];
        let c = Complex64::from_polar(r, theta);
        let reach = 2.0 * rep.circumradius() + 2.0 * disk_distance(Complex64::new(0.0, 0.0), c);
        Self::dirichlet(rep, c, reach + 0.1).or_else(|_| Self::dirichlet(rep, c, reach + 1.0))
    }

    pub fn center(&self) -> Complex64 {
        self.center
    }

    pub fn edges(&self) -> &[DomainEdge] {
        &self.edges
    }

    pub fn vertices(&self) -> Vec<[f64; 2]> {
        self.edges.iter().map(|e| e.start).collect()
    }

    pub fn contains(&self, k: [f64; 2], tol: f64) -> bool {
        self.edges.iter().all(|e| e.side_value(k) >= -tol)
    }

    /// Hyperbolic area from the angle sum.
    pub fn area(&self) -> f64 {
        let n = self.edges.len();
        let verts: Vec<Complex64> = self.vertices().into_iter().map(klein_to_poincare).collect();
        let angles: f64 = (0..n)
            .map(|k| {
                let v = verts[k];
                let to0 = |z: Complex64| (z - v) / (Complex64::new(1.0, 0.0) - v.conj() * z);
                let (a, b) = (to0(verts[(k + n - 1) % n]), to0(verts[(k + 1) % n]));
                let d = (a.arg() - b.arg()).abs();
                d.min(2.0 * PI - d)
            })
            .sum();
        (n as f64 - 2.0) * PI - angles
    }

    /// Move a disk point into the domain: returns `(q, t, T)` with `z = T q`
    /// and `T` the matrix of the word `t`.
    pub fn reduce_point(&self, z: Complex64) -> (Complex64, Word, Mat2) {
        let mut q = z;
        let mut letters = Vec::new();
        let mut m = Mat2::IDENTITY;
        for _ in 0..10_000 {
            let k = poincare_to_klein(q);
            let worst = self
                .edges
                .iter()
                .map(|e| (e.side_value(k), e))
                .min_by(|a, b| a.0.total_cmp(&b.0));
            match worst {
                Some((v, e)) if v < -1e-12 => {
                    q = e.matrix.inverse().apply_disk(q);
                    letters.extend_from_slice(e.label.letters());
                    m = m * e.matrix;
                }
                _ => break,
            }
        }
        (q, Word::new(letters), m)
    }
}

/// The regular polygon followed by the nudged Dirichlet domains that could
/// be built, memoised per genus.
pub fn domain_sequence(rep: &FuchsianRep) -> Arc<Vec<FundamentalDomain>> {
    static CACHE: OnceLock<Mutex<HashMap<usize, Arc<Vec<FundamentalDomain>>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(found) = cache.lock().expect("domain cache poisoned").get(&rep.genus()) {
        return found.clone();
    }
    let mut domains = vec![FundamentalDomain::from_rep(rep)];
    for i in 0..NUDGED_CENTERS.len() {
        match FundamentalDomain::nudged(rep, i) {
            Ok(d) => domains.push(d),
            Err(e) => log::warn!("nudged domain {i} for genus {} unavailable: {e}", rep.genus()),
        }
    }
    let domains = Arc::new(domains);
    cache
        .lock()
        .expect("domain cache poisoned")
        .insert(rep.genus(), domains.clone());
    domains
}

/// Group elements other than the identity moving `center` by at most
/// `reach`, nearest translates first.
fn ball_elements(rep: &FuchsianRep, center: Complex64, reach: f64) -> Vec<Candidate> {
    let key = |z: Complex64| ((z.re * 1e9).round() as i64, (z.im * 1e9).round() as i64);
    let mut seen: HashSet<(i64, i64)> = HashSet::new();
    seen.insert(key(center));
    let mut out = Vec::new();
    let mut queue = VecDeque::new();
    queue.push_back((Vec::new(), Mat2::IDENTITY));
    while let Some((letters, m)) = queue.pop_front() {
        for g in rep.presentation().alphabet() {
            let mut next = letters.clone();
            next.push(g);
            let nm = m * rep.generator(g);
            let image = nm.apply_disk(center);
            let distance = disk_distance(center, image);
            if distance <= reach && seen.insert(key(image)) {
                out.push(Candidate {
                    word: dehn_reduce(&Word::new(next.clone()), rep.presentation()),
                    matrix: nm,
                    distance,
                });
                queue.push_back((next, nm));
            }
        }
    }
    out.sort_by(|a, b| a.distance.total_cmp(&b.distance));
    // the matrix of the reduced word is the same element; recompute it so
    // labels and matrices agree exactly
    for c in &mut out {
        c.matrix = evaluate(&c.word, rep);
    }
    out
}

fn clip(poly: &[([f64; 2], Option<usize>)], n: [f64; 3], label: usize) -> Vec<([f64; 2], Option<usize>)> {
    let f = |p: [f64; 2]| n[0] + n[1] * p[0] + n[2] * p[1];
    let mut out: Vec<([f64; 2], Option<usize>)> = Vec::with_capacity(poly.len() + 1);
    for i in 0..poly.len() {
        let (p, e) = poly[i];
        let q = poly[(i + 1) % poly.len()].0;
        let (fp, fq) = (f(p), f(q));
        let cross = |t: f64| [p[0] + t * (q[0] - p[0]), p[1] + t * (q[1] - p[1])];
        if fp >= 0.0 {
            out.push((p, e));
            if fq < 0.0 {
                out.push((cross(fp / (fp - fq)), Some(label)));
            }
        } else if fq >= 0.0 {
            out.push((cross(fp / (fp - fq)), e));
        }
    }
    // drop zero-length edges left by cuts through existing vertices
    let mut merged: Vec<([f64; 2], Option<usize>)> = Vec::with_capacity(out.len());
    for i in 0..out.len() {
        let next = out[(i + 1) % out.len()].0;
        let p = out[i].0;
        if ((p[0] - next[0]).powi(2) + (p[1] - next[1]).powi(2)).sqrt() > 1e-12 {
            merged.push(out[i]);
        }
    }
    merged
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hyperbolic::build_regular_rep;

    #[test]
    fn regular_domain_area() {
        let rep = build_regular_rep(2).unwrap();
        let d = FundamentalDomain::from_rep(&rep);
        assert!((d.area() - 4.0 * PI).abs() < 1e-9);
        assert!(d.contains([0.0, 0.0], 0.0));
    }

    #[test]
    fn dirichlet_at_origin_is_the_regular_polygon() {
        let rep = build_regular_rep(2).unwrap();
        let d = FundamentalDomain::dirichlet(&rep, Complex64::new(0.0, 0.0), 2.0 * rep.circumradius() + 0.1).unwrap();
        assert_eq!(d.edges().len(), 8);
        let reg = FundamentalDomain::from_rep(&rep);
        for e in d.edges() {
            assert_eq!(e.label.len(), 1);
            let twin = reg.edges().iter().find(|r| r.label == e.label).unwrap();
            let dist = ((e.start[0] - twin.start[0]).powi(2) + (e.start[1] - twin.start[1]).powi(2)).sqrt();
            assert!(dist < 1e-9);
        }
    }

    #[test]
    fn nudged_domains_are_fundamental() {
        for genus in [2, 3, 4] {
            let rep = build_regular_rep(genus).unwrap();
            for i in 0..NUDGED_CENTERS.len() {
                let d = FundamentalDomain::nudged(&rep, i).unwrap();
                // every edge is paired with an edge labelled by the inverse element
                for e in d.edges() {
                    let inv = e.matrix.inverse();
                    assert!(d
                        .edges()
                        .iter()
                        .any(|o| o.matrix.projective_distance(&inv) < 1e-7));
                }
                assert!(d.contains(poincare_to_klein(d.center()), 0.0));
            }
        }
    }

    #[test]
    fn reduce_point_lands_inside() {
        let rep = build_regular_rep(2).unwrap();
        let d = FundamentalDomain::from_rep(&rep);
        let z = Complex64::new(0.93, -0.21);
        let (q, t, m) = d.reduce_point(z);
        assert!(d.contains(poincare_to_klein(q), 1e-9));
        assert!((m.apply_disk(q) - z).norm() < 1e-9);
        assert!(evaluate(&t, &rep).projective_distance(&m) < 1e-7);
    }
}
