//! Hyperbolic structure on the surface: a Fuchsian representation of the
//! surface group built from the regular 4g-gon, isometry classification,
//! axes and translation lengths.
//!
//! Matrices are real `SL(2,R)` elements acting on the upper half-plane. All
//! point and boundary computations are done in the Poincaré disk through the
//! Cayley transform `z -> (z - i)/(z + i)`, where a matrix becomes
//! `w -> (alpha w + beta)/(conj(beta) w + conj(alpha))`.

use std::f64::consts::PI;
use std::ops::Mul;

use num_complex::Complex64;
use serde::Serialize;
use thiserror::Error;

use crate::tolerance;
use crate::word::{Letter, SurfacePresentation, Word, WordError};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum GeometryError {
    #[error(transparent)]
    Word(#[from] WordError),
    #[error("isometry is {0:?}, expected hyperbolic")]
    NotHyperbolic(IsometryKind),
    #[error("|trace| = {0} is within tolerance of 2 for a nontrivial element")]
    NumericalDegeneracy(f64),
    #[error("representation check failed: {0}")]
    InvalidRepresentation(String),
}

/// A real 2x2 matrix of determinant one.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Mat2 {
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub d: f64,
}

impl Mat2 {
    pub const IDENTITY: Mat2 = Mat2 {
        a: 1.0,
        b: 0.0,
        c: 0.0,
        d: 1.0,
    };

    pub fn new(a: f64, b: f64, c: f64, d: f64) -> Self {
        Mat2 { a, b, c, d }
    }

    pub fn det(&self) -> f64 {
        self.a * self.d - self.b * self.c
    }

    pub fn trace(&self) -> f64 {
        self.a + self.d
    }

    /// Inverse, using `det = 1`.
    pub fn inverse(&self) -> Mat2 {
        Mat2::new(self.d, -self.b, -self.c, self.a)
    }

    pub fn is_finite(&self) -> bool {
        [self.a, self.b, self.c, self.d].iter().all(|x| x.is_finite())
    }

    /// Entrywise distance to `other`, up to the sign ambiguity of `PSL(2,R)`.
    pub fn projective_distance(&self, other: &Mat2) -> f64 {
        let plus = [
            self.a - other.a,
            self.b - other.b,
            self.c - other.c,
            self.d - other.d,
        ];
        let minus = [
            self.a + other.a,
            self.b + other.b,
            self.c + other.c,
            self.d + other.d,
        ];
        let m = |v: [f64; 4]| v.iter().fold(0.0f64, |acc, x| acc.max(x.abs()));
        m(plus).min(m(minus))
    }

    pub fn is_identity(&self, tol: f64) -> bool {
        self.projective_distance(&Mat2::IDENTITY) <= tol
    }

    /// Coefficients `(alpha, beta)` of the same isometry acting on the disk.
    pub fn disk_coefficients(&self) -> (Complex64, Complex64) {
        let alpha = Complex64::new((self.a + self.d) / 2.0, (self.b - self.c) / 2.0);
        let beta = Complex64::new((self.a - self.d) / 2.0, -(self.b + self.c) / 2.0);
        (alpha, beta)
    }

    pub fn from_disk_coefficients(alpha: Complex64, beta: Complex64) -> Mat2 {
        Mat2::new(
            alpha.re + beta.re,
            alpha.im - beta.im,
            -alpha.im - beta.im,
            alpha.re - beta.re,
        )
    }

    /// Rotation of the disk about the origin by angle `t`.
    pub fn disk_rotation(t: f64) -> Mat2 {
        Mat2::from_disk_coefficients(Complex64::from_polar(1.0, t / 2.0), Complex64::new(0.0, 0.0))
    }

    /// Translation of the disk along the real diameter by hyperbolic distance `d`.
    pub fn disk_translation(d: f64) -> Mat2 {
        Mat2::from_disk_coefficients(
            Complex64::new((d / 2.0).cosh(), 0.0),
            Complex64::new((d / 2.0).sinh(), 0.0),
        )
    }

    /// Action on a point of the closed unit disk.
    pub fn apply_disk(&self, z: Complex64) -> Complex64 {
        let (alpha, beta) = self.disk_coefficients();
        (alpha * z + beta) / (beta.conj() * z + alpha.conj())
    }

    /// Action on a boundary point given as an angle; result in `[0, 2pi)`.
    pub fn apply_angle(&self, theta: f64) -> f64 {
        normalize_angle(self.apply_disk(Complex64::from_polar(1.0, theta)).arg())
    }
}

impl Mul for Mat2 {
    type Output = Mat2;

    fn mul(self, o: Mat2) -> Mat2 {
        Mat2::new(
            self.a * o.a + self.b * o.c,
            self.a * o.b + self.b * o.d,
            self.c * o.a + self.d * o.c,
            self.c * o.b + self.d * o.d,
        )
    }
}

pub fn normalize_angle(t: f64) -> f64 {
    let r = t.rem_euclid(2.0 * PI);
    if r >= 2.0 * PI {
        0.0
    } else {
        r
    }
}

/// Distance between two angles on the circle.
pub fn angular_distance(x: f64, y: f64) -> f64 {
    let d = (x - y).rem_euclid(2.0 * PI);
    d.min(2.0 * PI - d)
}

/// Hyperbolic distance between two points of the Poincaré disk.
pub fn disk_distance(z: Complex64, w: Complex64) -> f64 {
    let num = 2.0 * (z - w).norm_sqr();
    let den = (1.0 - z.norm_sqr()) * (1.0 - w.norm_sqr());
    (1.0 + num / den).acosh()
}

/// Poincaré disk point to Klein model coordinates.
pub fn poincare_to_klein(z: Complex64) -> [f64; 2] {
    let s = 2.0 / (1.0 + z.norm_sqr());
    [s * z.re, s * z.im]
}

/// Klein model coordinates to a Poincaré disk point.
pub fn klein_to_poincare(k: [f64; 2]) -> Complex64 {
    let r2 = k[0] * k[0] + k[1] * k[1];
    let s = 1.0 / (1.0 + (1.0 - r2).max(0.0).sqrt());
    Complex64::new(k[0] * s, k[1] * s)
}

/// Hyperbolic distance between two Klein model points.
pub fn klein_distance(p: [f64; 2], q: [f64; 2]) -> f64 {
    let dot = p[0] * q[0] + p[1] * q[1];
    let np = 1.0 - p[0] * p[0] - p[1] * p[1];
    let nq = 1.0 - q[0] * q[0] - q[1] * q[1];
    ((1.0 - dot) / (np * nq).sqrt()).max(1.0).acosh()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum IsometryKind {
    Hyperbolic,
    Parabolic,
    Elliptic,
    Identity,
}

/// Classify by `|trace|` against 2 with the algebraic tolerance.
pub fn classify_isometry(m: &Mat2) -> IsometryKind {
    if m.is_identity(tolerance::ALGEBRAIC) {
        return IsometryKind::Identity;
    }
    let t = m.trace().abs();
    if t > 2.0 + tolerance::ALGEBRAIC {
        IsometryKind::Hyperbolic
    } else if t < 2.0 - tolerance::ALGEBRAIC {
        IsometryKind::Elliptic
    } else {
        IsometryKind::Parabolic
    }
}

/// Invariant geodesic of a hyperbolic isometry, as two boundary angles.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Axis {
    pub attracting: f64,
    pub repelling: f64,
}

impl Axis {
    pub fn reversed(&self) -> Axis {
        Axis {
            attracting: self.repelling,
            repelling: self.attracting,
        }
    }

    pub fn transformed(&self, m: &Mat2) -> Axis {
        Axis {
            attracting: m.apply_angle(self.attracting),
            repelling: m.apply_angle(self.repelling),
        }
    }

    pub fn attracting_point(&self) -> Complex64 {
        Complex64::from_polar(1.0, self.attracting)
    }

    pub fn repelling_point(&self) -> Complex64 {
        Complex64::from_polar(1.0, self.repelling)
    }

    /// Point of the axis closest to the origin, in the disk.
    pub fn closest_to_origin(&self) -> Complex64 {
        let (p, q) = (self.attracting_point(), self.repelling_point());
        let mid = (p + q) / 2.0;
        // In the Klein model the axis is the chord pq and the foot of the
        // perpendicular from the origin is the chord midpoint.
        klein_to_poincare([mid.re, mid.im])
    }

    /// Isometry carrying the real diameter (oriented from -1 to +1, with the
    /// origin at the foot of the perpendicular from the origin) onto this axis.
    pub fn frame(&self) -> Mat2 {
        let foot = self.closest_to_origin();
        let dist = 2.0 * foot.norm().atanh();
        // direction of travel at the foot, from repelling to attracting
        let (p, q) = (self.attracting_point(), self.repelling_point());
        let dir = p - q;
        let heading = dir.im.atan2(dir.re);
        let to_foot = if foot.norm() < 1e-15 {
            Mat2::IDENTITY
        } else {
            let ang = foot.im.atan2(foot.re);
            Mat2::disk_rotation(ang) * Mat2::disk_translation(dist) * Mat2::disk_rotation(-ang)
        };
        // rotate the real diameter to the heading, then move the origin to the foot
        to_foot * Mat2::disk_rotation(heading)
    }
}

/// Fixed points of a hyperbolic isometry on the boundary circle.
pub fn axis_endpoints(m: &Mat2) -> Result<Axis, GeometryError> {
    let kind = classify_isometry(m);
    if kind != IsometryKind::Hyperbolic {
        return Err(GeometryError::NotHyperbolic(kind));
    }
    let (alpha, beta) = m.disk_coefficients();
    let s = (alpha.re * alpha.re - 1.0).sqrt();
    let bc = beta.conj();
    let w1 = Complex64::new(s, alpha.im) / bc;
    let w2 = Complex64::new(-s, alpha.im) / bc;
    let stretch = |w: Complex64| (bc * w + alpha.conj()).norm();
    // derivative is 1/(conj(beta) w + conj(alpha))^2
    let (att, rep) = if stretch(w1) > stretch(w2) { (w1, w2) } else { (w2, w1) };
    Ok(Axis {
        attracting: normalize_angle(att.arg()),
        repelling: normalize_angle(rep.arg()),
    })
}

/// `2 arccosh(|tr|/2)`.
pub fn translation_length(m: &Mat2) -> Result<f64, GeometryError> {
    let kind = classify_isometry(m);
    if kind != IsometryKind::Hyperbolic {
        return Err(GeometryError::NotHyperbolic(kind));
    }
    Ok(2.0 * (m.trace().abs() / 2.0).acosh())
}

/// Discrete faithful representation of the genus-g surface group, realised
/// by side pairings of the regular 4g-gon with all angles `2pi/4g`.
#[derive(Debug, Clone)]
pub struct FuchsianRep {
    presentation: SurfacePresentation,
    /// Indexed by letter code: generators and their inverses.
    gen_matrices: Vec<Mat2>,
    /// Polygon vertices in the disk, counterclockwise. Side `k` runs from
    /// vertex `k` to vertex `k + 1`.
    polygon: Vec<Complex64>,
    /// `side_labels[k]` is the letter whose image of the polygon lies across
    /// side `k`; that letter maps the paired side onto side `k`.
    side_labels: Vec<Letter>,
    inradius: f64,
    circumradius: f64,
}

impl FuchsianRep {
    pub fn genus(&self) -> usize {
        self.presentation.genus()
    }

    pub fn presentation(&self) -> &SurfacePresentation {
        &self.presentation
    }

    pub fn generator(&self, l: Letter) -> Mat2 {
        self.gen_matrices[l.code() as usize]
    }

    pub fn polygon(&self) -> &[Complex64] {
        &self.polygon
    }

    pub fn side_labels(&self) -> &[Letter] {
        &self.side_labels
    }

    /// Distance from the polygon centre to its sides.
    pub fn inradius(&self) -> f64 {
        self.inradius
    }

    /// Distance from the polygon centre to its vertices.
    pub fn circumradius(&self) -> f64 {
        self.circumradius
    }

    /// Interior angles of the polygon.
    pub fn polygon_angles(&self) -> Vec<f64> {
        let n = self.polygon.len();
        (0..n)
            .map(|k| {
                let v = self.polygon[k];
                let prev = self.polygon[(k + n - 1) % n];
                let next = self.polygon[(k + 1) % n];
                vertex_angle(v, prev, next)
            })
            .collect()
    }

    /// Check the relator, the angle sum, and the side pairings.
    pub fn validate(&self) -> Result<(), GeometryError> {
        let rel = evaluate(&self.presentation.relator(), self);
        if !rel.is_identity(tolerance::ALGEBRAIC) {
            return Err(GeometryError::InvalidRepresentation(format!(
                "relator evaluates to {rel:?}"
            )));
        }
        let sum: f64 = self.polygon_angles().iter().sum();
        if (sum - 2.0 * PI).abs() > tolerance::ALGEBRAIC {
            return Err(GeometryError::InvalidRepresentation(format!(
                "angle sum {sum} differs from 2pi"
            )));
        }
        let n = self.polygon.len();
        for (k, &label) in self.side_labels.iter().enumerate() {
            let paired = self
                .side_labels
                .iter()
                .position(|&l| l == label.inverse())
                .ok_or_else(|| GeometryError::InvalidRepresentation(format!("side {k} unpaired")))?;
            let m = self.generator(label);
            let src = [self.polygon[paired], self.polygon[(paired + 1) % n]];
            let dst = [self.polygon[k], self.polygon[(k + 1) % n]];
            // side orientation reverses under the pairing
            let e0 = (m.apply_disk(src[0]) - dst[1]).norm();
            let e1 = (m.apply_disk(src[1]) - dst[0]).norm();
            if e0.max(e1) > tolerance::ALGEBRAIC {
                return Err(GeometryError::InvalidRepresentation(format!(
                    "pairing {label} does not carry side {paired} onto side {k}"
                )));
            }
        }
        Ok(())
    }
}

fn vertex_angle(v: Complex64, p: Complex64, q: Complex64) -> f64 {
    // move v to the origin, where geodesics are straight
    let to0 = |z: Complex64| (z - v) / (Complex64::new(1.0, 0.0) - v.conj() * z);
    let (a, b) = (to0(p), to0(q));
    let d = (a.arg() - b.arg()).abs();
    d.min(2.0 * PI - d)
}

/// Build the regular 4g-gon representation.
pub fn build_regular_rep(genus: usize) -> Result<FuchsianRep, GeometryError> {
    let presentation = SurfacePresentation::new(genus)?;
    let n = 4 * genus;
    let nf = n as f64;
    let interior = 2.0 * PI / nf;
    let inradius = ((interior / 2.0).cos() / (PI / nf).sin()).acosh();
    let circumradius = ((PI / nf).cos() / (PI / nf).sin() / (interior / 2.0).tan()).acosh();
    // side k has outward normal at angle 2pi k/n, so its vertices sit at
    // 2pi k/n -+ pi/n
    let normal = |k: usize| 2.0 * PI * k as f64 / nf;
    let rv = (circumradius / 2.0).tanh();
    let polygon = (0..n)
        .map(|k| Complex64::from_polar(rv, normal(k) - PI / nf))
        .collect();
    // isometry carrying side j onto side k with the polygon landing across side k
    let pairing = |j: usize, k: usize| {
        Mat2::disk_rotation(normal(k)) * Mat2::disk_translation(2.0 * inradius) * Mat2::disk_rotation(PI - normal(j))
    };
    let mut gen_matrices = vec![Mat2::IDENTITY; n];
    let mut side_labels = vec![Letter::a(1); n];
    for i in 0..genus {
        let (a, b) = (Letter::a(i + 1), Letter::b(i + 1));
        let ma = pairing(4 * i + 2, 4 * i);
        let mb = pairing(4 * i + 1, 4 * i + 3);
        gen_matrices[a.code() as usize] = ma;
        gen_matrices[a.inverse().code() as usize] = ma.inverse();
        gen_matrices[b.code() as usize] = mb;
        gen_matrices[b.inverse().code() as usize] = mb.inverse();
        side_labels[4 * i] = a;
        side_labels[4 * i + 1] = b.inverse();
        side_labels[4 * i + 2] = a.inverse();
        side_labels[4 * i + 3] = b;
    }
    let rep = FuchsianRep {
        presentation,
        gen_matrices,
        polygon,
        side_labels,
        inradius,
        circumradius,
    };
    rep.validate()?;
    Ok(rep)
}

/// Matrix of a word; a homomorphism from words to `SL(2,R)`.
pub fn evaluate(w: &Word, rep: &FuchsianRep) -> Mat2 {
    w.letters()
        .iter()
        .fold(Mat2::IDENTITY, |acc, &l| acc * rep.generator(l))
}

/// Axis of the element represented by `w`.
pub fn word_axis(w: &Word, rep: &FuchsianRep) -> Result<Axis, GeometryError> {
    axis_endpoints(&evaluate(w, rep))
}

/// Classification of a word's element, flagging a nontrivial element whose
/// trace is numerically indistinguishable from 2.
pub fn classify_word(w: &Word, rep: &FuchsianRep) -> Result<IsometryKind, GeometryError> {
    let m = evaluate(w, rep);
    let kind = classify_isometry(&m);
    let trivial = crate::word::is_trivial(w, rep.presentation());
    match kind {
        IsometryKind::Identity if trivial => Ok(kind),
        IsometryKind::Hyperbolic if !trivial => Ok(kind),
        _ => Err(GeometryError::NumericalDegeneracy(m.trace().abs())),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(s: &str) -> Word {
        s.parse().unwrap()
    }

    #[test]
    fn regular_octagon() {
        let rep = build_regular_rep(2).unwrap();
        assert_eq!(rep.polygon().len(), 8);
        for a in rep.polygon_angles() {
            assert!((a - PI / 4.0).abs() < 1e-9);
        }
        assert!(evaluate(&rep.presentation().relator(), &rep).is_identity(1e-7));
        for g in rep.presentation().alphabet() {
            assert!((rep.generator(g).det() - 1.0).abs() < 1e-9);
        }
    }

    #[test]
    fn regular_dodecagon() {
        let rep = build_regular_rep(3).unwrap();
        assert_eq!(rep.polygon().len(), 12);
        for a in rep.polygon_angles() {
            assert!((a - PI / 6.0).abs() < 1e-9);
        }
    }

    #[test]
    fn genus_one_rejected() {
        assert!(matches!(
            build_regular_rep(1),
            Err(GeometryError::Word(WordError::BadGenus(1)))
        ));
    }

    #[test]
    fn evaluate_examples() {
        let rep = build_regular_rep(2).unwrap();
        assert_eq!(evaluate(&w(""), &rep), Mat2::IDENTITY);
        assert!(evaluate(&w("a1 A1"), &rep).is_identity(1e-12));
    }

    #[test]
    fn disk_coefficients_roundtrip() {
        let m = Mat2::new(2.0, 3.0, 1.0, 2.0);
        let (al, be) = m.disk_coefficients();
        let back = Mat2::from_disk_coefficients(al, be);
        assert!(m.projective_distance(&back) < 1e-14);
        // agrees with the upper half-plane action through the Cayley map
        let z = Complex64::new(0.3, 1.7);
        let hz = (z * m.a + m.b) / (z * m.c + m.d);
        let cayley = |u: Complex64| (u - Complex64::i()) / (u + Complex64::i());
        assert!((m.apply_disk(cayley(z)) - cayley(hz)).norm() < 1e-12);
    }

    #[test]
    fn classify_examples() {
        assert_eq!(classify_isometry(&Mat2::IDENTITY), IsometryKind::Identity);
        assert_eq!(classify_isometry(&Mat2::new(2.0, 0.0, 0.0, 0.5)), IsometryKind::Hyperbolic);
        assert_eq!(classify_isometry(&Mat2::new(1.0, 1.0, 0.0, 1.0)), IsometryKind::Parabolic);
        assert_eq!(
            classify_isometry(&Mat2::disk_rotation(0.5)),
            IsometryKind::Elliptic
        );
    }

    #[test]
    fn diagonal_axis() {
        // fixed points 0 and infinity of the half-plane; infinity attracts and
        // corresponds to the disk point 1 (angle 0), 0 to -1 (angle pi)
        let ax = axis_endpoints(&Mat2::new(3.0, 0.0, 0.0, 1.0 / 3.0)).unwrap();
        assert!(angular_distance(ax.attracting, 0.0) < 1e-12);
        assert!(angular_distance(ax.repelling, PI) < 1e-12);
        assert!(axis_endpoints(&Mat2::IDENTITY).is_err());
    }

    #[test]
    fn inverse_swaps_endpoints() {
        let rep = build_regular_rep(2).unwrap();
        let x = word_axis(&w("a1 b2"), &rep).unwrap();
        let y = word_axis(&w("B2 A1"), &rep).unwrap();
        assert!(angular_distance(x.attracting, y.repelling) < 1e-9);
        assert!(angular_distance(x.repelling, y.attracting) < 1e-9);
    }

    #[test]
    fn translation_length_formula() {
        // trace 2cosh(1/2) gives length 1
        let lam = (0.5f64).exp();
        let diag = Mat2::new(lam, 0.0, 0.0, 1.0 / lam);
        assert!((diag.trace() - 2.0 * (0.5f64).cosh()).abs() < 1e-15);
        assert!((translation_length(&diag).unwrap() - 1.0).abs() < 1e-12);
        let rep = build_regular_rep(2).unwrap();
        let l1 = translation_length(&evaluate(&w("a1"), &rep)).unwrap();
        let l2 = translation_length(&evaluate(&w("a1a1"), &rep)).unwrap();
        assert!((l2 - 2.0 * l1).abs() < 1e-9);
        for g in ["a1", "b1", "a2", "b2"] {
            let l = translation_length(&evaluate(&w(g), &rep)).unwrap();
            assert!((l - l1).abs() < 1e-9);
        }
    }

    #[test]
    fn frame_maps_diameter_to_axis() {
        let rep = build_regular_rep(2).unwrap();
        let ax = word_axis(&w("a1 b1 b2"), &rep).unwrap();
        let f = ax.frame();
        assert!(angular_distance(f.apply_angle(0.0), ax.attracting) < 1e-9);
        assert!(angular_distance(f.apply_angle(PI), ax.repelling) < 1e-9);
        let foot = f.apply_disk(Complex64::new(0.0, 0.0));
        assert!((foot - ax.closest_to_origin()).norm() < 1e-9);
    }
}
