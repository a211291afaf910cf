//! Free homotopy classes of closed orbits after Dehn surgery on the geodesic
//! flow along closed orbits over disjoint geodesics `alpha_i`.
//!
//! An orbit over a geodesic `beta` disjoint from every `alpha_i` keeps a
//! finite class: itself and the reversed orbit, repeated over the sheets of
//! the fibre-unrolling cover. An orbit over a geodesic crossing some
//! `alpha_i` becomes freely homotopic to infinitely many other orbits.

use rayon::prelude::*;
use serde::{Serialize, Serializer};
use thiserror::Error;

use crate::cache::IntersectionCache;
use crate::filling::{complement_report, complement_verdict, ComplementReport, TriState};
use crate::hyperbolic::FuchsianRep;
use crate::intersection::IntersectionError;
use crate::word::{canonical_conjugacy_form, enumerate_classes, invert, is_primitive, CyclicWord, Word};

pub const DEFAULT_LADDER_DEPTH: usize = 3;

#[derive(Debug, Clone)]
pub struct SurgerySpec {
    pub rep: FuchsianRep,
    pub curves: Vec<CyclicWord>,
    pub coefficients: Vec<i64>,
    pub positivity: bool,
    pub cover_degree: usize,
    pub radius: Option<usize>,
    pub ladder_depth: usize,
}

impl SurgerySpec {
    /// Surgery with coefficient `n` along one curve, no cover.
    pub fn single(rep: FuchsianRep, curve: CyclicWord, n: i64) -> Self {
        SurgerySpec {
            rep,
            curves: vec![curve],
            coefficients: vec![n],
            positivity: true,
            cover_degree: 1,
            radius: None,
            ladder_depth: DEFAULT_LADDER_DEPTH,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error, Serialize)]
#[serde(tag = "error", rename_all = "snake_case")]
pub enum PreconditionError {
    #[error("no surgery curves given")]
    NoCurves,
    #[error("{curves} curves but {coefficients} coefficients")]
    CoefficientCount { curves: usize, coefficients: usize },
    #[error("coefficient {value} of curve {index} is below 1")]
    Coefficient { index: usize, value: i64 },
    #[error("positivity condition not assumed")]
    PositivityNotAssumed,
    #[error("cover degree must be at least 1")]
    CoverDegree,
    #[error("curve {curve} is trivial or a proper power")]
    NotPrimitive { curve: String },
    #[error("α fills S: {curve}")]
    Fills { curve: String },
    #[error("curves not disjoint: i({first}, {second}) = {count}")]
    NotDisjoint { first: String, second: String, count: usize },
    #[error("curves {first} and {second} coincide")]
    RepeatedCurve { first: String, second: String },
    #[error("complement may be a union of annuli: remaining χ = {remaining_chi}, not certified negative")]
    ComplementIndeterminate { remaining_chi: i64 },
    #[error("could not decide a hypothesis: {reason}")]
    Undecided { reason: String },
}

#[derive(Debug, Clone, Serialize)]
pub struct PairIntersection {
    pub first: String,
    pub second: String,
    pub count: usize,
}

/// Evidence gathered while checking the hypotheses.
#[derive(Debug, Clone, Serialize)]
pub struct PreconditionReport {
    pub complements: Vec<ComplementReport>,
    pub pairwise: Vec<PairIntersection>,
    /// χ of the complement of the union of the curves, less one per disk.
    pub remaining_chi: Option<i64>,
    pub nonannular_complement: Option<TriState>,
    pub errors: Vec<PreconditionError>,
}

impl PreconditionReport {
    pub fn ok(&self) -> bool {
        self.errors.is_empty()
    }
}

/// Check every hypothesis of the surgery theorem, collecting all failures.
pub fn check_preconditions(spec: &SurgerySpec, cache: &IntersectionCache) -> PreconditionReport {
    let rep = &spec.rep;
    let p = rep.presentation();
    let mut errors = Vec::new();
    if spec.curves.is_empty() {
        errors.push(PreconditionError::NoCurves);
    }
    if spec.coefficients.len() != spec.curves.len() {
        errors.push(PreconditionError::CoefficientCount {
            curves: spec.curves.len(),
            coefficients: spec.coefficients.len(),
        });
    }
    for (index, &value) in spec.coefficients.iter().enumerate() {
        if value < 1 {
            errors.push(PreconditionError::Coefficient { index, value });
        }
    }
    if !spec.positivity {
        errors.push(PreconditionError::PositivityNotAssumed);
    }
    if spec.cover_degree < 1 {
        errors.push(PreconditionError::CoverDegree);
    }
    let mut primitive = Vec::new();
    for c in &spec.curves {
        if c.is_empty() || !is_primitive(c, p).unwrap_or(false) {
            errors.push(PreconditionError::NotPrimitive { curve: c.to_string() });
        } else {
            primitive.push(c);
        }
    }
    let mut complements = Vec::new();
    let (mut vertices, mut disks) = (0, 0);
    let mut geometry_ok = primitive.len() == spec.curves.len();
    for c in &primitive {
        match complement_report(c, rep) {
            Ok(r) => {
                if r.fills {
                    errors.push(PreconditionError::Fills { curve: c.to_string() });
                }
                vertices += r.euler_data.vertices;
                disks += r.disk_walks;
                complements.push(r);
            }
            Err(e) => {
                geometry_ok = false;
                errors.push(PreconditionError::Undecided { reason: e.to_string() });
            }
        }
    }
    let mut pairwise = Vec::new();
    for (i, a) in primitive.iter().enumerate() {
        for b in &primitive[i + 1..] {
            let same = canonical_conjugacy_form(&a.to_word(), p).ok() == canonical_conjugacy_form(&b.to_word(), p).ok()
                || inverse_class(a, rep) == canonical_conjugacy_form(&b.to_word(), p).expect("valid class");
            if same {
                geometry_ok = false;
                errors.push(PreconditionError::RepeatedCurve {
                    first: a.to_string(),
                    second: b.to_string(),
                });
                continue;
            }
            match cache.intersection(a, b, rep, spec.radius) {
                Ok(r) => {
                    if r.count > 0 {
                        errors.push(PreconditionError::NotDisjoint {
                            first: a.to_string(),
                            second: b.to_string(),
                            count: r.count,
                        });
                    }
                    pairwise.push(PairIntersection {
                        first: a.to_string(),
                        second: b.to_string(),
                        count: r.count,
                    });
                }
                Err(IntersectionError::SameCurve | IntersectionError::SharedAxis) => {
                    geometry_ok = false;
                    errors.push(PreconditionError::RepeatedCurve {
                        first: a.to_string(),
                        second: b.to_string(),
                    });
                }
                Err(e) => {
                    geometry_ok = false;
                    errors.push(PreconditionError::Undecided { reason: e.to_string() });
                }
            }
        }
    }
    let fills = complements.iter().any(|c| c.fills);
    let disjoint = pairwise.iter().all(|x| x.count == 0);
    // disjoint curves: the neighbourhood of the union is the disjoint union
    // of the neighbourhoods, and a boundary walk bounds a disk in the union's
    // complement exactly when it does for its own curve
    let (remaining_chi, nonannular) = if geometry_ok && !fills && disjoint && !primitive.is_empty() {
        let (r, v) = complement_verdict(rep.genus(), vertices, disks);
        if v != TriState::True {
            errors.push(PreconditionError::ComplementIndeterminate { remaining_chi: r });
        }
        (Some(r), Some(v))
    } else {
        (None, None)
    };
    PreconditionReport {
        complements,
        pairwise,
        remaining_chi,
        nonannular_complement: nonannular,
        errors,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum ClassKind {
    A,
    B,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Cardinality {
    Finite(usize),
    Infinite,
}

impl Serialize for Cardinality {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self {
            Cardinality::Finite(n) => s.serialize_u64(*n as u64),
            Cardinality::Infinite => s.serialize_str("infinite"),
        }
    }
}

/// Another orbit in the class, on the given sheet of the cover.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PartnerOrbit {
    pub orbit: CyclicWord,
    pub sheet: usize,
    pub orientation: i8,
}

/// Entry `i` of the ladder of lifted orbits `beta_i`, all freely homotopic to
/// the orbit; odd entries carry the reversed orientation.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LadderEntry {
    pub index: i64,
    pub label: String,
    pub orbit: CyclicWord,
    pub orientation: i8,
}

#[derive(Debug, Clone, Serialize)]
pub struct ClassReport {
    pub orbit: CyclicWord,
    /// `i(beta, alpha_j)` for each surgery curve.
    pub intersections: Vec<usize>,
    pub witness: usize,
    pub kind: ClassKind,
    pub cardinality: Cardinality,
    pub partners: Vec<PartnerOrbit>,
    pub ladder: Vec<LadderEntry>,
    pub assumptions: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error, Serialize)]
#[serde(tag = "error", rename_all = "snake_case")]
pub enum ClassifyError {
    #[error("hypotheses fail: {0:?}")]
    Preconditions(Vec<PreconditionError>),
    #[error("orbit {orbit} is trivial or a proper power")]
    NotPrimitive { orbit: String },
    #[error("orbit {orbit} lies over the surgery curve {curve}")]
    OnSurgeryCurve { orbit: String, curve: String },
    #[error("undecided: {reason}")]
    Undecided { reason: String },
    #[error("{reason}")]
    Failed { reason: String },
}

fn inverse_class(c: &CyclicWord, rep: &FuchsianRep) -> CyclicWord {
    canonical_conjugacy_form(&invert(&c.to_word()), rep.presentation()).expect("inverse of a valid class")
}

fn orbit_class(beta: &Word, rep: &FuchsianRep) -> Result<CyclicWord, ClassifyError> {
    let p = rep.presentation();
    let c = canonical_conjugacy_form(beta, p).map_err(|e| ClassifyError::Failed { reason: e.to_string() })?;
    if c.is_empty() || !is_primitive(&c, p).map_err(|e| ClassifyError::Failed { reason: e.to_string() })? {
        return Err(ClassifyError::NotPrimitive { orbit: beta.to_string() });
    }
    Ok(c)
}

fn class_b(orbit: CyclicWord, rep: &FuchsianRep, cover_degree: usize) -> Result<(Cardinality, Vec<PartnerOrbit>), ClassifyError> {
    let inv = inverse_class(&orbit, rep);
    if inv == orbit {
        return Err(ClassifyError::Failed {
            reason: format!("{orbit} is conjugate to its inverse"),
        });
    }
    let mut partners: Vec<PartnerOrbit> = (0..cover_degree)
        .map(|sheet| PartnerOrbit { orbit: inv.clone(), sheet, orientation: -1 })
        .collect();
    partners.extend((1..cover_degree).map(|sheet| PartnerOrbit { orbit: orbit.clone(), sheet, orientation: 1 }));
    Ok((Cardinality::Finite(2 * cover_degree), partners))
}

fn ladder(orbit: &CyclicWord, rep: &FuchsianRep, depth: usize) -> Vec<LadderEntry> {
    let m = crate::orbit_models::StripModel::default();
    let inv = inverse_class(orbit, rep);
    crate::orbit_models::enumerate_class(&m, depth)
        .into_iter()
        .map(|e| LadderEntry {
            index: e.index,
            label: format!("beta_{}", e.index),
            orbit: if e.orientation > 0 { orbit.clone() } else { inv.clone() },
            orientation: e.orientation,
        })
        .collect()
}

fn surgered_assumptions() -> Vec<String> {
    vec![
        "positivity condition holds for the given coefficients".to_string(),
        "coefficients are large enough that the surgered piece is hyperbolic".to_string(),
    ]
}

/// Classify the orbit over `beta` in the surgered flow. Assumes the
/// hypotheses hold; see [`check_preconditions`].
pub fn classify_orbit(spec: &SurgerySpec, beta: &Word, cache: &IntersectionCache) -> Result<ClassReport, ClassifyError> {
    let rep = &spec.rep;
    let orbit = orbit_class(beta, rep)?;
    let mut intersections = Vec::with_capacity(spec.curves.len());
    for a in &spec.curves {
        let a = &canonical_conjugacy_form(&a.to_word(), rep.presentation()).map_err(|e| ClassifyError::Failed { reason: e.to_string() })?;
        if *a == orbit || inverse_class(a, rep) == orbit {
            return Err(ClassifyError::OnSurgeryCurve {
                orbit: orbit.to_string(),
                curve: a.to_string(),
            });
        }
        match cache.intersection(&orbit, a, rep, spec.radius) {
            Ok(r) => intersections.push(r.count),
            Err(IntersectionError::SameCurve | IntersectionError::SharedAxis) => {
                return Err(ClassifyError::OnSurgeryCurve {
                    orbit: orbit.to_string(),
                    curve: a.to_string(),
                })
            }
            Err(e @ IntersectionError::RadiusExhausted { .. }) => return Err(ClassifyError::Undecided { reason: e.to_string() }),
            Err(e) => return Err(ClassifyError::Failed { reason: e.to_string() }),
        }
    }
    let witness: usize = intersections.iter().sum();
    let (kind, cardinality, partners, ladder) = if witness > 0 {
        (ClassKind::A, Cardinality::Infinite, Vec::new(), ladder(&orbit, rep, spec.ladder_depth))
    } else {
        let (card, partners) = class_b(orbit.clone(), rep, spec.cover_degree)?;
        (ClassKind::B, card, partners, Vec::new())
    };
    Ok(ClassReport {
        orbit,
        intersections,
        witness,
        kind,
        cardinality,
        partners,
        ladder,
        assumptions: surgered_assumptions(),
    })
}

/// Class of the orbit over `beta` in the geodesic flow itself: the orbit
/// and its reverse.
pub fn classify_unsurgered(rep: &FuchsianRep, beta: &Word) -> Result<ClassReport, ClassifyError> {
    let orbit = orbit_class(beta, rep)?;
    let (cardinality, partners) = class_b(orbit.clone(), rep, 1)?;
    Ok(ClassReport {
        orbit,
        intersections: Vec::new(),
        witness: 0,
        kind: ClassKind::B,
        cardinality,
        partners,
        ladder: Vec::new(),
        assumptions: Vec::new(),
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct RejectedOrbit {
    pub orbit: String,
    pub error: ClassifyError,
}

#[derive(Debug, Clone, Serialize)]
pub struct BatchSummary {
    pub total: usize,
    pub class_a: usize,
    pub class_b: usize,
    pub undecided: usize,
    pub rejected: usize,
}

#[derive(Debug, Clone, Serialize)]
pub struct BatchReport {
    pub class_a: Vec<ClassReport>,
    pub class_b: Vec<ClassReport>,
    pub undecided: Vec<RejectedOrbit>,
    pub rejected: Vec<RejectedOrbit>,
    pub summary: BatchSummary,
}

/// Classify many orbits in parallel; each list keeps input order.
pub fn batch_classify(spec: &SurgerySpec, betas: &[Word], cache: &IntersectionCache) -> Result<BatchReport, ClassifyError> {
    let pre = check_preconditions(spec, cache);
    if !pre.ok() {
        return Err(ClassifyError::Preconditions(pre.errors));
    }
    let results: Vec<Result<ClassReport, ClassifyError>> = betas.par_iter().map(|b| classify_orbit(spec, b, cache)).collect();
    let (mut class_a, mut class_b, mut undecided, mut rejected) = (Vec::new(), Vec::new(), Vec::new(), Vec::new());
    for (b, r) in betas.iter().zip(results) {
        match r {
            Ok(r) if r.kind == ClassKind::A => class_a.push(r),
            Ok(r) => class_b.push(r),
            Err(e @ ClassifyError::Undecided { .. }) => undecided.push(RejectedOrbit { orbit: b.to_string(), error: e }),
            Err(e) => rejected.push(RejectedOrbit { orbit: b.to_string(), error: e }),
        }
    }
    let summary = BatchSummary {
        total: betas.len(),
        class_a: class_a.len(),
        class_b: class_b.len(),
        undecided: undecided.len(),
        rejected: rejected.len(),
    };
    Ok(BatchReport {
        class_a,
        class_b,
        undecided,
        rejected,
        summary,
    })
}

/// The first `k` primitive classes of the given kind in shortlex order, up
/// to word length `max_len`. Class B candidates are drawn from words in the
/// generators disjoint from every surgery curve, class A candidates from
/// such words multiplied by a crossing generator or from products of two
/// disjoint generators that cross a curve.
pub fn witness_words(
    spec: &SurgerySpec,
    kind: ClassKind,
    k: usize,
    max_len: usize,
    cache: &IntersectionCache,
) -> Result<Vec<ClassReport>, ClassifyError> {
    let p = spec.rep.presentation();
    let mut out = Vec::new();
    for c in enumerate_classes(p, max_len) {
        if out.len() >= k {
            break;
        }
        match classify_orbit(spec, &c.to_word(), cache) {
            Ok(r) if r.kind == kind => out.push(r),
            Ok(_) | Err(ClassifyError::NotPrimitive { .. }) | Err(ClassifyError::OnSurgeryCurve { .. }) => {}
            Err(e) => return Err(e),
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::filling::parse_class;
    use crate::hyperbolic::build_regular_rep;

    fn spec() -> SurgerySpec {
        let rep = build_regular_rep(2).unwrap();
        let alpha = parse_class("a1b1A1B1", &rep).unwrap();
        SurgerySpec::single(rep, alpha, 7)
    }

    fn word(s: &str) -> Word {
        s.parse().unwrap()
    }

    #[test]
    fn separating_commutator_dichotomy() {
        let s = spec();
        let cache = IntersectionCache::in_memory();
        assert!(check_preconditions(&s, &cache).ok());
        let b = classify_orbit(&s, &word("a1"), &cache).unwrap();
        assert_eq!((b.witness, b.kind, b.cardinality), (0, ClassKind::B, Cardinality::Finite(2)));
        assert_eq!(b.partners[0].orbit.to_string(), "A1");
        let a = classify_orbit(&s, &word("a1a2"), &cache).unwrap();
        assert!(a.witness > 0);
        assert_eq!((a.kind, a.cardinality), (ClassKind::A, Cardinality::Infinite));
        assert_eq!(a.ladder.len(), 7);
        let mut cover = s.clone();
        cover.cover_degree = 3;
        let c = classify_orbit(&cover, &word("a1"), &cache).unwrap();
        assert_eq!(c.cardinality, Cardinality::Finite(6));
        assert_eq!(c.partners.len(), 5);
    }

    #[test]
    fn failing_hypotheses_are_named() {
        let rep = build_regular_rep(2).unwrap();
        let cache = IntersectionCache::in_memory();
        let filling = SurgerySpec::single(rep.clone(), parse_class("a1a2b1b2", &rep).unwrap(), 1);
        let errs = check_preconditions(&filling, &cache).errors;
        assert!(errs.iter().any(|e| e.to_string().starts_with("α fills S")), "{errs:?}");
        let mut crossing = SurgerySpec::single(rep.clone(), parse_class("a1", &rep).unwrap(), 1);
        crossing.curves.push(parse_class("b1", &rep).unwrap());
        crossing.coefficients.push(2);
        let errs = check_preconditions(&crossing, &cache).errors;
        assert!(errs.iter().any(|e| e.to_string().starts_with("curves not disjoint")), "{errs:?}");
        let mut bad = spec();
        bad.positivity = false;
        bad.coefficients = vec![0];
        assert_eq!(check_preconditions(&bad, &cache).errors.len(), 2);
        let mut twice = spec();
        twice.curves.push(parse_class("b1a1B1A1", &rep).unwrap());
        twice.coefficients.push(1);
        let errs = check_preconditions(&twice, &cache).errors;
        assert!(matches!(errs.as_slice(), [PreconditionError::RepeatedCurve { .. }]), "{errs:?}");
    }

    #[test]
    fn surgery_curve_and_powers_are_rejected() {
        let s = spec();
        let cache = IntersectionCache::in_memory();
        assert!(matches!(classify_orbit(&s, &word("b1a1B1A1"), &cache), Err(ClassifyError::OnSurgeryCurve { .. })));
        assert!(matches!(classify_orbit(&s, &word("a1a1"), &cache), Err(ClassifyError::NotPrimitive { .. })));
    }

    #[test]
    fn unsurgered_classes_have_two_elements() {
        let rep = build_regular_rep(2).unwrap();
        let r = classify_unsurgered(&rep, &word("a1b1")).unwrap();
        assert_eq!(r.partners[0].orbit, parse_class("B1A1", &rep).unwrap());
        let back = classify_unsurgered(&rep, &r.partners[0].orbit.to_word()).unwrap();
        assert_eq!(back.partners[0].orbit, r.orbit);
    }

    #[test]
    fn witness_generators() {
        let s = spec();
        let cache = IntersectionCache::in_memory();
        let a = witness_words(&s, ClassKind::A, 5, 4, &cache).unwrap();
        let b = witness_words(&s, ClassKind::B, 5, 4, &cache).unwrap();
        assert_eq!((a.len(), b.len()), (5, 5));
        assert!(a.iter().all(|r| r.witness > 0) && b.iter().all(|r| r.witness == 0));
    }
}
