use proptest::prelude::*;

use skewflow::cache::IntersectionCache;
use skewflow::filling::{boundary_walks, build_fatgraph, report_for};
use skewflow::hyperbolic::{build_regular_rep, evaluate, FuchsianRep};
use skewflow::intersection::{intersection_number, intersection_profile};
use skewflow::orbit_models::{g_apply, suspension_flow, OrbitPoint, StripModel, SuspensionModel};
use skewflow::word::{canonical_conjugacy_form, dehn_reduce, free_reduce, invert, is_primitive, CyclicWord, Letter, SurfacePresentation, Word};

fn word(genus: usize, max_len: usize) -> impl Strategy<Value = Word> {
    prop::collection::vec(0..(4 * genus) as u16, 0..=max_len).prop_map(|v| Word::new(v.into_iter().map(Letter::from_code).collect()))
}

fn primitive(w: &Word, p: &SurfacePresentation) -> Option<CyclicWord> {
    let c = canonical_conjugacy_form(w, p).ok()?;
    (!c.is_empty() && is_primitive(&c, p).ok()?).then_some(c)
}

fn rep2() -> FuchsianRep {
    build_regular_rep(2).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn canonical_form_is_conjugation_invariant(w in word(2, 10), g in word(2, 6)) {
        let p = SurfacePresentation::new(2).unwrap();
        let conj = invert(&g).concat(&w).concat(&g);
        prop_assert_eq!(canonical_conjugacy_form(&conj, &p).ok(), canonical_conjugacy_form(&w, &p).ok());
    }

    #[test]
    fn dehn_reduce_is_idempotent_and_keeps_the_element(w in word(2, 14)) {
        let p = SurfacePresentation::new(2).unwrap();
        let rep = rep2();
        let r = dehn_reduce(&w, &p);
        prop_assert_eq!(&dehn_reduce(&r, &p), &r);
        prop_assert!(r.len() <= free_reduce(&w).len());
        prop_assert!(evaluate(&r, &rep).projective_distance(&evaluate(&w, &rep)) < 1e-6);
    }

    #[test]
    fn evaluation_is_a_homomorphism(u in word(3, 8), v in word(3, 8)) {
        let rep = build_regular_rep(3).unwrap();
        let lhs = evaluate(&u.concat(&v), &rep);
        let rhs = evaluate(&u, &rep) * evaluate(&v, &rep);
        let scale = [rhs.a, rhs.b, rhs.c, rhs.d].iter().fold(1.0f64, |m, x| m.max(x.abs()));
        prop_assert!(lhs.projective_distance(&rhs) < 1e-9 * scale);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn deck_map_preserves_the_strip(s in -20.0..20.0f64, d in -0.999..0.999f64, eps in 0.01..0.31f64) {
        let m = StripModel::new(eps).unwrap();
        let p = OrbitPoint::new(s, s - d).unwrap();
        let q = g_apply(&m, p);
        prop_assert!((q.s - q.u).abs() < 1.0);
        prop_assert!(q.s >= p.s && q.u >= p.u);
    }

    #[test]
    fn suspension_flow_composes(x in -5.0..5.0f64, y in -5.0..5.0f64, t0 in -5.0..5.0f64, s in -5.0..5.0f64, t in -5.0..5.0f64) {
        let sm = SuspensionModel::cat_map();
        let a = suspension_flow(&sm, suspension_flow(&sm, [x, y, t0], t), s);
        let b = suspension_flow(&sm, [x, y, t0], s + t);
        prop_assert!((a[2] - b[2]).abs() < 1e-12 && a[0] == b[0] && a[1] == b[1]);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn intersection_is_symmetric_and_orientation_free(w in word(2, 5), v in word(2, 5), g in word(2, 4)) {
        let p = SurfacePresentation::new(2).unwrap();
        let rep = rep2();
        let (Some(a), Some(b)) = (primitive(&w, &p), primitive(&v, &p)) else { return Ok(()) };
        let n = intersection_number(&a, &b, &rep, None).unwrap().count;
        prop_assert_eq!(intersection_number(&b, &a, &rep, None).unwrap().count, n);
        let ai = canonical_conjugacy_form(&invert(&a.to_word()), &p).unwrap();
        prop_assert_eq!(intersection_number(&ai, &b, &rep, None).unwrap().count, n);
        // an unreduced conjugate of the same class
        let conj = canonical_conjugacy_form(&invert(&g).concat(&a.to_word()).concat(&g), &p).unwrap();
        prop_assert_eq!(intersection_number(&conj, &b, &rep, None).unwrap().count, n);
    }

    #[test]
    fn profile_is_monotone(w in word(2, 6), v in word(2, 6)) {
        let p = SurfacePresentation::new(2).unwrap();
        let rep = rep2();
        let (Some(a), Some(b)) = (primitive(&w, &p), primitive(&v, &p)) else { return Ok(()) };
        let (profile, _) = intersection_profile(&a, &b, &rep, 12).unwrap();
        prop_assert!(profile.windows(2).all(|x| x[0] <= x[1]));
    }

    #[test]
    fn fat_graphs_satisfy_euler_accounting(w in word(2, 7)) {
        let p = SurfacePresentation::new(2).unwrap();
        let rep = rep2();
        let Some(c) = primitive(&w, &p) else { return Ok(()) };
        let g = build_fatgraph(&c, &rep).unwrap();
        prop_assert!(g.rotation.iter().all(|r| r.len() == 4));
        if g.vertex_count > 0 {
            prop_assert_eq!(g.edges.len(), 2 * g.vertex_count);
        }
        let walks = boundary_walks(&g, &rep);
        let mut used: Vec<(usize, bool)> = walks.iter().flat_map(|w| w.darts.iter().map(|d| (d.edge, d.forward))).collect();
        used.sort_unstable();
        let before = used.len();
        used.dedup();
        prop_assert_eq!(before, used.len());
        prop_assert_eq!(used.len(), 2 * g.edges.len());
        let r = report_for(&g, &rep);
        let e = r.euler_data;
        // a simple curve is a circle
        let graph_chi = if e.vertices == 0 { 0 } else { e.vertices as i64 - e.edges as i64 };
        prop_assert_eq!(e.graph_chi, graph_chi);
        prop_assert_eq!(e.complement_chi, e.surface_chi + e.vertices as i64);
        if r.fills {
            prop_assert_eq!(e.vertices as i64 - e.edges as i64 + walks.len() as i64, e.surface_chi);
        }
    }

    #[test]
    fn cache_is_transparent(w in word(2, 5), v in word(2, 5)) {
        let p = SurfacePresentation::new(2).unwrap();
        let rep = rep2();
        let (Some(a), Some(b)) = (primitive(&w, &p), primitive(&v, &p)) else { return Ok(()) };
        let cache = IntersectionCache::in_memory();
        let cold = cache.intersection(&a, &b, &rep, None).unwrap();
        let warm = cache.intersection(&b, &a, &rep, None).unwrap();
        prop_assert_eq!(cold, warm);
    }
}
