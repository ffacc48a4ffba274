mod common;

use common::Tape;
use kr_core::chain::{CochainComplex, Resolution};
use kr_core::gmod::fuzz::random_gcomplex;
use kr_core::krtables::{
    brauer_severi_check, computed_table, curve_affine_kr, curve_projective_kr, ko_point, ko_table, ku_table,
    mod_m_pieces, mod_m_table, mv_surface_kr, periodicity_check, pieces_periodicity_check, sphere_ko, sphere_ko_mod,
    GradedGroupTable, KRTableError,
};
use kr_core::realcx::{build_model, KRCoefficientSystem, ModelKind};
use kr_core::specseq::kr_pieces;
use kr_core::znf::{iso_check, FGAbelianGroup, GroupMap, Int, IntegerMatrix, Presentation};
use proptest::prelude::*;

#[test]
fn curves_without_real_points_two_routes() {
    for g in 0..=3usize {
        let x = build_model(ModelKind::SurfaceFree(g)).unwrap();
        let computed = computed_table(&x).unwrap().expect("extensions forced");
        let closed = curve_projective_kr(g, 0).unwrap();
        for n in -7..=0 {
            assert_eq!(computed.lookup(n).unwrap(), closed.lookup(n).unwrap(), "g = {g}, n = {n}");
        }
        assert!(periodicity_check(&computed, 4));
    }
}

#[test]
fn reflection_surfaces_two_routes() {
    for g in 0..=3usize {
        let mv = mv_surface_kr(g).unwrap();
        let closed = curve_projective_kr(g, g + 1).unwrap();
        for (k, d) in mv.iter().take(2).enumerate() {
            let expected = closed.lookup(-(k as i64)).unwrap();
            assert!(d.pieces.admits(&expected), "g = {g}");
            assert_eq!(d.pieces.torsion_order(), expected.torsion_order(), "g = {g}");
            if let Resolution::Determined(h) = &d.resolution {
                assert_eq!(h, &expected, "g = {g}");
            }
        }
        if g > 2 {
            continue;
        }
        let x = build_model(ModelKind::SurfaceReflection(g)).unwrap();
        let simplicial = kr_pieces(&x, &KRCoefficientSystem::new()).unwrap();
        for (s, m) in simplicial.iter().zip(&mv) {
            let Resolution::Determined(h) = &m.resolution else {
                continue;
            };
            assert_eq!(s.free_rank(), h.free_rank(), "g = {g}, n = {}", m.degree);
            assert!(s.torsion_order() % h.torsion_order() == Int::from(0), "g = {g}, n = {}", m.degree);
            if let Some(folded) = &s.group {
                assert_eq!(folded, h);
            }
        }
    }
}

#[test]
fn affine_curves_against_closed_form() {
    for lambda in [0usize, 1, 3] {
        let x = build_model(ModelKind::AffineCurve { lambda, free_loops: 1 }).unwrap();
        let t = kr_pieces(&x, &KRCoefficientSystem::new()).unwrap();
        let closed = curve_affine_kr(lambda);
        assert_eq!(t[0].group.as_ref(), Some(&closed.lookup(0).unwrap()));
        assert_eq!(t[6].group.as_ref(), Some(&closed.lookup(-6).unwrap()));
        assert!(matches!(closed.lookup(-2), Err(KRTableError::NotInClosedForm { degree: -2 })));
    }
}

#[test]
fn brauer_severi_for_several_moduli() {
    for m in [2, 8, 16] {
        let rows = brauer_severi_check(m).unwrap();
        for r in rows {
            assert!(iso_check(&r.computed, &r.expected));
            assert_eq!(r.computed_mod_order, r.expected_mod_order);
        }
    }
}

#[test]
fn periodicity_negative_control() {
    let x = build_model(ModelKind::SphereTrivial(1)).unwrap();
    let t = kr_pieces(&x, &KRCoefficientSystem::new()).unwrap();
    assert!(!pieces_periodicity_check(&t, 4));
    for g in 0..=2 {
        let free = kr_pieces(&build_model(ModelKind::SurfaceFree(g)).unwrap(), &KRCoefficientSystem::new()).unwrap();
        assert!(pieces_periodicity_check(&free, 4));
    }
    assert!(!periodicity_check(&ko_table(), 4));
}

#[test]
fn mod_m_examples() {
    let ku = mod_m_table(&ku_table(), 8);
    assert_eq!(ku.get(0).unwrap().sub, FGAbelianGroup::cyclic(8));
    assert!(ku.get(0).unwrap().quot.is_trivial());
    let ko = mod_m_table(&ko_table(), 2);
    let z2 = FGAbelianGroup::cyclic(2);
    // KO^1 of a point vanishes, so only the reduction survives in degree 0
    let p = ko.get(0).unwrap();
    assert_eq!((p.sub.clone(), p.quot.clone()), (z2.clone(), FGAbelianGroup::trivial()));
    let p = ko.get(-2).unwrap();
    assert_eq!((p.sub.clone(), p.quot.clone()), (z2.clone(), z2));
    assert_eq!(p.order(), Some(Int::from(4)));
    assert_eq!(ko.get(-10), ko.get(-2));
    let zero = mod_m_table(&GradedGroupTable::periodic(1, vec![FGAbelianGroup::trivial()]), 5);
    assert!(zero.pieces.values().all(|p| p.sub.is_trivial() && p.quot.is_trivial()));
}

/// `|KO^{−n}(S^d; Z/m)|` assembled point by point from the reduced suspension splitting.
fn pointwise_mod_order(d: usize, n: i64, m: u64) -> Int {
    let point = |j: i64| mod_m_pieces(&ko_point(j), &ko_point(j + 1), m).order().unwrap();
    point(-n) * point(-n - d as i64)
}

#[test]
fn sphere_mod_tables() {
    for d in 0..=8usize {
        for m in [2u64, 8, 16] {
            for n in 0..8 {
                let p = sphere_ko_mod(d, n, m);
                let whole = mod_m_pieces(&sphere_ko(d, n), &sphere_ko(d, n - 1), m);
                assert_eq!(p, whole);
                assert_eq!(p.order().unwrap(), pointwise_mod_order(d, n, m), "d = {d}, m = {m}, n = {n}");
            }
        }
    }
}

fn tape() -> impl Strategy<Value = Tape> {
    prop::collection::vec(any::<u32>(), 64).prop_map(Tape::new)
}

/// `C ⊗ Z/m`, term by term.
fn reduce_mod(c: &CochainComplex, m: u64) -> CochainComplex {
    let m = Int::from(m);
    let terms: Vec<Presentation> = c
        .terms()
        .iter()
        .map(|p| {
            let n = p.generators();
            let rel = IntegerMatrix::hstack(n, &[p.relations(), &IntegerMatrix::diagonal(n, n, &vec![m.clone(); n])]);
            Presentation::new(n, rel).unwrap()
        })
        .collect();
    let diffs = c
        .differentials()
        .iter()
        .enumerate()
        .map(|(k, d)| GroupMap::new(terms[k].clone(), terms[k + 1].clone(), d.matrix().clone()).unwrap())
        .collect();
    CochainComplex::new(c.lowest_degree(), terms, diffs).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn universal_coefficient_orders(mut t in tape(), m in prop::sample::select(vec![2u64, 3, 4, 8, 12])) {
        let c = random_gcomplex(3, 4, 4, &mut |a, b| t.next(a, b)).underlying();
        let cm = reduce_mod(&c, m);
        let lo = c.lowest_degree();
        let values = (lo - 1..=lo + c.len() as i64).map(|n| (n, c.cohomology(n).unwrap())).collect();
        let table = mod_m_table(&GradedGroupTable::finite(values), m);
        for (n, pieces) in &table.pieces {
            prop_assert_eq!(pieces.order(), cm.cohomology(*n).unwrap().order(), "degree {}", n);
        }
    }

    #[test]
    fn periodic_lookup(n in -200i64..200) {
        prop_assert_eq!(ko_table().get(n).unwrap(), ko_point(n));
        prop_assert_eq!(ko_table().get(n), ko_table().get(n - 8));
        prop_assert_eq!(ku_table().get(n), ku_table().get(n + 2));
    }
}

#[test]
fn harnack_violations() {
    assert!(matches!(curve_projective_kr(0, 2), Err(KRTableError::HarnackViolation { .. })));
    assert!(matches!(curve_projective_kr(3, 5), Err(KRTableError::HarnackViolation { .. })));
    assert!(curve_projective_kr(3, 4).is_ok());
}
