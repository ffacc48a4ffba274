mod common;

use common::Tape;
use kr_core::krtables::{ko_point, ku_point};
use kr_core::realcx::{
    bredon_cochain_complex, build_model, twisted_cohomology, twisted_cohomology_via_invariants, KRCoefficientSystem,
    LocalWeight, ModelKind, RealComplex,
};
use kr_core::znf::FGAbelianGroup;
use proptest::prelude::*;

fn all_models() -> Vec<ModelKind> {
    let mut v = Vec::new();
    for d in 0..=3 {
        v.push(ModelKind::SphereTrivial(d));
        v.push(ModelKind::SphereAntipodal(d));
    }
    for g in 0..=3 {
        v.push(ModelKind::SurfaceFree(g));
        v.push(ModelKind::SurfaceReflection(g));
    }
    for lambda in 0..=3 {
        v.push(ModelKind::AffineCurve { lambda, free_loops: 2 });
    }
    v
}

fn twisted_direct(x: &RealComplex, i: i64) -> Vec<FGAbelianGroup> {
    (0..=x.dim()).map(|p| twisted_cohomology(x, LocalWeight(i), p).unwrap()).collect()
}

#[test]
fn orbit_euler_identity_on_all_models() {
    for kind in all_models() {
        let x = build_model(kind).unwrap();
        assert!(x.euler_identity_holds(), "{kind:?}");
        assert!(x.barycentric_subdivide().euler_identity_holds(), "{kind:?} subdivided");
    }
}

#[test]
fn twisted_cohomology_two_routes_on_free_models() {
    for kind in all_models() {
        let x = build_model(kind).unwrap();
        if !x.is_free() {
            continue;
        }
        for i in 0..2 {
            assert_eq!(
                twisted_direct(&x, i),
                twisted_cohomology_via_invariants(&x, LocalWeight(i)).unwrap(),
                "{kind:?}, i = {i}"
            );
        }
    }
}

#[test]
fn bredon_in_even_degrees_is_twisted_cohomology() {
    let kr = KRCoefficientSystem::new();
    for kind in all_models() {
        let x = build_model(kind).unwrap();
        if !x.is_free() {
            continue;
        }
        for q in [-6i64, -4, -2, 0] {
            let c = bredon_cochain_complex(&x, &kr, q);
            let expected = twisted_direct(&x, q / 2);
            for p in 0..=x.dim() {
                assert_eq!(c.cohomology(p).unwrap(), expected[p as usize], "{kind:?}, q = {q}, p = {p}");
            }
        }
        for q in [-7i64, -5, -3, -1] {
            let c = bredon_cochain_complex(&x, &kr, q);
            assert!(c.terms().iter().all(|t| t.generators() == 0));
        }
    }
}

#[test]
fn free_surfaces_have_the_expected_quotient_cohomology() {
    for g in 0..=3usize {
        let x = build_model(ModelKind::SurfaceFree(g)).unwrap();
        let even = twisted_direct(&x, 0);
        let odd = twisted_direct(&x, 1);
        assert_eq!(even[0], FGAbelianGroup::free(1));
        assert_eq!(even[1], FGAbelianGroup::free(g));
        assert_eq!(even[2], FGAbelianGroup::cyclic(2));
        assert_eq!(odd[0], FGAbelianGroup::trivial());
        assert_eq!(odd[1], FGAbelianGroup::free(g).direct_sum(&FGAbelianGroup::cyclic(2)));
        assert_eq!(odd[2], FGAbelianGroup::free(1));
    }
}

#[test]
fn klein_bottle_model() {
    let x = build_model(ModelKind::SurfaceFree(1)).unwrap();
    assert_eq!(x.complex().euler_characteristic(), 0);
    assert!(x.fixed_subcomplex().is_empty());
    assert_eq!(x.quotient().euler_characteristic(), 0);
    assert_eq!(twisted_cohomology(&x, LocalWeight(0), 1).unwrap(), FGAbelianGroup::free(1));
}

#[test]
fn annulus_model() {
    let x = build_model(ModelKind::SurfaceReflection(1)).unwrap();
    let f = x.fixed_subcomplex();
    assert_eq!(f.components(), 2);
    assert_eq!(f.cohomology()[1], FGAbelianGroup::free(2));
    assert_eq!(x.quotient().euler_characteristic(), 0);
}

#[test]
fn bredon_point_values() {
    let kr = KRCoefficientSystem::new();
    let x = build_model(ModelKind::SphereTrivial(2)).unwrap();
    for q in -8..=0 {
        let c = bredon_cochain_complex(&x, &kr, q);
        assert_eq!(c.cohomology(0).unwrap(), ko_point(q));
        assert_eq!(c.cohomology(2).unwrap(), ko_point(q));
        assert!(c.cohomology(1).unwrap().is_trivial());
    }
    let orbit = RealComplex::new(2, vec![], vec![1, 0]).unwrap();
    assert_eq!(bredon_cochain_complex(&orbit, &kr, -2).cohomology(0).unwrap(), ku_point(-2));
}

/// Random complex on up to 6 vertices, closed under a random involution.
fn random_real_complex(t: &mut Tape) -> RealComplex {
    let n = t.next(1, 6) as usize;
    let mut tau: Vec<usize> = (0..n).collect();
    let mut free: Vec<usize> = (0..n).collect();
    while free.len() >= 2 && t.next(0, 2) > 0 {
        let a = free.remove(t.next(0, free.len() as i64 - 1) as usize);
        let b = free.remove(t.next(0, free.len() as i64 - 1) as usize);
        tau[a] = b;
        tau[b] = a;
    }
    let mut simplices = Vec::new();
    for _ in 0..t.next(0, 5) {
        let k = t.next(1, 3.min(n as i64)) as usize;
        let mut s: Vec<usize> = Vec::new();
        while s.len() < k {
            let v = t.next(0, n as i64 - 1) as usize;
            if !s.contains(&v) {
                s.push(v);
            }
        }
        let image: Vec<usize> = s.iter().map(|&v| tau[v]).collect();
        let mut dedup = image.clone();
        dedup.sort_unstable();
        dedup.dedup();
        if dedup.len() == image.len() {
            simplices.push(image);
        } else {
            continue;
        }
        simplices.push(s);
    }
    RealComplex::new(n, simplices, tau).unwrap()
}

fn tape() -> impl Strategy<Value = Tape> {
    prop::collection::vec(any::<u32>(), 48).prop_map(Tape::new)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn subdivision_repairs_and_preserves_euler_identity(mut t in tape()) {
        let x = random_real_complex(&mut t);
        let y = x.barycentric_subdivide();
        prop_assert!(y.is_valid());
        prop_assert!(y.euler_identity_holds());
        prop_assert_eq!(y.complex().euler_characteristic(), x.complex().euler_characteristic());
        prop_assert_eq!(y.complex().cohomology(), x.complex().cohomology());
        let z = y.barycentric_subdivide();
        prop_assert_eq!(z.fixed_subcomplex().euler_characteristic(), y.fixed_subcomplex().euler_characteristic());
        prop_assert!(z.euler_identity_holds());
    }

    #[test]
    fn free_random_complexes_agree_on_both_routes(mut t in tape(), i in 0i64..2) {
        let x = random_real_complex(&mut t).barycentric_subdivide();
        if x.is_free() {
            let direct: Vec<_> = (0..=x.dim()).map(|p| twisted_cohomology(&x, LocalWeight(i), p).unwrap()).collect();
            prop_assert_eq!(direct, twisted_cohomology_via_invariants(&x, LocalWeight(i)).unwrap());
        }
    }

    #[test]
    fn bredon_h0_of_fixed_points(mut t in tape()) {
        // with trivial involution, Bredon cohomology is ordinary cohomology with KO coefficients
        let x = random_real_complex(&mut t);
        let n = x.n_vertices();
        let simplices: Vec<Vec<usize>> = (0..=x.dim().max(0) as usize)
            .flat_map(|p| x.complex().simplices(p).to_vec())
            .collect();
        let trivial = RealComplex::new(n, simplices, (0..n).collect()).unwrap();
        let kr = KRCoefficientSystem::new();
        let plain = trivial.complex().cohomology();
        for q in [0i64, -1, -4] {
            let c = bredon_cochain_complex(&trivial, &kr, q);
            if q == 0 || q == -4 {
                for (p, h) in plain.iter().enumerate() {
                    prop_assert_eq!(c.cohomology(p as i64).unwrap(), h.clone());
                }
            } else {
                prop_assert_eq!(c.cohomology(0).unwrap().torsion().len(), trivial.complex().components());
            }
        }
    }
}
