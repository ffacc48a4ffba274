use kr_cli::json::{canonical_map, ComplexJson, GroupJson, ModuleJson, PageJson, TableJson};
use kr_core::krtables::{ko_table, GradedGroupTable};
use kr_core::realcx::{build_model, ModelKind};
use kr_core::specseq::fuzz::random_page;
use kr_core::specseq::pages_agree_through;
use kr_core::znf::{FGAbelianGroup, GroupMap, Int, IntegerMatrix, Presentation};
use proptest::prelude::*;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn groups_round_trip(rank in 0usize..4, orders in prop::collection::vec(2u64..40, 0..4)) {
        let g = FGAbelianGroup::from_cyclic_orders(orders.iter().map(|&d| Int::from(d)));
        let g = g.direct_sum(&FGAbelianGroup::free(rank));
        let j = GroupJson::from_group(&g);
        let text = serde_json::to_string(&j).unwrap();
        let back: GroupJson = serde_json::from_str(&text).unwrap();
        prop_assert_eq!(back.to_group().unwrap(), g);
    }

    #[test]
    fn pages_round_trip(seed in any::<u64>()) {
        let mut state = seed;
        let mut rng = |lo: i64, hi: i64| {
            state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            lo + ((state >> 33) as i64).rem_euclid(hi - lo + 1)
        };
        let page = random_page(&mut rng);
        let j = PageJson::from_page(&page);
        let text = serde_json::to_string(&j).unwrap();
        let back: PageJson = serde_json::from_str(&text).unwrap();
        prop_assert_eq!(&back, &j);
        let rebuilt = back.to_page().unwrap();
        prop_assert!(pages_agree_through(&page, &rebuilt, 100));
        prop_assert_eq!(PageJson::from_page(&rebuilt), j);
    }
}

#[test]
fn canonical_map_of_a_represented_identity() {
    // Z ⊕ Z/2 presented on two generators in a scrambled basis
    let p = Presentation::new(2, IntegerMatrix::from_rows(&[[2], [2]])).unwrap();
    let id = GroupMap::identity(p);
    let m = canonical_map(&id);
    let g = Presentation::canonical(&id.source().group());
    assert!(GroupMap::new(g.clone(), g.clone(), m.clone()).unwrap().agrees_with(&GroupMap::identity(g)).unwrap());
}

#[test]
fn tables_and_complexes_round_trip() {
    let t: GradedGroupTable = ko_table();
    let j = TableJson::from_table(&t);
    let back: TableJson = serde_json::from_str(&serde_json::to_string(&j).unwrap()).unwrap();
    assert_eq!(back, j);
    assert_eq!(j.period, Some(8));
    assert_eq!(j.values[&-1], GroupJson { rank: 0, torsion: vec![2] });

    let x = build_model(ModelKind::SphereAntipodal(2)).unwrap();
    let c =
        ComplexJson { vertices: x.n_vertices(), simplices: x.complex().simplices(2).to_vec(), tau: x.tau().to_vec() };
    let y = c.to_complex().unwrap();
    assert_eq!(y.complex().euler_characteristic(), 2);
    assert!(y.is_free());

    let m = ModuleJson { group: GroupJson { rank: 2, torsion: vec![] }, sigma: vec![vec![0, 1], vec![1, 0]] };
    let back: ModuleJson = serde_json::from_str(&serde_json::to_string(&m).unwrap()).unwrap();
    assert_eq!(back.to_module().unwrap().group(), FGAbelianGroup::free(2));
}
