//! Random bounded pages and morphisms between them, driven by a caller-supplied
//! integer source.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use num_integer::Integer;
use num_traits::{Signed, Zero};

use super::{Page, SSMorphism, Spot, Window};
use crate::gmod::fuzz::Rng;
use crate::znf::{GroupMap, Int, IntegerMatrix, Presentation};

const ORDERS: [i64; 4] = [0, 2, 3, 4];

fn random_orders(rng: &mut Rng<'_>, max: i64) -> Vec<Int> {
    (0..rng(0, max)).map(|_| Int::from(ORDERS[rng(0, 3) as usize])).collect()
}

fn orders_of(p: &Presentation) -> Vec<Int> {
    (0..p.generators()).map(|j| p.relations().row(j).iter().map(|x| x.abs()).max().unwrap_or_default()).collect()
}

/// A random well-defined homomorphism between direct sums of cyclic groups.
fn random_map(src: &[Int], tgt: &[Int], rng: &mut Rng<'_>) -> IntegerMatrix {
    IntegerMatrix::from_fn(tgt.len(), src.len(), |i, j| {
        let (a, b) = (&src[j], &tgt[i]);
        let step = if b.is_zero() {
            if a.is_zero() {
                Int::from(1)
            } else {
                return Int::zero();
            }
        } else {
            b / a.gcd(b)
        };
        step * Int::from(rng(-2, 2))
    })
}

/// A page on `p ∈ [0, 3]`, `q ∈ [−2, 0]` at `r = 2`, where `d_2 ∘ d_2` lands
/// outside the window.
pub fn random_page(rng: &mut Rng<'_>) -> Page {
    random_page_on(rng, |_| true)
}

fn window() -> Window {
    Window { p_min: 0, p_max: 3, q_min: -2, q_max: 0 }
}

fn random_page_on(rng: &mut Rng<'_>, allowed: impl Fn(Spot) -> bool) -> Page {
    let w = window();
    let mut orders: BTreeMap<Spot, Vec<Int>> = BTreeMap::new();
    for s in w.spots() {
        if allowed(s) {
            orders.insert(s, random_orders(rng, 2));
        }
    }
    let entries: BTreeMap<Spot, Presentation> = orders.iter().map(|(s, o)| (*s, Presentation::cyclic(o))).collect();
    let mut diffs = BTreeMap::new();
    for (&(p, q), o) in &orders {
        let t = (p + 2, q - 1);
        if let Some(ot) = orders.get(&t) {
            let m = random_map(o, ot, rng);
            diffs
                .insert((p, q), GroupMap::new(entries[&(p, q)].clone(), entries[&t].clone(), m).expect("well-defined"));
        }
    }
    Page::new(2, w, entries, diffs).expect("d∘d leaves the window")
}

/// `P ↪ P ⊕ Q` where `Q` lives in total degrees `> n` and `d_2` on the sum
/// may map `Q` into `P`. The inclusion is an isomorphism through total degree
/// `n` and injective in degree `n + 1`.
pub fn random_extension(page: &Page, n: i64, rng: &mut Rng<'_>) -> SSMorphism {
    let q_page = random_page_on(rng, |(p, q)| p + q > n);
    let w = window();
    let mut entries = BTreeMap::new();
    let mut diffs = BTreeMap::new();
    let mut maps = BTreeMap::new();
    for s in w.spots() {
        let (a, b) = (page.entry(s), q_page.entry(s));
        let sum = Presentation::direct_sum(&[&a, &b]);
        if sum.generators() > 0 {
            entries.insert(s, sum.clone());
        }
        if a.generators() > 0 {
            let inc = IntegerMatrix::from_fn(sum.generators(), a.generators(), |i, j| Int::from(i64::from(i == j)));
            maps.insert(s, GroupMap::new(a, sum, inc).expect("inclusion"));
        }
    }
    for s in w.spots() {
        let t = (s.0 + 2, s.1 - 1);
        if !w.contains(t) {
            continue;
        }
        let (pa, qa, pb, qb) = (page.entry(s), q_page.entry(s), page.entry(t), q_page.entry(t));
        let (na, ma, nb, mb) = (pa.generators(), qa.generators(), pb.generators(), qb.generators());
        if na + ma == 0 || nb + mb == 0 {
            continue;
        }
        let mut m = IntegerMatrix::zeros(nb + mb, na + ma);
        m.set_block(0, 0, page.differential(s).matrix());
        m.set_block(0, na, &random_map(&orders_of(&qa), &orders_of(&pb), rng));
        m.set_block(nb, na, q_page.differential(s).matrix());
        let src = Presentation::direct_sum(&[&pa, &qa]);
        let tgt = Presentation::direct_sum(&[&pb, &qb]);
        diffs.insert(s, GroupMap::new(src, tgt, m).expect("well-defined"));
    }
    let target = Page::new(2, w, entries, diffs).expect("d∘d leaves the window");
    SSMorphism::new(page.clone(), target, maps).expect("inclusion commutes with d")
}
