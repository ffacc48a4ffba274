//! The Bredon spectral sequence `E_2^{p,q} = H_G^p(X; KR^q) ⇒ KR^{p+q}(X)`
//! and the Cartan–Leray spectral sequence of a free action.

use alloc::collections::BTreeMap;
use alloc::sync::Arc;
use alloc::vec::Vec;

use num_traits::Zero;

use super::{abutment_with_filtration, collapse_certificate, FilteredComplex, Page, SpecSeqError, Window};
use crate::chain::SparseComplex;
use crate::gmod::InvolutiveModule;
use crate::realcx::{bredon_cochain_complex, simplicial_cochains, KRCoefficientSystem, LocalWeight, RealComplex};
use crate::znf::{FGAbelianGroup, Int, Presentation};

/// Bredon cohomology rows `q = 0, −1, …, −7` (one period), indexed `[p][k]` with `q = −k`.
fn bredon_rows(x: &RealComplex, m: &KRCoefficientSystem) -> Vec<Vec<FGAbelianGroup>> {
    let d = x.dim().max(0) as usize;
    let mut rows = alloc::vec![alloc::vec![FGAbelianGroup::trivial(); 8]; d + 1];
    for k in 0..8 {
        let c = bredon_cochain_complex(x, m, -(k as i64));
        for (p, row) in rows.iter_mut().enumerate() {
            row[k] = c.cohomology(p as i64).expect("valid complex");
        }
    }
    rows
}

fn residue(q: i64) -> usize {
    (-q).rem_euclid(8) as usize
}

/// `E_2` of the Bredon spectral sequence on `p ∈ [0, dim X]`,
/// `q ∈ [−7 − dim X, 0]`, with zero differentials. Every `d_r` is excluded
/// first, either because its source or target vanishes or, inductively in
/// `r`, because there are no nonzero homomorphisms between the two entries.
pub fn assemble_ahss(x: &RealComplex, m: &KRCoefficientSystem) -> Result<Page, SpecSeqError> {
    let rows = bredon_rows(x, m);
    let d = rows.len() as i64 - 1;
    let window = Window { p_min: 0, p_max: d, q_min: -7 - d, q_max: 0 };
    let mut entries = BTreeMap::new();
    for (p, q) in window.spots() {
        let g = &rows[p as usize][residue(q)];
        if !g.is_trivial() {
            entries.insert((p, q), Presentation::canonical(g));
        }
    }
    let page = Page::new(2, window, entries, BTreeMap::new())?;
    if collapse_certificate(&page) {
        return Ok(page);
    }
    for r in 2..=d.max(1) {
        for p in 0..=d - r {
            for k in 0..8i64 {
                let q = -k;
                let src = &rows[p as usize][k as usize];
                let tgt = &rows[(p + r) as usize][residue(q - r + 1)];
                if !src.hom_vanishes_into(tgt) {
                    return Err(SpecSeqError::NonCollapsing { r: r as u32, p, q });
                }
            }
        }
    }
    Ok(page)
}

/// Graded pieces of `KR^n(X)` from a collapsed Bredon page.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KRPieces {
    pub degree: i64,
    /// `(p, E_∞^{p, n−p})` for the nonzero pieces, by increasing `p`.
    pub pieces: Vec<(i64, FGAbelianGroup)>,
    /// The group itself when every extension is forced to split.
    pub group: Option<FGAbelianGroup>,
}

impl KRPieces {
    /// Product of the piece orders when all are finite.
    pub fn order(&self) -> Option<Int> {
        let mut acc = Int::from(1);
        for (_, g) in &self.pieces {
            acc *= g.order()?;
        }
        Some(acc)
    }

    pub fn free_rank(&self) -> usize {
        self.pieces.iter().map(|(_, g)| g.free_rank()).sum()
    }

    pub fn torsion_order(&self) -> Int {
        self.pieces.iter().map(|(_, g)| g.torsion_order()).product()
    }
}

/// Assembles a group from graded pieces (subgroups at higher `p`) when every
/// successive extension splits for group-theoretic reasons.
pub fn fold_pieces(pieces: &[(i64, FGAbelianGroup)]) -> Option<FGAbelianGroup> {
    let mut acc = FGAbelianGroup::trivial();
    for (_, q) in pieces.iter().rev() {
        if acc.is_trivial() || q.is_trivial() || q.ext_vanishes_into(&acc) {
            acc = acc.direct_sum(q);
        } else {
            return None;
        }
    }
    Some(acc)
}

/// `KR^n(X)` for `n = 0, −1, …, −7` from the collapsed Bredon spectral sequence.
pub fn kr_pieces(x: &RealComplex, m: &KRCoefficientSystem) -> Result<Vec<KRPieces>, SpecSeqError> {
    let page = assemble_ahss(x, m)?;
    Ok((0..8)
        .map(|k| {
            let n = -k;
            let pieces = abutment_with_filtration(&page, n);
            let group = fold_pieces(&pieces);
            KRPieces { degree: n, pieces, group }
        })
        .collect())
}

/// Filtered total complex of `Hom_G(P_•, C^*(X))` for the periodic resolution
/// truncated to `columns + 1` columns, filtered by column.
pub fn cartan_leray_complex(x: &RealComplex, i: LocalWeight, columns: usize) -> SparseComplex {
    let g = simplicial_cochains(x, i);
    let dims = g.terms().len();
    let top = columns + dims.saturating_sub(1);
    // layout[n] = list of (a, b) blocks in total degree n, with offsets
    let mut offsets: BTreeMap<(usize, usize), usize> = BTreeMap::new();
    let mut orders = Vec::new();
    let mut filtration = Vec::new();
    for n in 0..=top {
        let mut size = 0;
        let mut filt = Vec::new();
        for a in 0..=columns.min(n) {
            let b = n - a;
            if b < dims {
                offsets.insert((a, b), size);
                let k = g.terms()[b].module().generators();
                size += k;
                filt.extend(core::iter::repeat_n(a as i64, k));
            }
        }
        orders.push(alloc::vec![Int::zero(); size]);
        filtration.push(filt);
    }
    let mut c = SparseComplex::with_filtration(0, orders, filtration);
    for (&(a, b), &off) in &offsets {
        let n = a + b;
        let sigma = g.terms()[b].sigma().matrix();
        if let Some(&t_off) = offsets.get(&(a + 1, b)) {
            let shift = if a % 2 == 0 { -1 } else { 1 };
            for row in 0..sigma.rows() {
                for col in 0..sigma.cols() {
                    let mut v = sigma.get(row, col).clone();
                    if row == col {
                        v += shift;
                    }
                    if !v.is_zero() {
                        c.add_entry(n, off + col, t_off + row, v);
                    }
                }
            }
        }
        if let Some(&t_off) = offsets.get(&(a, b + 1)) {
            let dm = g.differentials()[b].matrix();
            let sign = if a % 2 == 0 { 1 } else { -1 };
            for row in 0..dm.rows() {
                for col in 0..dm.cols() {
                    let v = dm.get(row, col);
                    if !v.is_zero() {
                        c.add_entry(n, off + col, t_off + row, v * Int::from(sign));
                    }
                }
            }
        }
    }
    c
}

/// `E_2^{p,q} = H^p(G, H^q(X; Z(i))) ⇒ H^{p+q}(X/G; Z(i))` for a free action,
/// from the resolution truncated at column `dim X + 2`; the abutment is exact
/// in total degrees `≤ dim X + 1`.
pub fn assemble_cartan_leray(x: &RealComplex, i: LocalWeight) -> Result<Page, SpecSeqError> {
    if !x.is_free() {
        return Err(SpecSeqError::NotFreeAction);
    }
    let d = x.dim().max(0);
    let columns = (d + 2) as usize;
    let mut c = cartan_leray_complex(x, i, columns);
    c.reduce();
    let f = Arc::new(FilteredComplex::from_sparse(&c)?);
    let window = Window { p_min: 0, p_max: columns as i64, q_min: 0, q_max: d };
    f.page(2, window)
}

/// `H^q(X; Z)` with the involution induced by `(−1)^i τ^*`.
pub fn cohomology_with_involution(x: &RealComplex, i: LocalWeight, q: i64) -> InvolutiveModule {
    let g = simplicial_cochains(x, i);
    if q < 0 || q as usize >= g.terms().len() {
        return InvolutiveModule::zero();
    }
    let sub = g.underlying().cohomology_subquotient(q).expect("valid complex");
    let sigma =
        sub.induced_map(&sub, g.terms()[q as usize].sigma().matrix()).expect("tau commutes with the coboundary");
    InvolutiveModule::new(sub.presentation().clone(), sigma.matrix().clone()).expect("induced involution")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::realcx::{build_model, twisted_cohomology, ModelKind};
    use crate::specseq::{abutment_graded, run_to_infinity};
    use alloc::vec;

    #[test]
    fn projective_plane_from_cartan_leray() {
        let x = build_model(ModelKind::SphereAntipodal(2)).unwrap();
        for i in 0..2 {
            let e2 = assemble_cartan_leray(&x, LocalWeight(i)).unwrap();
            let inf = run_to_infinity(&e2).unwrap();
            for n in 0..=2 {
                let pieces = abutment_graded(&inf, n);
                let expected = twisted_cohomology(&x, LocalWeight(i), n).unwrap();
                assert_eq!(fold_pieces(&pieces.iter().cloned().map(|g| (0, g)).collect::<Vec<_>>()), Some(expected));
            }
        }
    }

    #[test]
    fn octahedron_kr_groups() {
        let x = build_model(ModelKind::SphereAntipodal(2)).unwrap();
        let kr = kr_pieces(&x, &KRCoefficientSystem::new()).unwrap();
        let z = FGAbelianGroup::free(1);
        let z2 = FGAbelianGroup::cyclic(2);
        assert_eq!(kr[0].group, Some(z.power(2)));
        assert_eq!(kr[1].group, Some(z2.clone()));
        assert_eq!(kr[2].group, Some(z2));
        assert_eq!(kr[3].group, Some(FGAbelianGroup::trivial()));
        assert_eq!(kr[0].pieces.len(), 2);
    }

    #[test]
    fn point_is_one_column() {
        let pt = RealComplex::new(1, vec![], vec![0]).unwrap();
        let page = assemble_ahss(&pt, &KRCoefficientSystem::new()).unwrap();
        for q in -7..=0 {
            assert_eq!(page.group((0, q)), crate::krtables::ko_point(q));
        }
    }
}
