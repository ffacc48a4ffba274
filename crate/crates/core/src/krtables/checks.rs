//! Cross-checks between computed and tabulated answers.

use alloc::vec::Vec;

use super::{ko_point, mod_m_pieces, GradedGroupTable, KRTableError};
use crate::realcx::{build_model, KRCoefficientSystem, ModelKind, RealComplex};
use crate::specseq::{kr_pieces, KRPieces, SpecSeqError};
use crate::znf::{iso_check, FGAbelianGroup, Int};

/// One degree of the comparison `KR^q(S^{3,0}) ≅ KO^q ⊕ KO^{q+4}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BrauerSeveriRow {
    pub q: i64,
    pub computed: FGAbelianGroup,
    pub expected: FGAbelianGroup,
    pub computed_mod_order: Int,
    pub expected_mod_order: Int,
}

fn from_specseq(_: SpecSeqError) -> KRTableError {
    KRTableError::Computation("spectral sequence failed")
}

/// `KR^q(X)` for `q = 0, …, −7` as a period-8 table, when every extension is forced.
pub fn computed_table(x: &RealComplex) -> Result<Option<GradedGroupTable>, KRTableError> {
    let pieces = kr_pieces(x, &KRCoefficientSystem::new()).map_err(from_specseq)?;
    Ok(pieces.into_iter().map(|k| k.group).collect::<Option<Vec<_>>>().map(|v| GradedGroupTable::periodic(8, v)))
}

/// Runs the octahedral model of the antipodal 2-sphere through the Bredon
/// spectral sequence and compares each degree of one period with
/// `KO^q ⊕ KO^{q+4}`, integrally and through `Z/m` coefficients.
pub fn brauer_severi_check(m: u64) -> Result<Vec<BrauerSeveriRow>, KRTableError> {
    let x = build_model(ModelKind::SphereAntipodal(2)).map_err(|_| KRTableError::Computation("octahedron"))?;
    let table = computed_table(&x)?.ok_or(KRTableError::Computation("extension not forced"))?;
    let expected = |q: i64| ko_point(q).direct_sum(&ko_point(q + 4));
    let mut rows = Vec::new();
    for q in (-7..=0).rev() {
        let computed = table.lookup(q)?;
        let exp = expected(q);
        let computed_mod_order = mod_m_pieces(&computed, &table.lookup(q + 1)?, m).order().expect("finite");
        let expected_mod_order = mod_m_pieces(&exp, &expected(q + 1), m).order().expect("finite");
        if !iso_check(&computed, &exp) || computed_mod_order != expected_mod_order {
            return Err(KRTableError::MismatchAt(q));
        }
        rows.push(BrauerSeveriRow { q, computed, expected: exp, computed_mod_order, expected_mod_order });
    }
    Ok(rows)
}

/// `T(n) ≅ T(n − period)` wherever both sides are known, over one full cycle.
pub fn periodicity_check(t: &GradedGroupTable, period: u32) -> bool {
    let (lo, hi) = match t.period() {
        Some(p) => (-(p as i64) + 1, 0),
        None => {
            let keys: Vec<i64> = t.entries().map(|(n, _)| n).collect();
            match (keys.first(), keys.last()) {
                (Some(&a), Some(&b)) => (a, b),
                _ => return true,
            }
        }
    };
    (lo..=hi).all(|n| match (t.get(n), t.get(n - period as i64)) {
        (Some(a), Some(b)) => iso_check(&a, &b),
        _ => true,
    })
}

fn piece_groups(k: &KRPieces) -> Vec<FGAbelianGroup> {
    let mut v: Vec<FGAbelianGroup> = k.pieces.iter().map(|(_, g)| g.clone()).collect();
    v.sort_by_key(|g| (g.free_rank(), g.torsion().to_vec()));
    v
}

/// Period check on spectral sequence output: groups where both are forced,
/// multisets of graded pieces otherwise.
pub fn pieces_periodicity_check(t: &[KRPieces], period: usize) -> bool {
    (0..t.len().saturating_sub(period)).all(|k| match (&t[k].group, &t[k + period].group) {
        (Some(a), Some(b)) => iso_check(a, b),
        _ => piece_groups(&t[k]) == piece_groups(&t[k + period]),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::krtables::{curve_projective_kr, ko_table, ku_table};

    #[test]
    fn coefficient_tables() {
        assert!(periodicity_check(&curve_projective_kr(1, 0).unwrap(), 4));
        assert!(periodicity_check(&ku_table(), 2));
        assert!(!periodicity_check(&ko_table(), 4));
        assert!(periodicity_check(&ko_table(), 8));
    }

    #[test]
    fn octahedron_matches_the_table() {
        for m in [2, 8] {
            let rows = brauer_severi_check(m).unwrap();
            assert_eq!(rows.len(), 8);
            assert_eq!(rows[0].computed, FGAbelianGroup::free(2));
            assert_eq!(rows[2].computed, FGAbelianGroup::cyclic(2));
            assert!(rows[3].computed.is_trivial());
        }
    }
}
