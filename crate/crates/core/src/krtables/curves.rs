//! Closed forms for real curves and for spheres with trivial involution.

use alloc::collections::BTreeMap;
use alloc::vec;

use super::{ko_point, mod_m_pieces, GradedGroupTable, GradedPieces, KRTableError};
use crate::znf::FGAbelianGroup;

fn z2() -> FGAbelianGroup {
    FGAbelianGroup::cyclic(2)
}

/// `KR^*` of a smooth projective real curve of genus `g` with `λ` real
/// components: period 4 when `λ = 0`, degrees `0` and `−1` otherwise.
pub fn curve_projective_kr(g: usize, lambda: usize) -> Result<GradedGroupTable, KRTableError> {
    if lambda > g + 1 {
        return Err(KRTableError::HarnackViolation { genus: g, components: lambda });
    }
    if lambda == 0 {
        return Ok(GradedGroupTable::periodic(
            4,
            vec![FGAbelianGroup::free(2), FGAbelianGroup::free(g).direct_sum(&z2()), z2(), FGAbelianGroup::free(g)],
        ));
    }
    let mut values = BTreeMap::new();
    values.insert(0, FGAbelianGroup::free(2).direct_sum(&z2().power(lambda - 1)));
    values.insert(-1, FGAbelianGroup::free(g).direct_sum(&z2().power(lambda + 1)));
    Ok(GradedGroupTable::finite(values))
}

/// `KR^0` and `KR^{−6}` of an irreducible affine real curve with `λ` compact real components.
pub fn curve_affine_kr(lambda: usize) -> GradedGroupTable {
    let mut values = BTreeMap::new();
    values.insert(0, FGAbelianGroup::free(1).direct_sum(&z2().power(lambda)));
    values.insert(-6, FGAbelianGroup::trivial());
    GradedGroupTable::finite(values)
}

/// `KO^{−n}(S^d) = KO^{−n} ⊕ KO^{−n−d}`.
pub fn sphere_ko(d: usize, n: i64) -> FGAbelianGroup {
    ko_point(-n).direct_sum(&ko_point(-n - d as i64))
}

/// Universal coefficient pieces of `KO^{−n}(S^d; Z/m)`.
pub fn sphere_ko_mod(d: usize, n: i64, m: u64) -> GradedPieces {
    mod_m_pieces(&sphere_ko(d, n), &sphere_ko(d, n - 1), m)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn genus_one_without_real_points() {
        let t = curve_projective_kr(1, 0).unwrap();
        assert_eq!(t.lookup(-1).unwrap(), FGAbelianGroup::free(1).direct_sum(&z2()));
        assert_eq!(t.lookup(-7).unwrap(), FGAbelianGroup::free(1));
    }

    #[test]
    fn harnack_bound() {
        assert_eq!(curve_projective_kr(0, 2), Err(KRTableError::HarnackViolation { genus: 0, components: 2 }));
        assert!(curve_projective_kr(0, 1).is_ok());
    }

    #[test]
    fn partial_tables() {
        let t = curve_projective_kr(2, 3).unwrap();
        assert_eq!(t.lookup(0).unwrap(), FGAbelianGroup::free(2).direct_sum(&z2().power(2)));
        assert_eq!(t.lookup(-1).unwrap(), FGAbelianGroup::free(2).direct_sum(&z2().power(4)));
        assert_eq!(t.lookup(-2), Err(KRTableError::NotInClosedForm { degree: -2 }));
        let a = curve_affine_kr(3);
        assert_eq!(a.lookup(0).unwrap(), FGAbelianGroup::free(1).direct_sum(&z2().power(3)));
        assert!(a.lookup(-6).unwrap().is_trivial());
        assert!(a.lookup(-2).is_err());
        assert_eq!(curve_affine_kr(0).lookup(0).unwrap(), FGAbelianGroup::free(1));
    }

    #[test]
    fn spheres() {
        assert_eq!(sphere_ko(1, 0), FGAbelianGroup::free(1).direct_sum(&z2()));
        assert_eq!(sphere_ko(0, 0), FGAbelianGroup::free(2));
        assert_eq!(sphere_ko(8, 0), FGAbelianGroup::free(2));
        let p = sphere_ko_mod(2, 0, 8);
        assert_eq!(p.sub, FGAbelianGroup::cyclic(8).direct_sum(&z2()));
        assert_eq!(p.quot, z2());
    }
}
