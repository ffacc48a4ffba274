//! Equivariant cochains with coefficients in a system on the two orbit types.

use alloc::vec::Vec;

use num_traits::{One, Zero};

use super::{faces, RealComplex, RealError};
use crate::chain::{CochainComplex, SparseComplex};
use crate::gmod::{GComplex, InvolutiveModule};
use crate::krtables::{ko_orders, ko_point, ko_table, ku_orders, ku_table, GradedGroupTable};
use crate::znf::{FGAbelianGroup, GroupMap, Int, IntegerMatrix, Presentation};

/// Weight `i` of the local system `Z(i)`; only the parity matters.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct LocalWeight(pub i64);

impl LocalWeight {
    pub fn is_even(self) -> bool {
        self.0.rem_euclid(2) == 0
    }

    /// `(−1)^i`.
    pub fn sign(self) -> i64 {
        if self.is_even() {
            1
        } else {
            -1
        }
    }
}

/// Values on free and fixed orbits, both direct sums of cyclic groups,
/// with the involution `ψ` on the free value and the restriction map
/// `fixed → free`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CoefficientSystem {
    free_orders: Vec<Int>,
    psi: IntegerMatrix,
    fixed_orders: Vec<Int>,
    restriction: IntegerMatrix,
}

impl CoefficientSystem {
    pub fn new(
        free_orders: Vec<Int>,
        psi: IntegerMatrix,
        fixed_orders: Vec<Int>,
        restriction: IntegerMatrix,
    ) -> Result<Self, crate::gmod::GmodError> {
        let free = Presentation::cyclic(&free_orders);
        let fixed = Presentation::cyclic(&fixed_orders);
        let m = InvolutiveModule::new(free.clone(), psi.clone())?;
        let r = GroupMap::new(fixed, free, restriction.clone())?;
        if !r.then(m.sigma())?.agrees_with(&r)? {
            return Err(crate::gmod::GmodError::NonEquivariant { degree: 0 });
        }
        Ok(CoefficientSystem { free_orders, psi, fixed_orders, restriction })
    }

    /// `Z(i)` on the free orbit, zero on fixed points.
    pub fn twisted(i: LocalWeight) -> Self {
        CoefficientSystem {
            free_orders: alloc::vec![Int::zero()],
            psi: IntegerMatrix::from_i64(1, 1, &[i.sign()]),
            fixed_orders: Vec::new(),
            restriction: IntegerMatrix::zeros(1, 0),
        }
    }

    pub fn free_value(&self) -> FGAbelianGroup {
        FGAbelianGroup::from_cyclic_orders(self.free_orders.iter().cloned())
    }

    pub fn fixed_value(&self) -> FGAbelianGroup {
        FGAbelianGroup::from_cyclic_orders(self.fixed_orders.iter().cloned())
    }

    pub fn psi(&self) -> &IntegerMatrix {
        &self.psi
    }

    pub fn restriction(&self) -> &IntegerMatrix {
        &self.restriction
    }
}

/// The coefficient system `q ↦ (KU^q with conjugation, KO^q, complexification)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KRCoefficientSystem {
    pub free_values: GradedGroupTable,
    pub fixed_values: GradedGroupTable,
}

impl Default for KRCoefficientSystem {
    fn default() -> Self {
        KRCoefficientSystem { free_values: ku_table(), fixed_values: ko_table() }
    }
}

impl KRCoefficientSystem {
    pub fn new() -> Self {
        Self::default()
    }

    /// Conjugation on `KU^q`: `(−1)^k` on `KU^{−2k}`.
    pub fn conjugation_sign(q: i64) -> i64 {
        if (q / 2).rem_euclid(2) == 0 {
            1
        } else {
            -1
        }
    }

    /// Complexification `KO^q → KU^q` as a matrix on the cyclic generators.
    pub fn complexification(q: i64) -> IntegerMatrix {
        let (free, fixed) = (ku_orders(q), ko_orders(q));
        let factor = match q.rem_euclid(8) {
            0 => 1,
            4 => 2,
            _ => 0,
        };
        IntegerMatrix::from_fn(free.len(), fixed.len(), |_, _| Int::from(factor))
    }

    pub fn at(&self, q: i64) -> CoefficientSystem {
        let free = ku_orders(q);
        let psi = IntegerMatrix::identity(free.len()).scaled(&Int::from(Self::conjugation_sign(q)));
        CoefficientSystem::new(free, psi, ko_orders(q), Self::complexification(q)).expect("classical constants")
    }

    pub fn fixed_point_value(&self, q: i64) -> FGAbelianGroup {
        ko_point(q)
    }
}

/// Equivariant cochains of `x` with values in `sys`, one block of generators
/// per orbit of simplices. Generators of a free orbit record the value on its
/// representative.
pub fn equivariant_cochains(x: &RealComplex, sys: &CoefficientSystem) -> SparseComplex {
    let q = x.quotient();
    let (nf, nx) = (sys.free_orders.len(), sys.fixed_orders.len());
    let width = |free: bool| if free { nf } else { nx };
    // offsets[p][orbit] = first generator of that orbit's block
    let mut offsets: Vec<Vec<usize>> = Vec::new();
    let mut orders: Vec<Vec<Int>> = Vec::new();
    for level in &q.cells {
        let mut off = Vec::new();
        let mut ord = Vec::new();
        for cell in level {
            off.push(ord.len());
            ord.extend(if cell.is_free() { sys.free_orders.iter() } else { sys.fixed_orders.iter() }.cloned());
        }
        offsets.push(off);
        orders.push(ord);
    }
    let mut c = SparseComplex::new(0, orders);
    for p in 1..q.cells.len() {
        for (t, cell) in q.cells[p].iter().enumerate() {
            if width(cell.is_free()) == 0 {
                continue;
            }
            for (j, f) in faces(&cell.rep).into_iter().enumerate() {
                let sign = if j % 2 == 0 { 1 } else { -1 };
                let o = q.orbit_of(&f).expect("face of a simplex");
                let face = &q.cells[p - 1][o];
                // block: rows of the target orbit, columns of the face orbit
                let block = match (cell.is_free(), face.is_free()) {
                    (true, true) if face.rep == f => IntegerMatrix::identity(nf),
                    (true, true) => {
                        let (_, eps) = x.oriented_image(&face.rep);
                        sys.psi.scaled(&Int::from(eps))
                    }
                    (true, false) => sys.restriction.clone(),
                    (false, _) => IntegerMatrix::identity(nx),
                };
                let (r0, c0) = (offsets[p][t], offsets[p - 1][o]);
                for a in 0..block.rows() {
                    for b in 0..block.cols() {
                        let v = block.get(a, b);
                        if !v.is_zero() {
                            c.add_entry(p - 1, c0 + b, r0 + a, v * Int::from(sign));
                        }
                    }
                }
            }
        }
    }
    c
}

fn reduced(mut c: SparseComplex) -> CochainComplex {
    c.reduce();
    c.to_dense()
}

/// The Bredon cochain complex `C_G^*(X; KR^q)`, up to unit-pivot cancellation.
pub fn bredon_cochain_complex(x: &RealComplex, m: &KRCoefficientSystem, q: i64) -> CochainComplex {
    reduced(equivariant_cochains(x, &m.at(q)))
}

/// `H_G^p(X; M)` for `p = 0..=dim X`.
pub fn bredon_cohomology(x: &RealComplex, sys: &CoefficientSystem) -> Vec<FGAbelianGroup> {
    let c = reduced(equivariant_cochains(x, sys));
    (0..=x.dim()).map(|p| c.cohomology(p).expect("valid complex")).collect()
}

/// `H^p(X/G; Z(i))` for a free action, from equivariant cochains.
pub fn twisted_cohomology(x: &RealComplex, i: LocalWeight, p: i64) -> Result<FGAbelianGroup, RealError> {
    if !x.is_free() {
        return Err(RealError::NotFreeAction);
    }
    if p < 0 || p > x.dim() {
        return Ok(FGAbelianGroup::trivial());
    }
    Ok(bredon_cohomology(x, &CoefficientSystem::twisted(i))[p as usize].clone())
}

/// Simplicial cochains of `X` as a complex of modules with `σ = (−1)^i τ^*`,
/// where `(τ^*φ)(s) = ε_s φ(τ s)` on sorted simplices.
pub fn simplicial_cochains(x: &RealComplex, i: LocalWeight) -> GComplex {
    let k = x.complex();
    let dims = (x.dim() + 1).max(0) as usize;
    let mut terms = Vec::new();
    for p in 0..dims {
        let n = k.count(p);
        let mut sigma = IntegerMatrix::zeros(n, n);
        for (a, s) in k.simplices(p).iter().enumerate() {
            let (img, eps) = x.oriented_image(s);
            let b = k.index_of(&img).expect("tau is simplicial");
            // (σφ)(s) = ± φ(τ s): row s, column τ s
            sigma.set(a, b, Int::from(eps * i.sign()));
        }
        terms.push(InvolutiveModule::new(Presentation::free(n), sigma).expect("tau is an involution"));
    }
    let mut diffs = Vec::new();
    for p in 1..dims {
        let mut d = IntegerMatrix::zeros(k.count(p), k.count(p - 1));
        for (t, s) in k.simplices(p).iter().enumerate() {
            for (j, f) in faces(s).into_iter().enumerate() {
                let v = if j % 2 == 0 { Int::one() } else { -Int::one() };
                d.set(t, k.index_of(&f).expect("closed under faces"), v);
            }
        }
        diffs.push(d);
    }
    GComplex::new(0, terms, diffs).expect("coboundary commutes with tau")
}

/// `H^p(X/G; Z(i))` as cohomology of the invariant cochains of `X`.
pub fn twisted_cohomology_via_invariants(x: &RealComplex, i: LocalWeight) -> Result<Vec<FGAbelianGroup>, RealError> {
    if !x.is_free() {
        return Err(RealError::NotFreeAction);
    }
    let inv = simplicial_cochains(x, i).invariants().expect("well-defined invariants");
    Ok((0..=x.dim()).map(|p| inv.cohomology(p).expect("valid complex")).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::realcx::tests::octahedron;
    use alloc::vec;

    fn z() -> FGAbelianGroup {
        FGAbelianGroup::free(1)
    }
    fn z2() -> FGAbelianGroup {
        FGAbelianGroup::cyclic(2)
    }
    fn zero() -> FGAbelianGroup {
        FGAbelianGroup::trivial()
    }

    #[test]
    fn projective_plane_both_weights() {
        let x = octahedron();
        let even: Vec<_> = (0..3).map(|p| twisted_cohomology(&x, LocalWeight(0), p).unwrap()).collect();
        let odd: Vec<_> = (0..3).map(|p| twisted_cohomology(&x, LocalWeight(1), p).unwrap()).collect();
        assert_eq!(even, vec![z(), zero(), z2()]);
        assert_eq!(odd, vec![zero(), z2(), z()]);
        assert_eq!(twisted_cohomology_via_invariants(&x, LocalWeight(0)).unwrap(), even);
        assert_eq!(twisted_cohomology_via_invariants(&x, LocalWeight(3)).unwrap(), odd);
    }

    #[test]
    fn bredon_of_points() {
        let kr = KRCoefficientSystem::new();
        let pt = RealComplex::new(1, vec![], vec![0]).unwrap();
        let orbit = RealComplex::new(2, vec![], vec![1, 0]).unwrap();
        for q in -8..=1 {
            assert_eq!(bredon_cochain_complex(&pt, &kr, q).cohomology(0).unwrap(), ko_point(q));
            assert_eq!(bredon_cochain_complex(&orbit, &kr, q).cohomology(0).unwrap(), crate::krtables::ku_point(q));
        }
    }

    #[test]
    fn odd_degrees_vanish_on_free_complexes() {
        let kr = KRCoefficientSystem::new();
        let c = bredon_cochain_complex(&octahedron(), &kr, -3);
        assert!(c.terms().iter().all(|t| t.generators() == 0));
    }

    #[test]
    fn not_free_rejected() {
        let pt = RealComplex::new(1, vec![], vec![0]).unwrap();
        assert_eq!(twisted_cohomology(&pt, LocalWeight(0), 0), Err(RealError::NotFreeAction));
    }

    #[test]
    fn restriction_must_be_invariant() {
        let r = CoefficientSystem::new(
            vec![Int::zero()],
            IntegerMatrix::from_i64(1, 1, &[-1]),
            vec![Int::zero()],
            IntegerMatrix::from_i64(1, 1, &[1]),
        );
        assert!(r.is_err());
    }
}
