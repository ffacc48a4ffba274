//! Groups given by generators and relations, homomorphisms between them, and
//! homology of composable pairs.
//!
//! A presentation with `n` generators and relation matrix `R` (`n × k`)
//! stands for `Z^n / colspan(R)`. Maps act on generator coordinates by
//! left multiplication.

use alloc::vec::Vec;

use num_traits::Zero;

use super::group::FGAbelianGroup;
use super::lattice::{kernel_basis, Lattice};
use super::matrix::{Int, IntegerMatrix};
use super::smith::{invariant_factors, smith_normal_form, unimodular_inverse};
use super::AlgebraError;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Presentation {
    relations: IntegerMatrix,
}

impl Presentation {
    pub fn new(generators: usize, relations: IntegerMatrix) -> Result<Self, AlgebraError> {
        if relations.rows() != generators {
            return Err(AlgebraError::DimensionMismatch {
                expected: (generators, relations.cols()),
                found: (relations.rows(), relations.cols()),
            });
        }
        Ok(Presentation { relations })
    }

    pub fn from_relations(relations: IntegerMatrix) -> Self {
        Presentation { relations }
    }

    pub fn free(n: usize) -> Self {
        Presentation { relations: IntegerMatrix::zeros(n, 0) }
    }

    pub fn zero() -> Self {
        Self::free(0)
    }

    /// One generator per cyclic order; `0` means a free generator.
    pub fn cyclic(orders: &[Int]) -> Self {
        let torsion: Vec<usize> = (0..orders.len()).filter(|&i| !orders[i].is_zero()).collect();
        let mut r = IntegerMatrix::zeros(orders.len(), torsion.len());
        for (c, &i) in torsion.iter().enumerate() {
            r.set(i, c, orders[i].clone());
        }
        Presentation { relations: r }
    }

    /// Canonical presentation: one generator per invariant-factor summand,
    /// free generators first.
    pub fn canonical(g: &FGAbelianGroup) -> Self {
        let orders: Vec<Int> = g.cyclic_orders().collect();
        Self::cyclic(&orders)
    }

    pub fn generators(&self) -> usize {
        self.relations.rows()
    }

    pub fn relations(&self) -> &IntegerMatrix {
        &self.relations
    }

    pub fn relation_lattice(&self) -> Lattice {
        Lattice::span(&self.relations)
    }

    pub fn group(&self) -> FGAbelianGroup {
        cokernel(&self.relations)
    }

    pub fn is_trivial_group(&self) -> bool {
        self.group().is_trivial()
    }

    pub fn direct_sum(parts: &[&Presentation]) -> Self {
        let blocks: Vec<&IntegerMatrix> = parts.iter().map(|p| &p.relations).collect();
        Presentation { relations: IntegerMatrix::block_diagonal(&blocks) }
    }

    /// Mutually inverse isomorphisms `self → canonical` and `canonical → self`.
    pub fn canonical_isomorphisms(&self) -> (GroupMap, GroupMap) {
        let n = self.generators();
        let f = smith_normal_form(&self.relations);
        let diag = |i: usize| {
            if i < f.s.cols() {
                f.s.get(i, i).clone()
            } else {
                Int::zero()
            }
        };
        let free = (0..n).filter(|&i| diag(i).is_zero());
        let torsion = (0..n).filter(|&i| !diag(i).is_zero() && diag(i) != Int::from(1));
        let keep: Vec<usize> = free.chain(torsion).collect();
        let canon = Presentation::canonical(&self.group());
        let to = f.u.select_rows(&keep);
        let back = unimodular_inverse(&f.u).expect("transform is unimodular").select_columns(&keep);
        (
            GroupMap::new(self.clone(), canon.clone(), to).expect("change of basis respects relations"),
            GroupMap::new(canon, self.clone(), back).expect("change of basis respects relations"),
        )
    }

    /// Whether the generator-coordinate vector `v` is zero in the group.
    pub fn is_zero_element(&self, v: &[Int]) -> bool {
        if v.iter().all(Zero::is_zero) {
            return true;
        }
        self.relation_lattice().contains(v)
    }
}

/// Cokernel `Z^rows / colspan(m)` in canonical form.
pub fn cokernel(m: &IntegerMatrix) -> FGAbelianGroup {
    let d = invariant_factors(m);
    let free = m.rows() - d.len();
    FGAbelianGroup::from_cyclic_orders(core::iter::repeat_n(Int::zero(), free).chain(d))
}

/// A homomorphism between presented groups, validated to respect relations.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroupMap {
    source: Presentation,
    target: Presentation,
    matrix: IntegerMatrix,
}

impl GroupMap {
    pub fn new(source: Presentation, target: Presentation, matrix: IntegerMatrix) -> Result<Self, AlgebraError> {
        if matrix.rows() != target.generators() || matrix.cols() != source.generators() {
            return Err(AlgebraError::DimensionMismatch {
                expected: (target.generators(), source.generators()),
                found: (matrix.rows(), matrix.cols()),
            });
        }
        let image_of_relations = &matrix * source.relations();
        if !image_of_relations.is_zero() && !target.relation_lattice().contains_columns(&image_of_relations) {
            return Err(AlgebraError::IllDefinedMap);
        }
        Ok(GroupMap { source, target, matrix })
    }

    pub fn zero(source: Presentation, target: Presentation) -> Self {
        let matrix = IntegerMatrix::zeros(target.generators(), source.generators());
        GroupMap { source, target, matrix }
    }

    pub fn identity(p: Presentation) -> Self {
        let matrix = IntegerMatrix::identity(p.generators());
        GroupMap { source: p.clone(), target: p, matrix }
    }

    pub fn source(&self) -> &Presentation {
        &self.source
    }

    pub fn target(&self) -> &Presentation {
        &self.target
    }

    pub fn matrix(&self) -> &IntegerMatrix {
        &self.matrix
    }

    /// `after ∘ self`.
    pub fn then(&self, after: &GroupMap) -> Result<GroupMap, AlgebraError> {
        if self.target != after.source {
            return Err(AlgebraError::PresentationMismatch);
        }
        Ok(GroupMap { source: self.source.clone(), target: after.target.clone(), matrix: &after.matrix * &self.matrix })
    }

    fn same_ends(&self, other: &GroupMap) -> Result<(), AlgebraError> {
        if self.source != other.source || self.target != other.target {
            return Err(AlgebraError::PresentationMismatch);
        }
        Ok(())
    }

    pub fn add(&self, other: &GroupMap) -> Result<GroupMap, AlgebraError> {
        self.same_ends(other)?;
        Ok(GroupMap { source: self.source.clone(), target: self.target.clone(), matrix: &self.matrix + &other.matrix })
    }

    pub fn sub(&self, other: &GroupMap) -> Result<GroupMap, AlgebraError> {
        self.same_ends(other)?;
        Ok(GroupMap { source: self.source.clone(), target: self.target.clone(), matrix: &self.matrix - &other.matrix })
    }

    pub fn scaled(&self, k: &Int) -> GroupMap {
        GroupMap { source: self.source.clone(), target: self.target.clone(), matrix: self.matrix.scaled(k) }
    }

    /// Whether the map is zero as a homomorphism (every generator lands in the relations).
    pub fn is_zero(&self) -> bool {
        if self.matrix.is_zero() {
            return true;
        }
        self.target.relation_lattice().contains_columns(&self.matrix)
    }

    /// Equality as homomorphisms (matrices may differ by relations).
    pub fn agrees_with(&self, other: &GroupMap) -> Result<bool, AlgebraError> {
        Ok(self.sub(other)?.is_zero())
    }

    /// Lattice `{x ∈ Z^n : M x ∈ relations(target)}`; contains the source relations.
    pub fn kernel_lattice(&self) -> Lattice {
        let n = self.source.generators();
        let rel = self.target.relations();
        let stacked = IntegerMatrix::hstack(self.target.generators(), &[&self.matrix, rel]);
        let k = kernel_basis(&stacked);
        let projected = k.row_range(0, n);
        Lattice::span(&projected)
    }

    pub fn kernel(&self) -> Subquotient {
        let zero_in = GroupMap::zero(Presentation::zero(), self.source.clone());
        homology(&zero_in, self).expect("zero composite")
    }

    pub fn image_group(&self) -> FGAbelianGroup {
        // im f ≅ source / ker f
        let k = self.kernel_lattice();
        let ambient = Lattice::full(self.source.generators());
        let coords = ambient.coordinate_matrix(k.basis()).expect("full lattice");
        cokernel(&coords)
    }

    pub fn cokernel(&self) -> FGAbelianGroup {
        let stacked = IntegerMatrix::hstack(self.target.generators(), &[&self.matrix, self.target.relations()]);
        cokernel(&stacked)
    }

    pub fn is_injective(&self) -> bool {
        self.kernel().group().is_trivial()
    }

    pub fn is_surjective(&self) -> bool {
        self.cokernel().is_trivial()
    }

    pub fn is_isomorphism(&self) -> bool {
        self.is_injective() && self.is_surjective()
    }
}

/// `ker(d_out) / im(d_in)` together with the data needed to map into it.
///
/// Generators of the presentation are the echelon basis of the cycle lattice
/// (a sublattice of the middle group's generator space).
#[derive(Clone, Debug)]
pub struct Subquotient {
    cycles: Lattice,
    presentation: Presentation,
}

impl Subquotient {
    pub fn presentation(&self) -> &Presentation {
        &self.presentation
    }

    pub fn group(&self) -> FGAbelianGroup {
        self.presentation.group()
    }

    pub fn cycles(&self) -> &Lattice {
        &self.cycles
    }

    /// Representatives of the generators, as columns in the ambient coordinates.
    pub fn representatives(&self) -> &IntegerMatrix {
        self.cycles.basis()
    }

    /// Coordinates of an ambient cycle in the subquotient's generators.
    pub fn coordinates(&self, v: &[Int]) -> Result<Vec<Int>, AlgebraError> {
        self.cycles.coordinates(v).ok_or(AlgebraError::NotACycle)
    }

    pub fn coordinate_matrix(&self, m: &IntegerMatrix) -> Result<IntegerMatrix, AlgebraError> {
        self.cycles.coordinate_matrix(m).ok_or(AlgebraError::NotACycle)
    }

    /// Map between subquotients induced by an ambient matrix `f` that carries
    /// cycles to cycles and boundaries to boundaries.
    pub fn induced_map(&self, target: &Subquotient, f: &IntegerMatrix) -> Result<GroupMap, AlgebraError> {
        let images = f * self.representatives();
        let m = target.coordinate_matrix(&images)?;
        GroupMap::new(self.presentation.clone(), target.presentation.clone(), m)
    }
}

/// Homology of `A --d_in--> B --d_out--> C`.
pub fn homology(d_in: &GroupMap, d_out: &GroupMap) -> Result<Subquotient, AlgebraError> {
    if d_in.target != d_out.source {
        return Err(AlgebraError::PresentationMismatch);
    }
    let composite = &d_out.matrix * &d_in.matrix;
    if !composite.is_zero() && !d_out.target.relation_lattice().contains_columns(&composite) {
        return Err(AlgebraError::CompositionNotZero);
    }
    let n = d_in.target.generators();
    let cycles = if d_out.matrix.is_zero() { Lattice::full(n) } else { d_out.kernel_lattice() };
    let boundaries = IntegerMatrix::hstack(n, &[&d_in.matrix, d_in.target.relations()]);
    let rel = cycles.coordinate_matrix(&boundaries).ok_or(AlgebraError::CompositionNotZero)?;
    let presentation = Presentation::from_relations(rel);
    Ok(Subquotient { cycles, presentation })
}

pub fn homology_at(d_in: &GroupMap, d_out: &GroupMap) -> Result<FGAbelianGroup, AlgebraError> {
    Ok(homology(d_in, d_out)?.group())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn canonical_isomorphisms_are_inverse() {
        let p = Presentation::from_relations(IntegerMatrix::from_rows(&[[2, 4, 0], [6, 0, 0], [1, 1, 3]]));
        let (to, back) = p.canonical_isomorphisms();
        assert!(to.is_isomorphism());
        assert!(to.then(&back).unwrap().agrees_with(&GroupMap::identity(p.clone())).unwrap());
        assert!(back.then(&to).unwrap().agrees_with(&GroupMap::identity(to.target().clone())).unwrap());
    }

    fn z(n: usize) -> Presentation {
        Presentation::free(n)
    }

    #[test]
    fn cokernel_examples() {
        assert_eq!(cokernel(&IntegerMatrix::from_rows(&[[2]])), FGAbelianGroup::cyclic(2));
        assert_eq!(cokernel(&IntegerMatrix::zeros(0, 0)), FGAbelianGroup::trivial());
        assert_eq!(
            cokernel(&IntegerMatrix::from_rows(&[[2, 4], [6, 8]])),
            FGAbelianGroup::from_cyclic_orders([Int::from(2), Int::from(4)])
        );
        assert_eq!(cokernel(&IntegerMatrix::zeros(3, 0)), FGAbelianGroup::free(3));
    }

    #[test]
    fn triangle_boundary_circle() {
        // cochains: 3 vertices -> 3 edges (01, 02, 12)
        let d0 = IntegerMatrix::from_rows(&[[-1, 1, 0], [-1, 0, 1], [0, -1, 1]]);
        let d0 = GroupMap::new(z(3), z(3), d0).unwrap();
        let d1 = GroupMap::zero(z(3), z(0));
        assert_eq!(homology_at(&d0, &d1).unwrap(), FGAbelianGroup::free(1));
        let into = GroupMap::zero(z(0), z(3));
        assert_eq!(homology_at(&into, &d0).unwrap(), FGAbelianGroup::free(1));
    }

    #[test]
    fn simple_cases() {
        let zero_in = GroupMap::zero(z(2), z(2));
        let zero_out = GroupMap::zero(z(2), z(2));
        assert_eq!(homology_at(&zero_in, &zero_out).unwrap(), FGAbelianGroup::free(2));
        let two = GroupMap::new(z(1), z(1), IntegerMatrix::from_rows(&[[2]])).unwrap();
        assert_eq!(homology_at(&two, &GroupMap::zero(z(1), z(0))).unwrap(), FGAbelianGroup::cyclic(2));
    }

    #[test]
    fn composition_checked() {
        let id = GroupMap::identity(z(1));
        assert_eq!(homology_at(&id, &id), Err(AlgebraError::CompositionNotZero));
    }

    #[test]
    fn ill_defined_map_rejected() {
        // Z/2 -> Z sending the generator to 1 is not well defined
        let z2 = Presentation::cyclic(&[Int::from(2)]);
        assert_eq!(GroupMap::new(z2.clone(), z(1), IntegerMatrix::from_rows(&[[1]])), Err(AlgebraError::IllDefinedMap));
        // Z/2 -> Z/4 by 2 is fine
        let z4 = Presentation::cyclic(&[Int::from(4)]);
        assert!(GroupMap::new(z2, z4, IntegerMatrix::from_rows(&[[2]])).is_ok());
    }

    #[test]
    fn homology_with_relations() {
        // Z/4 --x2--> Z/4 --x2--> Z/4 : ker(x2) = {0,2}, im(x2) = {0,2} -> 0
        let z4 = Presentation::cyclic(&[Int::from(4)]);
        let two = GroupMap::new(z4.clone(), z4.clone(), IntegerMatrix::from_rows(&[[2]])).unwrap();
        assert!(homology_at(&two, &two).unwrap().is_trivial());
        // Z --x2--> Z/8 --x4--> Z/8 : ker = {0,2,4,6}, im = {0,2,4,6} -> 0 ; with x1 out: Z/8/2 = Z/2
        let z8 = Presentation::cyclic(&[Int::from(8)]);
        let a = GroupMap::new(z(1), z8.clone(), IntegerMatrix::from_rows(&[[2]])).unwrap();
        let b = GroupMap::new(z8.clone(), z8.clone(), IntegerMatrix::from_rows(&[[4]])).unwrap();
        assert!(homology_at(&a, &b).unwrap().is_trivial());
        let c = GroupMap::zero(z8.clone(), z(0));
        assert_eq!(homology_at(&a, &c).unwrap(), FGAbelianGroup::cyclic(2));
    }

    #[test]
    fn kernel_image_cokernel() {
        let f = GroupMap::new(z(2), z(2), IntegerMatrix::from_rows(&[[2, 4], [1, 2]])).unwrap();
        assert_eq!(f.kernel().group(), FGAbelianGroup::free(1));
        assert_eq!(f.image_group(), FGAbelianGroup::free(1));
        assert_eq!(f.cokernel(), FGAbelianGroup::free(1));
        assert!(!f.is_injective());
    }
}
