//! Bounded cochain complexes of presented abelian groups and a solver for
//! finite windows of long exact sequences.

use alloc::vec::Vec;

use crate::znf::{homology, AlgebraError, FGAbelianGroup, GroupMap, IntegerMatrix, Presentation, Subquotient};

mod exact;
mod sparse;

pub use exact::{solve_exact, ExactError, ExactTemplate, MapSpec, Resolution, Slot};
pub use sparse::SparseComplex;

/// `C^lo → C^{lo+1} → … → C^hi`, zero outside.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CochainComplex {
    lowest_degree: i64,
    terms: Vec<Presentation>,
    differentials: Vec<GroupMap>,
}

impl CochainComplex {
    /// `differentials[k]` goes from `terms[k]` to `terms[k+1]`.
    pub fn new(
        lowest_degree: i64,
        terms: Vec<Presentation>,
        differentials: Vec<GroupMap>,
    ) -> Result<Self, AlgebraError> {
        if differentials.len() != terms.len().saturating_sub(1) {
            return Err(AlgebraError::DimensionMismatch {
                expected: (terms.len().saturating_sub(1), 0),
                found: (differentials.len(), 0),
            });
        }
        for (k, d) in differentials.iter().enumerate() {
            if d.source() != &terms[k] || d.target() != &terms[k + 1] {
                return Err(AlgebraError::PresentationMismatch);
            }
        }
        for w in differentials.windows(2) {
            if !w[0].then(&w[1])?.is_zero() {
                return Err(AlgebraError::CompositionNotZero);
            }
        }
        Ok(CochainComplex { lowest_degree, terms, differentials })
    }

    pub fn zero() -> Self {
        CochainComplex { lowest_degree: 0, terms: Vec::new(), differentials: Vec::new() }
    }

    /// A single group in degree `n`.
    pub fn concentrated(n: i64, term: Presentation) -> Self {
        CochainComplex { lowest_degree: n, terms: alloc::vec![term], differentials: Vec::new() }
    }

    pub fn lowest_degree(&self) -> i64 {
        self.lowest_degree
    }

    /// One past the top degree.
    pub fn end_degree(&self) -> i64 {
        self.lowest_degree + self.terms.len() as i64
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> &[Presentation] {
        &self.terms
    }

    pub fn differentials(&self) -> &[GroupMap] {
        &self.differentials
    }

    fn index(&self, n: i64) -> Option<usize> {
        (n >= self.lowest_degree && n < self.end_degree()).then(|| (n - self.lowest_degree) as usize)
    }

    pub fn term(&self, n: i64) -> Presentation {
        self.index(n).map_or_else(Presentation::zero, |k| self.terms[k].clone())
    }

    /// `d^n : C^n → C^{n+1}`.
    pub fn differential(&self, n: i64) -> GroupMap {
        match self.index(n) {
            Some(k) if k < self.differentials.len() => self.differentials[k].clone(),
            _ => GroupMap::zero(self.term(n), self.term(n + 1)),
        }
    }

    pub fn cohomology_subquotient(&self, n: i64) -> Result<Subquotient, AlgebraError> {
        homology(&self.differential(n - 1), &self.differential(n))
    }

    pub fn cohomology(&self, n: i64) -> Result<FGAbelianGroup, AlgebraError> {
        if self.index(n).is_none() {
            return Ok(FGAbelianGroup::trivial());
        }
        Ok(self.cohomology_subquotient(n)?.group())
    }

    /// `(degree, H^degree)` over the support.
    pub fn all_cohomology(&self) -> Result<Vec<(i64, FGAbelianGroup)>, AlgebraError> {
        (self.lowest_degree..self.end_degree()).map(|n| Ok((n, self.cohomology(n)?))).collect()
    }

    /// Mapping cone of a chain map `f^n : C^n → D^n` (one map per degree of
    /// the common support): `Cone^n = C^{n+1} ⊕ D^n`, `d(c, x) = (−d c, f c + d x)`.
    pub fn mapping_cone(
        c: &CochainComplex,
        d: &CochainComplex,
        f: &[GroupMap],
    ) -> Result<CochainComplex, AlgebraError> {
        let lo = c.lowest_degree.min(d.lowest_degree) - 1;
        let hi = c.end_degree().max(d.end_degree());
        let map_at = |n: i64| -> GroupMap {
            let k = n - c.lowest_degree.min(d.lowest_degree);
            if k >= 0 && (k as usize) < f.len() {
                f[k as usize].clone()
            } else {
                GroupMap::zero(c.term(n), d.term(n))
            }
        };
        let mut terms = Vec::new();
        for n in lo..hi {
            terms.push(Presentation::direct_sum(&[&c.term(n + 1), &d.term(n)]));
        }
        let mut diffs = Vec::new();
        for n in lo..hi - 1 {
            let dc = c.differential(n + 1).matrix().scaled(&crate::znf::Int::from(-1));
            let fm = map_at(n + 1);
            let dd = d.differential(n);
            let (c1, d0, d1) = (c.term(n + 2).generators(), d.term(n).generators(), d.term(n + 1).generators());
            let c0 = c.term(n + 1).generators();
            let mut m = IntegerMatrix::zeros(c1 + d1, c0 + d0);
            m.set_block(0, 0, &dc);
            m.set_block(c1, 0, fm.matrix());
            m.set_block(c1, c0, dd.matrix());
            let k = (n - lo) as usize;
            diffs.push(GroupMap::new(terms[k].clone(), terms[k + 1].clone(), m)?);
        }
        CochainComplex::new(lo, terms, diffs)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    fn triangle() -> CochainComplex {
        // coboundary of the triangle: rows edges 01,02,12; cols vertices 0,1,2
        let d = IntegerMatrix::from_rows(&[[-1, 1, 0], [-1, 0, 1], [0, -1, 1]]);
        let t = vec![Presentation::free(3), Presentation::free(3)];
        let g = GroupMap::new(t[0].clone(), t[1].clone(), d).unwrap();
        CochainComplex::new(0, t, vec![g]).unwrap()
    }

    #[test]
    fn triangle_boundary_circle() {
        let c = triangle();
        assert_eq!(c.cohomology(0).unwrap(), FGAbelianGroup::free(1));
        assert_eq!(c.cohomology(1).unwrap(), FGAbelianGroup::free(1));
        assert!(c.cohomology(-3).unwrap().is_trivial());
        assert!(c.cohomology(5).unwrap().is_trivial());
    }

    #[test]
    fn cone_of_identity_is_acyclic() {
        let c = triangle();
        let ids: Vec<GroupMap> = c.terms().iter().map(|t| GroupMap::identity(t.clone())).collect();
        let cone = CochainComplex::mapping_cone(&c, &c, &ids).unwrap();
        for (_, h) in cone.all_cohomology().unwrap() {
            assert!(h.is_trivial());
        }
    }

    #[test]
    fn non_complex_rejected() {
        let t = vec![Presentation::free(1); 3];
        let one = GroupMap::identity(Presentation::free(1));
        assert_eq!(CochainComplex::new(0, t, vec![one.clone(), one]), Err(AlgebraError::CompositionNotZero));
    }
}
