//! Modules and bounded complexes with an action of `G = Z/2`, their group
//! (hyper)cohomology, and good truncation.

use alloc::vec::Vec;
use core::fmt;

use crate::chain::CochainComplex;
use crate::znf::{homology, AlgebraError, FGAbelianGroup, GroupMap, Int, IntegerMatrix, Presentation};

pub mod fuzz;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum GmodError {
    InvalidInvolution,
    NonEquivariant {
        degree: i64,
    },
    NotAComplex {
        degree: i64,
    },
    /// Two truncation lengths of the resolution gave different answers.
    UnstableTruncation {
        degree: i64,
    },
    Algebra(AlgebraError),
}

impl From<AlgebraError> for GmodError {
    fn from(e: AlgebraError) -> Self {
        GmodError::Algebra(e)
    }
}

impl fmt::Display for GmodError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GmodError::InvalidInvolution => write!(f, "sigma does not square to the identity"),
            GmodError::NonEquivariant { degree } => {
                write!(f, "differential out of degree {degree} does not commute with sigma")
            }
            GmodError::NotAComplex { degree } => write!(f, "d∘d ≠ 0 at degree {degree}"),
            GmodError::UnstableTruncation { degree } => {
                write!(f, "hypercohomology in degree {degree} depends on the resolution length")
            }
            GmodError::Algebra(e) => write!(f, "{e}"),
        }
    }
}

/// A presented abelian group with an involution.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InvolutiveModule {
    module: Presentation,
    sigma: GroupMap,
}

impl InvolutiveModule {
    pub fn new(module: Presentation, sigma: IntegerMatrix) -> Result<Self, GmodError> {
        let sigma = GroupMap::new(module.clone(), module.clone(), sigma)?;
        if !sigma.then(&sigma)?.agrees_with(&GroupMap::identity(module.clone()))? {
            return Err(GmodError::InvalidInvolution);
        }
        Ok(InvolutiveModule { module, sigma })
    }

    pub fn trivial(module: Presentation) -> Self {
        let sigma = GroupMap::identity(module.clone());
        InvolutiveModule { module, sigma }
    }

    /// `σ = −1`.
    pub fn sign(module: Presentation) -> Self {
        let sigma = GroupMap::identity(module.clone()).scaled(&Int::from(-1));
        InvolutiveModule { module, sigma }
    }

    /// `Z[G]^n` with σ swapping the two copies in each summand.
    pub fn regular(n: usize) -> Self {
        let swap = IntegerMatrix::from_rows(&[[0, 1], [1, 0]]);
        let blocks: Vec<&IntegerMatrix> = (0..n).map(|_| &swap).collect();
        let m = IntegerMatrix::block_diagonal(&blocks);
        let module = Presentation::free(2 * n);
        let sigma = GroupMap::new(module.clone(), module.clone(), m).expect("permutation");
        InvolutiveModule { module, sigma }
    }

    pub fn zero() -> Self {
        Self::trivial(Presentation::zero())
    }

    pub fn module(&self) -> &Presentation {
        &self.module
    }

    pub fn sigma(&self) -> &GroupMap {
        &self.sigma
    }

    pub fn group(&self) -> FGAbelianGroup {
        self.module.group()
    }

    pub fn direct_sum(parts: &[&InvolutiveModule]) -> Self {
        let mods: Vec<&Presentation> = parts.iter().map(|p| &p.module).collect();
        let sig: Vec<&IntegerMatrix> = parts.iter().map(|p| p.sigma.matrix()).collect();
        let module = Presentation::direct_sum(&mods);
        let sigma =
            GroupMap::new(module.clone(), module.clone(), IntegerMatrix::block_diagonal(&sig)).expect("blockwise");
        InvolutiveModule { module, sigma }
    }

    /// `σ + sign` where `sign = ±1`.
    fn sigma_plus(&self, sign: i64) -> GroupMap {
        let id = GroupMap::identity(self.module.clone()).scaled(&Int::from(sign));
        self.sigma.add(&id).expect("same presentation")
    }

    pub fn sigma_minus_one(&self) -> GroupMap {
        self.sigma_plus(-1)
    }

    pub fn sigma_plus_one(&self) -> GroupMap {
        self.sigma_plus(1)
    }
}

/// `H^p(G, M)` from the 2-periodic resolution.
pub fn group_cohomology(m: &InvolutiveModule, p: u32) -> Result<FGAbelianGroup, GmodError> {
    let minus = m.sigma_minus_one();
    let plus = m.sigma_plus_one();
    let g = if p == 0 {
        minus.kernel().group()
    } else if p.is_multiple_of(2) {
        homology(&plus, &minus)?.group()
    } else {
        homology(&minus, &plus)?.group()
    };
    Ok(g)
}

/// Bounded complex of involutive modules with equivariant differentials.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GComplex {
    lowest_degree: i64,
    terms: Vec<InvolutiveModule>,
    differentials: Vec<GroupMap>,
}

impl GComplex {
    /// `differentials[k]` is a matrix from `terms[k]` to `terms[k+1]`.
    pub fn new(
        lowest_degree: i64,
        terms: Vec<InvolutiveModule>,
        differentials: Vec<IntegerMatrix>,
    ) -> Result<Self, GmodError> {
        if differentials.len() != terms.len().saturating_sub(1) {
            return Err(AlgebraError::DimensionMismatch {
                expected: (terms.len().saturating_sub(1), 0),
                found: (differentials.len(), 0),
            }
            .into());
        }
        let mut maps = Vec::new();
        for (k, m) in differentials.into_iter().enumerate() {
            let degree = lowest_degree + k as i64;
            let d = GroupMap::new(terms[k].module.clone(), terms[k + 1].module.clone(), m)?;
            let left = terms[k].sigma.then(&d)?;
            let right = d.then(&terms[k + 1].sigma)?;
            if !left.agrees_with(&right)? {
                return Err(GmodError::NonEquivariant { degree });
            }
            maps.push(d);
        }
        for (k, w) in maps.windows(2).enumerate() {
            if !w[0].then(&w[1])?.is_zero() {
                return Err(GmodError::NotAComplex { degree: lowest_degree + k as i64 + 1 });
            }
        }
        Ok(GComplex { lowest_degree, terms, differentials: maps })
    }

    pub fn concentrated(n: i64, m: InvolutiveModule) -> Self {
        GComplex { lowest_degree: n, terms: alloc::vec![m], differentials: Vec::new() }
    }

    pub fn lowest_degree(&self) -> i64 {
        self.lowest_degree
    }

    pub fn end_degree(&self) -> i64 {
        self.lowest_degree + self.terms.len() as i64
    }

    pub fn width(&self) -> usize {
        self.terms.len()
    }

    pub fn terms(&self) -> &[InvolutiveModule] {
        &self.terms
    }

    pub fn differentials(&self) -> &[GroupMap] {
        &self.differentials
    }

    fn index(&self, n: i64) -> Option<usize> {
        (n >= self.lowest_degree && n < self.end_degree()).then(|| (n - self.lowest_degree) as usize)
    }

    pub fn term(&self, n: i64) -> InvolutiveModule {
        self.index(n).map_or_else(InvolutiveModule::zero, |k| self.terms[k].clone())
    }

    pub fn differential(&self, n: i64) -> GroupMap {
        match self.index(n) {
            Some(k) if k < self.differentials.len() => self.differentials[k].clone(),
            _ => GroupMap::zero(self.term(n).module, self.term(n + 1).module),
        }
    }

    /// The underlying complex, forgetting the action.
    pub fn underlying(&self) -> CochainComplex {
        CochainComplex::new(
            self.lowest_degree,
            self.terms.iter().map(|t| t.module.clone()).collect(),
            self.differentials.clone(),
        )
        .expect("validated")
    }

    /// The complex of invariants `C^G`.
    pub fn invariants(&self) -> Result<CochainComplex, GmodError> {
        let fixed: Vec<_> = self.terms.iter().map(|t| t.sigma_minus_one().kernel()).collect();
        let mut diffs = Vec::new();
        for (k, d) in self.differentials.iter().enumerate() {
            diffs.push(fixed[k].induced_map(&fixed[k + 1], d.matrix())?);
        }
        Ok(CochainComplex::new(self.lowest_degree, fixed.iter().map(|f| f.presentation().clone()).collect(), diffs)?)
    }
}

/// Total complex of `Hom_G(P_•, C)` for the periodic resolution truncated to
/// columns `0..=columns`, restricted to total degrees `n-1, n, n+1`.
fn total_window(c: &GComplex, n: i64, columns: i64) -> Result<CochainComplex, GmodError> {
    // (column a, degree b) pairs contributing to total degree k
    let spots = |k: i64| -> Vec<(i64, i64)> {
        (0..=columns).map(|a| (a, k - a)).filter(|&(_, b)| c.index(b).is_some()).collect()
    };
    let degrees = [n - 1, n, n + 1];
    let layouts: Vec<Vec<(i64, i64)>> = degrees.iter().map(|&k| spots(k)).collect();
    let terms: Vec<Presentation> = layouts
        .iter()
        .map(|l| {
            let parts: Vec<Presentation> = l.iter().map(|&(_, b)| c.term(b).module).collect();
            let refs: Vec<&Presentation> = parts.iter().collect();
            Presentation::direct_sum(&refs)
        })
        .collect();
    let mut diffs = Vec::new();
    for w in 0..2 {
        let (src, dst) = (&layouts[w], &layouts[w + 1]);
        let offsets = |l: &[(i64, i64)]| -> Vec<usize> {
            let mut acc = 0;
            l.iter()
                .map(|&(_, b)| {
                    let o = acc;
                    acc += c.term(b).module.generators();
                    o
                })
                .collect()
        };
        let (so, to) = (offsets(src), offsets(dst));
        let mut m = IntegerMatrix::zeros(terms[w + 1].generators(), terms[w].generators());
        for (i, &(a, b)) in src.iter().enumerate() {
            let module = c.term(b);
            // resolution direction: (a, b) → (a+1, b) by σ−1 (a even) or σ+1 (a odd)
            if let Some(j) = dst.iter().position(|&s| s == (a + 1, b)) {
                let r = if a % 2 == 0 { module.sigma_minus_one() } else { module.sigma_plus_one() };
                m.set_block(to[j], so[i], r.matrix());
            }
            // complex direction with sign (−1)^a
            if let Some(j) = dst.iter().position(|&s| s == (a, b + 1)) {
                let d = c.differential(b);
                let sign = if a % 2 == 0 { 1 } else { -1 };
                m.set_block(to[j], so[i], &d.matrix().scaled(&Int::from(sign)));
            }
        }
        diffs.push(GroupMap::new(terms[w].clone(), terms[w + 1].clone(), m)?);
    }
    Ok(CochainComplex::new(n - 1, terms, diffs)?)
}

/// Resolution columns needed so that total degree `n` is computed exactly.
fn resolution_length(c: &GComplex, n: i64) -> i64 {
    c.width() as i64 + (n - c.lowest_degree).abs() + 2
}

/// `H^n(G, C)`, checked against a resolution one column longer.
pub fn hypercohomology(c: &GComplex, n: i64) -> Result<FGAbelianGroup, GmodError> {
    if n < c.lowest_degree || c.terms.is_empty() {
        return Ok(FGAbelianGroup::trivial());
    }
    let a = resolution_length(c, n);
    let first = total_window(c, n, a)?.cohomology(n)?;
    let second = total_window(c, n, a + 1)?.cohomology(n)?;
    if first != second {
        return Err(GmodError::UnstableTruncation { degree: n });
    }
    Ok(first)
}

/// Good truncation `τ_{≤i} C`.
pub fn truncate(c: &GComplex, i: i64) -> Result<GComplex, GmodError> {
    if i >= c.end_degree() - 1 {
        return Ok(c.clone());
    }
    if i < c.lowest_degree {
        return Ok(GComplex { lowest_degree: c.lowest_degree, terms: Vec::new(), differentials: Vec::new() });
    }
    let k = (i - c.lowest_degree) as usize;
    let top = &c.terms[k];
    let cycles = c.differentials[k].kernel();
    let sigma = cycles.induced_map(&cycles, top.sigma.matrix())?;
    let z = InvolutiveModule { module: cycles.presentation().clone(), sigma };
    let mut terms: Vec<InvolutiveModule> = c.terms[..k].to_vec();
    terms.push(z.clone());
    let mut differentials: Vec<GroupMap> = c.differentials[..k.saturating_sub(1)].to_vec();
    if k > 0 {
        let d = &c.differentials[k - 1];
        let into = cycles.coordinate_matrix(d.matrix())?;
        differentials.push(GroupMap::new(terms[k - 1].module.clone(), z.module.clone(), into)?);
    }
    Ok(GComplex { lowest_degree: c.lowest_degree, terms, differentials })
}

/// Whether `H^n(G, τ_{≤i} C) ≅ H^n(G, C)` for every `n ≤ i`.
pub fn lemma54_check(c: &GComplex, i: i64) -> Result<bool, GmodError> {
    let t = truncate(c, i)?;
    let top = i.min(c.end_degree());
    for n in c.lowest_degree..=top {
        if hypercohomology(&t, n)? != hypercohomology(c, n)? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Whether `H^n(τ_{≤i} C) = H^n(C)` for `n ≤ i` and vanishes above.
pub fn truncation_is_good(c: &GComplex, i: i64) -> Result<bool, GmodError> {
    let t = truncate(c, i)?.underlying();
    let u = c.underlying();
    for n in c.lowest_degree - 1..=c.end_degree() {
        let expect = if n <= i { u.cohomology(n)? } else { FGAbelianGroup::trivial() };
        if t.cohomology(n)? != expect {
            return Ok(false);
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    fn z() -> Presentation {
        Presentation::free(1)
    }

    #[test]
    fn integers_with_trivial_and_sign_action() {
        let t = InvolutiveModule::trivial(z());
        let expected = [FGAbelianGroup::free(1), FGAbelianGroup::trivial(), FGAbelianGroup::cyclic(2)];
        for (p, e) in expected.iter().enumerate() {
            assert_eq!(&group_cohomology(&t, p as u32).unwrap(), e);
        }
        let s = InvolutiveModule::sign(z());
        let expected = [FGAbelianGroup::trivial(), FGAbelianGroup::cyclic(2), FGAbelianGroup::trivial()];
        for (p, e) in expected.iter().enumerate() {
            assert_eq!(&group_cohomology(&s, p as u32).unwrap(), e);
        }
    }

    #[test]
    fn cyclic_with_inversion_has_h2_of_order_two() {
        for m in [2i64, 4, 8, 16] {
            let module = Presentation::cyclic(&[Int::from(m)]);
            let inv = InvolutiveModule::new(module, IntegerMatrix::from_rows(&[[-1]])).unwrap();
            assert_eq!(group_cohomology(&inv, 2).unwrap(), FGAbelianGroup::cyclic(2));
        }
    }

    #[test]
    fn bad_involution_rejected() {
        let r = InvolutiveModule::new(Presentation::free(1), IntegerMatrix::from_rows(&[[2]]));
        assert_eq!(r, Err(GmodError::InvalidInvolution));
    }

    #[test]
    fn regular_module_is_acyclic() {
        let m = InvolutiveModule::regular(2);
        assert_eq!(group_cohomology(&m, 0).unwrap(), FGAbelianGroup::free(2));
        for p in 1..5 {
            assert!(group_cohomology(&m, p).unwrap().is_trivial());
        }
    }

    #[test]
    fn single_module_hypercohomology() {
        let c = GComplex::concentrated(0, InvolutiveModule::trivial(z()));
        assert_eq!(hypercohomology(&c, 2).unwrap(), FGAbelianGroup::cyclic(2));
        let shifted = GComplex::concentrated(3, InvolutiveModule::trivial(z()));
        assert_eq!(hypercohomology(&shifted, 5).unwrap(), FGAbelianGroup::cyclic(2));
        assert!(hypercohomology(&shifted, 2).unwrap().is_trivial());
    }

    fn times_two() -> GComplex {
        let t = InvolutiveModule::trivial(z());
        GComplex::new(0, vec![t.clone(), t], vec![IntegerMatrix::from_rows(&[[2]])]).unwrap()
    }

    #[test]
    fn times_two_complex() {
        let c = times_two();
        assert_eq!(hypercohomology(&c, 1).unwrap(), FGAbelianGroup::cyclic(2));
        assert!(hypercohomology(&c, 0).unwrap().is_trivial());
        // quasi-isomorphic to Z/2 in degree 1
        let z2 = GComplex::concentrated(1, InvolutiveModule::trivial(Presentation::cyclic(&[Int::from(2)])));
        for n in 0..6 {
            assert_eq!(hypercohomology(&c, n).unwrap(), hypercohomology(&z2, n).unwrap(), "degree {n}");
        }
    }

    #[test]
    fn truncation_examples() {
        let t = InvolutiveModule::trivial(z());
        let zero_d = GComplex::new(
            0,
            vec![t.clone(), t.clone(), t.clone()],
            vec![IntegerMatrix::zeros(1, 1), IntegerMatrix::zeros(1, 1)],
        )
        .unwrap();
        let tr = truncate(&zero_d, 1).unwrap();
        assert_eq!(tr.width(), 2);
        assert!(tr.terms().iter().all(|m| m.group() == FGAbelianGroup::free(1)));
        let c = times_two();
        let tr = truncate(&c, 0).unwrap();
        assert!(tr.terms().iter().all(|m| m.group().is_trivial()));
        assert_eq!(truncate(&c, 5).unwrap(), c);
        for i in -1..3 {
            assert!(truncation_is_good(&c, i).unwrap());
            assert!(lemma54_check(&c, i).unwrap());
            assert!(lemma54_check(&zero_d, i).unwrap());
        }
    }

    #[test]
    fn odd_torsion_sees_only_invariants() {
        // Z/3 with inversion → Z/3 trivial, by the norm map 1 + σ (not equivariant-iso, but a chain)
        let inv =
            InvolutiveModule::new(Presentation::cyclic(&[Int::from(3)]), IntegerMatrix::from_rows(&[[-1]])).unwrap();
        let triv = InvolutiveModule::trivial(Presentation::cyclic(&[Int::from(5)]));
        let c = GComplex::new(
            0,
            vec![inv.clone(), InvolutiveModule::direct_sum(&[&inv, &triv])],
            vec![IntegerMatrix::from_rows(&[[1], [0]])],
        )
        .unwrap();
        let fixed = c.invariants().unwrap();
        for n in 0..5 {
            assert_eq!(hypercohomology(&c, n).unwrap(), fixed.cohomology(n).unwrap(), "degree {n}");
        }
    }
}
