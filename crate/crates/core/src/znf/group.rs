use alloc::vec::Vec;
use core::fmt;

use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::matrix::{Int, IntegerMatrix};
use super::smith::invariant_factors;
use super::AlgebraError;

/// A finitely generated abelian group `Z^r ⊕ Z/d_1 ⊕ … ⊕ Z/d_k` in invariant
/// factor form: `d_1 | d_2 | … | d_k` and every `d_j ≥ 2`.
///
/// The representation is canonical, so `==` is isomorphism.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FGAbelianGroup {
    free_rank: usize,
    torsion: Vec<Int>,
}

impl FGAbelianGroup {
    pub fn trivial() -> Self {
        FGAbelianGroup { free_rank: 0, torsion: Vec::new() }
    }

    pub fn free(rank: usize) -> Self {
        FGAbelianGroup { free_rank: rank, torsion: Vec::new() }
    }

    /// `Z/n`; `n = 0` gives `Z` and `n = 1` the trivial group.
    pub fn cyclic(n: u64) -> Self {
        Self::from_cyclic_orders([Int::from(n)])
    }

    /// Validated constructor from an explicit invariant-factor list.
    pub fn new(free_rank: usize, torsion: Vec<Int>) -> Result<Self, AlgebraError> {
        if torsion.iter().any(|d| d < &Int::from(2)) {
            return Err(AlgebraError::NotDivisibilityChain);
        }
        if torsion.windows(2).any(|w| !w[1].is_multiple_of(&w[0])) {
            return Err(AlgebraError::NotDivisibilityChain);
        }
        Ok(FGAbelianGroup { free_rank, torsion })
    }

    /// Direct sum of cyclic groups `Z/n_i`, with `n_i = 0` read as `Z`.
    pub fn from_cyclic_orders<I: IntoIterator<Item = Int>>(orders: I) -> Self {
        let mut free_rank = 0;
        let mut finite = Vec::new();
        for n in orders {
            let n = n.abs();
            if n.is_zero() {
                free_rank += 1;
            } else if !n.is_one() {
                finite.push(n);
            }
        }
        let diag = IntegerMatrix::diagonal(finite.len(), finite.len(), &finite);
        let torsion = invariant_factors(&diag).into_iter().filter(|d| !d.is_one()).collect();
        FGAbelianGroup { free_rank, torsion }
    }

    pub fn free_rank(&self) -> usize {
        self.free_rank
    }

    pub fn torsion(&self) -> &[Int] {
        &self.torsion
    }

    pub fn is_trivial(&self) -> bool {
        self.free_rank == 0 && self.torsion.is_empty()
    }

    pub fn is_finite(&self) -> bool {
        self.free_rank == 0
    }

    pub fn is_free(&self) -> bool {
        self.torsion.is_empty()
    }

    /// Order of the torsion subgroup.
    pub fn torsion_order(&self) -> Int {
        self.torsion.iter().fold(Int::one(), |a, d| a * d)
    }

    /// Order of the group, `None` if infinite.
    pub fn order(&self) -> Option<Int> {
        self.is_finite().then(|| self.torsion_order())
    }

    /// Number of cyclic summands in the invariant factor decomposition.
    pub fn minimal_generators(&self) -> usize {
        self.free_rank + self.torsion.len()
    }

    pub fn direct_sum(&self, other: &FGAbelianGroup) -> FGAbelianGroup {
        Self::from_cyclic_orders(self.cyclic_orders().chain(other.cyclic_orders()))
    }

    pub fn sum_all<'a, I: IntoIterator<Item = &'a FGAbelianGroup>>(groups: I) -> FGAbelianGroup {
        Self::from_cyclic_orders(groups.into_iter().flat_map(|g| g.cyclic_orders()))
    }

    pub fn power(&self, n: usize) -> FGAbelianGroup {
        Self::sum_all(core::iter::repeat_n(self, n))
    }

    /// Cyclic summand orders, `0` standing for `Z`.
    pub fn cyclic_orders(&self) -> impl Iterator<Item = Int> + '_ {
        core::iter::repeat_n(Int::zero(), self.free_rank).chain(self.torsion.iter().cloned())
    }

    /// Multiset of prime powers `(p, p^k)` from the primary decomposition of the torsion part.
    pub fn elementary_divisors(&self) -> Vec<(Int, Int)> {
        let mut out = Vec::new();
        for d in &self.torsion {
            for (p, e) in factorize(d) {
                out.push((p.clone(), num_traits::pow(p, e)));
            }
        }
        out.sort();
        out
    }

    /// `(A/mA, A[m])` for `m ≥ 1`.
    pub fn mod_m_and_torsion(&self, m: &Int) -> (FGAbelianGroup, FGAbelianGroup) {
        assert!(m.is_positive(), "m must be positive");
        let quotient = core::iter::repeat_n(m.clone(), self.free_rank).chain(self.torsion.iter().map(|d| d.gcd(m)));
        let kernel = self.torsion.iter().map(|d| d.gcd(m));
        (Self::from_cyclic_orders(quotient), Self::from_cyclic_orders(kernel))
    }

    /// Whether `Hom(self, other) = 0`.
    pub fn hom_vanishes_into(&self, other: &FGAbelianGroup) -> bool {
        if self.is_trivial() || other.is_trivial() {
            return true;
        }
        if self.free_rank > 0 {
            return false;
        }
        self.torsion.iter().all(|d| other.torsion.iter().all(|e| d.gcd(e).is_one()))
    }

    /// Whether `Ext(self, other) = 0`, i.e. every extension of `self` by `other` splits.
    pub fn ext_vanishes_into(&self, other: &FGAbelianGroup) -> bool {
        // Ext(Z/d, B) = B/dB; free summands contribute nothing.
        self.torsion.iter().all(|d| other.free_rank == 0 && other.torsion.iter().all(|e| d.gcd(e).is_one()))
    }

    /// Whether `self` is isomorphic to a subgroup of `other`.
    pub fn embeds_into(&self, other: &FGAbelianGroup) -> bool {
        if self.free_rank > other.free_rank {
            return false;
        }
        primary_parts_dominated(&self.torsion, &other.torsion)
    }
}

/// For each prime, the exponent partition of `small` is dominated entrywise by that of `big`.
fn primary_parts_dominated(small: &[Int], big: &[Int]) -> bool {
    let mut primes: Vec<Int> = small.iter().flat_map(|d| factorize(d).into_iter().map(|(p, _)| p)).collect();
    primes.sort();
    primes.dedup();
    primes.iter().all(|p| {
        let exps = |v: &[Int]| {
            let mut e: Vec<usize> = v.iter().map(|d| valuation(d, p)).filter(|&e| e > 0).collect();
            e.sort_unstable_by(|a, b| b.cmp(a));
            e
        };
        let (es, eb) = (exps(small), exps(big));
        es.len() <= eb.len() && es.iter().zip(&eb).all(|(a, b)| a <= b)
    })
}

fn valuation(n: &Int, p: &Int) -> usize {
    let mut n = n.clone();
    let mut k = 0;
    while !n.is_zero() && n.is_multiple_of(p) {
        n /= p;
        k += 1;
    }
    k
}

/// Trial-division factorisation of `n ≥ 1`.
pub(crate) fn factorize(n: &Int) -> Vec<(Int, usize)> {
    let mut n = n.abs();
    let mut out = Vec::new();
    let mut p = Int::from(2);
    while &p * &p <= n {
        let mut e = 0;
        while n.is_multiple_of(&p) {
            n /= &p;
            e += 1;
        }
        if e > 0 {
            out.push((p.clone(), e));
        }
        p += 1;
    }
    if n > Int::one() {
        out.push((n, 1));
    }
    out
}

impl fmt::Display for FGAbelianGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_trivial() {
            return write!(f, "0");
        }
        let mut first = true;
        let mut sep = |f: &mut fmt::Formatter<'_>| {
            let r = if first { Ok(()) } else { write!(f, " ⊕ ") };
            first = false;
            r
        };
        if self.free_rank == 1 {
            sep(f)?;
            write!(f, "Z")?;
        } else if self.free_rank > 1 {
            sep(f)?;
            write!(f, "Z^{}", self.free_rank)?;
        }
        let mut i = 0;
        while i < self.torsion.len() {
            let d = &self.torsion[i];
            let mut j = i;
            while j < self.torsion.len() && &self.torsion[j] == d {
                j += 1;
            }
            sep(f)?;
            if j - i == 1 {
                write!(f, "Z/{}", d)?;
            } else {
                write!(f, "(Z/{})^{}", d, j - i)?;
            }
            i = j;
        }
        Ok(())
    }
}

impl fmt::Debug for FGAbelianGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}
