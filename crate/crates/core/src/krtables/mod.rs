//! Coefficient tables of KO, KU and KR, and closed-form answers for curves,
//! spheres and the Brauer–Severi variety.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;
use core::fmt;

use num_traits::Zero;

use crate::chain::ExactError;
use crate::znf::{FGAbelianGroup, Int};

mod checks;
mod curves;
mod mv;

pub use checks::{brauer_severi_check, computed_table, periodicity_check, pieces_periodicity_check, BrauerSeveriRow};
pub use curves::{curve_affine_kr, curve_projective_kr, sphere_ko, sphere_ko_mod};
pub use mv::{mv_surface_kr, MvDegree};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum KRTableError {
    /// More real components than a genus-`g` curve can have.
    HarnackViolation {
        genus: usize,
        components: usize,
    },
    /// No closed form is known for this degree.
    NotInClosedForm {
        degree: i64,
    },
    /// The simplicial and tabulated answers differ in degree `q`.
    MismatchAt(i64),
    Template(ExactError),
    Computation(&'static str),
}

impl fmt::Display for KRTableError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            KRTableError::HarnackViolation { genus, components } => {
                write!(f, "a genus {genus} curve has at most {} real components, not {components}", genus + 1)
            }
            KRTableError::NotInClosedForm { degree } => write!(f, "no closed form in degree {degree}"),
            KRTableError::MismatchAt(q) => write!(f, "routes disagree in degree {q}"),
            KRTableError::Template(e) => write!(f, "{e}"),
            KRTableError::Computation(why) => write!(f, "{why}"),
        }
    }
}

impl From<ExactError> for KRTableError {
    fn from(e: ExactError) -> Self {
        KRTableError::Template(e)
    }
}

/// Groups indexed by degree, either periodic or with finite support.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GradedGroupTable {
    period: Option<u32>,
    values: BTreeMap<i64, FGAbelianGroup>,
}

impl GradedGroupTable {
    /// A periodic table from its values in degrees `0, −1, …, −(period−1)`.
    pub fn periodic(period: u32, one_period: Vec<FGAbelianGroup>) -> Self {
        assert!(period > 0 && one_period.len() == period as usize, "one value per degree of the period");
        let values = one_period.into_iter().enumerate().map(|(k, g)| (-(k as i64), g)).collect();
        GradedGroupTable { period: Some(period), values }
    }

    /// A table that is only defined at the listed degrees.
    pub fn finite(values: BTreeMap<i64, FGAbelianGroup>) -> Self {
        GradedGroupTable { period: None, values }
    }

    pub fn period(&self) -> Option<u32> {
        self.period
    }

    /// Representative of `n` in `(−period, 0]`, or `n` itself without a period.
    pub fn normalize(&self, n: i64) -> i64 {
        match self.period {
            Some(p) => -((-n).rem_euclid(p as i64)),
            None => n,
        }
    }

    pub fn get(&self, n: i64) -> Option<FGAbelianGroup> {
        self.values.get(&self.normalize(n)).cloned()
    }

    /// Like [`get`](Self::get), but a missing degree is an error.
    pub fn lookup(&self, n: i64) -> Result<FGAbelianGroup, KRTableError> {
        self.get(n).ok_or(KRTableError::NotInClosedForm { degree: n })
    }

    /// Stored degrees and groups.
    pub fn entries(&self) -> impl Iterator<Item = (i64, &FGAbelianGroup)> {
        self.values.iter().map(|(k, v)| (*k, v))
    }
}

/// `KO^n` of a point.
pub fn ko_point(n: i64) -> FGAbelianGroup {
    match (-n).rem_euclid(8) {
        0 | 4 => FGAbelianGroup::free(1),
        1 | 2 => FGAbelianGroup::cyclic(2),
        _ => FGAbelianGroup::trivial(),
    }
}

/// `KU^n` of a point.
pub fn ku_point(n: i64) -> FGAbelianGroup {
    if n.rem_euclid(2) == 0 {
        FGAbelianGroup::free(1)
    } else {
        FGAbelianGroup::trivial()
    }
}

pub fn ko_table() -> GradedGroupTable {
    GradedGroupTable::periodic(8, (0..8).map(|k| ko_point(-k)).collect())
}

pub fn ku_table() -> GradedGroupTable {
    GradedGroupTable::periodic(2, (0..2).map(|k| ku_point(-k)).collect())
}

/// Orders of the cyclic summands of `KO^n`, `0` for `Z`.
pub(crate) fn ko_orders(n: i64) -> Vec<Int> {
    ko_point(n).cyclic_orders().collect()
}

pub(crate) fn ku_orders(n: i64) -> Vec<Int> {
    ku_point(n).cyclic_orders().collect()
}

/// `0 → sub → U → quot → 0` with the extension left open.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GradedPieces {
    pub sub: FGAbelianGroup,
    pub quot: FGAbelianGroup,
}

impl GradedPieces {
    pub fn order(&self) -> Option<Int> {
        Some(self.sub.order()? * self.quot.order()?)
    }

    pub fn free_rank(&self) -> usize {
        self.sub.free_rank() + self.quot.free_rank()
    }

    pub fn torsion_order(&self) -> Int {
        self.sub.torsion_order() * self.quot.torsion_order()
    }

    /// Whether `g` is an extension of `quot` by `sub` as far as ranks and orders can tell.
    pub fn admits(&self, g: &FGAbelianGroup) -> bool {
        self.free_rank() == g.free_rank() && (self.torsion_order() % g.torsion_order()).is_zero()
    }
}

/// Universal coefficient pieces `A^n/m` and `A^{n+1}[m]` of `A^n(−; Z/m)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ModMTable {
    pub m: u64,
    pub period: Option<u32>,
    pub pieces: BTreeMap<i64, GradedPieces>,
}

impl ModMTable {
    pub fn get(&self, n: i64) -> Option<&GradedPieces> {
        let k = match self.period {
            Some(p) => -((-n).rem_euclid(p as i64)),
            None => n,
        };
        self.pieces.get(&k)
    }
}

pub fn mod_m_pieces(a: &FGAbelianGroup, next: &FGAbelianGroup, m: u64) -> GradedPieces {
    let m = Int::from(m);
    GradedPieces { sub: a.mod_m_and_torsion(&m).0, quot: next.mod_m_and_torsion(&m).1 }
}

/// Degree `n ↦ (T(n)/m, T(n+1)[m])` wherever both are known.
pub fn mod_m_table(t: &GradedGroupTable, m: u64) -> ModMTable {
    let pieces = t.entries().filter_map(|(n, a)| t.get(n + 1).map(|b| (n, mod_m_pieces(a, &b, m)))).collect();
    ModMTable { m, period: t.period(), pieces }
}
