//! Bounded bigraded spectral sequences: pages, page turning, collapse,
//! abutments and the comparison of morphisms.

use alloc::collections::BTreeMap;
use alloc::sync::Arc;
use alloc::vec::Vec;
use core::fmt;

use crate::znf::{homology, iso_check, AlgebraError, FGAbelianGroup, GroupMap, Presentation, Subquotient};

mod assemble;
mod filtered;
pub mod fuzz;

pub use assemble::{
    assemble_ahss, assemble_cartan_leray, cartan_leray_complex, cohomology_with_involution, fold_pieces, kr_pieces,
    KRPieces,
};
pub use filtered::FilteredComplex;

pub type Spot = (i64, i64);

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SpecSeqError {
    OutsideWindow {
        p: i64,
        q: i64,
    },
    PresentationMismatch {
        p: i64,
        q: i64,
    },
    NotAComplex {
        p: i64,
        q: i64,
    },
    BadPageIndex,
    /// A differential `d_r` leaving `(p, q)` could not be excluded.
    NonCollapsing {
        r: u32,
        p: i64,
        q: i64,
    },
    NonCommutingMorphism {
        p: i64,
        q: i64,
    },
    /// Morphisms are propagated only on pages without an attached filtered complex.
    EngineBackedPage,
    NotFreeAction,
    NotFiltered,
    Algebra(AlgebraError),
}

impl From<AlgebraError> for SpecSeqError {
    fn from(e: AlgebraError) -> Self {
        SpecSeqError::Algebra(e)
    }
}

impl fmt::Display for SpecSeqError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SpecSeqError::OutsideWindow { p, q } => write!(f, "spot ({p}, {q}) lies outside the window"),
            SpecSeqError::PresentationMismatch { p, q } => {
                write!(f, "differential at ({p}, {q}) does not match the entries")
            }
            SpecSeqError::NotAComplex { p, q } => write!(f, "d∘d ≠ 0 starting at ({p}, {q})"),
            SpecSeqError::BadPageIndex => write!(f, "page index must be at least 1"),
            SpecSeqError::NonCollapsing { r, p, q } => write!(f, "d_{r} out of ({p}, {q}) may be nonzero"),
            SpecSeqError::NonCommutingMorphism { p, q } => write!(f, "morphism does not commute with d at ({p}, {q})"),
            SpecSeqError::EngineBackedPage => write!(f, "morphisms need pages without an attached filtered complex"),
            SpecSeqError::NotFreeAction => write!(f, "the involution has fixed points"),
            SpecSeqError::NotFiltered => write!(f, "differential lowers the filtration"),
            SpecSeqError::Algebra(e) => write!(f, "{e}"),
        }
    }
}

/// Closed rectangle `[p_min, p_max] × [q_min, q_max]`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Window {
    pub p_min: i64,
    pub p_max: i64,
    pub q_min: i64,
    pub q_max: i64,
}

impl Window {
    pub fn contains(&self, (p, q): Spot) -> bool {
        (self.p_min..=self.p_max).contains(&p) && (self.q_min..=self.q_max).contains(&q)
    }

    pub fn spots(&self) -> impl Iterator<Item = Spot> + '_ {
        (self.p_min..=self.p_max).flat_map(move |p| (self.q_min..=self.q_max).map(move |q| (p, q)))
    }

    /// Page index beyond which every differential leaves the window.
    pub fn stable_page(&self) -> u32 {
        let span = (self.p_max - self.p_min).min(self.q_max - self.q_min + 1).max(0);
        span as u32 + 1
    }
}

/// `E_r^{p,q}` with `d_r : E_r^{p,q} → E_r^{p+r, q−r+1}`.
#[derive(Clone, Debug)]
pub struct Page {
    r: u32,
    window: Window,
    entries: BTreeMap<Spot, Presentation>,
    differentials: BTreeMap<Spot, GroupMap>,
    engine: Option<Arc<FilteredComplex>>,
}

impl PartialEq for Page {
    fn eq(&self, other: &Self) -> bool {
        self.r == other.r
            && self.window == other.window
            && self.entries == other.entries
            && self.differentials == other.differentials
    }
}

impl Page {
    pub fn new(
        r: u32,
        window: Window,
        entries: BTreeMap<Spot, Presentation>,
        differentials: BTreeMap<Spot, GroupMap>,
    ) -> Result<Self, SpecSeqError> {
        if r == 0 {
            return Err(SpecSeqError::BadPageIndex);
        }
        for &(p, q) in entries.keys() {
            if !window.contains((p, q)) {
                return Err(SpecSeqError::OutsideWindow { p, q });
            }
        }
        let page = Page {
            r,
            window,
            entries: entries.into_iter().filter(|(_, e)| e.generators() > 0).collect(),
            differentials: BTreeMap::new(),
            engine: None,
        };
        let mut checked = BTreeMap::new();
        for ((p, q), d) in differentials {
            let t = page.target_of((p, q));
            if d.is_zero() {
                continue;
            }
            if !window.contains((p, q)) || !window.contains(t) {
                return Err(SpecSeqError::OutsideWindow { p, q });
            }
            if d.source() != &page.entry((p, q)) || d.target() != &page.entry(t) {
                return Err(SpecSeqError::PresentationMismatch { p, q });
            }
            checked.insert((p, q), d);
        }
        let page = Page { differentials: checked, ..page };
        for (&s, d) in &page.differentials {
            if let Some(next) = page.differentials.get(&page.target_of(s)) {
                if !d.then(next)?.is_zero() {
                    return Err(SpecSeqError::NotAComplex { p: s.0, q: s.1 });
                }
            }
        }
        Ok(page)
    }

    pub(crate) fn with_engine(mut self, engine: Arc<FilteredComplex>) -> Self {
        self.engine = Some(engine);
        self
    }

    pub fn r(&self) -> u32 {
        self.r
    }

    pub fn window(&self) -> Window {
        self.window
    }

    pub fn has_engine(&self) -> bool {
        self.engine.is_some()
    }

    pub fn target_of(&self, (p, q): Spot) -> Spot {
        (p + self.r as i64, q - self.r as i64 + 1)
    }

    pub fn source_of(&self, (p, q): Spot) -> Spot {
        (p - self.r as i64, q + self.r as i64 - 1)
    }

    pub fn entry(&self, s: Spot) -> Presentation {
        self.entries.get(&s).cloned().unwrap_or_else(Presentation::zero)
    }

    pub fn group(&self, s: Spot) -> FGAbelianGroup {
        self.entries.get(&s).map_or_else(FGAbelianGroup::trivial, |e| e.group())
    }

    pub fn differential(&self, s: Spot) -> GroupMap {
        self.differentials
            .get(&s)
            .cloned()
            .unwrap_or_else(|| GroupMap::zero(self.entry(s), self.entry(self.target_of(s))))
    }

    pub fn entries(&self) -> impl Iterator<Item = (Spot, &Presentation)> {
        self.entries.iter().map(|(s, e)| (*s, e))
    }

    pub fn nonzero_differentials(&self) -> impl Iterator<Item = (Spot, &GroupMap)> {
        self.differentials.iter().filter(|(_, d)| !d.is_zero()).map(|(s, d)| (*s, d))
    }

    /// The same entries on a larger window.
    pub fn enlarged(&self, window: Window) -> Result<Page, SpecSeqError> {
        let mut p = Page::new(self.r, window, self.entries.clone(), self.differentials.clone())?;
        p.engine = self.engine.clone();
        Ok(p)
    }
}

/// `E_{r+1}` as the homology of `d_r`, with the subquotient witnesses.
fn homology_page(page: &Page) -> Result<(Page, BTreeMap<Spot, Subquotient>), SpecSeqError> {
    let mut entries = BTreeMap::new();
    let mut witnesses = BTreeMap::new();
    for s in page.window.spots() {
        if page.entry(s).generators() == 0 {
            continue;
        }
        let h = homology(&page.differential(page.source_of(s)), &page.differential(s))?;
        entries.insert(s, h.presentation().clone());
        witnesses.insert(s, h);
    }
    let next = Page::new(page.r + 1, page.window, entries, BTreeMap::new())?;
    Ok((next, witnesses))
}

/// `E_{r+1} = ker d_r / im d_r`. Pages built from a filtered complex carry
/// their next differential; other pages get `d_{r+1} = 0`.
pub fn turn_page(page: &Page) -> Result<Page, SpecSeqError> {
    match &page.engine {
        Some(engine) => Ok(engine.page(page.r + 1, page.window)?),
        None => Ok(homology_page(page)?.0),
    }
}

/// Turns pages until every differential leaves the window.
pub fn run_to_infinity(page: &Page) -> Result<Page, SpecSeqError> {
    let stable = page.window.stable_page().max(page.r);
    let mut cur = page.clone();
    while cur.r < stable || cur.nonzero_differentials().next().is_some() {
        cur = turn_page(&cur)?;
    }
    Ok(cur)
}

/// Whether every `d_r`, `r ≥` the page index, has a zero source or target.
pub fn collapse_certificate(page: &Page) -> bool {
    let last = page.window.stable_page().max(page.r);
    (page.r..=last).all(|r| {
        page.window.spots().all(|(p, q)| {
            let t = (p + r as i64, q - r as i64 + 1);
            page.group((p, q)).is_trivial() || page.group(t).is_trivial()
        })
    })
}

/// Nonzero entries of total degree `n`, by increasing `p`.
pub fn abutment_graded(page: &Page, n: i64) -> Vec<FGAbelianGroup> {
    abutment_with_filtration(page, n).into_iter().map(|(_, g)| g).collect()
}

pub fn abutment_with_filtration(page: &Page, n: i64) -> Vec<(i64, FGAbelianGroup)> {
    (page.window.p_min..=page.window.p_max)
        .map(|p| (p, page.group((p, n - p))))
        .filter(|(_, g)| !g.is_trivial())
        .collect()
}

/// Componentwise maps `E_r → E'_r` commuting with `d_r`.
#[derive(Clone, Debug)]
pub struct SSMorphism {
    source: Page,
    target: Page,
    maps: BTreeMap<Spot, GroupMap>,
}

impl SSMorphism {
    pub fn new(source: Page, target: Page, maps: BTreeMap<Spot, GroupMap>) -> Result<Self, SpecSeqError> {
        if source.r != target.r {
            return Err(SpecSeqError::BadPageIndex);
        }
        for (&(p, q), f) in &maps {
            if f.source() != &source.entry((p, q)) || f.target() != &target.entry((p, q)) {
                return Err(SpecSeqError::PresentationMismatch { p, q });
            }
        }
        let m = SSMorphism { source, target, maps };
        for s in m.spots() {
            let t = m.source.target_of(s);
            let lhs = m.source.differential(s).then(&m.map(t))?;
            let rhs = m.map(s).then(&m.target.differential(s))?;
            if !lhs.agrees_with(&rhs)? {
                return Err(SpecSeqError::NonCommutingMorphism { p: s.0, q: s.1 });
            }
        }
        Ok(m)
    }

    fn spots(&self) -> Vec<Spot> {
        let mut all: Vec<Spot> = self.source.entries.keys().chain(self.target.entries.keys()).copied().collect();
        all.sort_unstable();
        all.dedup();
        all
    }

    pub fn source(&self) -> &Page {
        &self.source
    }

    pub fn target(&self) -> &Page {
        &self.target
    }

    pub fn map(&self, s: Spot) -> GroupMap {
        self.maps.get(&s).cloned().unwrap_or_else(|| GroupMap::zero(self.source.entry(s), self.target.entry(s)))
    }

    /// The induced morphism on the next pages.
    pub fn turn(&self) -> Result<SSMorphism, SpecSeqError> {
        if self.source.has_engine() || self.target.has_engine() {
            return Err(SpecSeqError::EngineBackedPage);
        }
        let (src, ws) = homology_page(&self.source)?;
        let (tgt, wt) = homology_page(&self.target)?;
        let mut maps = BTreeMap::new();
        for s in self.spots() {
            if let (Some(a), Some(b)) = (ws.get(&s), wt.get(&s)) {
                maps.insert(s, a.induced_map(b, self.map(s).matrix())?);
            }
        }
        SSMorphism::new(src, tgt, maps)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Verdict {
    /// `E_∞^{p,q} ≅ E'_∞^{p,q}` for `p + q ≤ n`; the stable source entries are listed.
    ConfirmedThrough { n: i64, e_infinity: BTreeMap<Spot, FGAbelianGroup> },
    /// The morphism is not an isomorphism (or not injective) at this spot of the starting page.
    HypothesisFailed { p: i64, q: i64 },
    /// The isomorphism or injectivity failed to persist at page `r`.
    InductionBroken { r: u32, p: i64, q: i64 },
}

fn first_failure(f: &SSMorphism, n: i64) -> Result<Option<Spot>, SpecSeqError> {
    for s in f.spots() {
        let total = s.0 + s.1;
        let m = f.map(s);
        if total <= n && !m.is_isomorphism() {
            return Ok(Some(s));
        }
        if total == n + 1 && !m.is_injective() {
            return Ok(Some(s));
        }
    }
    Ok(None)
}

/// If `f` is an isomorphism for `p + q ≤ n` and injective for `p + q = n + 1`
/// on its starting page, the same holds on every later page.
pub fn compare(f: &SSMorphism, n: i64, r0: u32) -> Result<Verdict, SpecSeqError> {
    if f.source.r != r0 {
        return Err(SpecSeqError::BadPageIndex);
    }
    if let Some((p, q)) = first_failure(f, n)? {
        return Ok(Verdict::HypothesisFailed { p, q });
    }
    let stable = f.source.window.stable_page().max(f.target.window.stable_page()).max(r0);
    let mut cur = f.clone();
    loop {
        let done = cur.source.r >= stable
            && cur.source.nonzero_differentials().next().is_none()
            && cur.target.nonzero_differentials().next().is_none();
        if done {
            break;
        }
        cur = cur.turn()?;
        if let Some((p, q)) = first_failure(&cur, n)? {
            return Ok(Verdict::InductionBroken { r: cur.source.r, p, q });
        }
    }
    let e_infinity = cur
        .source
        .entries
        .keys()
        .filter(|s| s.0 + s.1 <= n)
        .map(|&s| (s, cur.source.group(s)))
        .filter(|(_, g)| !g.is_trivial())
        .collect();
    Ok(Verdict::ConfirmedThrough { n, e_infinity })
}

/// Entrywise isomorphism of two pages on the spots with `p + q ≤ n`.
pub fn pages_agree_through(a: &Page, b: &Page, n: i64) -> bool {
    a.window.spots().chain(b.window.spots()).filter(|s| s.0 + s.1 <= n).all(|s| iso_check(&a.group(s), &b.group(s)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::znf::{Int, IntegerMatrix};
    use alloc::vec;

    fn win(p_max: i64, q_min: i64) -> Window {
        Window { p_min: 0, p_max, q_min, q_max: 0 }
    }

    fn times_two_page() -> Page {
        // Z at (0,0) --×2--> Z at (2,-1)
        let z = Presentation::free(1);
        let mut e = BTreeMap::new();
        e.insert((0, 0), z.clone());
        e.insert((2, -1), z.clone());
        let mut d = BTreeMap::new();
        d.insert((0, 0), GroupMap::new(z.clone(), z, IntegerMatrix::from_i64(1, 1, &[2])).unwrap());
        Page::new(2, win(2, -1), e, d).unwrap()
    }

    #[test]
    fn times_two_turns_into_cokernel() {
        let p = times_two_page();
        assert!(!collapse_certificate(&p));
        let next = turn_page(&p).unwrap();
        assert_eq!(next.r(), 3);
        assert!(next.group((0, 0)).is_trivial());
        assert_eq!(next.group((2, -1)), FGAbelianGroup::cyclic(2));
        assert_eq!(abutment_graded(&next, 1), vec![FGAbelianGroup::cyclic(2)]);
        assert!(abutment_graded(&next, 0).is_empty());
    }

    #[test]
    fn zero_differentials_only_bump_the_index() {
        let mut e = BTreeMap::new();
        e.insert((0, 0), Presentation::cyclic(&[Int::from(0), Int::from(4)]));
        e.insert((1, 0), Presentation::free(2));
        let p = Page::new(2, win(1, 0), e, BTreeMap::new()).unwrap();
        assert!(collapse_certificate(&p));
        let q = turn_page(&p).unwrap();
        assert_eq!(q.r(), 3);
        assert!(pages_agree_through(&p, &q, 10));
        let inf = run_to_infinity(&p).unwrap();
        assert!(pages_agree_through(&p, &inf, 10));
    }

    #[test]
    fn checkerboard_is_not_certified() {
        let mut e = BTreeMap::new();
        e.insert((0, 0), Presentation::free(1));
        e.insert((2, -1), Presentation::free(1));
        let p = Page::new(2, win(2, -1), e, BTreeMap::new()).unwrap();
        assert!(!collapse_certificate(&p));
    }

    #[test]
    fn identity_morphism_confirms() {
        let p = times_two_page();
        let maps = p.entries().map(|(s, e)| (s, GroupMap::identity(e.clone()))).collect();
        let f = SSMorphism::new(p.clone(), p, maps).unwrap();
        assert!(matches!(compare(&f, 3, 2).unwrap(), Verdict::ConfirmedThrough { .. }));
    }

    #[test]
    fn zero_morphism_fails_hypothesis() {
        let p = times_two_page();
        let f = SSMorphism::new(p.clone(), p, BTreeMap::new()).unwrap();
        assert_eq!(compare(&f, 0, 2).unwrap(), Verdict::HypothesisFailed { p: 0, q: 0 });
    }

    #[test]
    fn non_commuting_rejected() {
        let p = times_two_page();
        let mut maps = BTreeMap::new();
        maps.insert((0, 0), GroupMap::identity(Presentation::free(1)));
        assert_eq!(SSMorphism::new(p.clone(), p, maps).unwrap_err(), SpecSeqError::NonCommutingMorphism { p: 0, q: 0 });
    }

    #[test]
    fn bad_differential_rejected() {
        let z = Presentation::free(1);
        let mut e = BTreeMap::new();
        e.insert((0, 0), z.clone());
        let mut d = BTreeMap::new();
        d.insert((0, 0), GroupMap::new(z.clone(), z, IntegerMatrix::from_i64(1, 1, &[1])).unwrap());
        assert!(Page::new(2, win(2, -1), e, d).is_err());
    }
}
