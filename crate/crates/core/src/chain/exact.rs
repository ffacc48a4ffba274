//! Deductions from a finite window of a long exact sequence.

use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use crate::znf::{FGAbelianGroup, GroupMap, Presentation};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Slot {
    Known(FGAbelianGroup),
    Unknown(String),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum MapSpec {
    Known(GroupMap),
    Unknown,
}

/// `slots[0] → slots[1] → …`, exact at every interior slot.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExactTemplate {
    pub slots: Vec<Slot>,
    /// `maps[k]` goes from `slots[k]` to `slots[k+1]`.
    pub maps: Vec<MapSpec>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Resolution {
    Determined(FGAbelianGroup),
    /// The group is an extension `0 → sub → U → quot → 0` that exactness does not pin down.
    GradedPieces {
        sub: FGAbelianGroup,
        quot: FGAbelianGroup,
    },
    Undetermined,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ExactError {
    Malformed(&'static str),
    InconsistentTemplate { slot: usize, reason: &'static str },
}

impl fmt::Display for ExactError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExactError::Malformed(why) => write!(f, "malformed template: {why}"),
            ExactError::InconsistentTemplate { slot, reason } => {
                write!(f, "known data violates exactness at slot {slot}: {reason}")
            }
        }
    }
}

impl ExactTemplate {
    pub fn new(slots: Vec<Slot>, maps: Vec<MapSpec>) -> Result<Self, ExactError> {
        let t = ExactTemplate { slots, maps };
        t.check_shape()?;
        Ok(t)
    }

    fn check_shape(&self) -> Result<(), ExactError> {
        if self.maps.len() != self.slots.len().saturating_sub(1) {
            return Err(ExactError::Malformed("need one map between each pair of consecutive slots"));
        }
        for (k, m) in self.maps.iter().enumerate() {
            if let MapSpec::Known(f) = m {
                for (slot, p) in [(&self.slots[k], f.source()), (&self.slots[k + 1], f.target())] {
                    if let Slot::Known(g) = slot {
                        if &p.group() != g {
                            return Err(ExactError::Malformed("known map does not present its slot's group"));
                        }
                    }
                }
            }
        }
        Ok(())
    }
}

/// Working view of a slot during the fixed-point iteration.
#[derive(Clone)]
enum State {
    Group(FGAbelianGroup),
    Open,
}

struct Solver<'a> {
    t: &'a ExactTemplate,
    state: Vec<State>,
}

impl<'a> Solver<'a> {
    fn group(&self, k: usize) -> Option<&FGAbelianGroup> {
        match &self.state[k] {
            State::Group(g) => Some(g),
            State::Open => None,
        }
    }

    fn is_zero_slot(&self, k: usize) -> bool {
        self.group(k).is_some_and(|g| g.is_trivial())
    }

    /// Presentation of slot `k`, borrowed from an adjacent known map if there is one.
    fn presentation(&self, k: usize) -> Option<Presentation> {
        if k > 0 {
            if let MapSpec::Known(f) = &self.t.maps[k - 1] {
                return Some(f.target().clone());
            }
        }
        if let Some(MapSpec::Known(f)) = self.t.maps.get(k) {
            return Some(f.source().clone());
        }
        self.group(k).map(Presentation::canonical)
    }

    /// The map `slots[k] → slots[k+1]` if it is known or forced to be zero.
    fn map(&self, k: usize) -> Option<GroupMap> {
        if let MapSpec::Known(f) = &self.t.maps[k] {
            return Some(f.clone());
        }
        if self.is_zero_slot(k) || self.is_zero_slot(k + 1) {
            return Some(GroupMap::zero(self.presentation(k)?, self.presentation(k + 1)?));
        }
        None
    }

    /// Image of `slots[k-1] → slots[k]` as an abstract group, when computable.
    fn image_into(&self, k: usize) -> Option<FGAbelianGroup> {
        if k == 0 {
            return None;
        }
        if self.is_zero_slot(k - 1) || self.is_zero_slot(k) {
            return Some(FGAbelianGroup::trivial());
        }
        if let MapSpec::Known(f) = &self.t.maps[k - 1] {
            return Some(f.image_group());
        }
        // exactness at slot k-1: image = slots[k-1] / image of the map before
        if k >= 2 {
            return self.map(k - 2).map(|prev| prev.cokernel());
        }
        None
    }

    /// Image of `slots[k] → slots[k+1]`, when computable from the right.
    fn image_out_of(&self, k: usize) -> Option<FGAbelianGroup> {
        if k + 1 >= self.state.len() {
            return None;
        }
        if self.is_zero_slot(k) || self.is_zero_slot(k + 1) {
            return Some(FGAbelianGroup::trivial());
        }
        if let MapSpec::Known(f) = &self.t.maps[k] {
            return Some(f.image_group());
        }
        // exactness at slot k+1: image = kernel of the next map
        if k + 2 < self.state.len() {
            if let Some(next) = self.map(k + 1) {
                return Some(next.kernel().group());
            }
        }
        None
    }
}

fn consistency(solver: &Solver<'_>) -> Result<(), ExactError> {
    let n = solver.state.len();
    for k in 1..n.saturating_sub(1) {
        if let (Some(a), Some(b)) = (solver.map(k - 1), solver.map(k)) {
            let composite = a.then(&b).map_err(|_| ExactError::Malformed("maps do not compose"))?;
            if !composite.is_zero() {
                return Err(ExactError::InconsistentTemplate {
                    slot: k,
                    reason: "consecutive known maps do not compose to zero",
                });
            }
            let h = crate::znf::homology_at(&a, &b).map_err(|_| ExactError::Malformed("maps do not compose"))?;
            if !h.is_trivial() {
                return Err(ExactError::InconsistentTemplate {
                    slot: k,
                    reason: "kernel and image of the known maps differ",
                });
            }
        }
    }
    // necessary conditions across one unknown map between known groups
    for k in 0..n.saturating_sub(1) {
        let (Some(a), Some(b)) = (solver.group(k), solver.group(k + 1)) else {
            continue;
        };
        if let Some(img) = solver.image_into(k + 1) {
            if !img.embeds_into(b) {
                return Err(ExactError::InconsistentTemplate {
                    slot: k + 1,
                    reason: "forced image does not embed in the next group",
                });
            }
        }
        if let Some(img) = solver.image_out_of(k) {
            if !is_possible_quotient(&img, a) {
                return Err(ExactError::InconsistentTemplate {
                    slot: k,
                    reason: "forced image is not a quotient of the previous group",
                });
            }
        }
    }
    Ok(())
}

/// Necessary condition for `q` to be a quotient of `g`.
fn is_possible_quotient(q: &FGAbelianGroup, g: &FGAbelianGroup) -> bool {
    if g.is_finite() {
        return q.is_finite() && q.embeds_into(g);
    }
    q.minimal_generators() <= g.minimal_generators() && q.free_rank() <= g.free_rank()
}

/// Resolves each unknown slot as far as exactness allows.
pub fn solve_exact(t: &ExactTemplate) -> Result<Vec<(String, Resolution)>, ExactError> {
    t.check_shape()?;
    let mut state: Vec<State> = t
        .slots
        .iter()
        .map(|s| match s {
            Slot::Known(g) => State::Group(g.clone()),
            Slot::Unknown(_) => State::Open,
        })
        .collect();
    // a known map fixes the presentation of an unknown end
    for (k, m) in t.maps.iter().enumerate() {
        if let MapSpec::Known(f) = m {
            if matches!(state[k], State::Open) {
                state[k] = State::Group(f.source().group());
            }
            if matches!(state[k + 1], State::Open) {
                state[k + 1] = State::Group(f.target().group());
            }
        }
    }
    let mut solver = Solver { t, state };
    let n = t.slots.len();
    let mut pieces: Vec<Option<(FGAbelianGroup, FGAbelianGroup)>> = alloc::vec![None; n];
    loop {
        let mut changed = false;
        for (k, piece) in pieces.iter_mut().enumerate() {
            if !matches!(solver.state[k], State::Open) || k == 0 || k + 1 == n {
                continue;
            }
            let (Some(sub), Some(quot)) = (solver.image_into(k), solver.image_out_of(k)) else {
                continue;
            };
            if sub.is_trivial() || quot.is_trivial() || quot.ext_vanishes_into(&sub) {
                solver.state[k] = State::Group(sub.direct_sum(&quot));
                changed = true;
            } else {
                *piece = Some((sub, quot));
            }
        }
        if !changed {
            break;
        }
    }
    consistency(&solver)?;
    let mut out = Vec::new();
    for (k, s) in t.slots.iter().enumerate() {
        let Slot::Unknown(label) = s else { continue };
        let r = match (&solver.state[k], &pieces[k]) {
            (State::Group(g), _) => Resolution::Determined(g.clone()),
            (State::Open, Some((sub, quot))) => Resolution::GradedPieces { sub: sub.clone(), quot: quot.clone() },
            (State::Open, None) => Resolution::Undetermined,
        };
        out.push((label.clone(), r));
    }
    Ok(out)
}
