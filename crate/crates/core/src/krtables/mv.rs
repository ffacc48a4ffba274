//! `KR^*` of a genus-`g` surface with the top-bottom involution from the
//! exact sequence
//! `KO^{p+1}(⊔_0^g S^1) → KR^p(X) → KU^p(⋁_g S^1) → KO^{p+2}(⊔_0^g S^1)`.

use alloc::format;
use alloc::vec::Vec;

use super::{ko_orders, ku_orders, GradedPieces, KRTableError};
use crate::chain::{solve_exact, ExactTemplate, MapSpec, Resolution, Slot};
use crate::znf::{GroupMap, Int, IntegerMatrix, Presentation};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MvDegree {
    pub degree: i64,
    /// `coker γ_{p−1}` and `ker γ_p`.
    pub pieces: GradedPieces,
    pub resolution: Resolution,
}

/// Gysin map `KU^n → KO^{n+2}` of a point: inverse Bott, then realification.
fn gysin(n: i64) -> IntegerMatrix {
    let (src, tgt) = (ku_orders(n), ko_orders(n + 2));
    let factor = match (-(n + 2)).rem_euclid(8) {
        0 => 2,
        2 | 4 => 1,
        _ => 0,
    };
    IntegerMatrix::from_fn(tgt.len(), src.len(), |_, _| Int::from(factor))
}

/// Orders of `KU^n(⋁_g S^1) = KU^n ⊕ (KU^{n−1})^g`.
fn wedge_orders(g: usize, n: i64) -> Vec<Int> {
    let mut v = ku_orders(n);
    for _ in 0..g {
        v.extend(ku_orders(n - 1));
    }
    v
}

/// Orders of `KO^n(⊔_0^g S^1)`, circle by circle, each `KO^n ⊕ KO^{n−1}`.
fn circles_orders(g: usize, n: i64) -> Vec<Int> {
    let mut v = Vec::new();
    for _ in 0..=g {
        v.extend(ko_orders(n));
        v.extend(ko_orders(n - 1));
    }
    v
}

/// `γ: KU^p(⋁_g S^1) → KO^{p+2}(⊔_0^g S^1)`. Circle `j < g` sees the point
/// part and the `j`-th reduced summand; the last circle sees the point part
/// and the sum of all reduced summands.
fn gamma(g: usize, p: i64) -> GroupMap {
    let (pt, red) = (gysin(p), gysin(p - 1));
    let (pt_src, red_src) = (pt.cols(), red.cols());
    let (pt_tgt, red_tgt) = (pt.rows(), red.rows());
    let src = wedge_orders(g, p);
    let tgt = circles_orders(g, p + 2);
    let mut m = IntegerMatrix::zeros(tgt.len(), src.len());
    for j in 0..=g {
        let row = j * (pt_tgt + red_tgt);
        m.set_block(row, 0, &pt);
        for k in 0..g {
            if k == j || j == g {
                m.set_block(row + pt_tgt, pt_src + k * red_src, &red);
            }
        }
    }
    GroupMap::new(Presentation::cyclic(&src), Presentation::cyclic(&tgt), m).expect("gysin maps are well defined")
}

/// Degrees `0, −1, …, −7`.
pub fn mv_surface_kr(g: usize) -> Result<Vec<MvDegree>, KRTableError> {
    let mut out = Vec::new();
    for p in (-7..=0).rev() {
        let before = gamma(g, p - 1);
        let after = gamma(g, p);
        let template = ExactTemplate::new(
            alloc::vec![
                Slot::Known(before.source().group()),
                Slot::Known(before.target().group()),
                Slot::Unknown(format!("KR^{p}")),
                Slot::Known(after.source().group()),
                Slot::Known(after.target().group()),
            ],
            alloc::vec![
                MapSpec::Known(before.clone()),
                MapSpec::Unknown,
                MapSpec::Unknown,
                MapSpec::Known(after.clone())
            ],
        )?;
        let resolution = solve_exact(&template)?.remove(0).1;
        out.push(MvDegree {
            degree: p,
            pieces: GradedPieces { sub: before.cokernel(), quot: after.kernel().group() },
            resolution,
        });
    }
    Ok(out)
}
