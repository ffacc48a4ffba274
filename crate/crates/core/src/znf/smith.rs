use alloc::vec::Vec;

use num_integer::Integer;
use num_traits::{Signed, Zero};

use super::matrix::{Int, IntegerMatrix};

/// Smith normal form `S = U·M·V` with `U`, `V` unimodular.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SmithForm {
    pub s: IntegerMatrix,
    pub u: IntegerMatrix,
    pub v: IntegerMatrix,
}

impl SmithForm {
    /// Nonzero diagonal entries `d_1 | d_2 | … | d_r`.
    pub fn invariant_factors(&self) -> Vec<Int> {
        let n = self.s.rows().min(self.s.cols());
        (0..n).map(|i| self.s.get(i, i).clone()).filter(|d| !d.is_zero()).collect()
    }

    pub fn rank(&self) -> usize {
        self.invariant_factors().len()
    }
}

/// Full Smith normal form with both transforms.
///
/// Pivots are chosen as the entry of smallest absolute value in the remaining
/// block, ties broken by lowest `(row, col)`.
pub fn smith_normal_form(m: &IntegerMatrix) -> SmithForm {
    let mut s = m.clone();
    let mut u = IntegerMatrix::identity(m.rows());
    let mut v = IntegerMatrix::identity(m.cols());
    reduce(&mut s, Some(&mut u), Some(&mut v));
    SmithForm { s, u, v }
}

/// Inverse of a unimodular matrix.
pub fn unimodular_inverse(m: &IntegerMatrix) -> Option<IntegerMatrix> {
    if m.rows() != m.cols() {
        return None;
    }
    let f = smith_normal_form(m);
    let n = m.rows();
    if (0..n).any(|i| f.s.get(i, i).abs() != Int::from(1)) {
        return None;
    }
    // M = U⁻¹ S V⁻¹, so M⁻¹ = V S U with S = S⁻¹
    Some(&(&f.v * &f.s) * &f.u)
}

/// Nonzero invariant factors of `m`, without tracking transforms.
pub fn invariant_factors(m: &IntegerMatrix) -> Vec<Int> {
    let mut s = m.clone();
    let r = reduce(&mut s, None, None);
    (0..r).map(|i| s.get(i, i).clone()).collect()
}

fn smallest_in_block(s: &IntegerMatrix, t: usize) -> Option<(usize, usize)> {
    let mut best: Option<(usize, usize)> = None;
    for i in t..s.rows() {
        for j in t..s.cols() {
            let x = s.get(i, j);
            if x.is_zero() {
                continue;
            }
            match best {
                Some((bi, bj)) if s.get(bi, bj).magnitude() <= x.magnitude() => {}
                _ => best = Some((i, j)),
            }
            if x.magnitude() == &num_bigint::BigUint::from(1u8) {
                return best;
            }
        }
    }
    best
}

/// Smallest nonzero entry among row `t` and column `t` (at or beyond `t`).
fn smallest_in_cross(s: &IntegerMatrix, t: usize) -> (usize, usize) {
    let mut best = (t, t);
    let mut best_mag = None;
    let mut consider = |i: usize, j: usize, best: &mut (usize, usize)| {
        let x = s.get(i, j);
        if x.is_zero() {
            return;
        }
        let better = match &best_mag {
            None => true,
            Some(m) => x.magnitude() < m,
        };
        if better {
            best_mag = Some(x.magnitude().clone());
            *best = (i, j);
        }
    };
    for i in t..s.rows() {
        consider(i, t, &mut best);
    }
    for j in t + 1..s.cols() {
        consider(t, j, &mut best);
    }
    best
}

fn move_pivot(
    s: &mut IntegerMatrix,
    u: &mut Option<&mut IntegerMatrix>,
    v: &mut Option<&mut IntegerMatrix>,
    t: usize,
    (i, j): (usize, usize),
) {
    if i != t {
        s.swap_rows(t, i);
        if let Some(u) = u.as_deref_mut() {
            u.swap_rows(t, i);
        }
    }
    if j != t {
        s.swap_cols(t, j);
        if let Some(v) = v.as_deref_mut() {
            v.swap_cols(t, j);
        }
    }
}

/// In-place diagonalisation; returns the rank. Diagonal entries end up
/// nonnegative and form a divisibility chain.
fn reduce(s: &mut IntegerMatrix, mut u: Option<&mut IntegerMatrix>, mut v: Option<&mut IntegerMatrix>) -> usize {
    let (rows, cols) = (s.rows(), s.cols());
    let mut t = 0;
    while t < rows.min(cols) {
        let Some(p) = smallest_in_block(s, t) else {
            break;
        };
        move_pivot(s, &mut u, &mut v, t, p);
        loop {
            let mut dirty = false;
            let pivot = s.get(t, t).clone();
            for i in t + 1..rows {
                if s.get(i, t).is_zero() {
                    continue;
                }
                let q = -(s.get(i, t) / &pivot);
                s.add_row_multiple(i, t, &q);
                if let Some(u) = u.as_deref_mut() {
                    u.add_row_multiple(i, t, &q);
                }
                dirty |= !s.get(i, t).is_zero();
            }
            for j in t + 1..cols {
                if s.get(t, j).is_zero() {
                    continue;
                }
                let q = -(s.get(t, j) / &pivot);
                s.add_col_multiple(j, t, &q);
                if let Some(v) = v.as_deref_mut() {
                    v.add_col_multiple(j, t, &q);
                }
                dirty |= !s.get(t, j).is_zero();
            }
            if dirty {
                let p = smallest_in_cross(s, t);
                move_pivot(s, &mut u, &mut v, t, p);
                continue;
            }
            // Row and column are clear; enforce divisibility on the rest.
            let pivot = s.get(t, t).clone();
            if pivot.magnitude() != &num_bigint::BigUint::from(1u8) {
                let offender = (t + 1..rows).find(|&i| (t + 1..cols).any(|j| !s.get(i, j).is_multiple_of(&pivot)));
                if let Some(i) = offender {
                    s.add_row_multiple(t, i, &Int::from(1));
                    if let Some(u) = u.as_deref_mut() {
                        u.add_row_multiple(t, i, &Int::from(1));
                    }
                    continue;
                }
            }
            break;
        }
        if s.get(t, t).is_negative() {
            s.negate_row(t);
            if let Some(u) = u.as_deref_mut() {
                u.negate_row(t);
            }
        }
        t += 1;
    }
    t
}
