//! Column-style Hermite reduction and sublattices of `Z^n`.

use alloc::vec;
use alloc::vec::Vec;

use num_integer::Integer;
use num_traits::{Signed, Zero};

use super::matrix::{Int, IntegerMatrix};

/// Result of column reduction `M·V = H`.
///
/// The first `pivot_rows.len()` columns of `H` are in echelon form: column `k`
/// is zero above `pivot_rows[k]`, positive there, and the pivot rows increase.
/// The remaining columns of `H` are zero.
#[derive(Clone, Debug)]
pub struct ColumnEchelon {
    pub h: IntegerMatrix,
    pub v: Option<IntegerMatrix>,
    pub pivot_rows: Vec<usize>,
}

impl ColumnEchelon {
    pub fn rank(&self) -> usize {
        self.pivot_rows.len()
    }
}

pub fn column_echelon(m: &IntegerMatrix, track: bool) -> ColumnEchelon {
    let mut h = m.clone();
    let mut v = track.then(|| IntegerMatrix::identity(m.cols()));
    let cols = h.cols();
    let mut pivot_rows = Vec::new();
    let mut k = 0;
    for i in 0..h.rows() {
        if k == cols {
            break;
        }
        loop {
            // smallest nonzero entry of row i among columns k..
            let mut best: Option<usize> = None;
            let mut count = 0;
            for j in k..cols {
                let x = h.get(i, j);
                if x.is_zero() {
                    continue;
                }
                count += 1;
                if best.is_none_or(|b| x.magnitude() < h.get(i, b).magnitude()) {
                    best = Some(j);
                }
            }
            let Some(b) = best else { break };
            if count == 1 {
                if b != k {
                    h.swap_cols(k, b);
                    if let Some(v) = v.as_mut() {
                        v.swap_cols(k, b);
                    }
                }
                if h.get(i, k).is_negative() {
                    h.negate_col(k);
                    if let Some(v) = v.as_mut() {
                        v.negate_col(k);
                    }
                }
                // reduce earlier columns in this row modulo the pivot
                let p = h.get(i, k).clone();
                for j in 0..k {
                    let q = h.get(i, j).div_floor(&p);
                    if !q.is_zero() {
                        let nq = -q;
                        h.add_col_multiple(j, k, &nq);
                        if let Some(v) = v.as_mut() {
                            v.add_col_multiple(j, k, &nq);
                        }
                    }
                }
                pivot_rows.push(i);
                k += 1;
                break;
            }
            let p = h.get(i, b).clone();
            for j in k..cols {
                if j == b || h.get(i, j).is_zero() {
                    continue;
                }
                let q = -(h.get(i, j) / &p);
                h.add_col_multiple(j, b, &q);
                if let Some(v) = v.as_mut() {
                    v.add_col_multiple(j, b, &q);
                }
            }
        }
    }
    ColumnEchelon { h, v, pivot_rows }
}

/// Basis (as columns) of the integer kernel `{x : M x = 0}`.
pub fn kernel_basis(m: &IntegerMatrix) -> IntegerMatrix {
    let e = column_echelon(m, true);
    let rank = e.rank();
    e.v.expect("tracked").column_range(rank, m.cols())
}

/// A sublattice of `Z^n` stored by an echelon basis.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Lattice {
    ambient: usize,
    basis: IntegerMatrix,
    pivot_rows: Vec<usize>,
}

impl Lattice {
    /// Lattice spanned by the columns of `generators`.
    pub fn span(generators: &IntegerMatrix) -> Self {
        let e = column_echelon(generators, false);
        let r = e.rank();
        Lattice { ambient: generators.rows(), basis: e.h.column_range(0, r), pivot_rows: e.pivot_rows }
    }

    pub fn zero(ambient: usize) -> Self {
        Lattice { ambient, basis: IntegerMatrix::zeros(ambient, 0), pivot_rows: Vec::new() }
    }

    pub fn full(ambient: usize) -> Self {
        Lattice { ambient, basis: IntegerMatrix::identity(ambient), pivot_rows: (0..ambient).collect() }
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }

    pub fn rank(&self) -> usize {
        self.pivot_rows.len()
    }

    pub fn basis(&self) -> &IntegerMatrix {
        &self.basis
    }

    /// Coordinates of `v` in the echelon basis, or `None` if `v` is not in the lattice.
    pub fn coordinates(&self, v: &[Int]) -> Option<Vec<Int>> {
        assert_eq!(v.len(), self.ambient, "vector outside the ambient space");
        let mut rem: Vec<Int> = v.to_vec();
        let mut coords = vec![Int::zero(); self.rank()];
        let mut next_pivot = 0;
        for i in 0..self.ambient {
            if next_pivot < self.rank() && self.pivot_rows[next_pivot] == i {
                let k = next_pivot;
                let p = self.basis.get(i, k);
                let (q, m) = rem[i].div_mod_floor(p);
                if !m.is_zero() {
                    return None;
                }
                if !q.is_zero() {
                    for (row, x) in rem.iter_mut().enumerate().skip(i) {
                        let b = self.basis.get(row, k);
                        if !b.is_zero() {
                            *x -= &q * b;
                        }
                    }
                }
                coords[k] = q;
                next_pivot += 1;
            } else if !rem[i].is_zero() {
                return None;
            }
        }
        Some(coords)
    }

    pub fn contains(&self, v: &[Int]) -> bool {
        self.coordinates(v).is_some()
    }

    /// Whether every column of `m` lies in the lattice.
    pub fn contains_columns(&self, m: &IntegerMatrix) -> bool {
        (0..m.cols()).all(|j| self.contains(&m.column(j)))
    }

    /// Coordinate matrix (rank × m.cols) of the columns of `m`; `None` if one lies outside.
    pub fn coordinate_matrix(&self, m: &IntegerMatrix) -> Option<IntegerMatrix> {
        let cols: Option<Vec<Vec<Int>>> = (0..m.cols()).map(|j| self.coordinates(&m.column(j))).collect();
        Some(IntegerMatrix::from_columns(self.rank(), &cols?))
    }

    pub fn sum(&self, other: &Lattice) -> Lattice {
        Lattice::span(&IntegerMatrix::hstack(self.ambient, &[&self.basis, &other.basis]))
    }

    pub fn is_sublattice_of(&self, other: &Lattice) -> bool {
        other.contains_columns(&self.basis)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn echelon_identity_holds() {
        let m = IntegerMatrix::from_rows(&[[2, 4, 6], [1, 3, 5], [0, 0, 0], [7, -1, 2]]);
        let e = column_echelon(&m, true);
        let v = e.v.clone().unwrap();
        assert_eq!(&m * &v, e.h);
        assert!(v.is_unimodular());
        assert_eq!(e.rank(), 3);
    }

    #[test]
    fn kernel_of_rank_deficient() {
        let m = IntegerMatrix::from_rows(&[[1, 2, 3], [2, 4, 6]]);
        let k = kernel_basis(&m);
        assert_eq!(k.cols(), 2);
        assert!((&m * &k).is_zero());
        // the kernel is saturated: it contains (1,1,-1)
        let lat = Lattice::span(&k);
        assert!(lat.contains(&[Int::from(1), Int::from(1), Int::from(-1)]));
    }

    #[test]
    fn membership_and_coordinates() {
        let lat = Lattice::span(&IntegerMatrix::from_rows(&[[2, 0], [0, 3]]));
        assert!(lat.contains(&[Int::from(4), Int::from(-3)]));
        assert!(!lat.contains(&[Int::from(1), Int::from(0)]));
        let c = lat.coordinates(&[Int::from(4), Int::from(-3)]).unwrap();
        assert_eq!(lat.basis().apply(&c), vec![Int::from(4), Int::from(-3)]);
    }
}
