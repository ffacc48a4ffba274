//! The spectral sequence of a finite filtered cochain complex whose terms
//! are direct sums of cyclic groups, each generator carrying a filtration
//! degree.
//!
//! With `F^p` spanned by generators of filtration `≥ p`,
//! `Z_r^p = {x ∈ F^p : dx ∈ F^{p+r}}` and
//! `E_r^p = Z_r^p / (Z_{r−1}^{p+1} + d Z_{r−1}^{p−r+1})`,
//! all computed as lattices of integer coordinate vectors.

use alloc::collections::BTreeMap;
use alloc::sync::Arc;
use alloc::vec::Vec;

use num_traits::Zero;

use super::{Page, SpecSeqError, Window};
use crate::chain::{CochainComplex, SparseComplex};
use crate::znf::{kernel_basis, FGAbelianGroup, GroupMap, Int, IntegerMatrix, Lattice, Presentation};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FilteredComplex {
    lowest_degree: i64,
    orders: Vec<Vec<Int>>,
    filtration: Vec<Vec<i64>>,
    /// `d[k]` from degree `lowest + k` to `lowest + k + 1` (target × source).
    d: Vec<IntegerMatrix>,
}

struct Entry {
    basis: IntegerMatrix,
    presentation: Presentation,
}

impl FilteredComplex {
    pub fn new(
        lowest_degree: i64,
        orders: Vec<Vec<Int>>,
        filtration: Vec<Vec<i64>>,
        d: Vec<IntegerMatrix>,
    ) -> Result<Self, SpecSeqError> {
        let c = FilteredComplex { lowest_degree, orders, filtration, d };
        for (k, m) in c.d.iter().enumerate() {
            for x in 0..m.cols() {
                for y in 0..m.rows() {
                    let v = m.get(y, x);
                    let o = &c.orders[k + 1][y];
                    let nonzero = if o.is_zero() { !v.is_zero() } else { !(v % o).is_zero() };
                    if nonzero && c.filtration[k + 1][y] < c.filtration[k][x] {
                        return Err(SpecSeqError::NotFiltered);
                    }
                }
            }
        }
        c.as_complex()?;
        Ok(c)
    }

    /// Surviving generators of a reduced sparse complex.
    pub fn from_sparse(c: &SparseComplex) -> Result<Self, SpecSeqError> {
        let (orders, filtration) = c.surviving().into_iter().unzip();
        Self::new(c.lowest_degree(), orders, filtration, c.dense_differentials())
    }

    pub fn as_complex(&self) -> Result<CochainComplex, SpecSeqError> {
        let terms: Vec<Presentation> = self.orders.iter().map(|o| Presentation::cyclic(o)).collect();
        let diffs = self
            .d
            .iter()
            .enumerate()
            .map(|(k, m)| GroupMap::new(terms[k].clone(), terms[k + 1].clone(), m.clone()))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(CochainComplex::new(self.lowest_degree, terms, diffs)?)
    }

    fn index(&self, n: i64) -> Option<usize> {
        let k = n - self.lowest_degree;
        (k >= 0 && (k as usize) < self.orders.len()).then_some(k as usize)
    }

    fn size(&self, n: i64) -> usize {
        self.index(n).map_or(0, |k| self.orders[k].len())
    }

    /// Matrix of `d^n`, zero outside the support.
    fn diff(&self, n: i64) -> IntegerMatrix {
        match (self.index(n), self.index(n + 1)) {
            (Some(k), Some(_)) => self.d[k].clone(),
            _ => IntegerMatrix::zeros(self.size(n + 1), self.size(n)),
        }
    }

    /// Smallest and largest filtration degree.
    pub fn filtration_range(&self) -> (i64, i64) {
        let all = self.filtration.iter().flatten();
        let lo = all.clone().copied().min().unwrap_or(0);
        let hi = all.copied().max().unwrap_or(0);
        (lo, hi)
    }

    /// Degrees `[lowest, top]` of the support.
    pub fn degree_range(&self) -> (i64, i64) {
        (self.lowest_degree, self.lowest_degree + self.orders.len() as i64 - 1)
    }

    /// Preimage lattice of `{x ∈ F^p C^n : dx ∈ F^{p+r} C^{n+1}}`.
    fn z_lattice(&self, n: i64, p: i64, r: i64) -> Lattice {
        let size = self.size(n);
        let Some(k) = self.index(n) else {
            return Lattice::zero(0);
        };
        let mut rows: Vec<Vec<Int>> = Vec::new();
        let mut moduli: Vec<Int> = Vec::new();
        for j in 0..size {
            if self.filtration[k][j] < p {
                let mut row = alloc::vec![Int::zero(); size];
                row[j] = Int::from(1);
                rows.push(row);
                moduli.push(self.orders[k][j].clone());
            }
        }
        if let Some(k1) = self.index(n + 1) {
            let d = self.diff(n);
            for y in 0..self.size(n + 1) {
                if self.filtration[k1][y] < p + r {
                    rows.push(d.row(y).to_vec());
                    moduli.push(self.orders[k1][y].clone());
                }
            }
        }
        if rows.is_empty() {
            return Lattice::full(size);
        }
        let m = rows.len();
        let big = IntegerMatrix::from_fn(m, size + m, |i, j| {
            if j < size {
                rows[i][j].clone()
            } else if j - size == i {
                moduli[i].clone()
            } else {
                Int::zero()
            }
        });
        let ker = kernel_basis(&big);
        Lattice::span(&ker.row_range(0, size))
    }

    fn entry(&self, r: i64, p: i64, n: i64) -> Entry {
        let num = self.z_lattice(n, p, r);
        let below = self.z_lattice(n - 1, p - r + 1, r - 1);
        let boundaries = Lattice::span(&(&self.diff(n - 1) * below.basis()));
        let den = self.z_lattice(n, p + 1, r - 1).sum(&boundaries);
        let basis = num.basis().clone();
        let rel = num.coordinate_matrix(den.basis()).expect("denominator inside numerator");
        let presentation = Presentation::new(basis.cols(), rel).expect("shapes agree");
        Entry { basis, presentation }
    }

    fn differential(&self, r: i64, p: i64, n: i64, src: &Entry, tgt: &Entry) -> GroupMap {
        let image = &self.diff(n) * &src.basis;
        let coords = self.z_lattice(n + 1, p + r, r).coordinate_matrix(&image).expect("d maps Z_r^p into Z_r^{p+r}");
        GroupMap::new(src.presentation.clone(), tgt.presentation.clone(), coords).expect("induced differential")
    }

    /// Natural window: all filtrations and all `q = n − p` that occur.
    pub fn natural_window(&self) -> Window {
        let (f0, f1) = self.filtration_range();
        let (n0, n1) = self.degree_range();
        Window { p_min: f0, p_max: f1, q_min: n0 - f1, q_max: n1 - f0 }
    }

    /// First page index at which all differentials vanish.
    pub fn infinity_index(&self) -> u32 {
        let (lo, hi) = self.filtration_range();
        (hi - lo + 2).max(1) as u32
    }

    /// `E_r` restricted to `window`, with `d_r`.
    pub fn page(self: &Arc<Self>, r: u32, window: Window) -> Result<Page, SpecSeqError> {
        if r == 0 {
            return Err(SpecSeqError::BadPageIndex);
        }
        let ri = r as i64;
        let mut entries: BTreeMap<(i64, i64), Entry> = BTreeMap::new();
        for (p, q) in window.spots() {
            let e = self.entry(ri, p, p + q);
            if !e.presentation.group().is_trivial() {
                entries.insert((p, q), e);
            }
        }
        let mut diffs = BTreeMap::new();
        for (&(p, q), src) in &entries {
            let t = (p + ri, q - ri + 1);
            if let Some(tgt) = entries.get(&t) {
                let d = self.differential(ri, p, p + q, src, tgt);
                if !d.is_zero() {
                    diffs.insert((p, q), d);
                }
            }
        }
        let pres = entries.into_iter().map(|(s, e)| (s, e.presentation)).collect();
        Ok(Page::new(r, window, pres, diffs)?.with_engine(self.clone()))
    }

    /// `E_∞` on `window`.
    pub fn e_infinity(self: &Arc<Self>, window: Window) -> Result<Page, SpecSeqError> {
        self.page(self.infinity_index().max(window.stable_page()), window)
    }

    /// `H^n` of the total complex.
    pub fn cohomology(&self, n: i64) -> Result<FGAbelianGroup, SpecSeqError> {
        Ok(self.as_complex()?.cohomology(n)?)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::specseq::{abutment_graded, run_to_infinity, turn_page};
    use alloc::vec;

    fn ints(v: &[i64]) -> Vec<Int> {
        v.iter().map(|&x| Int::from(x)).collect()
    }

    #[test]
    fn two_step_filtration_of_times_two() {
        // Z (filtration 0) --×2--> Z (filtration 1): E_1 has d_1 = ×2
        let c = Arc::new(
            FilteredComplex::new(
                0,
                vec![ints(&[0]), ints(&[0])],
                vec![vec![0], vec![1]],
                vec![IntegerMatrix::from_i64(1, 1, &[2])],
            )
            .unwrap(),
        );
        let w = c.natural_window();
        let e1 = c.page(1, w).unwrap();
        assert_eq!(e1.group((0, 0)), FGAbelianGroup::free(1));
        assert_eq!(e1.group((1, 0)), FGAbelianGroup::free(1));
        let e2 = turn_page(&e1).unwrap();
        assert!(e2.group((0, 0)).is_trivial());
        assert_eq!(e2.group((1, 0)), FGAbelianGroup::cyclic(2));
        let inf = run_to_infinity(&e1).unwrap();
        assert_eq!(abutment_graded(&inf, 1), vec![FGAbelianGroup::cyclic(2)]);
        assert_eq!(c.cohomology(1).unwrap(), FGAbelianGroup::cyclic(2));
    }

    #[test]
    fn differential_lowering_filtration_rejected() {
        let r = FilteredComplex::new(
            0,
            vec![ints(&[0]), ints(&[0])],
            vec![vec![1], vec![0]],
            vec![IntegerMatrix::from_i64(1, 1, &[1])],
        );
        assert_eq!(r.unwrap_err(), SpecSeqError::NotFiltered);
    }

    #[test]
    fn torsion_generators() {
        // Z/4 (filt 0) --×2--> Z/4 (filt 2): kernel Z/2, cokernel Z/2, via d_2
        let c = Arc::new(
            FilteredComplex::new(
                0,
                vec![ints(&[4]), ints(&[4])],
                vec![vec![0], vec![2]],
                vec![IntegerMatrix::from_i64(1, 1, &[2])],
            )
            .unwrap(),
        );
        let w = c.natural_window();
        let e2 = c.page(2, w).unwrap();
        assert_eq!(e2.nonzero_differentials().count(), 1);
        let inf = c.e_infinity(w).unwrap();
        assert_eq!(abutment_graded(&inf, 0), vec![FGAbelianGroup::cyclic(2)]);
        assert_eq!(abutment_graded(&inf, 1), vec![FGAbelianGroup::cyclic(2)]);
    }
}
