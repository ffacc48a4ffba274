//! Sparse cochain complexes whose terms are direct sums of cyclic groups,
//! with unit-pivot cancellation.
//!
//! Cancelling a pair `x → y` with `d(x)_y = ±1` (both free, same filtration
//! label) is a filtered chain homotopy equivalence, so cohomology and every
//! spectral-sequence page from `E_1` on are unchanged.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::vec::Vec;

use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::CochainComplex;
use crate::znf::{GroupMap, Int, IntegerMatrix, Presentation};

#[derive(Clone, Debug)]
struct Generator {
    /// `0` for `Z`, otherwise the order of the cyclic summand.
    order: Int,
    filtration: i64,
    alive: bool,
}

#[derive(Clone, Debug)]
pub struct SparseComplex {
    lowest_degree: i64,
    gens: Vec<Vec<Generator>>,
    /// `cols[k][x]`: coefficients of `d(x)` for `x` in degree `lowest + k`.
    cols: Vec<Vec<BTreeMap<usize, Int>>>,
    /// `rows[k][y]`: sources in degree `lowest + k` hitting `y` in degree `lowest + k + 1`.
    rows: Vec<Vec<BTreeSet<usize>>>,
}

impl SparseComplex {
    /// A complex with the given generator orders per degree and no differentials yet.
    pub fn new(lowest_degree: i64, orders: Vec<Vec<Int>>) -> Self {
        let filtrations = orders.iter().map(|o| alloc::vec![0; o.len()]).collect();
        Self::with_filtration(lowest_degree, orders, filtrations)
    }

    pub fn with_filtration(lowest_degree: i64, orders: Vec<Vec<Int>>, filtration: Vec<Vec<i64>>) -> Self {
        assert_eq!(orders.len(), filtration.len(), "one filtration list per degree");
        let gens: Vec<Vec<Generator>> = orders
            .into_iter()
            .zip(filtration)
            .map(|(o, f)| {
                assert_eq!(o.len(), f.len(), "one filtration label per generator");
                o.into_iter()
                    .zip(f)
                    .map(|(order, filtration)| Generator { order: order.abs(), filtration, alive: true })
                    .collect()
            })
            .collect();
        let cols = gens.iter().map(|g| alloc::vec![BTreeMap::new(); g.len()]).collect();
        let rows = gens
            .iter()
            .enumerate()
            .map(|(k, _)| {
                let next = gens.get(k + 1).map_or(0, |g| g.len());
                alloc::vec![BTreeSet::new(); next]
            })
            .collect();
        SparseComplex { lowest_degree, gens, cols, rows }
    }

    pub fn lowest_degree(&self) -> i64 {
        self.lowest_degree
    }

    pub fn len(&self) -> usize {
        self.gens.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gens.is_empty()
    }

    fn reduce_mod(order: &Int, c: Int) -> Int {
        if order.is_zero() {
            c
        } else {
            c.mod_floor(order)
        }
    }

    /// Adds `c` to the coefficient of `y` (degree `k+1` index) in `d(x)` (degree `k` index).
    pub fn add_entry(&mut self, k: usize, x: usize, y: usize, c: Int) {
        let order = &self.gens[k + 1][y].order;
        let col = &mut self.cols[k][x];
        let cur = col.remove(&y).unwrap_or_default();
        let v = Self::reduce_mod(order, cur + c);
        if v.is_zero() {
            self.rows[k][y].remove(&x);
        } else {
            col.insert(y, v);
            self.rows[k][y].insert(x);
        }
    }

    fn alive(&self, k: usize) -> impl Iterator<Item = usize> + '_ {
        self.gens[k].iter().enumerate().filter(|(_, g)| g.alive).map(|(i, _)| i)
    }

    /// Cancels unit pivots until none remain. Returns the number of pairs removed.
    pub fn reduce(&mut self) -> usize {
        let mut removed = 0;
        for k in 0..self.gens.len().saturating_sub(1) {
            while let Some((x, y)) = self.find_pivot(k) {
                self.cancel(k, x, y);
                removed += 1;
            }
        }
        // Cancelling in degree k never creates pivots in lower degrees, but a
        // later pass can expose new ones in degree k; sweep until stable.
        loop {
            let mut again = 0;
            for k in 0..self.gens.len().saturating_sub(1) {
                while let Some((x, y)) = self.find_pivot(k) {
                    self.cancel(k, x, y);
                    again += 1;
                }
            }
            if again == 0 {
                break;
            }
            removed += again;
        }
        removed
    }

    fn find_pivot(&self, k: usize) -> Option<(usize, usize)> {
        let mut best: Option<(usize, usize, usize)> = None;
        for x in self.alive(k) {
            let gx = &self.gens[k][x];
            if !gx.order.is_zero() {
                continue;
            }
            for (&y, c) in &self.cols[k][x] {
                let gy = &self.gens[k + 1][y];
                if !gy.alive || !gy.order.is_zero() || gy.filtration != gx.filtration || !c.abs().is_one() {
                    continue;
                }
                let cost = (self.rows[k][y].len() - 1) * (self.cols[k][x].len() - 1);
                if best.is_none_or(|(_, _, b)| cost < b) {
                    best = Some((x, y, cost));
                    if cost == 0 {
                        return Some((x, y));
                    }
                }
            }
        }
        best.map(|(x, y, _)| (x, y))
    }

    fn cancel(&mut self, k: usize, x: usize, y: usize) {
        let unit = self.cols[k][x][&y].clone();
        let dx: Vec<(usize, Int)> = self.cols[k][x].iter().map(|(a, b)| (*a, b.clone())).collect();
        let hitting: Vec<usize> = self.rows[k][y].iter().copied().filter(|&w| w != x).collect();
        for w in hitting {
            let c = self.cols[k][w][&y].clone();
            // d(w) -= c * unit^{-1} * d(x); unit^{-1} = unit for ±1
            let factor = -(c * &unit);
            for (t, v) in &dx {
                self.add_entry(k, w, *t, &factor * v);
            }
        }
        // drop x as a source
        for (t, _) in dx {
            self.rows[k][t].remove(&x);
        }
        self.cols[k][x].clear();
        self.gens[k][x].alive = false;
        // drop x as a target of the previous differential
        if k > 0 {
            let sources: Vec<usize> = self.rows[k - 1][x].iter().copied().collect();
            for w in sources {
                self.cols[k - 1][w].remove(&x);
            }
            self.rows[k - 1][x].clear();
        }
        // drop y as a source of the next differential
        if k + 1 < self.cols.len() {
            let targets: Vec<usize> = self.cols[k + 1][y].keys().copied().collect();
            for t in targets {
                self.rows[k + 1][t].remove(&y);
            }
            self.cols[k + 1][y].clear();
        }
        // y should now be hit by nobody
        let rest: Vec<usize> = self.rows[k][y].iter().copied().collect();
        for w in rest {
            self.cols[k][w].remove(&y);
        }
        self.rows[k][y].clear();
        self.gens[k + 1][y].alive = false;
    }

    /// Surviving generators of each degree: `(orders, filtration labels)`.
    pub fn surviving(&self) -> Vec<(Vec<Int>, Vec<i64>)> {
        (0..self.gens.len())
            .map(|k| {
                let idx: Vec<usize> = self.alive(k).collect();
                (
                    idx.iter().map(|&i| self.gens[k][i].order.clone()).collect(),
                    idx.iter().map(|&i| self.gens[k][i].filtration).collect(),
                )
            })
            .collect()
    }

    /// Dense matrices of the surviving differentials (target × source).
    pub fn dense_differentials(&self) -> Vec<IntegerMatrix> {
        let index: Vec<BTreeMap<usize, usize>> =
            (0..self.gens.len()).map(|k| self.alive(k).enumerate().map(|(new, old)| (old, new)).collect()).collect();
        (0..self.gens.len().saturating_sub(1))
            .map(|k| {
                let mut m = IntegerMatrix::zeros(index[k + 1].len(), index[k].len());
                for (&old, &new) in &index[k] {
                    for (y, c) in &self.cols[k][old] {
                        if let Some(&ny) = index[k + 1].get(y) {
                            m.set(ny, new, c.clone());
                        }
                    }
                }
                m
            })
            .collect()
    }

    /// Dense complex of cyclic presentations on the surviving generators.
    pub fn to_dense(&self) -> CochainComplex {
        let surv = self.surviving();
        let terms: Vec<Presentation> = surv.iter().map(|(o, _)| Presentation::cyclic(o)).collect();
        let diffs = self
            .dense_differentials()
            .into_iter()
            .enumerate()
            .map(|(k, m)| GroupMap::new(terms[k].clone(), terms[k + 1].clone(), m).expect("well-defined differential"))
            .collect();
        CochainComplex::new(self.lowest_degree, terms, diffs).expect("reduction preserves d∘d = 0")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::znf::FGAbelianGroup;
    use alloc::vec;

    fn ints(v: &[i64]) -> Vec<Int> {
        v.iter().map(|&x| Int::from(x)).collect()
    }

    #[test]
    fn triangle_circle_reduces_to_homology() {
        // vertices 0,1,2; edges 01,02,12
        let mut c = SparseComplex::new(0, vec![ints(&[0, 0, 0]), ints(&[0, 0, 0])]);
        let edges = [(0, 1), (0, 2), (1, 2)];
        for (e, &(a, b)) in edges.iter().enumerate() {
            c.add_entry(0, a, e, Int::from(-1));
            c.add_entry(0, b, e, Int::from(1));
        }
        c.reduce();
        let dense = c.to_dense();
        assert_eq!(dense.cohomology(0).unwrap(), FGAbelianGroup::free(1));
        assert_eq!(dense.cohomology(1).unwrap(), FGAbelianGroup::free(1));
        let surv = c.surviving();
        assert_eq!((surv[0].0.len(), surv[1].0.len()), (1, 1));
    }

    #[test]
    fn torsion_generators_are_kept() {
        // Z --1--> Z ⊕ Z/2 (into the free part), Z/2 survives
        let mut c = SparseComplex::new(0, vec![ints(&[0]), ints(&[0, 2])]);
        c.add_entry(0, 0, 0, Int::from(1));
        c.add_entry(0, 0, 1, Int::from(1));
        c.reduce();
        let d = c.to_dense();
        assert!(d.cohomology(0).unwrap().is_trivial());
        assert_eq!(d.cohomology(1).unwrap(), FGAbelianGroup::cyclic(2));
    }

    #[test]
    fn filtration_blocks_cancellation() {
        let mut c = SparseComplex::with_filtration(0, vec![ints(&[0]), ints(&[0])], vec![vec![0], vec![1]]);
        c.add_entry(0, 0, 0, Int::from(1));
        assert_eq!(c.reduce(), 0);
    }
}
