//! Random bounded G-complexes of free modules, driven by a caller-supplied
//! uniform integer source `rng(lo, hi)` (inclusive bounds).

use alloc::vec::Vec;

use super::{GComplex, InvolutiveModule};
use crate::znf::{kernel_basis, Int, IntegerMatrix, Lattice, Presentation};

pub type Rng<'a> = dyn FnMut(i64, i64) -> i64 + 'a;

fn elementary(n: usize, i: usize, j: usize, c: i64) -> IntegerMatrix {
    let mut e = IntegerMatrix::identity(n);
    e.set(i, j, Int::from(c));
    e
}

/// A free module of the given rank with an involution built from trivial,
/// sign and regular blocks, conjugated by a random unimodular matrix.
pub fn random_free_module(rank: usize, rng: &mut Rng<'_>) -> InvolutiveModule {
    let mut blocks: Vec<IntegerMatrix> = Vec::new();
    let mut left = rank;
    while left > 0 {
        let kind = rng(0, if left >= 2 { 2 } else { 1 });
        match kind {
            0 => blocks.push(IntegerMatrix::from_rows(&[[1]])),
            1 => blocks.push(IntegerMatrix::from_rows(&[[-1]])),
            _ => blocks.push(IntegerMatrix::from_rows(&[[0, 1], [1, 0]])),
        }
        left -= blocks.last().map_or(1, |b| b.rows());
    }
    let refs: Vec<&IntegerMatrix> = blocks.iter().collect();
    let mut sigma = IntegerMatrix::block_diagonal(&refs);
    if rank >= 2 {
        for _ in 0..2 {
            let i = rng(0, rank as i64 - 1) as usize;
            let mut j = rng(0, rank as i64 - 2) as usize;
            if j >= i {
                j += 1;
            }
            let c = rng(-1, 1);
            sigma = &(&elementary(rank, i, j, c) * &sigma) * &elementary(rank, i, j, -c);
        }
    }
    InvolutiveModule::new(Presentation::free(rank), sigma).expect("conjugate of an involution")
}

fn random_matrix(rows: usize, cols: usize, bound: i64, rng: &mut Rng<'_>) -> IntegerMatrix {
    IntegerMatrix::from_fn(rows, cols, |_, _| Int::from(rng(-bound, bound)))
}

/// A random equivariant complex: at most `max_len` terms of rank at most
/// `max_rank`, raw entries in `[-bound, bound]` before equivariant averaging.
pub fn random_gcomplex(max_rank: usize, max_len: usize, bound: i64, rng: &mut Rng<'_>) -> GComplex {
    let len = rng(1, max_len as i64) as usize;
    let lowest = rng(-1, 1);
    let terms: Vec<InvolutiveModule> = (0..len)
        .map(|_| {
            let r = rng(0, max_rank as i64) as usize;
            random_free_module(r, rng)
        })
        .collect();
    let mut diffs: Vec<IntegerMatrix> = Vec::new();
    for k in 0..len.saturating_sub(1) {
        let (src, dst) = (&terms[k], &terms[k + 1]);
        let (n, m) = (src.module().generators(), dst.module().generators());
        let (ss, sd) = (src.sigma().matrix(), dst.sigma().matrix());
        let d = if k == 0 {
            let raw = random_matrix(m, n, bound, rng);
            &raw + &(&(sd * &raw) * ss)
        } else {
            // rows of `l` span the σ-stable left kernel of the previous differential
            let prev = &diffs[k - 1];
            let l = Lattice::span(&kernel_basis(&prev.transpose())).basis().transpose();
            let r = l.rows();
            let lat = Lattice::span(&l.transpose());
            let s = lat.coordinate_matrix(&(&l * ss).transpose()).expect("left kernel is σ-stable").transpose();
            let raw = random_matrix(m, r, bound, rng);
            let a = &raw + &(&(sd * &raw) * &s);
            &a * &l
        };
        diffs.push(d);
    }
    GComplex::new(lowest, terms, diffs).expect("equivariant complex by construction")
}
