#![allow(dead_code)]

use kr_core::znf::{Int, IntegerMatrix};

/// Integer source over a fixed entropy tape, for the seeded generators in the crate.
#[derive(Clone, Debug)]
pub struct Tape {
    words: Vec<u32>,
    pos: usize,
}

impl Tape {
    pub fn new(words: Vec<u32>) -> Self {
        Tape { words, pos: 0 }
    }

    pub fn next(&mut self, lo: i64, hi: i64) -> i64 {
        let w = self.words[self.pos % self.words.len()] as i64 + (self.pos / self.words.len()) as i64;
        self.pos += 1;
        lo + w.rem_euclid(hi - lo + 1)
    }
}

pub fn matrix(rows: usize, cols: usize, entries: &[i64]) -> IntegerMatrix {
    IntegerMatrix::from_fn(rows, cols, |i, j| Int::from(entries[i * cols + j]))
}
