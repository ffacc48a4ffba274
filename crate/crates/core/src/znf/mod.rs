//! Exact integer linear algebra and finitely generated abelian groups.

use core::fmt;

mod group;
mod lattice;
mod matrix;
mod presentation;
mod smith;

pub use group::FGAbelianGroup;
pub use lattice::{column_echelon, kernel_basis, ColumnEchelon, Lattice};
pub use matrix::{Int, IntegerMatrix};
pub use presentation::{cokernel, homology, homology_at, GroupMap, Presentation, Subquotient};
pub use smith::{invariant_factors, smith_normal_form, unimodular_inverse, SmithForm};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum AlgebraError {
    DimensionMismatch {
        expected: (usize, usize),
        found: (usize, usize),
    },
    /// The matrix does not carry source relations into target relations.
    IllDefinedMap,
    /// Maps or groups that should share a presentation do not.
    PresentationMismatch,
    CompositionNotZero,
    NotDivisibilityChain,
    /// A vector expected to be a cycle is not one.
    NotACycle,
}

impl fmt::Display for AlgebraError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AlgebraError::DimensionMismatch { expected, found } => {
                write!(f, "matrix shape {}x{} does not match expected {}x{}", found.0, found.1, expected.0, expected.1)
            }
            AlgebraError::IllDefinedMap => write!(f, "map does not respect the relations of its source"),
            AlgebraError::PresentationMismatch => write!(f, "presentations of adjacent groups differ"),
            AlgebraError::CompositionNotZero => write!(f, "composite of consecutive maps is not zero"),
            AlgebraError::NotDivisibilityChain => write!(f, "torsion coefficients do not form a divisibility chain"),
            AlgebraError::NotACycle => write!(f, "vector is not a cycle"),
        }
    }
}

/// `(A/mA, A[m])`.
pub fn mod_m_and_torsion(a: &FGAbelianGroup, m: &Int) -> (FGAbelianGroup, FGAbelianGroup) {
    a.mod_m_and_torsion(m)
}

pub fn iso_check(a: &FGAbelianGroup, b: &FGAbelianGroup) -> bool {
    a == b
}
