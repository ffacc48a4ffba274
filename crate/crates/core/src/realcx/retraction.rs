//! The deformation retraction of the complex sphere `Σ z_j² = 1` onto the real sphere.

use alloc::vec::Vec;
use core::fmt;

use num_complex::Complex64;

use crate::gmod::fuzz::Rng;

const INPUT_TOLERANCE: f64 = 1e-12;
const OUTPUT_TOLERANCE: f64 = 1e-9;

#[derive(Clone, Debug, PartialEq)]
pub enum RetractionError {
    /// `|Σ z_j² − 1|` exceeds the input tolerance.
    NotOnVariety {
        defect: f64,
    },
    DegenerateRadius {
        r_squared: f64,
    },
    TimeOutOfRange,
}

impl fmt::Display for RetractionError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RetractionError::NotOnVariety { defect } => write!(f, "point is not on the variety (defect {defect:e})"),
            RetractionError::DegenerateRadius { r_squared } => write!(f, "radius squared {r_squared} is not positive"),
            RetractionError::TimeOutOfRange => write!(f, "t must lie in [0, 1]"),
        }
    }
}

fn square_sum(z: &[Complex64]) -> Complex64 {
    z.iter().map(|w| w * w).sum()
}

/// `h_t(z) = (a_j + i t b_j) / R(t)` with `R(t)² = Σa² − t²Σb²`, where `z = a + i b`.
pub fn sphere_retraction(z: &[Complex64], t: f64) -> Result<Vec<Complex64>, RetractionError> {
    if !(0.0..=1.0).contains(&t) {
        return Err(RetractionError::TimeOutOfRange);
    }
    let defect = (square_sum(z) - 1.0).norm();
    if defect.is_nan() || defect > INPUT_TOLERANCE {
        return Err(RetractionError::NotOnVariety { defect });
    }
    let a2: f64 = z.iter().map(|w| w.re * w.re).sum();
    let b2: f64 = z.iter().map(|w| w.im * w.im).sum();
    let r_squared = a2 - t * t * b2;
    if r_squared.is_nan() || r_squared <= 0.0 {
        return Err(RetractionError::DegenerateRadius { r_squared });
    }
    let r = libm::sqrt(r_squared);
    Ok(z.iter().map(|w| Complex64::new(w.re / r, t * w.im / r)).collect())
}

/// Which postcondition failed at a sample point, if any.
pub fn check_retraction(z: &[Complex64], t: f64) -> Result<(), &'static str> {
    let close = |u: &[Complex64], v: &[Complex64]| u.iter().zip(v).all(|(a, b)| (a - b).norm() <= OUTPUT_TOLERANCE);
    let h = sphere_retraction(z, t).map_err(|_| "retraction undefined")?;
    if (square_sum(&h) - 1.0).norm() > OUTPUT_TOLERANCE {
        return Err("image leaves the variety");
    }
    if !close(&sphere_retraction(z, 1.0).map_err(|_| "retraction undefined at t = 1")?, z) {
        return Err("h_1 is not the identity");
    }
    let h0 = sphere_retraction(z, 0.0).map_err(|_| "retraction undefined at t = 0")?;
    if h0.iter().any(|w| w.im.abs() > OUTPUT_TOLERANCE) {
        return Err("h_0 is not real");
    }
    let conj: Vec<Complex64> = z.iter().map(|w| w.conj()).collect();
    let hc = sphere_retraction(&conj, t).map_err(|_| "retraction undefined at the conjugate")?;
    let h_conj: Vec<Complex64> = h.iter().map(|w| w.conj()).collect();
    if !close(&hc, &h_conj) {
        return Err("not equivariant under conjugation");
    }
    Ok(())
}

/// A point `a + i b` of `Σ z_j² = 1` in `C^{d+1}` with `b ⊥ a`,
/// `|a|² = 1 + |b|²` and `|b| ≤ 2`.
pub fn sample_on_variety(d: usize, rng: &mut Rng<'_>) -> Vec<Complex64> {
    const SCALE: i64 = 1 << 30;
    let mut unit = || rng(-SCALE, SCALE) as f64 / SCALE as f64;
    let n = d + 1;
    let mut a: Vec<f64> = (0..n).map(|_| unit()).collect();
    if a.iter().all(|x| *x == 0.0) {
        a[0] = 1.0;
    }
    let mut b: Vec<f64> = (0..n).map(|_| unit()).collect();
    let aa: f64 = a.iter().map(|x| x * x).sum();
    let ab: f64 = a.iter().zip(&b).map(|(x, y)| x * y).sum();
    for (y, x) in b.iter_mut().zip(&a) {
        *y -= ab / aa * x;
    }
    let bb: f64 = b.iter().map(|y| y * y).sum();
    let s = libm::sqrt((1.0 + bb) / aa);
    a.iter().zip(&b).map(|(x, y)| Complex64::new(x * s, *y)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    #[test]
    fn real_points_are_fixed() {
        let z = vec![Complex64::new(0.6, 0.0), Complex64::new(0.8, 0.0)];
        for t in [0.0, 0.3, 1.0] {
            let h = sphere_retraction(&z, t).unwrap();
            assert!(h.iter().zip(&z).all(|(a, b)| (a - b).norm() < 1e-15));
        }
    }

    #[test]
    fn hyperbolic_point() {
        let s: f64 = 0.7;
        let z = vec![Complex64::new(libm::cosh(s), 0.0), Complex64::new(0.0, libm::sinh(s))];
        assert!(check_retraction(&z, 0.25).is_ok());
        let h0 = sphere_retraction(&z, 0.0).unwrap();
        assert!((h0[0].re - 1.0).abs() < 1e-12 && h0[1].norm() < 1e-12);
    }

    #[test]
    fn off_variety_rejected() {
        let z = vec![Complex64::new(1.0, 0.0), Complex64::new(0.1, 0.0)];
        assert!(matches!(sphere_retraction(&z, 0.5), Err(RetractionError::NotOnVariety { .. })));
    }
}
