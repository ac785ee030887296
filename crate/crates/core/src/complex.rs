//! Points of the Riemann sphere.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::fmt;

pub type C64 = Complex64;

#[inline]
pub fn c(re: f64, im: f64) -> C64 {
    Complex64::new(re, im)
}

/// A point of `C ∪ {∞}`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ExtComplex {
    Finite(C64),
    Infinity,
}

impl ExtComplex {
    pub fn finite(self) -> Option<C64> {
        match self {
            ExtComplex::Finite(z) => Some(z),
            ExtComplex::Infinity => None,
        }
    }

    pub fn is_infinite(self) -> bool {
        matches!(self, ExtComplex::Infinity)
    }

    /// `1/conj(z)`, exchanging `0` and `∞`.
    pub fn mirror(self) -> ExtComplex {
        match self {
            ExtComplex::Infinity => ExtComplex::Finite(c(0.0, 0.0)),
            ExtComplex::Finite(z) if z.norm_sqr() == 0.0 => ExtComplex::Infinity,
            ExtComplex::Finite(z) => ExtComplex::Finite(z.conj().inv()),
        }
    }

    /// Chordal distance on the sphere; bounded by 1 and defined at `∞`.
    pub fn chordal_distance(self, other: ExtComplex) -> f64 {
        match (self, other) {
            (ExtComplex::Infinity, ExtComplex::Infinity) => 0.0,
            (ExtComplex::Finite(z), ExtComplex::Infinity) | (ExtComplex::Infinity, ExtComplex::Finite(z)) => {
                1.0 / (1.0 + z.norm_sqr()).sqrt()
            }
            (ExtComplex::Finite(a), ExtComplex::Finite(b)) => {
                (a - b).norm() / ((1.0 + a.norm_sqr()).sqrt() * (1.0 + b.norm_sqr()).sqrt())
            }
        }
    }
}

impl From<C64> for ExtComplex {
    fn from(z: C64) -> Self {
        ExtComplex::Finite(z)
    }
}

impl fmt::Display for ExtComplex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExtComplex::Finite(z) => write!(f, "{z}"),
            ExtComplex::Infinity => write!(f, "inf"),
        }
    }
}

/// Principal-branch-free root selection: the square root of `v` nearest to `w`.
pub fn nearest_sqrt(v: C64, w: C64) -> C64 {
    let r = v.sqrt();
    if (r - w).norm_sqr() <= (r + w).norm_sqr() {
        r
    } else {
        -r
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn mirror_swaps_zero_and_infinity() {
        assert_eq!(ExtComplex::Finite(c(0.0, 0.0)).mirror(), ExtComplex::Infinity);
        assert_eq!(ExtComplex::Infinity.mirror(), ExtComplex::Finite(c(0.0, 0.0)));
        let z = c(0.3, -0.4);
        let m = ExtComplex::Finite(z).mirror().finite().unwrap();
        assert!((m - z / z.norm_sqr()).norm() < 1e-15);
    }

    #[test]
    fn nearest_sqrt_tracks_sign() {
        let w = c(-1.0, 0.01);
        assert!((nearest_sqrt(c(1.0, 0.0), w) - c(-1.0, 0.0)).norm() < 1e-15);
    }
}
