//! Lorentz–Minkowski 3-space `L³` with metric `dx1² + dx2² − dx3²`.

mod group;
mod isometry;

pub use group::{classify_group, GroupCase, GroupCaseKind, GroupParameters};
pub use isometry::{classify_isometry, is_orthochronous, Isometry, IsometryClass, IsometryKind};

use crate::complex::{ExtComplex, C64};
use nalgebra::{Matrix3, Vector3};
use serde::{Deserialize, Serialize};
use thiserror::Error;

pub type Vec3 = Vector3<f64>;
pub type Mat3 = Matrix3<f64>;

/// Default tolerance for causal tests and eigenvalue merging.
pub const DEFAULT_TOL: f64 = 1e-9;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum LorentzError {
    #[error("stereographic projection undefined on the unit circle (|z| = {modulus})")]
    UnitModulusInput { modulus: f64 },
    #[error("linear part is not a Lorentz transformation (defect {defect:.3e})")]
    NotAnIsometry { defect: f64 },
    #[error("group is not free and properly discontinuous: {0}")]
    NotFreeProper(String),
    #[error("unsupported group: {0}")]
    UnsupportedGroup(String),
}

/// The diagonal metric `diag(1, 1, −1)`.
pub fn eta() -> Mat3 {
    Mat3::from_diagonal(&Vec3::new(1.0, 1.0, -1.0))
}

#[inline]
pub fn inner(u: &Vec3, v: &Vec3) -> f64 {
    u.x * v.x + u.y * v.y - u.z * v.z
}

#[inline]
pub fn norm_sq(v: &Vec3) -> f64 {
    inner(v, v)
}

/// Vector Lorentz-orthogonal to both arguments.
pub fn lorentz_cross(u: &Vec3, v: &Vec3) -> Vec3 {
    let e = u.cross(v);
    Vec3::new(e.x, e.y, -e.z)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CausalTag {
    Spacelike,
    Timelike,
    Lightlike,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct CausalClass {
    pub tag: CausalTag,
    pub tolerance_used: f64,
}

/// Causal character of `v`; `⟨v,v⟩` within `tol·max(1,|v|²)` of zero counts
/// as lightlike. The zero vector is spacelike by convention.
pub fn causal_class(v: &Vec3, tol: f64) -> CausalClass {
    let e2 = v.norm_squared();
    let tolerance_used = tol * e2.max(1.0);
    let tag = if e2 == 0.0 {
        CausalTag::Spacelike
    } else {
        let q = norm_sq(v);
        if q.abs() <= tolerance_used {
            CausalTag::Lightlike
        } else if q > 0.0 {
            CausalTag::Spacelike
        } else {
            CausalTag::Timelike
        }
    };
    CausalClass { tag, tolerance_used }
}

/// Lorentz-unit vector along `v`; `None` for lightlike or zero input.
pub fn normalize(v: &Vec3) -> Option<Vec3> {
    let q = norm_sq(v);
    if q.abs() <= 1e-300 {
        return None;
    }
    Some(v / q.abs().sqrt())
}

/// Inverse stereographic projection from `C ∪ {∞}` minus the unit circle onto
/// the hyperbolic plane `H² = {x3² − x1² − x2² = 1}`.
pub fn stereographic(z: ExtComplex, tol: f64) -> Result<Vec3, LorentzError> {
    let z: C64 = match z {
        ExtComplex::Infinity => return Ok(Vec3::new(0.0, 0.0, 1.0)),
        ExtComplex::Finite(z) => z,
    };
    let m2 = z.norm_sqr();
    let modulus = m2.sqrt();
    if (modulus - 1.0).abs() <= tol {
        return Err(LorentzError::UnitModulusInput { modulus });
    }
    let d = m2 - 1.0;
    Ok(Vec3::new(2.0 * z.im / d, 2.0 * z.re / d, (m2 + 1.0) / d))
}
