use super::{eta, inner, lorentz_cross, normalize, LorentzError, Mat3, Vec3};
use serde::{Deserialize, Serialize};

/// Affine map `x ↦ L x + c` with `L ∈ O(2,1)`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Isometry {
    pub linear: Mat3,
    pub translation: Vec3,
}

impl Isometry {
    pub fn new(linear: Mat3, translation: Vec3) -> Self {
        Self { linear, translation }
    }

    /// Rejects linear parts that fail `LᵀηL = η` within a relative tolerance.
    pub fn checked(linear: Mat3, translation: Vec3, tol: f64) -> Result<Self, LorentzError> {
        let iso = Self::new(linear, translation);
        let defect = iso.lorentz_defect();
        let scale = linear.iter().fold(1.0f64, |m, x| m.max(x.abs()));
        if !defect.is_finite() || defect > tol.max(1e-12) * 1e3 * scale * scale {
            return Err(LorentzError::NotAnIsometry { defect });
        }
        Ok(iso)
    }

    pub fn identity() -> Self {
        Self::new(Mat3::identity(), Vec3::zeros())
    }

    pub fn translation_by(v: Vec3) -> Self {
        Self::new(Mat3::identity(), v)
    }

    pub fn linear_map(l: Mat3) -> Self {
        Self::new(l, Vec3::zeros())
    }

    /// Rotation about the `x3`-axis by `t`, followed by `λ` along the axis.
    pub fn elliptic(t: f64, lambda: f64) -> Self {
        let (s, c) = t.sin_cos();
        let l = Mat3::new(c, s, 0.0, -s, c, 0.0, 0.0, 0.0, 1.0);
        Self::new(l, Vec3::new(0.0, 0.0, lambda))
    }

    /// Boost in the `(x2, x3)`-plane, optionally composed with `−I` there.
    pub fn hyperbolic(t: f64, lambda: f64, epsilon: i8) -> Self {
        let e = if epsilon < 0 { -1.0 } else { 1.0 };
        let (sh, ch) = (t.sinh(), t.cosh());
        let l = Mat3::new(1.0, 0.0, 0.0, 0.0, e * ch, e * sh, 0.0, e * sh, e * ch);
        Self::new(l, Vec3::new(lambda, 0.0, 0.0))
    }

    /// Null rotation fixing `(0, 1, 1)`.
    pub fn parabolic(t: f64, lambda: f64) -> Self {
        let h = t * t / 2.0;
        let l = Mat3::new(1.0, -t, t, t, 1.0 - h, h, t, -h, 1.0 + h);
        Self::new(l, Vec3::new(0.0, 0.0, lambda))
    }

    /// `(x1 + ν, −x2, −x3)`.
    pub fn r0(nu: f64) -> Self {
        Self::new(Mat3::from_diagonal(&Vec3::new(1.0, -1.0, -1.0)), Vec3::new(nu, 0.0, 0.0))
    }

    /// `(x1 + δ, −x2, x3)`.
    pub fn r1(delta: f64) -> Self {
        Self::new(Mat3::from_diagonal(&Vec3::new(1.0, -1.0, 1.0)), Vec3::new(delta, 0.0, 0.0))
    }

    /// `(x1, x2 + δ, −x3)`.
    pub fn r2(delta: f64) -> Self {
        Self::new(Mat3::from_diagonal(&Vec3::new(1.0, 1.0, -1.0)), Vec3::new(0.0, delta, 0.0))
    }

    pub fn apply(&self, x: &Vec3) -> Vec3 {
        self.linear * x + self.translation
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &Isometry) -> Isometry {
        Isometry::new(self.linear * other.linear, self.linear * other.translation + self.translation)
    }

    pub fn inverse(&self) -> Isometry {
        let e = eta();
        let li = e * self.linear.transpose() * e;
        Isometry::new(li, -(li * self.translation))
    }

    /// `frame⁻¹ ∘ self ∘ frame`.
    pub fn conjugate(&self, frame: &Isometry) -> Isometry {
        frame.inverse().compose(self).compose(frame)
    }

    pub fn power(&self, n: i64) -> Isometry {
        let base = if n < 0 { self.inverse() } else { *self };
        (0..n.unsigned_abs()).fold(Isometry::identity(), |acc, _| acc.compose(&base))
    }

    pub fn det(&self) -> f64 {
        self.linear.determinant()
    }

    pub fn is_positive(&self) -> bool {
        self.det() > 0.0
    }

    pub fn is_orthochronous(&self) -> bool {
        self.linear[(2, 2)] > 0.0
    }

    /// `max |LᵀηL − η|`.
    pub fn lorentz_defect(&self) -> f64 {
        let e = eta();
        (self.linear.transpose() * e * self.linear - e).amax()
    }

    /// Largest entrywise difference of linear parts and translations.
    pub fn distance(&self, other: &Isometry) -> f64 {
        (self.linear - other.linear).amax().max((self.translation - other.translation).amax())
    }

    pub fn linear_is_identity(&self, tol: f64) -> bool {
        (self.linear - Mat3::identity()).amax() <= tol
    }

    /// Rows of the linear part followed by the translation, as 12 numbers.
    pub fn to_row_major(&self) -> [f64; 12] {
        let l = &self.linear;
        let t = &self.translation;
        [
            l[(0, 0)], l[(0, 1)], l[(0, 2)],
            l[(1, 0)], l[(1, 1)], l[(1, 2)],
            l[(2, 0)], l[(2, 1)], l[(2, 2)],
            t.x, t.y, t.z,
        ]
    }

    pub fn from_row_major(v: &[f64; 12]) -> Isometry {
        Isometry::new(Mat3::from_row_slice(&v[..9]), Vec3::new(v[9], v[10], v[11]))
    }

    /// Linear isometry whose columns are the given Lorentz-orthonormal frame.
    pub fn from_frame(e1: Vec3, e2: Vec3, e3: Vec3, origin: Vec3) -> Isometry {
        Isometry::new(Mat3::from_columns(&[e1, e2, e3]), origin)
    }
}

pub fn is_orthochronous(r: &Isometry) -> bool {
    r.is_orthochronous()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum IsometryKind {
    Identity,
    Translation,
    Elliptic,
    Hyperbolic,
    Parabolic,
    NegativeOrthochronous,
    NegativeNonOrthochronous,
}

/// Normal-form data of an isometry. For positive non-translations the map is
/// conjugate, by an element of the identity component, to the normal form with
/// these parameters.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct IsometryClass {
    pub kind: IsometryKind,
    pub positive: bool,
    pub orthochronous: bool,
    /// `t`; in `(0, 2π)` for elliptic maps, `≥ 0` for hyperbolic ones.
    pub angle: f64,
    pub lambda: f64,
    /// `±1` for hyperbolic maps, `1` otherwise.
    pub epsilon: i8,
    pub screw: bool,
}

/// Null vector of `L − I` from the largest cross product of its rows.
fn fixed_axis(l: &Mat3) -> Vec3 {
    let m = l - Mat3::identity();
    let rows = [m.row(0).transpose(), m.row(1).transpose(), m.row(2).transpose()];
    let cands = [rows[0].cross(&rows[1]), rows[0].cross(&rows[2]), rows[1].cross(&rows[2])];
    let best = cands
        .iter()
        .max_by(|a, b| a.norm_squared().total_cmp(&b.norm_squared()))
        .copied()
        .unwrap_or_else(Vec3::zeros);
    let n = best.norm();
    if n == 0.0 {
        best
    } else {
        best / n
    }
}

/// Future unit timelike vector orthogonal to the (spacelike) `e1`.
fn future_normal_to(e1: &Vec3) -> Vec3 {
    let x = Vec3::new(0.0, 0.0, 1.0);
    let p = x - e1 * inner(&x, e1);
    let p = normalize(&p).unwrap_or(x);
    if p.z < 0.0 {
        -p
    } else {
        p
    }
}

/// Completes `(e1, ·, e3)` to a positively oriented orthonormal frame.
fn middle_vector(e1: &Vec3, e3: &Vec3) -> Vec3 {
    let e2 = normalize(&lorentz_cross(e3, e1)).unwrap_or_else(|| Vec3::new(0.0, 1.0, 0.0));
    if Mat3::from_columns(&[*e1, e2, *e3]).determinant() < 0.0 {
        -e2
    } else {
        e2
    }
}

pub(crate) fn frame_from_e1(e1: Vec3) -> (Vec3, Vec3, Vec3) {
    let e3 = future_normal_to(&e1);
    let e2 = middle_vector(&e1, &e3);
    (e1, e2, e3)
}

pub(crate) fn frame_from_e3(e3: Vec3) -> (Vec3, Vec3, Vec3) {
    // Any spacelike direction orthogonal to e3; the choice only fixes a rotation.
    let seed = if e3.x.abs() <= e3.y.abs() { Vec3::new(1.0, 0.0, 0.0) } else { Vec3::new(0.0, 1.0, 0.0) };
    let p = seed + e3 * inner(&seed, &e3);
    let e1 = normalize(&p).unwrap_or(seed);
    let e2 = middle_vector(&e1, &e3);
    (e1, e2, e3)
}

pub(crate) fn frame_from_e2(e2: Vec3) -> (Vec3, Vec3, Vec3) {
    let e3 = {
        let x = Vec3::new(0.0, 0.0, 1.0);
        let p = x - e2 * inner(&x, &e2);
        let p = normalize(&p).unwrap_or(x);
        if p.z < 0.0 {
            -p
        } else {
            p
        }
    };
    let e1 = normalize(&lorentz_cross(&e2, &e3)).unwrap_or_else(|| Vec3::new(1.0, 0.0, 0.0));
    let e1 = if Mat3::from_columns(&[e1, e2, e3]).determinant() < 0.0 { -e1 } else { e1 };
    (e1, e2, e3)
}

/// Classifies `r` and extracts its normal-form parameters.
pub fn classify_isometry(r: &Isometry, tol: f64) -> Result<IsometryClass, LorentzError> {
    let r = Isometry::checked(r.linear, r.translation, tol)?;
    let l = r.linear;
    let c = r.translation;
    let positive = r.is_positive();
    let orthochronous = r.is_orthochronous();
    let mut out = IsometryClass {
        kind: IsometryKind::Identity,
        positive,
        orthochronous,
        angle: 0.0,
        lambda: 0.0,
        epsilon: 1,
        screw: false,
    };
    if !positive {
        out.kind = if orthochronous {
            IsometryKind::NegativeOrthochronous
        } else {
            IsometryKind::NegativeNonOrthochronous
        };
        return Ok(out);
    }
    let lam_tol = tol * c.norm().max(1.0);
    if r.linear_is_identity(tol) {
        out.kind = if c.norm() <= lam_tol { IsometryKind::Identity } else { IsometryKind::Translation };
        return Ok(out);
    }

    let axis = fixed_axis(&l);
    let lnorm2 = l.norm_squared();
    let d = l.trace() - 3.0;
    let merge = tol * 1e-3 * lnorm2.max(1.0);

    if !orthochronous || d > merge {
        // Hyperbolic: spacelike axis e1, boost plane spanned by e2, e3.
        let mut e1 = normalize(&axis).unwrap_or(axis);
        let big = e1.iter().copied().max_by(|a, b| a.abs().total_cmp(&b.abs())).unwrap_or(1.0);
        if big < 0.0 {
            e1 = -e1;
        }
        let (e1, e2, e3) = frame_from_e1(e1);
        let le2 = l * e2;
        let ec = inner(&le2, &e2);
        let eps = if ec < 0.0 { -1i8 } else { 1 };
        let sh = -inner(&le2, &e3) * eps as f64;
        out.kind = IsometryKind::Hyperbolic;
        out.epsilon = eps;
        // (t, λ) and (−t, −λ) are conjugate by a half turn about e3; keep t ≥ 0.
        let s = if sh < 0.0 { -1.0 } else { 1.0 };
        out.angle = s * sh.asinh();
        out.lambda = s * inner(&c, &e1);
    } else if d < -merge {
        let mut e3 = normalize(&axis).unwrap_or(Vec3::new(0.0, 0.0, 1.0));
        if e3.z < 0.0 {
            e3 = -e3;
        }
        let (e1, e2, e3) = frame_from_e3(e3);
        let le1 = l * e1;
        let cos_t = inner(&le1, &e1);
        let sin_t = -inner(&le1, &e2);
        let mut t = sin_t.atan2(cos_t);
        if t <= 0.0 {
            t += std::f64::consts::TAU;
        }
        out.kind = IsometryKind::Elliptic;
        out.angle = t;
        out.lambda = -inner(&c, &e3);
    } else {
        // Parabolic: future null axis of Euclidean length √2.
        let mut a = axis * std::f64::consts::SQRT_2;
        if a.z < 0.0 {
            a = -a;
        }
        let u = Vec3::new(0.0, 0.0, 1.0);
        let au = inner(&a, &u);
        let mut e1 = normalize(&lorentz_cross(&a, &u)).unwrap_or(Vec3::new(1.0, 0.0, 0.0));
        let alpha = -1.0 / (au * au);
        let beta = 2.0 * alpha * au;
        let b = a * alpha + u * beta;
        let e2 = (a - b) / 2.0;
        let e3 = (a + b) / 2.0;
        if Mat3::from_columns(&[e1, e2, e3]).determinant() < 0.0 {
            e1 = -e1;
        }
        let le1 = l * e1;
        out.kind = IsometryKind::Parabolic;
        out.angle = inner(&(le1 - e1), &b) / -2.0;
        out.lambda = -inner(&c, &a);
    }
    out.screw = out.lambda.abs() > lam_tol;
    if !out.screw {
        out.lambda = 0.0;
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn normal_forms_are_lorentz() {
        for iso in [
            Isometry::elliptic(1.0, 2.0),
            Isometry::hyperbolic(0.7, -1.0, 1),
            Isometry::hyperbolic(0.7, -1.0, -1),
            Isometry::parabolic(1.3, 0.5),
        ] {
            assert!(iso.lorentz_defect() < 1e-14);
            assert!(iso.is_positive());
        }
    }

    #[test]
    fn elliptic_roundtrip() {
        let c = classify_isometry(&Isometry::elliptic(2.5, 0.3), 1e-9).unwrap();
        assert_eq!(c.kind, IsometryKind::Elliptic);
        assert!((c.angle - 2.5).abs() < 1e-12);
        assert!((c.lambda - 0.3).abs() < 1e-12);
        assert!(c.screw);
        let c = classify_isometry(&Isometry::elliptic(PI + 1.0, 0.0), 1e-9).unwrap();
        assert!((c.angle - PI - 1.0).abs() < 1e-12);
        assert!(!c.screw);
    }

    #[test]
    fn hyperbolic_roundtrip() {
        for eps in [1i8, -1] {
            let c = classify_isometry(&Isometry::hyperbolic(-0.8, 1.5, eps), 1e-9).unwrap();
            assert_eq!(c.kind, IsometryKind::Hyperbolic);
            assert_eq!(c.epsilon, eps);
            // Reported as the conjugate normal form with t > 0.
            assert!((c.angle - 0.8).abs() < 1e-12, "{c:?}");
            assert!((c.lambda + 1.5).abs() < 1e-12);
        }
    }

    #[test]
    fn parabolic_roundtrip() {
        let c = classify_isometry(&Isometry::parabolic(-2.0, 0.25), 1e-9).unwrap();
        assert_eq!(c.kind, IsometryKind::Parabolic);
        assert!((c.angle + 2.0).abs() < 1e-12, "{c:?}");
        assert!((c.lambda - 0.25).abs() < 1e-12);
    }

    #[test]
    fn inverse_and_power() {
        let a = Isometry::hyperbolic(0.4, 1.0, 1).compose(&Isometry::translation_by(Vec3::new(0.1, 0.2, 0.3)));
        assert!(a.compose(&a.inverse()).distance(&Isometry::identity()) < 1e-14);
        assert!(a.power(3).distance(&a.compose(&a).compose(&a)) < 1e-13);
        assert!(a.power(-2).compose(&a.power(2)).distance(&Isometry::identity()) < 1e-13);
    }

    #[test]
    fn rejects_non_lorentz() {
        let m = Mat3::new(2.0, 0.0, 0.0, 0.0, 1.0, 0.0, 0.0, 0.0, 1.0);
        assert!(matches!(
            classify_isometry(&Isometry::linear_map(m), 1e-9),
            Err(LorentzError::NotAnIsometry { .. })
        ));
    }

    #[test]
    fn negative_kinds() {
        let c = classify_isometry(&Isometry::r1(1.0), 1e-9).unwrap();
        assert_eq!(c.kind, IsometryKind::NegativeOrthochronous);
        let c = classify_isometry(&Isometry::r2(1.0), 1e-9).unwrap();
        assert_eq!(c.kind, IsometryKind::NegativeNonOrthochronous);
    }
}
