//! Weierstrass data `(g, φ3)` and the derived forms
//! `φ1 = (i/2)(1/g − g)φ3`, `φ2 = −(1/2)(1/g + g)φ3`.

use super::{DomainError, DomainKind, DomainSpec, RationalFn, SurfacePoint, TAU_POLE};
use crate::complex::{c, ExtComplex, C64};
use serde::{Deserialize, Serialize};

/// `φ3 = q(z) w^p dz` with `p ∈ {0, −1}`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Phi3 {
    pub q: RationalFn,
    pub w_power: i32,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct WeierstrassData {
    pub domain: DomainSpec,
    pub g: RationalFn,
    pub phi3: Phi3,
    /// Reduced `φk / (w^p dz)` for `k = 1, 2, 3`.
    pub forms: [RationalFn; 3],
    /// Reduced `φ3 / (g w^p dz)`.
    pub omega: RationalFn,
    /// Finite poles of the three forms (excluding branch behaviour).
    pub form_poles: Vec<C64>,
}

impl WeierstrassData {
    pub fn new(domain: DomainSpec, g: RationalFn, phi3: Phi3) -> Result<Self, DomainError> {
        if !matches!(phi3.w_power, 0 | -1) {
            return Err(DomainError::InvalidInput(format!("w_power must be 0 or -1, got {}", phi3.w_power)));
        }
        if domain.kind == DomainKind::PuncturedClosedDisk && phi3.w_power != 0 {
            return Err(DomainError::InvalidInput("w_power = -1 needs a hyperelliptic domain".into()));
        }
        if g.is_zero() || phi3.q.is_zero() {
            return Err(DomainError::InvalidInput("g and φ3 must be non-zero".into()));
        }
        let g = g.reduced()?;
        let (gn, gd) = (&g.num, &g.den);
        let gd2 = gd * gd;
        let gn2 = gn * gn;
        let gg = gn * gd;
        let q = &phi3.q;
        let f1 = RationalFn::new((&q.num * &(&gd2 - &gn2)).scale(c(0.0, 0.5)), &q.den * &gg)?.reduced()?;
        let f2 = RationalFn::new((&q.num * &(&gd2 + &gn2)).scale(c(-0.5, 0.0)), &q.den * &gg)?.reduced()?;
        let f3 = q.reduced()?;
        let omega = RationalFn::new(&q.num * gd, &q.den * gn)?.reduced()?;
        let mut form_poles: Vec<C64> = vec![];
        for f in [&f1, &f2, &f3] {
            for p in f.poles()? {
                if !form_poles.iter().any(|x| (x - p).norm() <= 1e-9 * p.norm().max(1.0)) {
                    form_poles.push(p);
                }
            }
        }
        Ok(Self { domain, g, phi3, forms: [f1, f2, f3], omega, form_poles })
    }

    pub fn is_hyperelliptic(&self) -> bool {
        self.domain.is_hyperelliptic()
    }

    #[inline]
    pub fn w_factor(&self, w: C64) -> C64 {
        if self.phi3.w_power == -1 {
            w.inv()
        } else {
            c(1.0, 0.0)
        }
    }

    /// `(φ1, φ2, φ3)/dz` at `(z, w)` without any safety checks.
    #[inline]
    pub fn phi_unchecked(&self, z: C64, w: C64) -> [C64; 3] {
        let s = self.w_factor(w);
        [self.forms[0].eval(z) * s, self.forms[1].eval(z) * s, self.forms[2].eval(z) * s]
    }

    /// Distance from `z` to the nearest pole of the forms.
    pub fn pole_distance(&self, z: C64) -> f64 {
        self.form_poles.iter().map(|p| (p - z).norm()).fold(f64::INFINITY, f64::min)
    }

    fn sheet(&self, p: &SurfacePoint, z: C64) -> Result<C64, DomainError> {
        if !self.is_hyperelliptic() {
            return Ok(c(1.0, 0.0));
        }
        let w = p.w_finite().ok_or(DomainError::MissingSheet(z))?;
        self.domain.check_on_curve(z, w)?;
        Ok(w)
    }

    /// `(φ1, φ2, φ3)` against `dz`; at `z = ∞` against `du`, `u = 1/z`.
    pub fn eval_phi(&self, p: &SurfacePoint) -> Result<[C64; 3], DomainError> {
        match p.z {
            ExtComplex::Finite(z) => {
                let w = self.sheet(p, z)?;
                let d = self.pole_distance(z);
                if d <= TAU_POLE {
                    return Err(DomainError::PoleHit { at: z, distance: d });
                }
                if self.phi3.w_power == -1 && w.norm() <= TAU_POLE {
                    return Err(DomainError::PoleHit { at: z, distance: 0.0 });
                }
                Ok(self.phi_unchecked(z, w))
            }
            ExtComplex::Infinity => {
                let s = if self.phi3.w_power == -1 {
                    let rhs = self.domain.curve_rhs.as_ref().unwrap();
                    if rhs.order_at_infinity() != 0 {
                        return Err(DomainError::InvalidInput("sheet at infinity is not a regular value".into()));
                    }
                    let w = p.w_finite().ok_or(DomainError::MissingSheet(c(f64::INFINITY, 0.0)))?;
                    w.inv()
                } else {
                    c(1.0, 0.0)
                };
                let mut out = [c(0.0, 0.0); 3];
                for (k, f) in self.forms.iter().enumerate() {
                    // φ = −f(1/u) du / u²
                    let h = f.in_inverse_chart();
                    let h = RationalFn::new(h.num.scale(c(-1.0, 0.0)), h.den.shift_up(2))?.reduced()?;
                    let den0 = h.den.eval(c(0.0, 0.0));
                    if den0.norm() == 0.0 {
                        return Err(DomainError::PoleHit { at: c(f64::INFINITY, 0.0), distance: 0.0 });
                    }
                    out[k] = h.num.eval(c(0.0, 0.0)) / den0 * s;
                }
                Ok(out)
            }
        }
    }

    pub fn gauss(&self, z: C64) -> C64 {
        self.g.eval(z)
    }

    /// Conformal factor `((|φ3|/2)(1/|g| − |g|))²` of the induced metric,
    /// computed from `φ3/g` so that zeros of `g` cancel.
    pub fn metric_factor(&self, p: &SurfacePoint) -> Result<f64, DomainError> {
        let z = p.z.finite().ok_or_else(|| DomainError::InvalidInput("metric factor at infinity".into()))?;
        let w = self.sheet(p, z)?;
        let d = self.pole_distance(z);
        if d <= TAU_POLE {
            return Err(DomainError::PoleHit { at: z, distance: d });
        }
        Ok(self.metric_factor_unchecked(z, w))
    }

    pub fn metric_factor_unchecked(&self, z: C64, w: C64) -> f64 {
        let om = (self.omega.eval(z) * self.w_factor(w)).norm();
        let g = self.gauss(z).norm();
        let f = 0.5 * om * (1.0 - g * g);
        f * f
    }

    /// Interior points the integrator must route around: poles of the forms,
    /// branch points and ends.
    pub fn singular_points(&self) -> Vec<C64> {
        let mut pts = self.form_poles.clone();
        pts.extend(self.domain.branch_points.iter().copied());
        for e in &self.domain.ends {
            if let Some(z) = e.z_finite() {
                pts.push(z);
            }
        }
        let mut out: Vec<C64> = vec![];
        for p in pts {
            if !out.iter().any(|x| (x - p).norm() <= 1e-9) {
                out.push(p);
            }
        }
        out
    }
}
