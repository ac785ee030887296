//! Rational functions of one complex variable.

use super::poly::{Poly, ROOT_CLUSTER_TOL};
use super::DomainError;
use crate::complex::{c, C64};
use serde::{Deserialize, Serialize};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RationalFn {
    pub num: Poly,
    pub den: Poly,
}

/// A zero (positive order) or pole (negative order) of a rational function.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Divisor {
    pub at: C64,
    pub order: i64,
}

impl RationalFn {
    pub fn new(num: Poly, den: Poly) -> Result<Self, DomainError> {
        if den.is_zero() {
            return Err(DomainError::InvalidInput("zero denominator".into()));
        }
        Ok(Self { num, den })
    }

    pub fn polynomial(p: Poly) -> Self {
        Self { num: p, den: Poly::constant(c(1.0, 0.0)) }
    }

    pub fn constant(a: C64) -> Self {
        Self::polynomial(Poly::constant(a))
    }

    /// The coordinate function `z`.
    pub fn identity() -> Self {
        Self::polynomial(Poly::z())
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn eval(&self, z: C64) -> C64 {
        self.num.eval(z) / self.den.eval(z)
    }

    pub fn mul(&self, o: &RationalFn) -> RationalFn {
        RationalFn { num: &self.num * &o.num, den: &self.den * &o.den }
    }

    pub fn div(&self, o: &RationalFn) -> Result<RationalFn, DomainError> {
        RationalFn::new(&self.num * &o.den, &self.den * &o.num)
    }

    pub fn add(&self, o: &RationalFn) -> RationalFn {
        RationalFn { num: &(&self.num * &o.den) + &(&o.num * &self.den), den: &self.den * &o.den }
    }

    pub fn sub(&self, o: &RationalFn) -> RationalFn {
        self.add(&o.scale(c(-1.0, 0.0)))
    }

    pub fn scale(&self, s: C64) -> RationalFn {
        RationalFn { num: self.num.scale(s), den: self.den.clone() }
    }

    pub fn recip(&self) -> Result<RationalFn, DomainError> {
        RationalFn::new(self.den.clone(), self.num.clone())
    }

    pub fn derivative(&self) -> RationalFn {
        let n = &(&self.num.derivative() * &self.den) - &(&self.num * &self.den.derivative());
        RationalFn { num: n, den: &self.den * &self.den }
    }

    /// Cancels common roots of numerator and denominator. Common powers of `z`
    /// are removed exactly; other common roots are matched within the cluster
    /// tolerance and both sides are rebuilt from their remaining roots.
    pub fn reduced(&self) -> Result<RationalFn, DomainError> {
        if self.num.is_zero() {
            return Ok(RationalFn::constant(c(0.0, 0.0)));
        }
        let v = self.num.valuation().min(self.den.valuation());
        let num = self.num.shift_down(v);
        let den = self.den.shift_down(v);
        if num.degree() == Some(0) || den.degree() == Some(0) {
            return Ok(RationalFn { num, den });
        }
        let mut zn = num.root_clusters()?;
        let mut zd = den.root_clusters()?;
        let mut cancelled = false;
        for d in zd.iter_mut() {
            for n in zn.iter_mut() {
                if n.1 == 0 || d.1 == 0 {
                    continue;
                }
                let scale = n.0.norm().max(d.0.norm()).max(1.0);
                if (n.0 - d.0).norm() <= ROOT_CLUSTER_TOL * scale {
                    let k = n.1.min(d.1);
                    n.1 -= k;
                    d.1 -= k;
                    cancelled = true;
                }
            }
        }
        if !cancelled {
            return Ok(RationalFn { num, den });
        }
        let expand = |cl: &[(C64, usize)]| -> Vec<C64> {
            cl.iter().flat_map(|&(r, m)| std::iter::repeat(r).take(m)).collect()
        };
        let num = Poly::from_roots(&expand(&zn)).scale(num.leading());
        let den = Poly::from_roots(&expand(&zd)).scale(den.leading());
        Ok(RationalFn { num, den })
    }

    /// `f(1/u)` as a rational function of `u`.
    pub fn in_inverse_chart(&self) -> RationalFn {
        let dn = self.num.degree().unwrap_or(0);
        let dd = self.den.degree().unwrap_or(0);
        let n = dn.max(dd);
        // f(1/u) = u^{n−dn} num_rev / (u^{n−dd} den_rev)
        RationalFn { num: self.num.reversed(dn).shift_up(n - dn), den: self.den.reversed(dd).shift_up(n - dd) }
    }

    /// `deg den − deg num`: order of vanishing at `∞`.
    pub fn order_at_infinity(&self) -> i64 {
        match self.num.degree() {
            None => i64::MAX,
            Some(dn) => self.den.degree().unwrap() as i64 - dn as i64,
        }
    }

    /// Zeros and poles in the finite plane, with cancellation applied.
    pub fn divisor(&self) -> Result<Vec<Divisor>, DomainError> {
        if self.num.is_zero() {
            return Err(DomainError::InvalidInput("divisor of the zero function".into()));
        }
        let r = self.reduced()?;
        let mut out = vec![];
        if r.num.degree().unwrap() > 0 {
            out.extend(r.num.root_clusters()?.into_iter().map(|(at, m)| Divisor { at, order: m as i64 }));
        }
        if r.den.degree().unwrap() > 0 {
            out.extend(r.den.root_clusters()?.into_iter().map(|(at, m)| Divisor { at, order: -(m as i64) }));
        }
        Ok(out)
    }

    /// Order of `f` at the finite point `z0` (positive for zeros).
    pub fn order_at(&self, z0: C64) -> Result<i64, DomainError> {
        let scale = z0.norm().max(1.0);
        Ok(self
            .divisor()?
            .iter()
            .filter(|d| (d.at - z0).norm() <= ROOT_CLUSTER_TOL * 10.0 * scale)
            .map(|d| d.order)
            .sum())
    }

    pub fn poles(&self) -> Result<Vec<C64>, DomainError> {
        Ok(self.divisor()?.into_iter().filter(|d| d.order < 0).map(|d| d.at).collect())
    }

    pub fn zeros(&self) -> Result<Vec<C64>, DomainError> {
        Ok(self.divisor()?.into_iter().filter(|d| d.order > 0).map(|d| d.at).collect())
    }
}
