//! Surface description files (TOML or JSON).
//!
//! Coefficients are listed in ascending powers of `z`; each is a real number
//! or a `[re, im]` pair.
//!
//! ```toml
//! family = "scherk"
//! g = "z"
//! [params]
//! b = 0.5
//! [domain]
//! kind = "punctured_closed_disk"
//! genus = 0
//! rank = 1
//! base = [0.0, 0.0]
//! ends = [[0.5, 0.0], [-0.5, 0.0]]
//! [phi3]
//! num = [0.0, 1.0]
//! den = [0.25, 0.0, -1.0625, 0.0, 0.25]
//! w_power = 0
//! ```

use crate::complex::{c, C64};
use crate::domain::{DomainError, DomainKind, DomainSpec, EndSpec, Phi3, Poly, RationalFn, WeierstrassData};
use crate::families::{build_family, BuiltFamily, FamilyError, FamilySpec};
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::path::Path;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum DescriptionError {
    #[error("cannot read {path}: {source}")]
    Read { path: String, source: std::io::Error },
    #[error("malformed TOML: {0}")]
    Toml(#[from] toml::de::Error),
    #[error("malformed JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error("invalid description: {0}")]
    Invalid(String),
    #[error(transparent)]
    Domain(#[from] DomainError),
    #[error(transparent)]
    Family(#[from] FamilyError),
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Coef {
    Real(f64),
    Complex([f64; 2]),
}

impl Coef {
    pub fn value(self) -> C64 {
        match self {
            Coef::Real(x) => c(x, 0.0),
            Coef::Complex([re, im]) => c(re, im),
        }
    }

    pub fn from_value(z: C64) -> Self {
        // Adding zero turns −0 into 0.
        if z.im == 0.0 {
            Coef::Real(z.re + 0.0)
        } else {
            Coef::Complex([z.re + 0.0, z.im])
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RationalSpec {
    pub num: Vec<Coef>,
    #[serde(default = "one")]
    pub den: Vec<Coef>,
}

fn one() -> Vec<Coef> {
    vec![Coef::Real(1.0)]
}

impl RationalSpec {
    pub fn to_rational(&self) -> Result<RationalFn, DescriptionError> {
        let p = |v: &[Coef]| Poly::new(v.iter().map(|x| x.value()).collect());
        Ok(RationalFn::new(p(&self.num), p(&self.den))?)
    }

    pub fn from_rational(f: &RationalFn) -> Self {
        let v = |p: &Poly| p.coeffs().iter().map(|&z| Coef::from_value(z)).collect();
        Self { num: v(&f.num), den: v(&f.den) }
    }
}

/// `g` as coefficient arrays, or the literal `"z"`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum GaussSpec {
    Literal(String),
    Rational(RationalSpec),
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Phi3Spec {
    pub num: Vec<Coef>,
    #[serde(default = "one")]
    pub den: Vec<Coef>,
    #[serde(default)]
    pub w_power: i32,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DomainDescription {
    pub kind: DomainKind,
    #[serde(default)]
    pub genus: u32,
    pub rank: u8,
    pub base: [f64; 2],
    /// Sheet at the base point; required on hyperelliptic domains.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub base_w: Option<[f64; 2]>,
    #[serde(default)]
    pub ends: Vec<[f64; 2]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub curve_rhs: Option<RationalSpec>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SurfaceDescription {
    /// Named family whose symmetry lifts and quotients should be checked.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub family: Option<String>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub params: BTreeMap<String, f64>,
    pub domain: DomainDescription,
    pub g: GaussSpec,
    pub phi3: Phi3Spec,
}

fn pair(z: [f64; 2]) -> C64 {
    c(z[0], z[1])
}

impl SurfaceDescription {
    pub fn from_toml(text: &str) -> Result<Self, DescriptionError> {
        Ok(toml::from_str(text)?)
    }

    pub fn from_json(text: &str) -> Result<Self, DescriptionError> {
        Ok(serde_json::from_str(text)?)
    }

    /// Reads a `.json` file as JSON and anything else as TOML.
    pub fn load(path: &Path) -> Result<Self, DescriptionError> {
        let text = std::fs::read_to_string(path)
            .map_err(|source| DescriptionError::Read { path: path.display().to_string(), source })?;
        if path.extension().is_some_and(|e| e.eq_ignore_ascii_case("json")) {
            Self::from_json(&text)
        } else {
            Self::from_toml(&text)
        }
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("descriptions always serialize")
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("descriptions always serialize")
    }

    pub fn to_data(&self) -> Result<WeierstrassData, DescriptionError> {
        let d = &self.domain;
        let base = pair(d.base);
        let ends: Vec<C64> = d.ends.iter().map(|&e| pair(e)).collect();
        let domain = match d.kind {
            DomainKind::PuncturedClosedDisk => {
                if d.curve_rhs.is_some() || d.base_w.is_some() {
                    return Err(DescriptionError::Invalid("curve_rhs and base_w need kind = \"hyperelliptic_disk\"".into()));
                }
                DomainSpec::disk(base, &ends, d.rank, d.genus)?
            }
            DomainKind::HyperellipticDisk => {
                let rhs = d
                    .curve_rhs
                    .as_ref()
                    .ok_or_else(|| DescriptionError::Invalid("a hyperelliptic domain needs curve_rhs".into()))?
                    .to_rational()?;
                let w = d.base_w.ok_or_else(|| DescriptionError::Invalid("a hyperelliptic domain needs base_w".into()))?;
                let ends: Vec<EndSpec> = ends.into_iter().map(EndSpec::at).collect();
                DomainSpec::hyperelliptic(rhs, base, pair(w), &ends, d.rank, d.genus)?
            }
        };
        let g = match &self.g {
            GaussSpec::Literal(s) if s.trim() == "z" => RationalFn::identity(),
            GaussSpec::Literal(s) => return Err(DescriptionError::Invalid(format!("g = {s:?}: the only literal is \"z\""))),
            GaussSpec::Rational(r) => r.to_rational()?,
        };
        let q = RationalSpec { num: self.phi3.num.clone(), den: self.phi3.den.clone() }.to_rational()?;
        Ok(WeierstrassData::new(domain, g, Phi3 { q, w_power: self.phi3.w_power })?)
    }

    /// The named family with these parameters, if one is declared.
    pub fn to_family(&self) -> Result<Option<BuiltFamily>, DescriptionError> {
        let Some(name) = &self.family else { return Ok(None) };
        let params: Vec<(String, f64)> = self.params.iter().map(|(k, v)| (k.clone(), *v)).collect();
        Ok(Some(build_family(FamilySpec::with_params(name, &params)?)?))
    }

    pub fn from_data(data: &WeierstrassData) -> Self {
        let d = &data.domain;
        let base = d.base.z_finite().unwrap_or(c(0.0, 0.0));
        let mut ends: Vec<[f64; 2]> = vec![];
        for e in &d.ends {
            if let Some(z) = e.z_finite() {
                if !ends.iter().any(|p| pair(*p) == z) {
                    ends.push([z.re, z.im]);
                }
            }
        }
        let g = if data.g == RationalFn::identity() { GaussSpec::Literal("z".into()) } else { GaussSpec::Rational(RationalSpec::from_rational(&data.g)) };
        let q = RationalSpec::from_rational(&data.phi3.q);
        Self {
            family: None,
            params: BTreeMap::new(),
            domain: DomainDescription {
                kind: d.kind,
                genus: d.genus,
                rank: d.rank,
                base: [base.re, base.im],
                base_w: d.base.w_finite().filter(|_| d.is_hyperelliptic()).map(|w| [w.re, w.im]),
                ends,
                curve_rhs: d.curve_rhs.as_ref().map(RationalSpec::from_rational),
            },
            g,
            phi3: Phi3Spec { num: q.num, den: q.den, w_power: data.phi3.w_power },
        }
    }

    pub fn from_family(f: &BuiltFamily) -> Self {
        let mut s = Self::from_data(&f.data);
        s.family = Some(f.spec.name().to_string());
        s.params = f.spec.params().into_iter().collect();
        s
    }
}
