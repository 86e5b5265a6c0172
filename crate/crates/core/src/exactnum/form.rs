use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::linalg::determinant;
use super::{GaussianRational, UniPoly};
use crate::error::{Error, Result};

/// A point of CP^1 in canonical form: `[p:1]` when finite, `[1:0]` at infinity.
#[derive(Clone, PartialEq, Eq, Hash)]
pub enum ProjPoint {
    Finite(GaussianRational),
    Infinity,
}

impl ProjPoint {
    pub fn finite(p: GaussianRational) -> Self {
        Self::Finite(p)
    }

    /// Canonicalizes `[z0:z1]`.
    pub fn from_coords(z0: GaussianRational, z1: GaussianRational) -> Result<Self> {
        if z1.is_zero() {
            if z0.is_zero() {
                return Err(Error::InvalidInput("[0:0] is not a projective point".into()));
            }
            return Ok(Self::Infinity);
        }
        Ok(Self::Finite(z0.checked_div(&z1)?))
    }

    pub fn coords(&self) -> (GaussianRational, GaussianRational) {
        match self {
            Self::Finite(p) => (p.clone(), GaussianRational::one()),
            Self::Infinity => (GaussianRational::one(), GaussianRational::zero()),
        }
    }

    pub fn is_finite(&self) -> bool {
        matches!(self, Self::Finite(_))
    }

    pub fn affine(&self) -> Option<&GaussianRational> {
        match self {
            Self::Finite(p) => Some(p),
            Self::Infinity => None,
        }
    }
}

impl fmt::Display for ProjPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Finite(p) => write!(f, "{p}"),
            Self::Infinity => write!(f, "inf"),
        }
    }
}

impl fmt::Debug for ProjPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (a, b) = self.coords();
        write!(f, "[{a}:{b}]")
    }
}

impl FromStr for ProjPoint {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "inf" | "infinity" | "∞" => Ok(Self::Infinity),
            other => Ok(Self::Finite(other.parse()?)),
        }
    }
}

impl Serialize for ProjPoint {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for ProjPoint {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        String::deserialize(deserializer)?
            .parse()
            .map_err(serde::de::Error::custom)
    }
}

/// Homogeneous form of degree d in (z0, z1); `coeffs[k]` multiplies z0^{d-k} z1^k.
///
/// The zero form keeps its formal degree; zero-ness is a separate predicate.
#[derive(Clone, PartialEq, Eq, Hash, Serialize)]
pub struct BinaryForm {
    degree: usize,
    coeffs: Vec<GaussianRational>,
}

#[derive(Deserialize)]
struct RawForm {
    degree: usize,
    coeffs: Vec<GaussianRational>,
}

impl<'de> Deserialize<'de> for BinaryForm {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let raw = RawForm::deserialize(deserializer)?;
        BinaryForm::new(raw.degree, raw.coeffs).map_err(serde::de::Error::custom)
    }
}

impl BinaryForm {
    pub fn new(degree: usize, coeffs: Vec<GaussianRational>) -> Result<Self> {
        if coeffs.len() != degree + 1 {
            return Err(Error::LengthMismatch {
                expected: degree + 1,
                got: coeffs.len(),
            });
        }
        Ok(Self { degree, coeffs })
    }

    pub fn from_ints(coeffs: &[i64]) -> Self {
        assert!(!coeffs.is_empty());
        Self {
            degree: coeffs.len() - 1,
            coeffs: coeffs.iter().map(|&c| c.into()).collect(),
        }
    }

    pub fn zero(degree: usize) -> Self {
        Self {
            degree,
            coeffs: vec![GaussianRational::zero(); degree + 1],
        }
    }

    /// z0^a z1^b
    pub fn monomial(a: usize, b: usize) -> Self {
        let mut f = Self::zero(a + b);
        f.coeffs[b] = GaussianRational::one();
        f
    }

    /// The linear form vanishing exactly at `p`: z0 - p z1, or z1 at infinity.
    pub fn vanishing_at(p: &ProjPoint) -> Self {
        match p {
            ProjPoint::Finite(a) => Self {
                degree: 1,
                coeffs: vec![GaussianRational::one(), -a],
            },
            ProjPoint::Infinity => Self::monomial(0, 1),
        }
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn coeffs(&self) -> &[GaussianRational] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(GaussianRational::is_zero)
    }

    /// Value at the canonical representative of `p`.
    pub fn eval(&self, p: &ProjPoint) -> GaussianRational {
        match p {
            ProjPoint::Finite(a) => self.dehomogenize().eval(a),
            ProjPoint::Infinity => self.coeffs[0].clone(),
        }
    }

    /// f(z, 1) as a polynomial in the affine coordinate z = z0/z1.
    pub fn dehomogenize(&self) -> UniPoly {
        UniPoly::new(self.coeffs.iter().rev().cloned().collect())
    }

    /// Inverse of [`Self::dehomogenize`] for a polynomial of degree at most `degree`.
    pub fn homogenize(p: &UniPoly, degree: usize) -> Result<Self> {
        if p.degree().is_some_and(|d| d > degree) {
            return Err(Error::InvalidInput(format!(
                "polynomial of degree {:?} does not fit in a form of degree {degree}",
                p.degree()
            )));
        }
        Ok(Self {
            degree,
            coeffs: (0..=degree).map(|k| p.coeff(degree - k)).collect(),
        })
    }

    /// Order of vanishing at [1:0], i.e. the largest m with z1^m | f.
    pub fn multiplicity_at_infinity(&self) -> Option<usize> {
        self.coeffs.iter().position(|c| !c.is_zero())
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut out = Self::zero(self.degree + other.degree);
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                out.coeffs[i + j] += &(a * b);
            }
        }
        out
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.zip(other, |a, b| a + b)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.zip(other, |a, b| a - b)
    }

    fn zip(
        &self,
        other: &Self,
        op: impl Fn(&GaussianRational, &GaussianRational) -> GaussianRational,
    ) -> Result<Self> {
        if self.degree != other.degree {
            return Err(Error::DegreeMismatch {
                name: "summand",
                expected: self.degree,
                got: other.degree,
            });
        }
        Ok(Self {
            degree: self.degree,
            coeffs: self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| op(a, b)).collect(),
        })
    }

    pub fn scale(&self, c: &GaussianRational) -> Self {
        Self {
            degree: self.degree,
            coeffs: self.coeffs.iter().map(|a| a * c).collect(),
        }
    }

    /// Divide by the linear form vanishing at `p`, if it divides exactly.
    pub fn divide_by_linear(&self, p: &ProjPoint) -> Option<Self> {
        if self.degree == 0 || self.is_zero() {
            return None;
        }
        match p {
            ProjPoint::Infinity => {
                if !self.coeffs[0].is_zero() {
                    return None;
                }
                Some(Self {
                    degree: self.degree - 1,
                    coeffs: self.coeffs[1..].to_vec(),
                })
            }
            ProjPoint::Finite(a) => {
                let (q, r) = self
                    .dehomogenize()
                    .div_rem(&UniPoly::linear(a))
                    .expect("linear divisor");
                if !r.is_zero() {
                    return None;
                }
                Self::homogenize(&q, self.degree - 1).ok()
            }
        }
    }

    /// Scale so that the first nonzero coefficient is 1.
    pub fn normalized(&self) -> Self {
        match self.coeffs.iter().find(|c| !c.is_zero()) {
            None => self.clone(),
            Some(lead) => self.scale(&lead.inv().expect("nonzero")),
        }
    }

    /// Substitute (z0, z1) -> M (z0, z1) where `m = [[a, b], [c, d]]`.
    pub fn compose_linear(&self, m: &[[GaussianRational; 2]; 2]) -> Self {
        let l0 = Self {
            degree: 1,
            coeffs: vec![m[0][0].clone(), m[0][1].clone()],
        };
        let l1 = Self {
            degree: 1,
            coeffs: vec![m[1][0].clone(), m[1][1].clone()],
        };
        let mut out = Self::zero(self.degree);
        for (k, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let mut term = Self::from_ints(&[1]).scale(c);
            for _ in 0..self.degree - k {
                term = term.mul(&l0);
            }
            for _ in 0..k {
                term = term.mul(&l1);
            }
            out = out.add(&term).expect("equal degrees");
        }
        out
    }
}

impl fmt::Debug for BinaryForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let d = self.degree;
        let terms: Vec<String> = self
            .coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(k, c)| format!("({c})z0^{}z1^{k}", d - k))
            .collect();
        if terms.is_empty() {
            write!(f, "0[deg {d}]")
        } else {
            write!(f, "{}", terms.join(" + "))
        }
    }
}

/// Sylvester matrix of two forms with their formal degrees.
pub fn sylvester_matrix(f: &BinaryForm, g: &BinaryForm) -> Vec<Vec<GaussianRational>> {
    let (m, n) = (f.degree(), g.degree());
    let size = m + n;
    let mut rows = Vec::with_capacity(size);
    for shift in 0..n {
        let mut row = vec![GaussianRational::zero(); size];
        for (k, c) in f.coeffs().iter().enumerate() {
            row[shift + k] = c.clone();
        }
        rows.push(row);
    }
    for shift in 0..m {
        let mut row = vec![GaussianRational::zero(); size];
        for (k, c) in g.coeffs().iter().enumerate() {
            row[shift + k] = c.clone();
        }
        rows.push(row);
    }
    rows
}

/// Homogeneous resultant; vanishes iff f and g share a projective root.
pub fn resultant(f: &BinaryForm, g: &BinaryForm) -> Result<GaussianRational> {
    if f.is_zero() || g.is_zero() {
        return Err(Error::ZeroForm);
    }
    if f.degree() + g.degree() == 0 {
        return Ok(GaussianRational::one());
    }
    Ok(determinant(sylvester_matrix(f, g)))
}

/// Greatest common divisor, first nonzero coefficient normalized to 1.
pub fn gcd_forms(f: &BinaryForm, g: &BinaryForm) -> Result<BinaryForm> {
    match (f.is_zero(), g.is_zero()) {
        (true, true) => return Err(Error::BothZero),
        (true, false) => return Ok(g.normalized()),
        (false, true) => return Ok(f.normalized()),
        _ => {}
    }
    let inf_mult = f
        .multiplicity_at_infinity()
        .unwrap()
        .min(g.multiplicity_at_infinity().unwrap());
    let h = f.dehomogenize().gcd(&g.dehomogenize());
    let finite_deg = h.degree().expect("gcd of nonzero polynomials");
    let finite = BinaryForm::homogenize(&h, finite_deg)?;
    Ok(finite.mul(&BinaryForm::monomial(0, inf_mult)).normalized())
}

pub fn eval_form(f: &BinaryForm, p: &ProjPoint) -> GaussianRational {
    f.eval(p)
}
