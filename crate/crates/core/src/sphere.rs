//! Points, lazy divisors and logarithmic 1-forms on the punctured projective line.

use std::collections::HashSet;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exactnum::{BinaryForm, GaussianRational, ProjPoint, RationalOneForm, UniPoly};

/// Distinct finite punctures in the working affine chart.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(transparent)]
pub struct PunctureSet(Vec<GaussianRational>);

impl PunctureSet {
    pub fn new(points: Vec<ProjPoint>) -> Result<Self> {
        if points.is_empty() {
            return Err(Error::NoPunctures);
        }
        let mut seen = HashSet::new();
        let mut finite = Vec::with_capacity(points.len());
        for (i, p) in points.into_iter().enumerate() {
            let ProjPoint::Finite(a) = p else {
                return Err(Error::InfinitePuncture(i));
            };
            if !seen.insert(a.clone()) {
                return Err(Error::DuplicatePuncture(a.to_string()));
            }
            finite.push(a);
        }
        Ok(Self(finite))
    }

    pub fn from_affine(points: Vec<GaussianRational>) -> Result<Self> {
        Self::new(points.into_iter().map(ProjPoint::Finite).collect())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn points(&self) -> &[GaussianRational] {
        &self.0
    }

    pub fn index_of(&self, p: &ProjPoint) -> Option<usize> {
        let a = p.affine()?;
        self.0.iter().position(|q| q == a)
    }

    pub fn iter(&self) -> impl Iterator<Item = &GaussianRational> {
        self.0.iter()
    }
}

/// ω = Σ r_i dz / (z - p_i), with Σ r_i = 0 and every r_i ≠ 0.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LogOneForm {
    punctures: PunctureSet,
    residues: Vec<GaussianRational>,
}

pub fn make_log_form(punctures: PunctureSet, residues: Vec<GaussianRational>) -> Result<LogOneForm> {
    if residues.len() != punctures.len() {
        return Err(Error::LengthMismatch {
            expected: punctures.len(),
            got: residues.len(),
        });
    }
    if let Some(i) = residues.iter().position(GaussianRational::is_zero) {
        return Err(Error::ZeroResidue(i));
    }
    let total: GaussianRational = residues.iter().sum();
    if !total.is_zero() {
        return Err(Error::ResidueSumNonzero(total.to_string()));
    }
    Ok(LogOneForm { punctures, residues })
}

pub fn residue_of_form(omega: &LogOneForm, p: &ProjPoint) -> Result<GaussianRational> {
    omega.residue(p)
}

impl LogOneForm {
    pub fn punctures(&self) -> &PunctureSet {
        &self.punctures
    }

    pub fn residues(&self) -> &[GaussianRational] {
        &self.residues
    }

    pub fn residue(&self, p: &ProjPoint) -> Result<GaussianRational> {
        self.punctures
            .index_of(p)
            .map(|i| self.residues[i].clone())
            .ok_or_else(|| Error::NotAPuncture(p.to_string()))
    }

    /// Π (z - p_i)
    pub fn pole_polynomial(&self) -> UniPoly {
        self.punctures
            .iter()
            .fold(UniPoly::one(), |acc, p| &acc * &UniPoly::linear(p))
    }

    /// Partial-fraction numerator Σ r_i Π_{j≠i} (z - p_j).
    pub fn numerator(&self) -> UniPoly {
        let pts = self.punctures.points();
        let mut acc = UniPoly::zero();
        for (i, r) in self.residues.iter().enumerate() {
            let others = pts
                .iter()
                .enumerate()
                .filter(|(j, _)| *j != i)
                .fold(UniPoly::one(), |a, (_, p)| &a * &UniPoly::linear(p));
            acc = &acc + &others.scale(r);
        }
        acc
    }

    pub fn to_rational(&self) -> RationalOneForm {
        RationalOneForm::new(self.numerator(), self.pole_polynomial()).expect("nonzero pole polynomial")
    }
}

/// Möbius transform [[a, b], [c, d]] acting on (z0, z1).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Mobius(pub [[GaussianRational; 2]; 2]);

impl Mobius {
    pub fn identity() -> Self {
        let (o, z) = (GaussianRational::one(), GaussianRational::zero());
        Self([[o.clone(), z.clone()], [z, o]])
    }

    /// z ↦ 1/(z - t): sends t to ∞ and ∞ to 0.
    pub fn invert_around(t: &GaussianRational) -> Self {
        let (o, z) = (GaussianRational::one(), GaussianRational::zero());
        Self([[z, o.clone()], [o, -t]])
    }

    pub fn is_identity(&self) -> bool {
        *self == Self::identity()
    }

    pub fn determinant(&self) -> GaussianRational {
        let m = &self.0;
        &m[0][0] * &m[1][1] - &m[0][1] * &m[1][0]
    }

    pub fn apply(&self, p: &ProjPoint) -> ProjPoint {
        let (z0, z1) = p.coords();
        let m = &self.0;
        let w0 = &m[0][0] * &z0 + &m[0][1] * &z1;
        let w1 = &m[1][0] * &z0 + &m[1][1] * &z1;
        ProjPoint::from_coords(w0, w1).expect("invertible transform")
    }

    pub fn inverse(&self) -> Self {
        let m = &self.0;
        let d_inv = self.determinant().inv().expect("invertible transform");
        Self([
            [&m[1][1] * &d_inv, -&m[0][1] * &d_inv],
            [-&m[1][0] * &d_inv, &m[0][0] * &d_inv],
        ])
    }

    /// The form f ∘ M⁻¹, whose zeros are the images of the zeros of f.
    pub fn push_forward(&self, f: &BinaryForm) -> BinaryForm {
        f.compose_linear(&self.inverse().0)
    }
}

/// Find a transform taking every point to a finite one. Identity when no point is ∞.
pub fn mobius_normalize(points: &[ProjPoint]) -> (Mobius, Vec<GaussianRational>) {
    if points.iter().all(ProjPoint::is_finite) {
        let finite = points.iter().map(|p| p.affine().unwrap().clone()).collect();
        return (Mobius::identity(), finite);
    }
    // Pick an integer t that is not among the inputs; it is sent to ∞.
    let t = (0..)
        .map(GaussianRational::from)
        .find(|t| !points.contains(&ProjPoint::Finite(t.clone())))
        .unwrap();
    let m = Mobius::invert_around(&t);
    let images = points
        .iter()
        .map(|p| m.apply(p).affine().expect("t avoided").clone())
        .collect();
    (m, images)
}

/// Zero divisor of a nonzero binary form, queried lazily.
#[derive(Clone, Debug)]
pub struct Divisor {
    form: BinaryForm,
}

pub fn divisor_of_form(f: &BinaryForm) -> Result<Divisor> {
    if f.is_zero() {
        return Err(Error::ZeroForm);
    }
    Ok(Divisor { form: f.clone() })
}

impl Divisor {
    pub fn degree(&self) -> usize {
        self.form.degree()
    }

    pub fn multiplicity(&self, p: &ProjPoint) -> usize {
        let mut f = self.form.clone();
        let mut m = 0;
        while let Some(q) = f.divide_by_linear(p) {
            f = q;
            m += 1;
        }
        m
    }
}

/// `{"punctures": [...], "residues": [...]}`
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct LogFormSpec {
    pub punctures: Vec<ProjPoint>,
    pub residues: Vec<GaussianRational>,
}
