//! The projective model of the complex hyperbolic plane.
//!
//! Points are negative vectors for ⟨Z, W⟩ = Z₁W̄₁ + Z₂W̄₂ − Z₃W̄₃, and isometries
//! are matrices with A*JA = J, J = diag(1, 1, −1). Matrices with Gaussian rational
//! entries are handled exactly; transcendental quantities use binary64.

use std::f64::consts::PI;

use nalgebra::Matrix3;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::Signed;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exactnum::linalg::{nullspace, CVec3, Mat3, Scalar};
use crate::exactnum::{GaussianRational, UniPoly};

pub type QMat = Mat3<GaussianRational>;
pub type FMat = Mat3<Complex64>;

pub const DEFAULT_TOL: f64 = 1e-9;

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// ⟨Z, W⟩ = Z₁W̄₁ + Z₂W̄₂ − Z₃W̄₃
pub fn herm_form<T: Scalar>(z: &CVec3<T>, w: &CVec3<T>) -> T {
    z[0].times(&w[0].conj())
        .plus(&z[1].times(&w[1].conj()))
        .minus(&z[2].times(&w[2].conj()))
}

pub fn in_ch2(z: &CVec3<Complex64>) -> bool {
    herm_form(z, z).re < 0.0
}

pub fn in_ch2_exact(z: &CVec3<GaussianRational>) -> bool {
    herm_form(z, z).re.is_negative()
}

/// Bergman distance with cosh²(d/2) = |⟨Z,W⟩|² / (⟨Z,Z⟩⟨W,W⟩).
///
/// Evaluated through sinh²(d/2) = −⟨W⊥,W⊥⟩/⟨W,W⟩ with W⊥ the component of W
/// orthogonal to Z, which stays accurate for nearby points.
pub fn distance(z: &CVec3<Complex64>, w: &CVec3<Complex64>) -> Result<f64> {
    let z = normalize(z)?;
    let w = normalize(w)?;
    let zz = herm_form(&z, &z).re;
    let ww = herm_form(&w, &w).re;
    let k = herm_form(&w, &z) / zz;
    let perp: CVec3<Complex64> = std::array::from_fn(|i| w[i] - k * z[i]);
    let s = (-herm_form(&perp, &perp).re / ww).max(0.0);
    Ok(2.0 * s.sqrt().asinh())
}

/// Rescale a point of CH² to max-modulus 1.
fn normalize(z: &CVec3<Complex64>) -> Result<CVec3<Complex64>> {
    if !in_ch2(z) {
        return Err(Error::NotInCh2);
    }
    let m = z.iter().map(|x| x.norm()).fold(0.0, f64::max);
    Ok(z.map(|x| x / m))
}

/// [[cosh t, 0, sinh t], [0, 1, 0], [sinh t, 0, cosh t]]
pub fn boost(t: f64) -> FMat {
    let (ch, sh) = (c(t.cosh(), 0.0), c(t.sinh(), 0.0));
    let (o, z) = (c(1.0, 0.0), c(0.0, 0.0));
    Mat3([[ch, z, sh], [z, o, z], [sh, z, ch]])
}

/// Rational boost with cosh = 5/4, sinh = 3/4 (translation length 2 ln 2).
pub fn rational_boost() -> QMat {
    let (ch, sh) = (GaussianRational::from_fracs(5, 4, 0, 1), GaussianRational::from_fracs(3, 4, 0, 1));
    let (o, z) = (GaussianRational::one(), GaussianRational::zero());
    Mat3([[ch.clone(), z.clone(), sh.clone()], [z.clone(), o, z.clone()], [sh, z, ch]])
}

/// Point g·B(t)·e₃ on the geodesic through g(e₃).
pub fn geodesic_point(g: &FMat, t: f64) -> CVec3<Complex64> {
    let b = boost(t);
    let e3 = [c(0.0, 0.0), c(0.0, 0.0), c(1.0, 0.0)];
    g.mul_vec(&b.mul_vec(&e3))
}

/// A*JA − J
pub fn form_defect<T: Scalar>(a: &Mat3<T>) -> Mat3<T> {
    let j = Mat3::<T>::form_j();
    &(&(&a.adjoint() * &j) * a) - &j
}

pub fn preserves_form_exact(a: &QMat) -> bool {
    form_defect(a).is_zero()
}

/// Entrywise |A*JA − J| ≤ tol.
pub fn preserves_form(a: &FMat, tol: f64) -> bool {
    form_defect(a).max_abs() <= tol
}

/// B⁻¹ = J B* J for B in U(2,1).
pub fn u21_inverse<T: Scalar>(b: &Mat3<T>) -> Mat3<T> {
    let j = Mat3::<T>::form_j();
    &(&j * &b.adjoint()) * &j
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum IsometryClass {
    Elliptic,
    Parabolic,
    Loxodromic,
}

impl IsometryClass {
    pub fn as_str(&self) -> &'static str {
        match self {
            IsometryClass::Elliptic => "elliptic",
            IsometryClass::Parabolic => "parabolic",
            IsometryClass::Loxodromic => "loxodromic",
        }
    }
}

/// Goldman's discriminant |τ|⁴ − 8 Re(τ³ δ̄) + 18|τ|² − 27 for τ = tr A, δ = det A.
///
/// For A in U(2,1) it is positive iff A is loxodromic, negative iff A has three
/// distinct unit eigenvalues and zero iff an eigenvalue repeats.
pub fn discriminant_exact(a: &QMat) -> BigRational {
    let tau = a.trace();
    let delta = a.det();
    let t2 = tau.norm_sqr();
    let cubic = tau.pow(3) * delta.conj();
    let k = |v: i64| BigRational::from_integer(v.into());
    &t2 * &t2 - k(8) * cubic.re + k(18) * t2 - k(27)
}

pub fn discriminant(a: &FMat) -> f64 {
    let tau = a.trace();
    let delta = a.det();
    let t2 = tau.norm_sqr();
    t2 * t2 - 8.0 * (tau * tau * tau * delta.conj()).re + 18.0 * t2 - 27.0
}

/// Minimal polynomial from the first linear dependence among I, A, A², A³.
pub fn minimal_polynomial_exact(a: &QMat) -> UniPoly {
    let mut powers = vec![QMat::identity()];
    loop {
        let next = powers.last().map(|p| p * a).unwrap();
        powers.push(next);
        let rows: Vec<Vec<GaussianRational>> = (0..9)
            .map(|e| powers.iter().map(|p| p.0[e / 3][e % 3].clone()).collect())
            .collect();
        if let Some(v) = nullspace(&rows).into_iter().next() {
            return UniPoly::new(v).monic();
        }
    }
}

pub fn is_diagonalizable_exact(a: &QMat) -> bool {
    minimal_polynomial_exact(a).is_squarefree()
}

pub fn classify_isometry_exact(a: &QMat) -> Result<IsometryClass> {
    if !preserves_form_exact(a) {
        return Err(Error::FormNotPreserved);
    }
    let f = discriminant_exact(a);
    Ok(if f.is_positive() {
        IsometryClass::Loxodromic
    } else if f.is_negative() || is_diagonalizable_exact(a) {
        IsometryClass::Elliptic
    } else {
        IsometryClass::Parabolic
    })
}

/// Eigenvalues via complex Schur form of the shifted, rescaled matrix.
///
/// Unbounded QR iteration can stall on nearly scalar input, so the iteration
/// count is capped and the deflation threshold relaxed on retry.
pub fn eigenvalues(a: &FMat) -> [Complex64; 3] {
    let shift = a.trace() / 3.0;
    let centered = a - &FMat::identity().scale(&shift);
    let scale = centered.max_abs();
    if scale == 0.0 {
        return [shift; 3];
    }
    let m = Matrix3::from_fn(|i, j| centered.0[i][j] / scale);
    for eps in [f64::EPSILON, 1e-14, 1e-12, 1e-10] {
        if let Some(ev) = m.try_schur(eps, 1000).and_then(|s| s.eigenvalues()) {
            return [0, 1, 2].map(|k| ev[k] * scale + shift);
        }
    }
    panic!("Schur iteration failed to converge")
}

/// Group eigenvalues closer than `radius`; returns cluster means.
fn cluster(ev: &[Complex64; 3], radius: f64) -> Vec<Complex64> {
    let mut groups: Vec<Vec<Complex64>> = Vec::new();
    for &l in ev {
        match groups.iter_mut().find(|g| g.iter().any(|m| (m - l).norm() < radius)) {
            Some(g) => g.push(l),
            None => groups.push(vec![l]),
        }
    }
    groups
        .iter()
        .map(|g| g.iter().sum::<Complex64>() / g.len() as f64)
        .collect()
}

/// Diagonalizable iff Π (A − μ_c) vanishes over the eigenvalue clusters μ_c.
pub fn is_diagonalizable(a: &FMat, tol: f64) -> bool {
    let scale = 1.0 + a.max_abs();
    let means = cluster(&eigenvalues(a), tol.cbrt() * scale);
    let id = FMat::identity();
    let p = means
        .iter()
        .fold(FMat::identity(), |acc, mu| &acc * &(a - &id.scale(mu)));
    p.max_abs() <= tol.sqrt() * scale.powi(means.len() as i32)
}

/// Floating classification.
///
/// The discriminant decides when it clears tol·(1 + |τ|)³·(1 + ‖A‖)³, the size of
/// its τ³·det term under rounding of det A. Near the parabolic locus it vanishes to
/// sixth order in the translation length, so inside that band the eigenvalue moduli
/// from the Schur form decide instead, against tol^(1/3)·(1 + ‖A‖)^(2/3). That is
/// the cube-root perturbation scale of a 3×3 Jordan block.
pub fn classify_isometry(a: &FMat, tol: f64) -> Result<IsometryClass> {
    let scale = 1.0 + a.max_abs();
    if !preserves_form(a, tol * scale * scale) {
        return Err(Error::FormNotPreserved);
    }
    let f = discriminant(a);
    let band = tol * (1.0 + a.trace().norm()).powi(3) * scale.powi(3);
    if f > band {
        return Ok(IsometryClass::Loxodromic);
    }
    if f < -band {
        return Ok(IsometryClass::Elliptic);
    }
    let off_circle = eigenvalues(a).iter().any(|l| (l.norm() - 1.0).abs() > tol.cbrt() * scale.powf(2.0 / 3.0));
    Ok(if off_circle {
        IsometryClass::Loxodromic
    } else if is_diagonalizable(a, tol) {
        IsometryClass::Elliptic
    } else {
        IsometryClass::Parabolic
    })
}

/// A matrix with exact or floating entries.
#[derive(Clone, Debug)]
pub enum Matrix21 {
    Exact(QMat),
    Float(FMat),
}

impl Matrix21 {
    pub fn to_float(&self) -> FMat {
        match self {
            Matrix21::Exact(m) => m.to_complex(),
            Matrix21::Float(m) => m.clone(),
        }
    }

    pub fn is_exact(&self) -> bool {
        matches!(self, Matrix21::Exact(_))
    }

    pub fn preserves_form(&self, tol: f64) -> bool {
        match self {
            Matrix21::Exact(m) => preserves_form_exact(m),
            Matrix21::Float(m) => preserves_form(m, tol),
        }
    }

    pub fn classify(&self, tol: f64) -> Result<IsometryClass> {
        match self {
            Matrix21::Exact(m) => classify_isometry_exact(m),
            Matrix21::Float(m) => classify_isometry(m, tol),
        }
    }

    /// Parse a 3×3 array of "a+bi" strings exactly.
    pub fn parse(rows: &[Vec<String>]) -> Result<QMat> {
        if rows.len() != 3 || rows.iter().any(|r| r.len() != 3) {
            return Err(Error::InvalidInput("expected a 3x3 matrix".into()));
        }
        let mut out = QMat::zero();
        for (i, row) in rows.iter().enumerate() {
            for (j, s) in row.iter().enumerate() {
                out.0[i][j] = s.parse()?;
            }
        }
        Ok(out)
    }
}

/// A · det(A)^(−1/3) with the principal cube root.
pub fn su_normalize(a: &FMat) -> Result<FMat> {
    let d = a.det();
    if d.norm() <= f64::EPSILON * a.max_abs().powi(3) {
        return Err(Error::Singular);
    }
    if d == c(1.0, 0.0) {
        return Ok(a.clone());
    }
    Ok(a.scale(&d.powf(-1.0 / 3.0)))
}

/// Weights α_j = arg λ_j / 2π in [0, 1), ascending.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FloatWeights {
    pub alphas: [f64; 3],
    pub sum_is_integer: bool,
    pub has_repeated_weight: bool,
}

pub fn weights_from_semisimple(a: &FMat, tol: f64) -> Result<FloatWeights> {
    if classify_isometry(a, tol)? == IsometryClass::Loxodromic {
        return Err(Error::Loxodromic);
    }
    let weight_tol = tol.cbrt();
    let mut alphas = eigenvalues(a).map(|l| {
        let t = (l.arg() / (2.0 * PI)).rem_euclid(1.0);
        if t.abs() < weight_tol || 1.0 - t < weight_tol {
            0.0
        } else {
            t
        }
    });
    alphas.sort_by(f64::total_cmp);
    let sum: f64 = alphas.iter().sum();
    Ok(FloatWeights {
        alphas,
        sum_is_integer: (sum - sum.round()).abs() < weight_tol,
        has_repeated_weight: (alphas[0] - alphas[1]).abs() < weight_tol
            || (alphas[1] - alphas[2]).abs() < weight_tol,
    })
}

/// exp(aN) = I + aN + a²N²/2 with a = 2πi·r, for N³ = 0.
pub fn unipotent_exponential(n: &QMat, r: Complex64) -> Result<FMat> {
    if !n.pow(3).is_zero() {
        return Err(Error::NotNilpotent);
    }
    let n2 = (n * n).to_complex();
    Ok(nilpotent_series(&n.to_complex(), &n2, r))
}

/// Floating variant; nilpotency is checked as ‖N³‖ ≤ tol·(1 + ‖N‖)³.
pub fn unipotent_exponential_float(n: &FMat, r: Complex64, tol: f64) -> Result<FMat> {
    if n.pow(3).max_abs() > tol * (1.0 + n.max_abs()).powi(3) {
        return Err(Error::NotNilpotent);
    }
    Ok(nilpotent_series(n, &(n * n), r))
}

fn nilpotent_series(n: &FMat, n2: &FMat, r: Complex64) -> FMat {
    let a = c(0.0, 2.0 * PI) * r;
    let lin = n.scale(&a);
    let quad = n2.scale(&(a * a / 2.0));
    &(&FMat::identity() + &lin) + &quad
}

/// Standard type-(3) nilpotent in u(2,1).
///
/// In the null basis u = e₁ + e₃, e₂, w = (e₁ − e₃)/2 (⟨u, w⟩ = 1) it is
/// u ↦ 0, e₂ ↦ u, w ↦ −e₂.
pub fn regular_nilpotent_u21() -> QMat {
    let h = |a: i64, b: i64| GaussianRational::from_fracs(a, b, 0, 1);
    let basis = Mat3([
        [h(1, 1), h(0, 1), h(1, 2)],
        [h(0, 1), h(1, 1), h(0, 1)],
        [h(1, 1), h(0, 1), h(-1, 2)],
    ]);
    let x = QMat::from_ints([[0, 1, 0], [0, 0, -1], [0, 0, 0]]);
    let inv = basis.inverse().expect("basis is invertible");
    &(&basis * &x) * &inv
}

/// i·vv*J with v = (1, 0, 1): a type-(2,1) nilpotent in u(2,1).
pub fn null_rank_one_nilpotent() -> QMat {
    let v = [1, 0, 1].map(GaussianRational::from);
    let vv = QMat::from_fn(|i, j| &v[i] * &v[j].conj());
    (&vv * &QMat::form_j()).scale(&GaussianRational::i())
}

fn small_dyadic<R: Rng>(rng: &mut R) -> GaussianRational {
    GaussianRational::from_fracs(rng.gen_range(-4..=4), 4, rng.gen_range(-4..=4), 4)
}

/// Exact element of U(2,1) from the Cayley transform (I − K)(I + K)⁻¹,
/// K = J·S with S skew-Hermitian and small dyadic entries.
pub fn random_u21_exact<R: Rng>(rng: &mut R) -> QMat {
    loop {
        let mut s = QMat::zero();
        for i in 0..3 {
            s.0[i][i] = GaussianRational::from_fracs(0, 1, rng.gen_range(-4..=4), 4);
            for j in i + 1..3 {
                let z = small_dyadic(rng);
                s.0[j][i] = -z.conj();
                s.0[i][j] = z;
            }
        }
        let k = &QMat::form_j() * &s;
        let id = QMat::identity();
        if let Some(inv) = (&id + &k).inverse() {
            return &(&id - &k) * &inv;
        }
    }
}

/// Entry bound for the Cayley factor of [`random_u21_float`].
pub const FLOAT_CAYLEY_BOUND: f64 = 8.0;

/// Floating element of U(2,1): diagonal phases, a boost and an exact Cayley factor.
///
/// The Cayley factor is resampled while its entries exceed [`FLOAT_CAYLEY_BOUND`],
/// which cuts the heavy tail coming from nearly singular I + K and keeps conjugates
/// inside the range where binary64 classification at 1e-9 is meaningful.
pub fn random_u21_float<R: Rng>(rng: &mut R) -> FMat {
    let phases = Mat3::diag(std::array::from_fn(|_| Complex64::from_polar(1.0, rng.gen_range(0.0..2.0 * PI))));
    let b = boost(rng.gen_range(-1.0..1.0));
    let k = loop {
        let k = random_u21_exact(rng).to_complex();
        if k.max_abs() <= FLOAT_CAYLEY_BOUND {
            break k;
        }
    };
    &(&phases * &b) * &k
}

/// A random point of CH² with |Z₁|, |Z₂| < 1 on the slice Z₃ = 1, at bounded distance from e₃.
pub fn random_point<R: Rng>(rng: &mut R, radius: f64) -> CVec3<Complex64> {
    loop {
        let z: CVec3<Complex64> = [
            c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)),
            c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)),
            c(1.0, 0.0),
        ];
        if z[0].norm_sqr() + z[1].norm_sqr() < radius * radius {
            return z;
        }
    }
}
