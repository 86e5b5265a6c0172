//! The explicit off-diagonal logarithmic Higgs field on the n-punctured sphere,
//! its exact identities, puncture residues, and the residue classification.
//!
//! The bundle is E = V ⊕ L with V = O(1) ⊕ O and L = O(-1), so deg E = 0. In
//! the affine chart the field is
//!
//! ```text
//!        [ 0    0    -q g2 ω ]
//!    Φ = [ 0    0     q g1 ω ]
//!        [ g1 ω g2 ω   0     ]
//! ```

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exactnum::linalg::{column_space, nullspace, rank};
use crate::exactnum::{
    resultant, BinaryForm, CVec3, GaussianRational, Mat3, ProjPoint, QuadraticDifferential, RationalFunction,
    RationalOneForm, UniPoly,
};
use crate::sphere::{make_log_form, mobius_normalize, LogOneForm, Mobius, PunctureSet};

pub type QMat3 = Mat3<GaussianRational>;

/// Validated input data (ω, g1, g2, q) on n finite punctures.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NnoidData {
    omega: LogOneForm,
    g1: BinaryForm,
    g2: BinaryForm,
    q: BinaryForm,
}

impl NnoidData {
    pub fn new(omega: LogOneForm, g1: BinaryForm, g2: BinaryForm, q: BinaryForm) -> Result<Self> {
        let n = omega.punctures().len();
        if n < 4 {
            return Err(Error::TooFewPunctures(n));
        }
        for (name, form, expected) in [("g1", &g1, n - 4), ("g2", &g2, n - 3), ("q", &q, 3)] {
            if form.degree() != expected {
                return Err(Error::DegreeMismatch {
                    name,
                    expected,
                    got: form.degree(),
                });
            }
        }
        if g1.is_zero() || g2.is_zero() || q.is_zero() {
            return Err(Error::ZeroForm);
        }
        if resultant(&g1, &g2)?.is_zero() {
            return Err(Error::CommonZero);
        }
        for (i, p) in omega.punctures().iter().enumerate() {
            if q.eval(&ProjPoint::Finite(p.clone())).is_zero() {
                return Err(Error::QVanishesAtPuncture(i));
            }
        }
        Ok(Self { omega, g1, g2, q })
    }

    pub fn n(&self) -> usize {
        self.omega.punctures().len()
    }

    pub fn omega(&self) -> &LogOneForm {
        &self.omega
    }

    pub fn punctures(&self) -> &PunctureSet {
        self.omega.punctures()
    }

    pub fn g1(&self) -> &BinaryForm {
        &self.g1
    }

    pub fn g2(&self) -> &BinaryForm {
        &self.g2
    }

    pub fn q(&self) -> &BinaryForm {
        &self.q
    }

    /// B = (-q g2, q g1)ᵀ
    pub fn beta_sections(&self) -> [BinaryForm; 2] {
        [self.q.mul(&self.g2).scale(&-GaussianRational::one()), self.q.mul(&self.g1)]
    }

    /// C = (g1, g2)
    pub fn gamma_sections(&self) -> [BinaryForm; 2] {
        [self.g1.clone(), self.g2.clone()]
    }

    /// N_p = [[0, B(p)], [C(p), 0]], so that Res_p Φ = r_p N_p.
    pub fn nilpotent_at(&self, index: usize) -> QMat3 {
        let p = ProjPoint::Finite(self.punctures().points()[index].clone());
        let [b1, b2] = self.beta_sections().map(|f| f.eval(&p));
        let [c1, c2] = self.gamma_sections().map(|f| f.eval(&p));
        let z = GaussianRational::zero;
        Mat3([[z(), z(), b1], [z(), z(), b2], [c1, c2, z()]])
    }

    /// Closed-form residue r_i N_{p_i}.
    pub fn closed_form_residue(&self, index: usize) -> QMat3 {
        self.nilpotent_at(index).scale(&self.omega.residues()[index])
    }
}

/// Serialized form: `{"n":5,"punctures":[...],"residues":[...],"g1":{...},"g2":{...},"q":{...}}`.
///
/// Punctures may include `"inf"`; [`NnoidSpec::normalize`] moves the chart.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct NnoidSpec {
    pub n: usize,
    pub punctures: Vec<ProjPoint>,
    pub residues: Vec<GaussianRational>,
    pub g1: BinaryForm,
    pub g2: BinaryForm,
    pub q: BinaryForm,
}

impl NnoidSpec {
    /// Validate, moving any puncture at ∞ into the affine chart. Residues are
    /// chart-independent; the forms are pushed forward by the same transform.
    pub fn normalize(&self) -> Result<(NnoidData, Mobius)> {
        if self.punctures.len() != self.n {
            return Err(Error::LengthMismatch {
                expected: self.n,
                got: self.punctures.len(),
            });
        }
        let (m, finite) = mobius_normalize(&self.punctures);
        let punctures = PunctureSet::from_affine(finite)?;
        let omega = make_log_form(punctures, self.residues.clone())?;
        let data = NnoidData::new(
            omega,
            m.push_forward(&self.g1),
            m.push_forward(&self.g2),
            m.push_forward(&self.q),
        )?;
        Ok((data, m))
    }

    pub fn from_data(data: &NnoidData) -> Self {
        Self {
            n: data.n(),
            punctures: data.punctures().iter().cloned().map(ProjPoint::Finite).collect(),
            residues: data.omega().residues().to_vec(),
            g1: data.g1.clone(),
            g2: data.g2.clone(),
            q: data.q.clone(),
        }
    }
}

/// Degree bookkeeping for the splitting E = V ⊕ L.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct BundleSplitting {
    pub v_degrees: [i64; 2],
    pub l_degree: i64,
}

impl BundleSplitting {
    pub const NNOID: Self = Self {
        v_degrees: [1, 0],
        l_degree: -1,
    };

    pub fn degree_e(&self) -> i64 {
        self.v_degrees[0] + self.v_degrees[1] + self.l_degree
    }
}

/// A 3×3 matrix of rational 1-forms, off-diagonal for the 2 + 1 block split.
#[derive(Clone, Debug)]
pub struct HiggsField {
    entries: [[RationalOneForm; 3]; 3],
    splitting: BundleSplitting,
}

impl HiggsField {
    /// Φ = [[0, B ω], [C ω, 0]] for arbitrary chart polynomials B (column) and C (row).
    pub fn from_blocks(beta: [UniPoly; 2], gamma: [UniPoly; 2], omega: &LogOneForm) -> Self {
        let w = omega.to_rational();
        let zero = RationalOneForm::zero;
        let entries = [
            [zero(), zero(), w.times_poly(&beta[0])],
            [zero(), zero(), w.times_poly(&beta[1])],
            [w.times_poly(&gamma[0]), w.times_poly(&gamma[1]), zero()],
        ];
        Self {
            entries,
            splitting: BundleSplitting::NNOID,
        }
    }

    pub fn zero() -> Self {
        Self {
            entries: std::array::from_fn(|_| std::array::from_fn(|_| RationalOneForm::zero())),
            splitting: BundleSplitting::NNOID,
        }
    }

    pub fn entry(&self, i: usize, j: usize) -> &RationalOneForm {
        &self.entries[i][j]
    }

    pub fn splitting(&self) -> BundleSplitting {
        self.splitting
    }

    /// Both diagonal blocks (V→V and L→L) vanish identically.
    pub fn is_block_off_diagonal(&self) -> bool {
        let diag_blocks = [(0, 0), (0, 1), (1, 0), (1, 1), (2, 2)];
        diag_blocks.iter().all(|&(i, j)| self.entries[i][j].is_zero())
    }

    /// tr Φ as a rational 1-form.
    pub fn trace(&self) -> RationalOneForm {
        let sum = (0..3).fold(RationalFunction::zero(), |acc, i| {
            &acc + self.entries[i][i].coefficient()
        });
        RationalOneForm(sum)
    }

    /// The largest pole order of any entry at `p`.
    pub fn pole_order(&self, p: &GaussianRational) -> usize {
        self.entries
            .iter()
            .flatten()
            .map(|e| e.pole_order(p))
            .max()
            .unwrap_or(0)
    }

    /// Denominators of all entries are products of linear factors at the punctures,
    /// each appearing at most once.
    pub fn has_only_simple_poles_at(&self, punctures: &PunctureSet) -> bool {
        self.entries.iter().flatten().all(|e| {
            let den = e.coefficient().denominator();
            let remaining = punctures.iter().try_fold(den.clone(), |d, p| {
                match d.root_multiplicity(p) {
                    Some(0) => Some(d),
                    Some(1) => d.exact_div(&UniPoly::linear(p)).ok(),
                    _ => None,
                }
            });
            remaining.is_some_and(|d| d.degree() == Some(0))
        })
    }
}

pub fn build_higgs(data: &NnoidData) -> HiggsField {
    let beta = data.beta_sections().map(|f| f.dehomogenize());
    let gamma = data.gamma_sections().map(|f| f.dehomogenize());
    HiggsField::from_blocks(beta, gamma, data.omega())
}

/// tr(Φ²) = Σ_ij Φ_ij ⊗ Φ_ji as an exact quadratic differential.
///
/// Terms are summed over a running common denominator and reduced once, since
/// intermediate gcds dominate the cost otherwise.
pub fn trace_phi_squared(phi: &HiggsField) -> QuadraticDifferential {
    let mut num = UniPoly::zero();
    let mut den = UniPoly::one();
    for i in 0..3 {
        for j in 0..3 {
            let (a, b) = (phi.entry(i, j).coefficient(), phi.entry(j, i).coefficient());
            if a.is_zero() || b.is_zero() {
                continue;
            }
            let term_num = a.numerator() * b.numerator();
            let term_den = a.denominator() * b.denominator();
            if term_den == den {
                num = &num + &term_num;
            } else {
                num = &(&num * &term_den) + &(&term_num * &den);
                den = &den * &term_den;
            }
        }
    }
    QuadraticDifferential(RationalFunction::new(num, den).expect("nonzero denominator"))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ResidueMatrix {
    pub puncture: GaussianRational,
    pub matrix: QMat3,
}

/// Entrywise residues of Φ at `p`, read off the Laurent expansions.
pub fn residue_matrix(phi: &HiggsField, punctures: &PunctureSet, p: &ProjPoint) -> Result<ResidueMatrix> {
    if punctures.index_of(p).is_none() {
        return Err(Error::NotAPuncture(p.to_string()));
    }
    let a = p.affine().expect("punctures are finite");
    Ok(ResidueMatrix {
        puncture: a.clone(),
        matrix: Mat3::from_fn(|i, j| phi.entry(i, j).residue_at(a)),
    })
}

/// Residues at an arbitrary finite point, zero away from the poles.
pub fn residues_at_point(phi: &HiggsField, a: &GaussianRational) -> QMat3 {
    Mat3::from_fn(|i, j| phi.entry(i, j).residue_at(a))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Nilpotency {
    Index(u8),
    NotNilpotent,
}

/// Smallest k with M^k = 0 (k ≤ 3).
pub fn nilpotency_profile(m: &QMat3) -> Nilpotency {
    let mut power = m.clone();
    for k in 1..=3u8 {
        if power.is_zero() {
            return Nilpotency::Index(k);
        }
        power = &power * m;
    }
    Nilpotency::NotNilpotent
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum JordanType {
    /// N ≠ 0, N² = 0
    #[serde(rename = "(2,1)")]
    TwoOne,
    /// N² ≠ 0, N³ = 0
    #[serde(rename = "(3)")]
    Three,
}

pub fn jordan_type(m: &QMat3) -> Result<JordanType> {
    match nilpotency_profile(m) {
        Nilpotency::NotNilpotent => Err(Error::NotNilpotent),
        Nilpotency::Index(1) => Err(Error::ZeroMatrix),
        Nilpotency::Index(2) => Ok(JordanType::TwoOne),
        Nilpotency::Index(_) => Ok(JordanType::Three),
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum EndType {
    TypeI,
    TypeII,
}

pub fn end_type(m: &QMat3) -> Result<EndType> {
    Ok(match jordan_type(m)? {
        JordanType::TwoOne => EndType::TypeI,
        JordanType::Three => EndType::TypeII,
    })
}

/// L ⊂ V ⊂ Q(i)³ determined by a nonzero nilpotent N.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CanonicalFlag {
    pub line: CVec3<GaussianRational>,
    pub plane: [CVec3<GaussianRational>; 2],
}

fn to_vec3(v: &[GaussianRational]) -> CVec3<GaussianRational> {
    std::array::from_fn(|i| v[i].clone())
}

pub fn canonical_flag(m: &QMat3) -> Result<CanonicalFlag> {
    let (line, plane) = match jordan_type(m)? {
        JordanType::TwoOne => (column_space(&m.rows()), nullspace(&m.rows())),
        JordanType::Three => (nullspace(&m.rows()), nullspace(&(m * m).rows())),
    };
    debug_assert_eq!((line.len(), plane.len()), (1, 2));
    Ok(CanonicalFlag {
        line: to_vec3(&line[0]),
        plane: [to_vec3(&plane[0]), to_vec3(&plane[1])],
    })
}

fn span_contains(basis: &[CVec3<GaussianRational>], v: &CVec3<GaussianRational>) -> bool {
    let rows: Vec<Vec<GaussianRational>> = basis.iter().map(|b| b.to_vec()).collect();
    let mut extended = rows.clone();
    extended.push(v.to_vec());
    rank(&rows) == rank(&extended)
}

impl CanonicalFlag {
    pub fn line_in_plane(&self) -> bool {
        span_contains(&self.plane, &self.line)
    }

    /// N(V) ⊆ L and N(L) = 0.
    pub fn is_strictly_lowered_by(&self, m: &QMat3) -> bool {
        let kills_line = m.mul_vec(&self.line).iter().all(GaussianRational::is_zero);
        let lowers_plane = self
            .plane
            .iter()
            .all(|v| span_contains(std::slice::from_ref(&self.line), &m.mul_vec(v)));
        kills_line && lowers_plane
    }

    /// Dimensions of the line and plane.
    pub fn dims(&self) -> (usize, usize) {
        let r = |vs: &[CVec3<GaussianRational>]| rank(&vs.iter().map(|v| v.to_vec()).collect::<Vec<_>>());
        (r(std::slice::from_ref(&self.line)), r(&self.plane))
    }
}

/// Per-puncture classification record.
#[derive(Clone, Debug, Serialize)]
pub struct PunctureReport {
    pub puncture: GaussianRational,
    pub residue: GaussianRational,
    pub residue_matrix: Vec<Vec<GaussianRational>>,
    pub methods_agree: bool,
    pub nilpotency: Nilpotency,
    pub jordan_type: Option<JordanType>,
    pub end_type: Option<EndType>,
    pub flag_axioms_hold: bool,
}

pub fn classify_puncture(data: &NnoidData, phi: &HiggsField, index: usize) -> Result<PunctureReport> {
    let a = data.punctures().points()[index].clone();
    let entrywise = residue_matrix(phi, data.punctures(), &ProjPoint::Finite(a.clone()))?.matrix;
    let closed = data.closed_form_residue(index);
    let nilpotency = nilpotency_profile(&entrywise);
    let jordan = jordan_type(&entrywise).ok();
    let end = end_type(&entrywise).ok();
    let flag_ok = canonical_flag(&entrywise)
        .map(|f| f.line_in_plane() && f.is_strictly_lowered_by(&entrywise))
        .unwrap_or(false);
    Ok(PunctureReport {
        puncture: a,
        residue: data.omega().residues()[index].clone(),
        residue_matrix: entrywise.rows(),
        methods_agree: entrywise == closed,
        nilpotency,
        jordan_type: jordan,
        end_type: end,
        flag_axioms_hold: flag_ok,
    })
}

/// Rejection-sampled data with small dyadic values so that floating checks
/// downstream stay well conditioned.
pub fn random_nnoid<R: Rng>(n: usize, rng: &mut R) -> Result<NnoidData> {
    const MAX_REJECTIONS: usize = 1000;
    if n < 4 {
        return Err(Error::TooFewPunctures(n));
    }
    let grid: Vec<GaussianRational> = (-4i64..=4)
        .flat_map(|a| (-4i64..=4).map(move |b| (a, b)))
        .filter(|(a, b)| a * a + b * b <= 16)
        .map(|(a, b)| GaussianRational::from_fracs(a, 4, b, 4))
        .collect();
    if n > grid.len() {
        return Err(Error::InvalidInput(format!("n = {n} exceeds the sampling grid")));
    }
    let small_gaussian = |rng: &mut R, den: i64| loop {
        let (a, b) = (rng.gen_range(-2..=2), rng.gen_range(-2..=2));
        if (a, b) != (0, 0) {
            return GaussianRational::from_fracs(a, den, b, den);
        }
    };
    let random_form = |rng: &mut R, degree: usize| {
        let coeffs = (0..=degree)
            .map(|_| GaussianRational::from_fracs(rng.gen_range(-1..=1), 8, rng.gen_range(-1..=1), 8))
            .collect();
        BinaryForm::new(degree, coeffs).expect("length matches")
    };
    for _ in 0..MAX_REJECTIONS {
        let mut pool = grid.clone();
        let mut points = Vec::with_capacity(n);
        for _ in 0..n {
            points.push(pool.swap_remove(rng.gen_range(0..pool.len())));
        }
        let mut residues: Vec<GaussianRational> = (0..n - 1).map(|_| small_gaussian(rng, 16)).collect();
        let last = -residues.iter().sum::<GaussianRational>();
        residues.push(last);
        let (g1, g2, q) = (random_form(rng, n - 4), random_form(rng, n - 3), random_form(rng, 3));
        let Ok(omega) = make_log_form(PunctureSet::from_affine(points)?, residues) else {
            continue;
        };
        if let Ok(data) = NnoidData::new(omega, g1, g2, q) {
            return Ok(data);
        }
    }
    Err(Error::InvalidInput(format!(
        "no valid data after {MAX_REJECTIONS} rejections"
    )))
}
