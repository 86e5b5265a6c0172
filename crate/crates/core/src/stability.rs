//! Parabolic degree bookkeeping and the mixed-case stability test.
//!
//! With κ = 2g − 2 + n and per-puncture (ω_p, β_p, γ_p):
//!
//! ```text
//! deg_par E  = (d1 − d2) + Σ ω_p
//! deg_par W1 = (−κ + d1) + Σ β_p
//! deg_par W2 = (−κ + d1) + Σ (β_p + γ_p)
//! ```
//!
//! Stability is μ(W1) < μ(E) and μ(W2) < μ(E), i.e. 3 deg_par W1 < deg_par E and
//! 3 deg_par W2 < 2 deg_par E, or in expanded form
//! 2d1 + d2 < 3κ + Σ(ω_p − 3β_p) and d1 + 2d2 < 3κ + Σ(2ω_p − 3(β_p + γ_p)).

use std::cmp::Ordering;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::exactnum::parse_rational;

fn rat(v: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(v))
}

/// Genus and puncture count of the base curve.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SurfaceData {
    pub genus: u32,
    pub n: u32,
}

impl SurfaceData {
    pub fn new(genus: u32, n: u32) -> Result<Self> {
        let s = Self { genus, n };
        log_canonical_degree(&s)?;
        Ok(s)
    }
}

/// κ = deg K_log = 2g − 2 + n.
pub fn log_canonical_degree(s: &SurfaceData) -> Result<i64> {
    let kappa = 2 * i64::from(s.genus) - 2 + i64::from(s.n);
    if kappa <= 0 {
        return Err(Error::NotHyperbolic(kappa));
    }
    Ok(kappa)
}

/// Weights 0 ≤ α1 ≤ α2 ≤ α3 < 1 at one puncture.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WeightTriple([BigRational; 3]);

impl WeightTriple {
    pub fn new(alphas: [BigRational; 3]) -> std::result::Result<Self, String> {
        let zero = BigRational::zero();
        let one = BigRational::one();
        if alphas.iter().any(|a| *a < zero || *a >= one) {
            return Err("weights must lie in [0, 1)".into());
        }
        if !(alphas[0] <= alphas[1] && alphas[1] <= alphas[2]) {
            return Err("weights must be nondecreasing".into());
        }
        Ok(Self(alphas))
    }

    pub fn zero() -> Self {
        Self(std::array::from_fn(|_| BigRational::zero()))
    }

    pub fn alphas(&self) -> &[BigRational; 3] {
        &self.0
    }

    pub fn sum(&self) -> BigRational {
        self.0.iter().sum()
    }

    pub fn sum_is_integer(&self) -> bool {
        self.sum().is_integer()
    }

    pub fn has_repeated_weight(&self) -> bool {
        self.0[0] == self.0[1] || self.0[1] == self.0[2]
    }

    /// Both admissibility conditions for a PU(2,1) peripheral class.
    pub fn is_admissible(&self) -> bool {
        self.sum_is_integer() && self.has_repeated_weight()
    }

    pub fn contains(&self, w: &BigRational) -> bool {
        self.0.contains(w)
    }
}

/// Weights at one puncture plus the induced weights of W1 (β) and of O (γ).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PunctureWeights {
    pub alphas: WeightTriple,
    pub beta: BigRational,
    pub gamma: BigRational,
}

impl PunctureWeights {
    pub fn new(alphas: WeightTriple, beta: BigRational, gamma: BigRational) -> std::result::Result<Self, String> {
        if !alphas.contains(&beta) {
            return Err(format!("beta = {beta} is not one of the weights"));
        }
        if !alphas.contains(&gamma) {
            return Err(format!("gamma = {gamma} is not one of the weights"));
        }
        Ok(Self { alphas, beta, gamma })
    }

    pub fn zero() -> Self {
        Self {
            alphas: WeightTriple::zero(),
            beta: BigRational::zero(),
            gamma: BigRational::zero(),
        }
    }

    pub fn omega(&self) -> BigRational {
        self.alphas.sum()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MixedDegreeData {
    pub d1: i64,
    pub d2: i64,
    /// One entry per puncture.
    pub weights: Vec<PunctureWeights>,
}

impl MixedDegreeData {
    /// Weight-zero (unipotent) data on n punctures.
    pub fn unipotent(d1: i64, d2: i64, n: usize) -> Self {
        Self {
            d1,
            d2,
            weights: vec![PunctureWeights::zero(); n],
        }
    }

    fn sum_of(&self, f: impl Fn(&PunctureWeights) -> BigRational) -> BigRational {
        self.weights.iter().map(f).sum()
    }
}

pub fn par_deg_e(d: &MixedDegreeData) -> BigRational {
    rat(d.d1 - d.d2) + d.sum_of(PunctureWeights::omega)
}

pub fn par_deg_w1(d: &MixedDegreeData, s: &SurfaceData) -> Result<BigRational> {
    let kappa = log_canonical_degree(s)?;
    Ok(rat(d.d1 - kappa) + d.sum_of(|w| w.beta.clone()))
}

pub fn par_deg_w2(d: &MixedDegreeData, s: &SurfaceData) -> Result<BigRational> {
    let kappa = log_canonical_degree(s)?;
    Ok(rat(d.d1 - kappa) + d.sum_of(|w| &w.beta + &w.gamma))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    Stable,
    StrictlySemistable,
    Unstable,
}

impl Verdict {
    /// Combine per-inequality comparisons of lhs against rhs.
    pub fn from_orderings(orderings: &[Ordering]) -> Self {
        if orderings.contains(&Ordering::Greater) {
            Verdict::Unstable
        } else if orderings.contains(&Ordering::Equal) {
            Verdict::StrictlySemistable
        } else {
            Verdict::Stable
        }
    }

    pub fn as_str(&self) -> &'static str {
        match self {
            Verdict::Stable => "stable",
            Verdict::StrictlySemistable => "strictly-semistable",
            Verdict::Unstable => "unstable",
        }
    }
}

fn ser_rat<S: Serializer>(r: &BigRational, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&r.to_string())
}

/// `lhs < rhs` with both sides kept exactly.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Inequality {
    pub id: &'static str,
    #[serde(serialize_with = "ser_rat")]
    pub lhs: BigRational,
    #[serde(serialize_with = "ser_rat")]
    pub rhs: BigRational,
    pub holds: bool,
}

impl Inequality {
    fn new(id: &'static str, lhs: BigRational, rhs: BigRational) -> Self {
        let holds = lhs < rhs;
        Self { id, lhs, rhs, holds }
    }

    pub fn ordering(&self) -> Ordering {
        self.lhs.cmp(&self.rhs)
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct StabilityCertificate {
    pub kappa: i64,
    #[serde(serialize_with = "ser_rat")]
    pub par_deg_e: BigRational,
    #[serde(serialize_with = "ser_rat")]
    pub par_deg_w1: BigRational,
    #[serde(serialize_with = "ser_rat")]
    pub par_deg_w2: BigRational,
    /// μ(W1) < μ(E), μ(W2) < μ(E)
    pub slope_form: [Inequality; 2],
    /// 2d1 + d2 < ..., d1 + 2d2 < ...
    pub expanded_form: [Inequality; 2],
    pub verdict: Verdict,
    pub failing: Option<&'static str>,
}

pub fn check_mixed_stability(d: &MixedDegreeData, s: &SurfaceData) -> Result<StabilityCertificate> {
    let kappa = log_canonical_degree(s)?;
    if !d.weights.is_empty() && d.weights.len() != s.n as usize {
        return Err(Error::LengthMismatch {
            expected: s.n as usize,
            got: d.weights.len(),
        });
    }
    let e = par_deg_e(d);
    let w1 = par_deg_w1(d, s)?;
    let w2 = par_deg_w2(d, s)?;

    let slope_form = [
        Inequality::new("slope-W1", w1.clone(), &e / rat(3)),
        Inequality::new("slope-W2", &w2 / rat(2), &e / rat(3)),
    ];
    let three_kappa = rat(3 * kappa);
    let expanded_form = [
        Inequality::new(
            "expanded-1",
            rat(2 * d.d1 + d.d2),
            &three_kappa + d.sum_of(|w| w.omega() - rat(3) * &w.beta),
        ),
        Inequality::new(
            "expanded-2",
            rat(d.d1 + 2 * d.d2),
            &three_kappa + d.sum_of(|w| rat(2) * w.omega() - rat(3) * (&w.beta + &w.gamma)),
        ),
    ];
    for (a, b) in slope_form.iter().zip(&expanded_form) {
        if a.ordering() != b.ordering() {
            return Err(Error::FormDisagreement(a.id));
        }
    }
    let orderings: Vec<Ordering> = slope_form.iter().map(Inequality::ordering).collect();
    let verdict = Verdict::from_orderings(&orderings);
    let failing = slope_form.iter().find(|i| !i.holds).map(|i| i.id);
    Ok(StabilityCertificate {
        kappa,
        par_deg_e: e,
        par_deg_w1: w1,
        par_deg_w2: w2,
        slope_form,
        expanded_form,
        verdict,
        failing,
    })
}

/// Weight-zero inequalities 2d1 + d2 < 3κ and d1 + 2d2 < 3κ.
pub fn unipotent_inequalities(d1: i64, d2: i64, kappa: i64) -> (bool, bool) {
    (2 * d1 + d2 < 3 * kappa, d1 + 2 * d2 < 3 * kappa)
}

/// (deg D1, deg D2) = (n − 4, n − 3) for the explicit family.
pub fn nnoid_degrees(n: usize) -> Result<(i64, i64)> {
    if n < 4 {
        return Err(Error::TooFewPunctures(n));
    }
    let n = n as i64;
    Ok((n - 4, n - 3))
}

/// Degrees of the invariant subbundles F1 = ker γ and F2 = ker γ ⊕ L.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct InvariantSubbundleDegrees {
    pub deg_f1: i64,
    pub deg_f2: i64,
    /// deg F1 = 0 = deg E: strictly semistable in general.
    pub semistable_boundary: bool,
}

impl InvariantSubbundleDegrees {
    /// Slope comparison against μ(E) = 0 (ranks 1 and 2).
    pub fn verdict(&self) -> Verdict {
        Verdict::from_orderings(&[self.deg_f1.cmp(&0), self.deg_f2.cmp(&0)])
    }
}

pub fn prop94_degrees(n: usize) -> Result<InvariantSubbundleDegrees> {
    if n < 4 {
        return Err(Error::TooFewPunctures(n));
    }
    let n = n as i64;
    Ok(InvariantSubbundleDegrees {
        deg_f1: 4 - n,
        deg_f2: 3 - n,
        semistable_boundary: n == 4,
    })
}

/// Weight-zero stability of the explicit family on the n-punctured sphere.
///
/// The slope test on (W1, W2) and the degrees of the invariant subbundles
/// (F1, F2) are both reported; `verdict` is the more conservative of the two.
/// They differ only at n = 4, where deg F1 = 0 forces strict semistability.
#[derive(Clone, Debug, Serialize)]
pub struct FamilyStability {
    pub n: usize,
    pub d1: i64,
    pub d2: i64,
    pub kappa: i64,
    /// 3κ − (2d1 + d2) and 3κ − (d1 + 2d2)
    pub margins: [i64; 2],
    pub certificate: StabilityCertificate,
    pub subbundles: InvariantSubbundleDegrees,
    pub slope_verdict: Verdict,
    pub subbundle_verdict: Verdict,
    pub verdict: Verdict,
}

pub fn family_stability(n: usize) -> Result<FamilyStability> {
    let (d1, d2) = nnoid_degrees(n)?;
    let surface = SurfaceData::new(0, n as u32)?;
    let kappa = log_canonical_degree(&surface)?;
    let certificate = check_mixed_stability(&MixedDegreeData::unipotent(d1, d2, n), &surface)?;
    let subbundles = prop94_degrees(n)?;
    let slope_verdict = certificate.verdict;
    let subbundle_verdict = subbundles.verdict();
    Ok(FamilyStability {
        n,
        d1,
        d2,
        kappa,
        margins: [3 * kappa - (2 * d1 + d2), 3 * kappa - (d1 + 2 * d2)],
        certificate,
        subbundles,
        slope_verdict,
        subbundle_verdict,
        verdict: slope_verdict.max(subbundle_verdict),
    })
}

/// Verdict is unchanged when the degrees of W1, W2, E shift by m, 2m, 3m.
pub fn twist_invariance_check(d: &MixedDegreeData, s: &SurfaceData, m: i64) -> Result<bool> {
    let base = check_mixed_stability(d, s)?;
    let e = &base.par_deg_e + rat(3 * m);
    let w1 = &base.par_deg_w1 + rat(m);
    let w2 = &base.par_deg_w2 + rat(2 * m);
    let twisted = Verdict::from_orderings(&[
        (rat(3) * w1).cmp(&e),
        (rat(3) * w2).cmp(&(rat(2) * e)),
    ]);
    Ok(twisted == base.verdict)
}

/// Stable (d1, d2) in [0, dmax]², lexicographic.
pub fn stability_region(
    s: &SurfaceData,
    weights: &[PunctureWeights],
    dmax: i64,
) -> Result<Vec<(i64, i64)>> {
    let mut out = Vec::new();
    for d1 in 0..=dmax {
        for d2 in 0..=dmax {
            let d = MixedDegreeData {
                d1,
                d2,
                weights: weights.to_vec(),
            };
            if check_mixed_stability(&d, s)?.verdict == Verdict::Stable {
                out.push((d1, d2));
            }
        }
    }
    Ok(out)
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct WeightSpec {
    pub alpha: [String; 3],
    pub beta: String,
    pub gamma: String,
}

/// `{"genus":0,"n":5,"d1":1,"d2":2,"weights":[...]}`; an empty weight list means weight zero.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct StabilitySpec {
    pub genus: u32,
    pub n: u32,
    pub d1: i64,
    pub d2: i64,
    #[serde(default)]
    pub weights: Vec<WeightSpec>,
}

impl StabilitySpec {
    pub fn surface(&self) -> Result<SurfaceData> {
        SurfaceData::new(self.genus, self.n)
    }

    pub fn weights(&self) -> Result<Vec<PunctureWeights>> {
        self.weights
            .iter()
            .enumerate()
            .map(|(index, w)| {
                let invalid = |reason: String| Error::InvalidWeights { index, reason };
                let alphas = [
                    parse_rational(&w.alpha[0])?,
                    parse_rational(&w.alpha[1])?,
                    parse_rational(&w.alpha[2])?,
                ];
                let triple = WeightTriple::new(alphas).map_err(invalid)?;
                PunctureWeights::new(triple, parse_rational(&w.beta)?, parse_rational(&w.gamma)?)
                    .map_err(invalid)
            })
            .collect()
    }

    pub fn degree_data(&self) -> Result<MixedDegreeData> {
        if self.d1 < 0 || self.d2 < 0 {
            return Err(Error::InvalidInput("divisor degrees must be nonnegative".into()));
        }
        Ok(MixedDegreeData {
            d1: self.d1,
            d2: self.d2,
            weights: self.weights()?,
        })
    }
}

/// Admissibility flags for a weight triple, reported but not enforced.
pub fn admissibility(w: &WeightTriple) -> (bool, bool) {
    (w.sum_is_integer(), w.has_repeated_weight())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(s: &str) -> BigRational {
        parse_rational(s).unwrap()
    }

    fn surf(g: u32, n: u32) -> SurfaceData {
        SurfaceData { genus: g, n }
    }

    #[test]
    fn log_canonical_examples() {
        assert_eq!(log_canonical_degree(&surf(0, 5)).unwrap(), 3);
        assert_eq!(log_canonical_degree(&surf(1, 1)).unwrap(), 1);
        assert_eq!(log_canonical_degree(&surf(0, 2)), Err(Error::NotHyperbolic(0)));
    }

    #[test]
    fn parabolic_degree_examples() {
        assert_eq!(par_deg_e(&MixedDegreeData::unipotent(1, 2, 5)), q("-1"));
        assert_eq!(par_deg_e(&MixedDegreeData::unipotent(3, 3, 5)), q("0"));
        let w = PunctureWeights::new(
            WeightTriple::new([q("0"), q("1/2"), q("1/2")]).unwrap(),
            q("1/2"),
            q("0"),
        )
        .unwrap();
        assert_eq!(w.omega(), q("1"));
        let d = MixedDegreeData {
            d1: 0,
            d2: 0,
            weights: vec![w.clone(), w.clone(), w.clone()],
        };
        assert_eq!(par_deg_e(&d), q("3"));

        assert_eq!(par_deg_w1(&MixedDegreeData::unipotent(1, 2, 5), &surf(0, 5)).unwrap(), q("-2"));
        assert_eq!(par_deg_w1(&MixedDegreeData::unipotent(3, 0, 5), &surf(0, 5)).unwrap(), q("0"));
        // κ = 1 on (g, n) = (0, 3); β = 1/2 at two punctures.
        let half = PunctureWeights::new(
            WeightTriple::new([q("0"), q("1/2"), q("1/2")]).unwrap(),
            q("1/2"),
            q("0"),
        )
        .unwrap();
        let d = MixedDegreeData {
            d1: 0,
            d2: 0,
            weights: vec![half.clone(), half, PunctureWeights::zero()],
        };
        assert_eq!(par_deg_w1(&d, &surf(0, 3)).unwrap(), q("0"));
    }

    #[test]
    fn par_deg_w2_examples() {
        assert_eq!(par_deg_w2(&MixedDegreeData::unipotent(1, 2, 5), &surf(0, 5)).unwrap(), q("-2"));
        assert_eq!(par_deg_w2(&MixedDegreeData::unipotent(3, 0, 5), &surf(0, 5)).unwrap(), q("0"));
        // β + γ = 1/2 + 1/4 at one puncture, κ = 1, d1 = 0.
        let w = PunctureWeights::new(
            WeightTriple::new([q("1/4"), q("1/4"), q("1/2")]).unwrap(),
            q("1/2"),
            q("1/4"),
        )
        .unwrap();
        let d = MixedDegreeData {
            d1: 0,
            d2: 0,
            weights: vec![w, PunctureWeights::zero(), PunctureWeights::zero()],
        };
        assert_eq!(par_deg_w2(&d, &surf(0, 3)).unwrap(), q("-1/4"));
    }

    #[test]
    fn mixed_stability_examples() {
        let c = check_mixed_stability(&MixedDegreeData::unipotent(1, 2, 5), &surf(0, 5)).unwrap();
        assert_eq!(c.verdict, Verdict::Stable);
        assert_eq!(c.expanded_form[0].lhs, q("4"));
        assert_eq!(c.expanded_form[0].rhs, q("9"));
        assert_eq!(c.expanded_form[1].lhs, q("5"));

        let c = check_mixed_stability(&MixedDegreeData::unipotent(1, 1, 1), &surf(1, 1)).unwrap();
        assert_eq!(c.verdict, Verdict::StrictlySemistable);
        assert_eq!(c.failing, Some("slope-W1"));

        let c = check_mixed_stability(&MixedDegreeData::unipotent(5, 5, 5), &surf(0, 5)).unwrap();
        assert_eq!(c.verdict, Verdict::Unstable);
        assert_eq!(c.expanded_form[0].lhs, q("15"));
    }

    #[test]
    fn weight_count_must_match() {
        let d = MixedDegreeData::unipotent(1, 2, 3);
        assert!(check_mixed_stability(&d, &surf(0, 5)).is_err());
    }

    #[test]
    fn unipotent_examples() {
        for n in 4..40 {
            assert_eq!(unipotent_inequalities(n - 4, n - 3, n - 2), (true, true));
        }
        assert_eq!(unipotent_inequalities(0, 0, 1), (true, true));
        assert_eq!(unipotent_inequalities(2, 2, 2), (false, false));
    }

    #[test]
    fn family_degrees() {
        assert_eq!(nnoid_degrees(5).unwrap(), (1, 2));
        assert_eq!(nnoid_degrees(4).unwrap(), (0, 1));
        assert_eq!(nnoid_degrees(12).unwrap(), (8, 9));
        assert!(nnoid_degrees(3).is_err());

        let five = prop94_degrees(5).unwrap();
        assert_eq!((five.deg_f1, five.deg_f2, five.semistable_boundary), (-1, -2, false));
        let four = prop94_degrees(4).unwrap();
        assert_eq!((four.deg_f1, four.deg_f2, four.semistable_boundary), (0, -1, true));
        assert_eq!(four.verdict(), Verdict::StrictlySemistable);
        let ten = prop94_degrees(10).unwrap();
        assert_eq!((ten.deg_f1, ten.deg_f2, ten.semistable_boundary), (-6, -7, false));
        assert_eq!(ten.verdict(), Verdict::Stable);
    }

    #[test]
    fn family_verdicts() {
        for n in 5..=30 {
            let f = family_stability(n).unwrap();
            assert_eq!(f.margins, [5, 4]);
            assert_eq!(f.verdict, Verdict::Stable);
        }
        let four = family_stability(4).unwrap();
        assert_eq!(four.slope_verdict, Verdict::Stable);
        assert_eq!(four.subbundle_verdict, Verdict::StrictlySemistable);
        assert_eq!(four.verdict, Verdict::StrictlySemistable);
        assert!(family_stability(3).is_err());
    }

    #[test]
    fn twist_examples() {
        let stable = MixedDegreeData::unipotent(1, 2, 5);
        assert!(twist_invariance_check(&stable, &surf(0, 5), 0).unwrap());
        assert!(twist_invariance_check(&stable, &surf(0, 5), 5).unwrap());
        assert!(twist_invariance_check(&stable, &surf(0, 5), -5).unwrap());
        let boundary = MixedDegreeData::unipotent(1, 1, 1);
        for m in -7..=7 {
            assert!(twist_invariance_check(&boundary, &surf(1, 1), m).unwrap());
        }
    }

    #[test]
    fn region_matches_brute_force() {
        let s = surf(0, 5);
        let region = stability_region(&s, &[], 3).unwrap();
        let mut expected = Vec::new();
        for d1 in 0..=3 {
            for d2 in 0..=3 {
                if 2 * d1 + d2 < 9 && d1 + 2 * d2 < 9 {
                    expected.push((d1, d2));
                }
            }
        }
        assert_eq!(region, expected);
        assert_eq!(stability_region(&s, &[], 0).unwrap(), vec![(0, 0)]);
    }

    #[test]
    fn weight_validation() {
        assert!(WeightTriple::new([q("1/2"), q("1/3"), q("0")]).is_err());
        assert!(WeightTriple::new([q("0"), q("0"), q("1")]).is_err());
        let t = WeightTriple::new([q("1/3"), q("1/3"), q("1/3")]).unwrap();
        assert!(t.is_admissible());
        assert!(PunctureWeights::new(t.clone(), q("1/2"), q("1/3")).is_err());
        let t = WeightTriple::new([q("0"), q("1/4"), q("1/2")]).unwrap();
        assert_eq!(admissibility(&t), (false, false));
    }

    #[test]
    fn spec_json_parsing() {
        let spec: StabilitySpec = serde_json::from_str(
            r#"{"genus":0,"n":5,"d1":1,"d2":2,"weights":[]}"#,
        )
        .unwrap();
        let c = check_mixed_stability(&spec.degree_data().unwrap(), &spec.surface().unwrap()).unwrap();
        assert_eq!(c.verdict, Verdict::Stable);
        let json = serde_json::to_value(&c).unwrap();
        assert_eq!(json["verdict"], "stable");
        assert_eq!(json["expanded_form"][1]["rhs"], "9");
        assert_eq!(json["slope_form"][0]["rhs"], "-1/3");
    }
}
