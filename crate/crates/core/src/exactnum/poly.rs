use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use super::GaussianRational;
use crate::error::{Error, Result};

/// Dense univariate polynomial over Q(i), lowest degree first, no trailing zeros.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct UniPoly {
    coeffs: Vec<GaussianRational>,
}

impl UniPoly {
    pub fn new(mut coeffs: Vec<GaussianRational>) -> Self {
        while coeffs.last().is_some_and(GaussianRational::is_zero) {
            coeffs.pop();
        }
        Self { coeffs }
    }

    pub fn zero() -> Self {
        Self { coeffs: Vec::new() }
    }

    pub fn constant(c: GaussianRational) -> Self {
        Self::new(vec![c])
    }

    pub fn one() -> Self {
        Self::constant(GaussianRational::one())
    }

    /// z - root
    pub fn linear(root: &GaussianRational) -> Self {
        Self::new(vec![-root, GaussianRational::one()])
    }

    pub fn monomial(c: GaussianRational, power: usize) -> Self {
        let mut coeffs = vec![GaussianRational::zero(); power + 1];
        coeffs[power] = c;
        Self::new(coeffs)
    }

    pub fn coeffs(&self) -> &[GaussianRational] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn coeff(&self, k: usize) -> GaussianRational {
        self.coeffs.get(k).cloned().unwrap_or_else(GaussianRational::zero)
    }

    pub fn leading(&self) -> Option<&GaussianRational> {
        self.coeffs.last()
    }

    pub fn is_monic(&self) -> bool {
        self.leading().is_some_and(GaussianRational::is_one)
    }

    pub fn eval(&self, z: &GaussianRational) -> GaussianRational {
        let mut acc = GaussianRational::zero();
        for c in self.coeffs.iter().rev() {
            acc = &acc * z;
            acc += c;
        }
        acc
    }

    pub fn scale(&self, c: &GaussianRational) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        Self::new(self.coeffs.iter().map(|a| a * c).collect())
    }

    pub fn monic(&self) -> Self {
        match self.leading() {
            None => Self::zero(),
            Some(lc) => self.scale(&lc.inv().expect("nonzero leading coefficient")),
        }
    }

    pub fn derivative(&self) -> Self {
        Self::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, c)| c * &GaussianRational::from(k as i64))
                .collect(),
        )
    }

    /// p(z + a)
    pub fn taylor_shift(&self, a: &GaussianRational) -> Self {
        // Horner with the linear polynomial (z + a).
        let shift = Self::new(vec![a.clone(), GaussianRational::one()]);
        let mut acc = Self::zero();
        for c in self.coeffs.iter().rev() {
            acc = &(&acc * &shift) + &Self::constant(c.clone());
        }
        acc
    }

    /// First `k` coefficients of p(z + a), by repeated synthetic division by (z - a).
    pub fn taylor_coeffs(&self, a: &GaussianRational, k: usize) -> Vec<GaussianRational> {
        let mut out = Vec::with_capacity(k);
        let mut work = self.coeffs.clone();
        for _ in 0..k {
            if work.is_empty() {
                out.push(GaussianRational::zero());
                continue;
            }
            // Horner: quotient by (z - a), the remainder is the next coefficient.
            let mut quotient = vec![GaussianRational::zero(); work.len() - 1];
            let mut carry = GaussianRational::zero();
            for k in (0..work.len()).rev() {
                let val = &work[k] + &(&carry * a);
                if k > 0 {
                    quotient[k - 1] = val.clone();
                }
                carry = val;
            }
            work = quotient;
            out.push(carry);
        }
        out
    }

    pub fn div_rem(&self, divisor: &Self) -> Result<(Self, Self)> {
        let d_deg = divisor.degree().ok_or(Error::DivisionByZero)?;
        let lc_inv = divisor.leading().unwrap().inv()?;
        let mut rem = self.coeffs.clone();
        let Some(n_deg) = self.degree() else {
            return Ok((Self::zero(), Self::zero()));
        };
        if n_deg < d_deg {
            return Ok((Self::zero(), self.clone()));
        }
        let mut quot = vec![GaussianRational::zero(); n_deg - d_deg + 1];
        for k in (0..=n_deg - d_deg).rev() {
            let c = &rem[k + d_deg] * &lc_inv;
            if c.is_zero() {
                continue;
            }
            for (j, dc) in divisor.coeffs.iter().enumerate() {
                rem[k + j] -= &(&c * dc);
            }
            quot[k] = c;
        }
        rem.truncate(d_deg);
        Ok((Self::new(quot), Self::new(rem)))
    }

    /// Exact division; errors if the remainder is nonzero.
    pub fn exact_div(&self, divisor: &Self) -> Result<Self> {
        let (q, r) = self.div_rem(divisor)?;
        if r.is_zero() {
            Ok(q)
        } else {
            Err(Error::InvalidInput("polynomial division is not exact".into()))
        }
    }

    /// Monic gcd; gcd(0, 0) = 0.
    pub fn gcd(&self, other: &Self) -> Self {
        let mut a = self.monic();
        let mut b = other.monic();
        while !b.is_zero() {
            let (_, r) = a.div_rem(&b).expect("nonzero divisor");
            a = b;
            b = r.monic();
        }
        a
    }

    /// Multiplicity of `root` as a zero (0 if p(root) != 0). Zero polynomial gives `None`.
    pub fn root_multiplicity(&self, root: &GaussianRational) -> Option<usize> {
        if self.is_zero() {
            return None;
        }
        let lin = Self::linear(root);
        let mut p = self.clone();
        let mut m = 0;
        loop {
            let (q, r) = p.div_rem(&lin).expect("linear divisor");
            if !r.is_zero() {
                return Some(m);
            }
            p = q;
            m += 1;
        }
    }

    pub fn is_squarefree(&self) -> bool {
        match self.degree() {
            None => false,
            Some(0) => true,
            Some(_) => self.gcd(&self.derivative()).degree() == Some(0),
        }
    }
}

impl fmt::Debug for UniPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for UniPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let terms: Vec<String> = self
            .coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(k, c)| match k {
                0 => format!("({c})"),
                1 => format!("({c})*z"),
                _ => format!("({c})*z^{k}"),
            })
            .collect();
        write!(f, "{}", terms.join(" + "))
    }
}

impl Add for &UniPoly {
    type Output = UniPoly;
    fn add(self, rhs: &UniPoly) -> UniPoly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        UniPoly::new((0..n).map(|k| self.coeff(k) + rhs.coeff(k)).collect())
    }
}

impl Sub for &UniPoly {
    type Output = UniPoly;
    fn sub(self, rhs: &UniPoly) -> UniPoly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        UniPoly::new((0..n).map(|k| self.coeff(k) - rhs.coeff(k)).collect())
    }
}

impl Mul for &UniPoly {
    type Output = UniPoly;
    fn mul(self, rhs: &UniPoly) -> UniPoly {
        if self.is_zero() || rhs.is_zero() {
            return UniPoly::zero();
        }
        let mut out = vec![GaussianRational::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] += &(a * b);
            }
        }
        UniPoly::new(out)
    }
}

impl Neg for &UniPoly {
    type Output = UniPoly;
    fn neg(self) -> UniPoly {
        UniPoly::new(self.coeffs.iter().map(|c| -c).collect())
    }
}

/// A reduced quotient num/den of polynomials with den monic.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct RationalFunction {
    num: UniPoly,
    den: UniPoly,
}

impl RationalFunction {
    pub fn new(num: UniPoly, den: UniPoly) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::DivisionByZero);
        }
        if num.is_zero() {
            return Ok(Self::zero());
        }
        let g = num.gcd(&den);
        let num = num.exact_div(&g)?;
        let den = den.exact_div(&g)?;
        let lc_inv = den.leading().unwrap().inv()?;
        Ok(Self {
            num: num.scale(&lc_inv),
            den: den.scale(&lc_inv),
        })
    }

    pub fn zero() -> Self {
        Self {
            num: UniPoly::zero(),
            den: UniPoly::one(),
        }
    }

    pub fn from_poly(p: UniPoly) -> Self {
        Self {
            num: p,
            den: UniPoly::one(),
        }
    }

    pub fn numerator(&self) -> &UniPoly {
        &self.num
    }

    pub fn denominator(&self) -> &UniPoly {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn mul_poly(&self, p: &UniPoly) -> Self {
        if p.is_zero() || self.is_zero() {
            return Self::zero();
        }
        // num and den are coprime, so only p can cancel against den.
        let g = p.gcd(&self.den);
        let p = p.exact_div(&g).expect("gcd divides");
        let den = self.den.exact_div(&g).expect("gcd divides");
        Self {
            num: &self.num * &p,
            den,
        }
    }

    /// Order of the pole at `p` (0 if regular there).
    pub fn pole_order(&self, p: &GaussianRational) -> usize {
        if self.is_zero() {
            return 0;
        }
        self.den.root_multiplicity(p).unwrap_or(0)
    }

    /// Coefficient of (z - p)^{-1} in the Laurent expansion at p.
    pub fn residue_at(&self, p: &GaussianRational) -> GaussianRational {
        let k = self.pole_order(p);
        if k == 0 {
            return GaussianRational::zero();
        }
        // den(z) = (z - p)^k u(z); expand num/u in t = z - p to order k - 1.
        let mut u = self.den.clone();
        let lin = UniPoly::linear(p);
        for _ in 0..k {
            u = u.exact_div(&lin).expect("root of denominator");
        }
        let a = self.num.taylor_coeffs(p, k);
        let b = u.taylor_coeffs(p, k);
        let b0_inv = b[0].inv().expect("u(p) != 0 after removing the pole");
        let mut series: Vec<GaussianRational> = Vec::with_capacity(k);
        for j in 0..k {
            let mut c = a[j].clone();
            for (i, s) in series.iter().enumerate() {
                c -= &(s * &b[j - i]);
            }
            series.push(&c * &b0_inv);
        }
        series.pop().unwrap()
    }
}

impl fmt::Debug for RationalFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}] / [{}]", self.num, self.den)
    }
}

impl Add for &RationalFunction {
    type Output = RationalFunction;
    fn add(self, rhs: &RationalFunction) -> RationalFunction {
        if self.is_zero() {
            return rhs.clone();
        }
        if rhs.is_zero() {
            return self.clone();
        }
        if self.den == rhs.den {
            return RationalFunction::new(&self.num + &rhs.num, self.den.clone()).unwrap();
        }
        let g = self.den.gcd(&rhs.den);
        let lhs_cof = self.den.exact_div(&g).unwrap();
        let rhs_cof = rhs.den.exact_div(&g).unwrap();
        let num = &(&self.num * &rhs_cof) + &(&rhs.num * &lhs_cof);
        RationalFunction::new(num, &self.den * &rhs_cof).unwrap()
    }
}

impl Neg for &RationalFunction {
    type Output = RationalFunction;
    fn neg(self) -> RationalFunction {
        RationalFunction {
            num: -&self.num,
            den: self.den.clone(),
        }
    }
}

impl Sub for &RationalFunction {
    type Output = RationalFunction;
    fn sub(self, rhs: &RationalFunction) -> RationalFunction {
        self + &(-rhs)
    }
}

impl Mul for &RationalFunction {
    type Output = RationalFunction;
    fn mul(self, rhs: &RationalFunction) -> RationalFunction {
        if self.is_zero() || rhs.is_zero() {
            return RationalFunction::zero();
        }
        RationalFunction::new(&self.num * &rhs.num, &self.den * &rhs.den).unwrap()
    }
}
