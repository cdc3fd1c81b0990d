//! Exact arithmetic in the coefficient differential field: the rationals, or
//! rational functions of `t` with the derivation `d/dt`.
//!
//! Rational functions are kept in canonical form: numerator and denominator
//! coprime, denominator monic, and a constant value collapses to the
//! [`FieldElem::Const`] variant. Canonical form makes structural equality a
//! valid equality test.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::Error;

/// An exact rational number. Always reduced, denominator positive.
pub type Rat = BigRational;

pub fn rat(n: i64) -> Rat {
    Rat::from_integer(BigInt::from(n))
}

pub fn rat_frac(n: i64, d: i64) -> Rat {
    Rat::new(BigInt::from(n), BigInt::from(d))
}

/// Dense univariate polynomial in `t` over the rationals.
///
/// `coeffs[k]` is the coefficient of `t^k`; the top coefficient is nonzero
/// unless the polynomial is zero (empty vector).
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Poly {
    coeffs: Vec<Rat>,
}

impl Poly {
    pub fn zero() -> Self {
        Poly { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Poly::constant(Rat::one())
    }

    pub fn t() -> Self {
        Poly { coeffs: vec![Rat::zero(), Rat::one()] }
    }

    pub fn constant(c: Rat) -> Self {
        if c.is_zero() {
            Poly::zero()
        } else {
            Poly { coeffs: vec![c] }
        }
    }

    pub fn from_coeffs(coeffs: Vec<Rat>) -> Self {
        let mut p = Poly { coeffs };
        p.trim();
        p
    }

    fn trim(&mut self) {
        while self.coeffs.last().is_some_and(|c| c.is_zero()) {
            self.coeffs.pop();
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.coeffs.len() == 1 && self.coeffs[0].is_one()
    }

    /// Degree, or `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn coeff(&self, k: usize) -> Rat {
        self.coeffs.get(k).cloned().unwrap_or_else(Rat::zero)
    }

    /// Leading coefficient; zero for the zero polynomial.
    pub fn lc(&self) -> Rat {
        self.coeffs.last().cloned().unwrap_or_else(Rat::zero)
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.len() <= 1
    }

    pub fn add(&self, other: &Poly) -> Poly {
        let n = self.coeffs.len().max(other.coeffs.len());
        let mut out = Vec::with_capacity(n);
        for k in 0..n {
            out.push(self.coeff(k) + other.coeff(k));
        }
        Poly::from_coeffs(out)
    }

    pub fn sub(&self, other: &Poly) -> Poly {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Poly {
        Poly { coeffs: self.coeffs.iter().map(|c| -c.clone()).collect() }
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        if self.is_zero() || other.is_zero() {
            return Poly::zero();
        }
        let mut out = vec![Rat::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Poly::from_coeffs(out)
    }

    pub fn mul_rat(&self, c: &Rat) -> Poly {
        if c.is_zero() {
            return Poly::zero();
        }
        Poly { coeffs: self.coeffs.iter().map(|a| a * c).collect() }
    }

    pub fn derivative(&self) -> Poly {
        if self.coeffs.len() <= 1 {
            return Poly::zero();
        }
        let out = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(k, c)| c * Rat::from_integer(BigInt::from(k)))
            .collect();
        Poly::from_coeffs(out)
    }

    /// Euclidean division; panics if `divisor` is zero.
    pub fn divrem(&self, divisor: &Poly) -> (Poly, Poly) {
        assert!(!divisor.is_zero(), "polynomial division by zero");
        let dd = divisor.degree().unwrap();
        let dl = divisor.lc();
        let mut rem = self.clone();
        let mut quot = vec![Rat::zero(); self.coeffs.len().saturating_sub(dd)];
        while let Some(rd) = rem.degree() {
            if rd < dd {
                break;
            }
            let f = rem.lc() / dl.clone();
            let shift = rd - dd;
            quot[shift] = f.clone();
            for (k, c) in divisor.coeffs.iter().enumerate() {
                let v = rem.coeff(k + shift) - c * &f;
                if k + shift < rem.coeffs.len() {
                    rem.coeffs[k + shift] = v;
                }
            }
            rem.trim();
        }
        (Poly::from_coeffs(quot), rem)
    }

    /// Monic gcd by the Euclidean algorithm over the rationals.
    pub fn gcd(&self, other: &Poly) -> Poly {
        let mut a = self.clone();
        let mut b = other.clone();
        while !b.is_zero() {
            let (_, r) = a.divrem(&b);
            a = b;
            b = r;
        }
        a.monic()
    }

    pub fn monic(&self) -> Poly {
        if self.is_zero() {
            return Poly::zero();
        }
        let inv = Rat::one() / self.lc();
        self.mul_rat(&inv)
    }

    pub fn pow(&self, e: u32) -> Poly {
        let mut out = Poly::one();
        for _ in 0..e {
            out = out.mul(self);
        }
        out
    }

    /// Number of nonzero terms.
    pub fn term_count(&self) -> usize {
        self.coeffs.iter().filter(|c| !c.is_zero()).count()
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for k in (0..self.coeffs.len()).rev() {
            let c = &self.coeffs[k];
            if c.is_zero() {
                continue;
            }
            let neg = c < &Rat::zero();
            let mag = if neg { -c.clone() } else { c.clone() };
            if first {
                if neg {
                    write!(f, "-")?;
                }
                first = false;
            } else if neg {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            let unit = mag.is_one() && k > 0;
            if !unit {
                write!(f, "{}", mag)?;
            }
            if k > 0 {
                if !unit {
                    write!(f, "*")?;
                }
                if k == 1 {
                    write!(f, "t")?;
                } else {
                    write!(f, "t^{}", k)?;
                }
            }
        }
        Ok(())
    }
}

/// Which coefficient field a system lives in.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum FieldTag {
    /// The rational numbers; every element is a differential constant.
    Q,
    /// Rational functions of `t` with derivation `d/dt`.
    Qt,
}

impl fmt::Display for FieldTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FieldTag::Q => write!(f, "Q"),
            FieldTag::Qt => write!(f, "Q(t)"),
        }
    }
}

/// An element of the coefficient differential field.
///
/// Constants stay in the cheap [`FieldElem::Const`] variant; a genuine
/// rational function is a reduced fraction with monic denominator.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum FieldElem {
    Const(Rat),
    Ratio { num: Poly, den: Poly },
}

impl FieldElem {
    pub fn zero() -> Self {
        FieldElem::Const(Rat::zero())
    }

    pub fn one() -> Self {
        FieldElem::Const(Rat::one())
    }

    pub fn from_rat(r: Rat) -> Self {
        FieldElem::Const(r)
    }

    pub fn from_int(n: i64) -> Self {
        FieldElem::Const(rat(n))
    }

    pub fn t() -> Self {
        FieldElem::Ratio { num: Poly::t(), den: Poly::one() }
    }

    /// Canonical quotient of two polynomials in `t`.
    pub fn ratio(num: Poly, den: Poly) -> Result<Self, Error> {
        if den.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(Self::ratio_unchecked(num, den))
    }

    fn ratio_unchecked(num: Poly, den: Poly) -> Self {
        debug_assert!(!den.is_zero());
        if num.is_zero() {
            return FieldElem::zero();
        }
        let g = num.gcd(&den);
        let (num, den) = if g.is_one() {
            (num, den)
        } else {
            (num.divrem(&g).0, den.divrem(&g).0)
        };
        let lc_inv = Rat::one() / den.lc();
        let num = num.mul_rat(&lc_inv);
        let den = den.mul_rat(&lc_inv);
        if den.is_one() && num.is_constant() {
            FieldElem::Const(num.coeff(0))
        } else {
            FieldElem::Ratio { num, den }
        }
    }

    fn parts(&self) -> (Poly, Poly) {
        match self {
            FieldElem::Const(c) => (Poly::constant(c.clone()), Poly::one()),
            FieldElem::Ratio { num, den } => (num.clone(), den.clone()),
        }
    }

    pub fn is_zero(&self) -> bool {
        matches!(self, FieldElem::Const(c) if c.is_zero())
    }

    pub fn is_one(&self) -> bool {
        matches!(self, FieldElem::Const(c) if c.is_one())
    }

    pub fn is_constant(&self) -> bool {
        matches!(self, FieldElem::Const(_))
    }

    pub fn as_rat(&self) -> Option<&Rat> {
        match self {
            FieldElem::Const(c) => Some(c),
            FieldElem::Ratio { .. } => None,
        }
    }

    pub fn add(&self, other: &FieldElem) -> FieldElem {
        match (self, other) {
            (FieldElem::Const(a), FieldElem::Const(b)) => FieldElem::Const(a + b),
            _ => {
                let (n1, d1) = self.parts();
                let (n2, d2) = other.parts();
                Self::ratio_unchecked(n1.mul(&d2).add(&n2.mul(&d1)), d1.mul(&d2))
            }
        }
    }

    pub fn sub(&self, other: &FieldElem) -> FieldElem {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> FieldElem {
        match self {
            FieldElem::Const(c) => FieldElem::Const(-c.clone()),
            FieldElem::Ratio { num, den } => {
                FieldElem::Ratio { num: num.neg(), den: den.clone() }
            }
        }
    }

    pub fn mul(&self, other: &FieldElem) -> FieldElem {
        match (self, other) {
            (FieldElem::Const(a), FieldElem::Const(b)) => FieldElem::Const(a * b),
            _ => {
                if self.is_zero() || other.is_zero() {
                    return FieldElem::zero();
                }
                let (n1, d1) = self.parts();
                let (n2, d2) = other.parts();
                Self::ratio_unchecked(n1.mul(&n2), d1.mul(&d2))
            }
        }
    }

    pub fn inv(&self) -> Result<FieldElem, Error> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let (n, d) = self.parts();
        Ok(Self::ratio_unchecked(d, n))
    }

    pub fn div(&self, other: &FieldElem) -> Result<FieldElem, Error> {
        Ok(self.mul(&other.inv()?))
    }

    /// The derivation `d/dt`; constants map to zero, quotients by the exact
    /// quotient rule.
    pub fn derive(&self) -> FieldElem {
        match self {
            FieldElem::Const(_) => FieldElem::zero(),
            FieldElem::Ratio { num, den } => {
                let n = num.derivative().mul(den).sub(&num.mul(&den.derivative()));
                Self::ratio_unchecked(n, den.mul(den))
            }
        }
    }

    pub fn pow(&self, e: u32) -> FieldElem {
        let mut out = FieldElem::one();
        for _ in 0..e {
            out = out.mul(self);
        }
        out
    }

    /// True when the printed form needs parentheses before `*var`.
    pub fn is_composite(&self) -> bool {
        match self {
            FieldElem::Const(_) => false,
            FieldElem::Ratio { num, den } => den.is_one() && num.term_count() > 1,
        }
    }
}

impl fmt::Display for FieldElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FieldElem::Const(c) => write!(f, "{}", c),
            FieldElem::Ratio { num, den } => {
                if den.is_one() {
                    write!(f, "{}", num)
                } else {
                    write!(f, "({})/({})", num, den)
                }
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fe(n: i64, d: i64) -> FieldElem {
        FieldElem::from_rat(rat_frac(n, d))
    }

    #[test]
    fn rational_arithmetic() {
        // (1/2) + (1/3) = 5/6
        assert_eq!(fe(1, 2).add(&fe(1, 3)), fe(5, 6));
        // t / t = 1
        let t = FieldElem::t();
        assert_eq!(t.div(&t).unwrap(), FieldElem::one());
    }

    #[test]
    fn clearing_denominators() {
        // (1/(t-1)) * (t-1) = 1, cross-checked by polynomial multiplication
        let tm1 = Poly::from_coeffs(vec![rat(-1), rat(1)]);
        let inv = FieldElem::ratio(Poly::one(), tm1.clone()).unwrap();
        let lin = FieldElem::ratio(tm1.clone(), Poly::one()).unwrap();
        assert_eq!(inv.mul(&lin), FieldElem::one());
        // independent route: numerator of the product before reduction
        let prod_num = Poly::one().mul(&tm1);
        let prod_den = tm1.mul(&Poly::one());
        assert_eq!(prod_num, prod_den);
    }

    #[test]
    fn derivation() {
        // constants map to zero
        assert_eq!(FieldElem::from_int(5).derive(), FieldElem::zero());
        // (t^2)' = 2t
        let t2 = FieldElem::t().mul(&FieldElem::t());
        let two_t = FieldElem::t().mul(&FieldElem::from_int(2));
        assert_eq!(t2.derive(), two_t);
        // (1/t)' = -1/t^2
        let inv_t = FieldElem::t().inv().unwrap();
        let expect = FieldElem::ratio(
            Poly::constant(rat(-1)),
            Poly::t().mul(&Poly::t()),
        )
        .unwrap();
        assert_eq!(inv_t.derive(), expect);
    }

    #[test]
    fn division_by_zero_is_reported() {
        assert_eq!(
            FieldElem::one().div(&FieldElem::zero()),
            Err(Error::DivisionByZero)
        );
    }

    #[test]
    fn canonical_form_is_unique() {
        // a - a is structurally Const(0)
        let a = FieldElem::ratio(
            Poly::from_coeffs(vec![rat(1), rat(2), rat(1)]),
            Poly::from_coeffs(vec![rat(3), rat(1)]),
        )
        .unwrap();
        assert!(a.sub(&a).is_zero());
        // denominators come out monic
        let b = FieldElem::ratio(Poly::one(), Poly::from_coeffs(vec![rat(0), rat(2)])).unwrap();
        match &b {
            FieldElem::Ratio { num, den } => {
                assert_eq!(den, &Poly::t());
                assert_eq!(num, &Poly::constant(rat_frac(1, 2)));
            }
            _ => panic!("expected a ratio"),
        }
    }
}
