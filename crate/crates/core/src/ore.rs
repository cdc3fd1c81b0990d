//! The ring `K[d]` of linear ordinary differential operators, `d = d/dt`.
//!
//! Multiplication follows the commutation rule `d*c = c*d + c'` for field
//! elements `c`, so the ring is noncommutative whenever the field has
//! nonconstant elements. The ring is left Euclidean, which gives left
//! quotient/remainder, greatest common left divisors and coprimality tests.

use std::fmt;

use crate::error::Error;
use crate::field::FieldElem;

/// A differential operator: `coeffs[k]` multiplies `d^k`.
#[derive(Clone, PartialEq, Debug)]
pub struct OrePoly {
    coeffs: Vec<FieldElem>,
}

impl OrePoly {
    pub fn zero() -> Self {
        OrePoly { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        OrePoly::constant(FieldElem::one())
    }

    /// The bare derivation `d`.
    pub fn dee() -> Self {
        OrePoly { coeffs: vec![FieldElem::zero(), FieldElem::one()] }
    }

    pub fn constant(c: FieldElem) -> Self {
        if c.is_zero() {
            OrePoly::zero()
        } else {
            OrePoly { coeffs: vec![c] }
        }
    }

    /// `c * d^k`.
    pub fn monomial(c: FieldElem, k: usize) -> Self {
        if c.is_zero() {
            return OrePoly::zero();
        }
        let mut coeffs = vec![FieldElem::zero(); k + 1];
        coeffs[k] = c;
        OrePoly { coeffs }
    }

    pub fn from_coeffs(coeffs: Vec<FieldElem>) -> Self {
        let mut p = OrePoly { coeffs };
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

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn coeff(&self, k: usize) -> FieldElem {
        self.coeffs.get(k).cloned().unwrap_or_else(FieldElem::zero)
    }

    pub fn coeffs(&self) -> &[FieldElem] {
        &self.coeffs
    }

    /// Leading coefficient; zero for the zero operator.
    pub fn lc(&self) -> FieldElem {
        self.coeffs.last().cloned().unwrap_or_else(FieldElem::zero)
    }

    pub fn add(&self, other: &OrePoly) -> OrePoly {
        let n = self.coeffs.len().max(other.coeffs.len());
        let mut out = Vec::with_capacity(n);
        for k in 0..n {
            out.push(self.coeff(k).add(&other.coeff(k)));
        }
        OrePoly::from_coeffs(out)
    }

    pub fn sub(&self, other: &OrePoly) -> OrePoly {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> OrePoly {
        OrePoly { coeffs: self.coeffs.iter().map(|c| c.neg()).collect() }
    }

    /// Coefficient-wise scaling, i.e. left multiplication by the constant
    /// operator `c`.
    pub fn scale(&self, c: &FieldElem) -> OrePoly {
        if c.is_zero() {
            return OrePoly::zero();
        }
        OrePoly::from_coeffs(self.coeffs.iter().map(|a| a.mul(c)).collect())
    }

    /// Left composition with the derivation: `d * self`.
    fn dee_compose(&self) -> OrePoly {
        let mut out = vec![FieldElem::zero(); self.coeffs.len() + 1];
        for (k, c) in self.coeffs.iter().enumerate() {
            out[k + 1] = out[k + 1].add(c);
            out[k] = out[k].add(&c.derive());
        }
        OrePoly::from_coeffs(out)
    }

    /// Operator product `self * other` under `d*c = c*d + c'`.
    pub fn mul(&self, other: &OrePoly) -> OrePoly {
        if self.is_zero() || other.is_zero() {
            return OrePoly::zero();
        }
        let mut acc = OrePoly::zero();
        let mut shifted = other.clone(); // d^k * other, built incrementally
        for (k, c) in self.coeffs.iter().enumerate() {
            if k > 0 {
                shifted = shifted.dee_compose();
            }
            if !c.is_zero() {
                acc = acc.add(&shifted.scale(c));
            }
        }
        acc
    }

    /// Left division: returns `(q, r)` with `self = divisor * q + r` and
    /// `deg r < deg divisor`.
    pub fn left_divmod(&self, divisor: &OrePoly) -> Result<(OrePoly, OrePoly), Error> {
        if divisor.is_zero() {
            return Err(Error::DivisionByZeroOperator);
        }
        let dd = divisor.degree().unwrap();
        let dlc = divisor.lc();
        let mut rem = self.clone();
        let mut quot = OrePoly::zero();
        // Leading coefficients multiply without derivative corrections at the
        // top degree, so eliminating from the top down terminates.
        while let Some(rd) = rem.degree() {
            if rd < dd {
                break;
            }
            let c = rem.lc().div(&dlc).expect("nonzero leading coefficient");
            let mono = OrePoly::monomial(c, rd - dd);
            rem = rem.sub(&divisor.mul(&mono));
            quot = quot.add(&mono);
            debug_assert!(rem.degree().map_or(true, |d| d < rd));
        }
        Ok((quot, rem))
    }

    /// True when `divisor` left-divides `self` with zero remainder.
    pub fn left_divides(divisor: &OrePoly, target: &OrePoly) -> bool {
        match target.left_divmod(divisor) {
            Ok((_, r)) => r.is_zero(),
            Err(_) => false,
        }
    }

    /// Monic normalization by right multiplication with a constant, which
    /// preserves the left-divisor property.
    pub fn monic(&self) -> OrePoly {
        if self.is_zero() {
            return OrePoly::zero();
        }
        let inv = self.lc().inv().expect("nonzero leading coefficient");
        self.mul(&OrePoly::constant(inv))
    }

    /// Monic greatest common left divisor of a family, by iterated left
    /// Euclid; fails when every operator is zero.
    pub fn gcld(ops: &[OrePoly]) -> Result<OrePoly, Error> {
        let mut acc: Option<OrePoly> = None;
        for op in ops.iter().filter(|op| !op.is_zero()) {
            acc = Some(match acc {
                None => op.clone(),
                Some(g) => Self::gcld_pair(&g, op)?,
            });
            if acc.as_ref().unwrap().degree() == Some(0) {
                break; // a unit kills all common divisors
            }
        }
        match acc {
            Some(g) => Ok(g.monic()),
            None => Err(Error::AllZeroOperators),
        }
    }

    fn gcld_pair(a: &OrePoly, b: &OrePoly) -> Result<OrePoly, Error> {
        let mut a = a.clone();
        let mut b = b.clone();
        while !b.is_zero() {
            let (_, r) = a.left_divmod(&b)?;
            a = b;
            b = r;
        }
        Ok(a)
    }

    /// True iff the family has trivial greatest common left divisor.
    pub fn coprime(ops: &[OrePoly]) -> Result<bool, Error> {
        Ok(Self::gcld(ops)?.degree() == Some(0))
    }

    /// Apply the operator to a field element: `sum c_k * a^(k)`.
    pub fn apply_to_field(&self, a: &FieldElem) -> FieldElem {
        let mut acc = FieldElem::zero();
        let mut der = a.clone();
        for (k, c) in self.coeffs.iter().enumerate() {
            if k > 0 {
                der = der.derive();
            }
            acc = acc.add(&c.mul(&der));
        }
        acc
    }
}

impl fmt::Display for OrePoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let s = c.to_string();
            let (sign, mag) = match s.strip_prefix('-') {
                Some(rest) if !c.is_composite() => ("-", rest.to_string()),
                _ => ("+", s),
            };
            if first {
                if sign == "-" {
                    write!(f, "-")?;
                }
                first = false;
            } else {
                write!(f, " {} ", sign)?;
            }
            let unit = mag == "1" && k > 0;
            let wrap = c.is_composite();
            if !unit {
                if wrap {
                    write!(f, "({})", mag)?;
                } else {
                    write!(f, "{}", mag)?;
                }
            }
            if k > 0 {
                if !unit {
                    write!(f, "*")?;
                }
                if k == 1 {
                    write!(f, "d")?;
                } else {
                    write!(f, "d^{}", k)?;
                }
            }
        }
        Ok(())
    }
}
