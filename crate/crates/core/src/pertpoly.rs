//! Polynomials in the perturbation constant `p` over the coefficient field.
//!
//! `p` is a differential indeterminate with `p' = 0`, so the derivation acts
//! coefficient-wise and `K[p]` is a commutative integral domain.

use std::fmt;

use crate::field::FieldElem;

/// `coeffs[k]` is the coefficient of `p^k`; top coefficient nonzero unless
/// the polynomial is zero.
#[derive(Clone, PartialEq, Debug)]
pub struct PertPoly {
    coeffs: Vec<FieldElem>,
}

impl PertPoly {
    pub fn zero() -> Self {
        PertPoly { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        PertPoly::constant(FieldElem::one())
    }

    /// The indeterminate `p`.
    pub fn p() -> Self {
        PertPoly { coeffs: vec![FieldElem::zero(), FieldElem::one()] }
    }

    pub fn constant(c: FieldElem) -> Self {
        if c.is_zero() {
            PertPoly::zero()
        } else {
            PertPoly { coeffs: vec![c] }
        }
    }

    /// `c * p^k`.
    pub fn monomial(c: FieldElem, k: usize) -> Self {
        if c.is_zero() {
            return PertPoly::zero();
        }
        let mut coeffs = vec![FieldElem::zero(); k + 1];
        coeffs[k] = c;
        PertPoly { coeffs }
    }

    pub fn from_coeffs(coeffs: Vec<FieldElem>) -> Self {
        let mut p = PertPoly { coeffs };
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

    /// Lowest degree with a nonzero coefficient.
    pub fn lowest_degree(&self) -> Option<usize> {
        self.coeffs.iter().position(|c| !c.is_zero())
    }

    pub fn coeff(&self, k: usize) -> FieldElem {
        self.coeffs.get(k).cloned().unwrap_or_else(FieldElem::zero)
    }

    /// Evaluation at `p = 0`.
    pub fn at_zero(&self) -> FieldElem {
        self.coeff(0)
    }

    pub fn add(&self, other: &PertPoly) -> PertPoly {
        let n = self.coeffs.len().max(other.coeffs.len());
        let mut out = Vec::with_capacity(n);
        for k in 0..n {
            out.push(self.coeff(k).add(&other.coeff(k)));
        }
        PertPoly::from_coeffs(out)
    }

    pub fn sub(&self, other: &PertPoly) -> PertPoly {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> PertPoly {
        PertPoly { coeffs: self.coeffs.iter().map(|c| c.neg()).collect() }
    }

    pub fn mul(&self, other: &PertPoly) -> PertPoly {
        if self.is_zero() || other.is_zero() {
            return PertPoly::zero();
        }
        let mut out = vec![FieldElem::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                if b.is_zero() {
                    continue;
                }
                out[i + j] = out[i + j].add(&a.mul(b));
            }
        }
        PertPoly::from_coeffs(out)
    }

    pub fn mul_field(&self, c: &FieldElem) -> PertPoly {
        if c.is_zero() {
            return PertPoly::zero();
        }
        PertPoly::from_coeffs(self.coeffs.iter().map(|a| a.mul(c)).collect())
    }

    /// Exact division; panics when the division leaves a remainder, which
    /// fraction-free elimination guarantees not to happen.
    pub fn exact_div(&self, divisor: &PertPoly) -> PertPoly {
        assert!(!divisor.is_zero(), "exact division by zero");
        if self.is_zero() {
            return PertPoly::zero();
        }
        let dd = divisor.degree().unwrap();
        let dlc = divisor.coeffs[dd].clone();
        let mut rem = self.clone();
        let mut quot = vec![FieldElem::zero(); self.coeffs.len().saturating_sub(dd)];
        while let Some(rd) = rem.degree() {
            if rd < dd {
                break;
            }
            let f = rem.coeffs[rd].div(&dlc).expect("nonzero leading coefficient");
            let shift = rd - dd;
            for (k, c) in divisor.coeffs.iter().enumerate() {
                rem.coeffs[k + shift] = rem.coeffs[k + shift].sub(&c.mul(&f));
            }
            quot[shift] = f;
            rem.trim();
        }
        assert!(rem.is_zero(), "inexact polynomial division in p");
        PertPoly::from_coeffs(quot)
    }

    /// `p' = 0`, so the derivation acts on coefficients only.
    pub fn derive(&self) -> PertPoly {
        PertPoly::from_coeffs(self.coeffs.iter().map(|c| c.derive()).collect())
    }
}

impl fmt::Display for PertPoly {
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
            if !unit {
                if c.is_composite() {
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
                    write!(f, "p")?;
                } else {
                    write!(f, "p^{}", k)?;
                }
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::rat;

    #[test]
    fn exact_division_round_trip() {
        let a = PertPoly::from_coeffs(vec![
            FieldElem::from_rat(rat(2)),
            FieldElem::t(),
            FieldElem::one(),
        ]);
        let b = PertPoly::from_coeffs(vec![FieldElem::t(), FieldElem::from_rat(rat(3))]);
        let prod = a.mul(&b);
        assert_eq!(prod.exact_div(&b), a);
        assert_eq!(prod.exact_div(&a), b);
    }

    #[test]
    fn derivation_ignores_p() {
        let a = PertPoly::from_coeffs(vec![FieldElem::t(), FieldElem::one()]);
        let da = a.derive();
        assert_eq!(da, PertPoly::constant(FieldElem::one()));
    }
}
