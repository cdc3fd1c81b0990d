//! Linear differential polynomials over a coefficient ring, the input system
//! type, and the operator-decomposition toolkit built on them.

use std::collections::BTreeMap;
use std::fmt;

use crate::error::Error;
use crate::field::{FieldElem, FieldTag};
use crate::ore::OrePoly;
use crate::pertpoly::PertPoly;

/// Coefficient rings a linear differential polynomial can live over: the
/// field itself, or polynomials in the perturbation constant.
pub trait Coeff: Clone + PartialEq + fmt::Debug + fmt::Display + Send + Sync {
    fn zero() -> Self;
    fn one() -> Self;
    fn is_zero(&self) -> bool;
    fn add(&self, other: &Self) -> Self;
    fn sub(&self, other: &Self) -> Self;
    fn neg(&self) -> Self;
    fn mul(&self, other: &Self) -> Self;
    /// Exact quotient; callers only divide when divisibility is guaranteed.
    fn exact_div(&self, other: &Self) -> Self;
    fn derive(&self) -> Self;
    fn from_field(f: FieldElem) -> Self;
    fn mul_field(&self, f: &FieldElem) -> Self;
    /// (negative, magnitude, needs-parentheses) for term rendering.
    fn term_parts(&self) -> (bool, String, bool);
}

impl Coeff for FieldElem {
    fn zero() -> Self {
        FieldElem::zero()
    }
    fn one() -> Self {
        FieldElem::one()
    }
    fn is_zero(&self) -> bool {
        FieldElem::is_zero(self)
    }
    fn add(&self, other: &Self) -> Self {
        FieldElem::add(self, other)
    }
    fn sub(&self, other: &Self) -> Self {
        FieldElem::sub(self, other)
    }
    fn neg(&self) -> Self {
        FieldElem::neg(self)
    }
    fn mul(&self, other: &Self) -> Self {
        FieldElem::mul(self, other)
    }
    fn exact_div(&self, other: &Self) -> Self {
        FieldElem::div(self, other).expect("division by zero field element")
    }
    fn derive(&self) -> Self {
        FieldElem::derive(self)
    }
    fn from_field(f: FieldElem) -> Self {
        f
    }
    fn mul_field(&self, f: &FieldElem) -> Self {
        FieldElem::mul(self, f)
    }
    fn term_parts(&self) -> (bool, String, bool) {
        let s = self.to_string();
        if self.is_composite() {
            (false, s, true)
        } else {
            match s.strip_prefix('-') {
                Some(rest) => (true, rest.to_string(), false),
                None => (false, s, false),
            }
        }
    }
}

impl Coeff for PertPoly {
    fn zero() -> Self {
        PertPoly::zero()
    }
    fn one() -> Self {
        PertPoly::one()
    }
    fn is_zero(&self) -> bool {
        PertPoly::is_zero(self)
    }
    fn add(&self, other: &Self) -> Self {
        PertPoly::add(self, other)
    }
    fn sub(&self, other: &Self) -> Self {
        PertPoly::sub(self, other)
    }
    fn neg(&self) -> Self {
        PertPoly::neg(self)
    }
    fn mul(&self, other: &Self) -> Self {
        PertPoly::mul(self, other)
    }
    fn exact_div(&self, other: &Self) -> Self {
        PertPoly::exact_div(self, other)
    }
    fn derive(&self) -> Self {
        PertPoly::derive(self)
    }
    fn from_field(f: FieldElem) -> Self {
        PertPoly::constant(f)
    }
    fn mul_field(&self, f: &FieldElem) -> Self {
        PertPoly::mul_field(self, f)
    }
    fn term_parts(&self) -> (bool, String, bool) {
        if self.degree() == Some(0) {
            self.at_zero().term_parts()
        } else {
            (false, self.to_string(), true)
        }
    }
}

/// Which family a derivative variable belongs to.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Hash)]
pub enum VarKind {
    X,
    U,
}

/// A derivative `x_i^(k)` or `u_j^(k)`; `index` is 1-based.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Hash)]
pub struct DerVar {
    pub kind: VarKind,
    pub index: usize,
    pub order: usize,
}

impl DerVar {
    pub fn x(index: usize, order: usize) -> Self {
        DerVar { kind: VarKind::X, index, order }
    }

    pub fn u(index: usize, order: usize) -> Self {
        DerVar { kind: VarKind::U, index, order }
    }

    /// The next derivative of the same base variable.
    pub fn up(&self) -> Self {
        DerVar { order: self.order + 1, ..*self }
    }

    pub fn base(&self) -> (VarKind, usize) {
        (self.kind, self.index)
    }
}

/// Ranking that eliminates the parameters with respect to the implicit
/// variables: every `u`-derivative ranks above every `x`-derivative.
/// Within `u`: orderly with `u1 < u2 < ...`; within `x`: orderly with
/// `xn < ... < x1`. Used as the canonical `Ord` on variables.
impl Ord for DerVar {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        use std::cmp::Ordering;
        use VarKind::*;
        match (self.kind, other.kind) {
            (U, X) => Ordering::Greater,
            (X, U) => Ordering::Less,
            (U, U) => self
                .order
                .cmp(&other.order)
                .then(self.index.cmp(&other.index)),
            (X, X) => self
                .order
                .cmp(&other.order)
                .then(other.index.cmp(&self.index)),
        }
    }
}

impl PartialOrd for DerVar {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for DerVar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = match self.kind {
            VarKind::X => "x",
            VarKind::U => "u",
        };
        write!(f, "{}{}", name, self.index)?;
        match self.order {
            0 => Ok(()),
            1 => write!(f, "'"),
            2 => write!(f, "''"),
            k => write!(f, "^({})", k),
        }
    }
}

/// A linear differential polynomial: a finite coefficient map over derivative
/// variables plus a constant term. Linearity is structural.
#[derive(Clone, PartialEq, Debug)]
pub struct LinDiffPoly<R> {
    terms: BTreeMap<DerVar, R>,
    constant: R,
}

impl<R: Coeff> LinDiffPoly<R> {
    pub fn zero() -> Self {
        LinDiffPoly { terms: BTreeMap::new(), constant: R::zero() }
    }

    pub fn from_constant(c: R) -> Self {
        LinDiffPoly { terms: BTreeMap::new(), constant: c }
    }

    pub fn term(v: DerVar, c: R) -> Self {
        let mut p = Self::zero();
        p.add_term(v, c);
        p
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty() && self.constant.is_zero()
    }

    pub fn constant(&self) -> &R {
        &self.constant
    }

    pub fn set_constant(&mut self, c: R) {
        self.constant = c;
    }

    pub fn coeff(&self, v: &DerVar) -> R {
        self.terms.get(v).cloned().unwrap_or_else(R::zero)
    }

    /// Adds `c` to the coefficient of `v`, dropping the entry when it
    /// cancels to zero.
    pub fn add_term(&mut self, v: DerVar, c: R) {
        if c.is_zero() {
            return;
        }
        let cur = self.terms.remove(&v);
        let next = match cur {
            Some(old) => old.add(&c),
            None => c,
        };
        if !next.is_zero() {
            self.terms.insert(v, next);
        }
    }

    pub fn add_constant(&mut self, c: &R) {
        self.constant = self.constant.add(c);
    }

    pub fn terms(&self) -> impl Iterator<Item = (&DerVar, &R)> {
        self.terms.iter()
    }

    pub fn term_count(&self) -> usize {
        self.terms.len()
    }

    pub fn vars(&self) -> impl Iterator<Item = &DerVar> {
        self.terms.keys()
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (v, c) in other.terms.iter() {
            out.add_term(*v, c.clone());
        }
        out.constant = out.constant.add(&other.constant);
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        LinDiffPoly {
            terms: self.terms.iter().map(|(v, c)| (*v, c.neg())).collect(),
            constant: self.constant.neg(),
        }
    }

    pub fn scale(&self, c: &R) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        let mut out = Self::zero();
        for (v, a) in self.terms.iter() {
            out.add_term(*v, a.mul(c));
        }
        out.constant = self.constant.mul(c);
        out
    }

    pub fn scale_field(&self, c: &FieldElem) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        let mut out = Self::zero();
        for (v, a) in self.terms.iter() {
            out.add_term(*v, a.mul_field(c));
        }
        out.constant = self.constant.mul_field(c);
        out
    }

    /// Total derivative: `(c*v)' = c'*v + c*v'`, constants differentiate in
    /// the coefficient ring.
    pub fn derive(&self) -> Self {
        let mut out = Self::zero();
        for (v, c) in self.terms.iter() {
            out.add_term(*v, c.derive());
            out.add_term(v.up(), c.clone());
        }
        out.constant = self.constant.derive();
        out
    }

    /// Applies a differential operator term-wise.
    pub fn apply_op(&self, op: &OrePoly) -> Self {
        let mut acc = Self::zero();
        let mut cur = self.clone();
        for (k, c) in op.coeffs().iter().enumerate() {
            if k > 0 {
                cur = cur.derive();
            }
            if !c.is_zero() {
                acc = acc.add(&cur.scale_field(c));
            }
        }
        acc
    }

    /// Maximal derivative order of the given base variable, `-1` if absent.
    pub fn ord_in(&self, kind: VarKind, index: usize) -> i64 {
        self.terms
            .keys()
            .filter(|v| v.kind == kind && v.index == index)
            .map(|v| v.order as i64)
            .max()
            .unwrap_or(-1)
    }

    /// Order of the polynomial over all parameter derivatives; 0 when no
    /// parameter derivative of positive order occurs.
    pub fn u_order(&self) -> usize {
        self.terms
            .keys()
            .filter(|v| v.kind == VarKind::U)
            .map(|v| v.order)
            .max()
            .unwrap_or(0)
    }

    pub fn has_kind(&self, kind: VarKind) -> bool {
        self.terms.keys().any(|v| v.kind == kind)
    }

    /// Highest-ranked variable and its coefficient.
    pub fn lead(&self) -> Option<(DerVar, &R)> {
        self.terms.iter().next_back().map(|(v, c)| (*v, c))
    }

    pub fn map_coeffs<S: Coeff>(&self, f: impl Fn(&R) -> S) -> LinDiffPoly<S> {
        let mut out = LinDiffPoly::zero();
        for (v, c) in self.terms.iter() {
            out.add_term(*v, f(c));
        }
        out.constant = f(&self.constant);
        out
    }

    /// Renames implicit variables: `x_i` becomes `x_{map[i-1]}`.
    pub fn relabel_x(&self, map: &[usize]) -> Self {
        let mut out = Self::zero();
        for (v, c) in self.terms.iter() {
            let w = match v.kind {
                VarKind::X => DerVar::x(map[v.index - 1], v.order),
                VarKind::U => *v,
            };
            out.add_term(w, c.clone());
        }
        out.constant = self.constant.clone();
        out
    }
}

impl LinDiffPoly<FieldElem> {
    pub fn to_pert(&self) -> LinDiffPoly<PertPoly> {
        self.map_coeffs(|c| PertPoly::constant(c.clone()))
    }

    /// Scalar `c` with `self = c * other`, when one exists.
    pub fn proportional_scalar(&self, other: &Self) -> Option<FieldElem> {
        if self.is_zero() || other.is_zero() {
            return None;
        }
        let (v, c) = self.lead()?;
        let d = other.coeff(&v);
        if d.is_zero() {
            return None;
        }
        let scalar = c.div(&d).ok()?;
        if *self == other.scale_field(&scalar) {
            Some(scalar)
        } else {
            None
        }
    }

    /// Rescales so the highest-ranked variable has coefficient one.
    pub fn normalize_lead(&self) -> Self {
        match self.lead() {
            None => self.clone(),
            Some((_, c)) => {
                let inv = c.inv().expect("lead coefficient is nonzero");
                self.scale_field(&inv)
            }
        }
    }
}

impl LinDiffPoly<PertPoly> {
    /// Coefficient-wise slice at a fixed power of `p`.
    pub fn p_slice(&self, d: usize) -> LinDiffPoly<FieldElem> {
        let mut out = LinDiffPoly::zero();
        for (v, c) in self.terms.iter() {
            out.add_term(*v, c.coeff(d));
        }
        out.set_constant(self.constant.coeff(d));
        out
    }

    /// Smallest power of `p` appearing anywhere, `None` when zero.
    pub fn lowest_p_degree(&self) -> Option<usize> {
        self.terms
            .values()
            .chain(std::iter::once(&self.constant))
            .filter_map(|c| c.lowest_degree())
            .min()
    }

    /// Evaluation at `p = 0`.
    pub fn at_zero(&self) -> LinDiffPoly<FieldElem> {
        self.p_slice(0)
    }
}

impl<R: Coeff> fmt::Display for LinDiffPoly<R> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        let mut write_part = |f: &mut fmt::Formatter<'_>,
                              neg: bool,
                              mag: String,
                              wrap: bool,
                              var: Option<&DerVar>|
         -> fmt::Result {
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
            let unit = mag == "1" && var.is_some();
            if !unit {
                if wrap {
                    write!(f, "({})", mag)?;
                } else {
                    write!(f, "{}", mag)?;
                }
            }
            if let Some(v) = var {
                if !unit {
                    write!(f, "*")?;
                }
                write!(f, "{}", v)?;
            }
            Ok(())
        };
        for (v, c) in self.terms.iter().rev() {
            let (neg, mag, wrap) = c.term_parts();
            write_part(f, neg, mag, wrap, Some(v))?;
        }
        if !self.constant.is_zero() {
            let (neg, mag, wrap) = self.constant.term_parts();
            write_part(f, neg, mag, wrap, None)?;
        }
        Ok(())
    }
}

/// A system of `n` linear differential parametric equations
/// `x_i = P_i(u_1, ..., u_{n-1})`, stored as `F_i = x_i - a_i + H_i` with
/// `a_i` the constant part of `P_i` and `H_i` homogeneous in the parameters.
#[derive(Clone, Debug)]
pub struct DppeSystem {
    pub field: FieldTag,
    pub a: Vec<FieldElem>,
    pub h: Vec<LinDiffPoly<FieldElem>>,
}

impl DppeSystem {
    pub fn new(
        field: FieldTag,
        a: Vec<FieldElem>,
        h: Vec<LinDiffPoly<FieldElem>>,
    ) -> Result<Self, Error> {
        let sys = DppeSystem { field, a, h };
        sys.validate()?;
        Ok(sys)
    }

    pub fn n(&self) -> usize {
        self.h.len()
    }

    pub fn validate(&self) -> Result<(), Error> {
        let n = self.h.len();
        if n < 2 {
            return Err(Error::InvalidSystem("need at least 2 equations".into()));
        }
        if self.a.len() != n {
            return Err(Error::InvalidSystem("constant part count mismatch".into()));
        }
        for (i, h) in self.h.iter().enumerate() {
            if h.has_kind(VarKind::X) {
                return Err(Error::InvalidSystem(format!(
                    "H_{} contains an implicit variable",
                    i + 1
                )));
            }
            if !h.constant().is_zero() {
                return Err(Error::InvalidSystem(format!(
                    "H_{} has a nonzero constant term",
                    i + 1
                )));
            }
            if let Some(v) = h.vars().find(|v| v.index > n - 1 || v.index == 0) {
                return Err(Error::InvalidSystem(format!(
                    "H_{} uses parameter u{} outside u1..u{}",
                    i + 1,
                    v.index,
                    n - 1
                )));
            }
        }
        for j in 1..n {
            if !self.h.iter().any(|h| h.ord_in(VarKind::U, j) >= 0) {
                return Err(Error::InvalidSystem(format!(
                    "parameter u{} does not appear in any equation",
                    j
                )));
            }
        }
        if self.h.iter().all(|h| h.is_zero()) {
            return Err(Error::InvalidSystem(
                "all right-hand sides are constant".into(),
            ));
        }
        Ok(())
    }

    /// `F_i = x_i - a_i + H_i` as a polynomial.
    pub fn f(&self, i: usize) -> LinDiffPoly<FieldElem> {
        let mut f = self.h[i - 1].clone();
        f.add_term(DerVar::x(i, 0), FieldElem::one());
        f.add_constant(&self.a[i - 1].neg());
        f
    }

    /// `P_i = a_i - H_i`, the parametric right-hand side.
    pub fn p(&self, i: usize) -> LinDiffPoly<FieldElem> {
        let mut p = self.h[i - 1].neg();
        p.add_constant(&self.a[i - 1]);
        p
    }

    /// Reorders equations: new equation `k` is old equation `perm[k-1]`.
    pub fn permuted(&self, perm: &[usize]) -> DppeSystem {
        DppeSystem {
            field: self.field,
            a: perm.iter().map(|&i| self.a[i - 1].clone()).collect(),
            h: perm.iter().map(|&i| self.h[i - 1].clone()).collect(),
        }
    }
}

/// Reads off the operator family expressing an implicit-variable polynomial
/// over the system: `ops[i]` collects the coefficients of the derivatives of
/// `x_{i+1}`, and the residual is `constant(a) + sum ops[i](a_i)`, which is
/// zero exactly when `a = sum ops[i](x_i - a_i)`.
pub fn decompose(
    a: &LinDiffPoly<FieldElem>,
    sys: &DppeSystem,
) -> (Vec<OrePoly>, FieldElem) {
    assert!(
        !a.has_kind(VarKind::U),
        "decompose expects a polynomial in the implicit variables only"
    );
    let n = sys.n();
    let mut ops = vec![OrePoly::zero(); n];
    for i in 1..=n {
        let top = a.ord_in(VarKind::X, i);
        if top < 0 {
            continue;
        }
        let mut coeffs = vec![FieldElem::zero(); top as usize + 1];
        for (v, c) in a.terms() {
            if v.kind == VarKind::X && v.index == i {
                coeffs[v.order] = c.clone();
            }
        }
        ops[i - 1] = OrePoly::from_coeffs(coeffs);
    }
    let mut residual = a.constant().clone();
    for (op, ai) in ops.iter().zip(sys.a.iter()) {
        residual = residual.add(&op.apply_to_field(ai));
    }
    (ops, residual)
}

/// Substitutes the parametrization into a polynomial in the implicit
/// variables: each `x_i^(k)` becomes the `k`-th derivative of `P_i`. The
/// result is zero exactly when the polynomial lies in the implicit ideal.
pub fn substitute(
    a: &LinDiffPoly<FieldElem>,
    sys: &DppeSystem,
) -> LinDiffPoly<FieldElem> {
    let (ops, residual) = decompose(a, sys);
    let mut out = LinDiffPoly::from_constant(residual);
    for (op, h) in ops.iter().zip(sys.h.iter()) {
        out = out.sub(&h.apply_op(op));
    }
    out
}

/// Largest `k` such that the `k`-th derivative still fits the prolongation
/// window: `min_i (N - o_i - gamma - ord(B, x_i))`, with order `-1` for an
/// absent variable.
pub fn co_order(
    b: &LinDiffPoly<FieldElem>,
    prof: &crate::resultant::SystemProfile,
) -> Result<i64, Error> {
    if b.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    let c = (1..=prof.n)
        .map(|i| {
            prof.big_n as i64 - prof.o[i - 1] as i64 - prof.gamma as i64
                - b.ord_in(VarKind::X, i)
        })
        .min()
        .expect("nonempty system");
    Ok(c)
}

/// Splits a representable polynomial into its content (the monic greatest
/// common left divisor of its operator family) and primitive part.
pub fn id_content_primitive(
    b: &LinDiffPoly<FieldElem>,
    sys: &DppeSystem,
) -> Result<(OrePoly, LinDiffPoly<FieldElem>), Error> {
    if b.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    let (ops, residual) = decompose(b, sys);
    if !residual.is_zero() {
        return Err(Error::NonRepresentable(residual.to_string()));
    }
    let content = OrePoly::gcld(&ops)?;
    let mut primitive = LinDiffPoly::zero();
    let mut reduced = Vec::with_capacity(ops.len());
    for op in &ops {
        let (q, r) = op.left_divmod(&content)?;
        debug_assert!(r.is_zero(), "content must left-divide every operator");
        reduced.push(q);
    }
    for (i, q) in reduced.iter().enumerate() {
        for (k, c) in q.coeffs().iter().enumerate() {
            primitive.add_term(DerVar::x(i + 1, k), c.clone());
        }
    }
    // The constant is recomputed from the reduced operators rather than
    // divided out.
    let mut constant = FieldElem::zero();
    for (q, ai) in reduced.iter().zip(sys.a.iter()) {
        constant = constant.sub(&q.apply_to_field(ai));
    }
    primitive.set_constant(constant);
    Ok((content, primitive))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ranking_orders_variables() {
        // u-derivatives beat x-derivatives; orderly inside each family
        assert!(DerVar::u(1, 0) > DerVar::x(1, 5));
        assert!(DerVar::u(2, 1) > DerVar::u(1, 1));
        assert!(DerVar::u(1, 2) > DerVar::u(2, 1));
        // x1 ranks above x2 at equal order
        assert!(DerVar::x(1, 1) > DerVar::x(2, 1));
        assert!(DerVar::x(3, 2) > DerVar::x(1, 1));
    }

    #[test]
    fn derive_applies_leibniz_to_coefficients() {
        // (t*u1)' = u1 + t*u1'
        let p = LinDiffPoly::term(DerVar::u(1, 0), FieldElem::t());
        let dp = p.derive();
        assert_eq!(dp.coeff(&DerVar::u(1, 0)), FieldElem::one());
        assert_eq!(dp.coeff(&DerVar::u(1, 1)), FieldElem::t());
    }

    #[test]
    fn apply_op_simple() {
        // d applied to (x1 + u1) = x1' + u1'
        let mut p = LinDiffPoly::term(DerVar::x(1, 0), FieldElem::one());
        p.add_term(DerVar::u(1, 0), FieldElem::one());
        let dp = p.apply_op(&OrePoly::dee());
        assert_eq!(dp.coeff(&DerVar::x(1, 1)), FieldElem::one());
        assert_eq!(dp.coeff(&DerVar::u(1, 1)), FieldElem::one());
        assert_eq!(dp.term_count(), 2);
    }

    #[test]
    fn apply_op_with_rational_function_coefficient() {
        // (d + 1) applied to t*u1 = t*u1' + (1 + t)*u1
        let p = LinDiffPoly::term(DerVar::u(1, 0), FieldElem::t());
        let op = OrePoly::from_coeffs(vec![FieldElem::one(), FieldElem::one()]);
        let out = p.apply_op(&op);
        assert_eq!(out.coeff(&DerVar::u(1, 1)), FieldElem::t());
        assert_eq!(
            out.coeff(&DerVar::u(1, 0)),
            FieldElem::one().add(&FieldElem::t())
        );
    }

    #[test]
    fn ord_in_absent_variable() {
        let p = LinDiffPoly::term(DerVar::u(1, 3), FieldElem::one());
        assert_eq!(p.ord_in(VarKind::U, 1), 3);
        assert_eq!(p.ord_in(VarKind::U, 2), -1);
    }

    #[test]
    fn display_round_readable() {
        let mut p = LinDiffPoly::term(DerVar::x(1, 2), FieldElem::one());
        p.add_term(DerVar::x(2, 0), FieldElem::from_int(-2));
        p.add_constant(&FieldElem::from_int(3));
        assert_eq!(p.to_string(), "x1'' - 2*x2 + 3");
    }
}
