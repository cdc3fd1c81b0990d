//! Linear perturbations `F_i - p*phi_i` of a system, including the default
//! perturbation family whose perturbed resultant is guaranteed nonzero for
//! order-sorted systems.

use std::fmt;

use crate::dpoly::{DerVar, DppeSystem, LinDiffPoly};
use crate::error::Error;
use crate::field::FieldElem;
use crate::pertpoly::PertPoly;
use crate::resultant::{profile, SystemProfile};

/// A family of homogeneous linear parameter polynomials, one per equation.
#[derive(Clone, Debug, PartialEq)]
pub struct Perturbation {
    pub phi: Vec<LinDiffPoly<FieldElem>>,
}

impl Perturbation {
    /// The zero perturbation: the perturbed system equals the original.
    pub fn none(n: usize) -> Self {
        Perturbation { phi: vec![LinDiffPoly::zero(); n] }
    }

    pub fn is_zero(&self) -> bool {
        self.phi.iter().all(|p| p.is_zero())
    }
}

impl fmt::Display for Perturbation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.phi.iter().map(|p| p.to_string()).collect();
        write!(f, "{}", parts.join(", "))
    }
}

/// The default perturbation: for `i <= n-2` take
/// `eps_i * u_{n-i-1}^(o_i - gamma_{n-i-1}) + u_{n-i}`, then `u_1` for
/// `i = n-1` and `eps_n * u_{n-1}^(o_n - gamma_{n-1})` for `i = n`, with
/// `eps_i = 0` exactly when `o_i = 0`. A derivative slot that would fall
/// below order zero is dropped like an `eps_i = 0` term.
pub fn default_phi(prof: &SystemProfile) -> Perturbation {
    let n = prof.n;
    let mut phi = Vec::with_capacity(n);
    let slot = |i: usize, j: usize| -> Option<DerVar> {
        if prof.o[i - 1] == 0 {
            return None;
        }
        let ord = prof.o[i - 1] as i64 - prof.gamma_j[j - 1] as i64;
        if ord < 0 {
            return None;
        }
        Some(DerVar::u(j, ord as usize))
    };
    for i in 1..=n {
        let mut p = LinDiffPoly::zero();
        if i <= n - 2 {
            if let Some(v) = slot(i, n - i - 1) {
                p.add_term(v, FieldElem::one());
            }
            p.add_term(DerVar::u(n - i, 0), FieldElem::one());
        } else if i == n - 1 {
            p.add_term(DerVar::u(1, 0), FieldElem::one());
        } else if let Some(v) = slot(n, n - 1) {
            p.add_term(v, FieldElem::one());
        }
        phi.push(p);
    }
    Perturbation { phi }
}

/// A perturbed system: the constants are unchanged and each homogeneous part
/// becomes `H_i + p*phi_i` over the polynomial ring in `p`. The sign of `p`
/// is a formal choice (`phi` and `-phi` are equally valid perturbations);
/// this one keeps the lowest-degree slices aligned across perturbations of
/// different parity.
#[derive(Clone, Debug)]
pub struct PerturbedSystem {
    pub a: Vec<FieldElem>,
    pub h: Vec<LinDiffPoly<PertPoly>>,
    pub phi: Perturbation,
}

/// Builds the perturbed system, rejecting perturbations that change the
/// order profile (equation orders or gamma offsets), since all prolongation
/// bounds must be shared with the unperturbed system.
pub fn perturb(sys: &DppeSystem, phi: &Perturbation) -> Result<PerturbedSystem, Error> {
    let n = sys.n();
    if phi.phi.len() != n {
        return Err(Error::InvalidSystem(format!(
            "perturbation has {} components for {} equations",
            phi.phi.len(),
            n
        )));
    }
    let mut h = Vec::with_capacity(n);
    for (hi, pi) in sys.h.iter().zip(phi.phi.iter()) {
        let mut hp = hi.to_pert();
        for (v, c) in pi.terms() {
            hp.add_term(*v, PertPoly::monomial(c.clone(), 1));
        }
        h.push(hp);
    }
    let base = profile(&sys.h)?;
    let pert = profile(&h)?;
    if base.o != pert.o || base.gamma_j != pert.gamma_j {
        return Err(Error::OrderEscalation(format!(
            "orders {:?} gamma {:?} became {:?} gamma {:?}",
            base.o, base.gamma_j, pert.o, pert.gamma_j
        )));
    }
    Ok(PerturbedSystem { a: sys.a.clone(), h, phi: phi.clone() })
}
