//! The implicitization driver: decide whether the implicit ideal of a system
//! has dimension `n-1` and, if so, produce its implicit equation together
//! with a machine-checkable certificate.

use crate::dpoly::{co_order, decompose, id_content_primitive, substitute};
use crate::dpoly::{DppeSystem, LinDiffPoly};
use crate::error::Error;
use crate::field::FieldElem;
use crate::ore::OrePoly;
use crate::pertpoly::PertPoly;
use crate::perturb::{default_phi, perturb, Perturbation};
use crate::resultant::{build_ml, dcres, leading_matrix, profile};

/// What the driver established along the way. Ranks and counts always refer
/// to the unperturbed system; `a_d` is the raw lowest-degree slice of the
/// perturbed resultant and `a_phi` its primitive part.
#[derive(Clone, Debug)]
pub struct Certificate {
    pub n: usize,
    pub l: usize,
    pub rank_s: usize,
    pub d_phi: Option<usize>,
    pub a_d: Option<LinDiffPoly<FieldElem>>,
    pub content: Option<OrePoly>,
    pub a_phi: Option<LinDiffPoly<FieldElem>>,
    pub c_a: Option<i64>,
    pub rank_ml1: Option<usize>,
    pub perturbation: Option<Perturbation>,
    pub permutation: Option<Vec<usize>>,
}

/// Outcome of the decision procedure. The implicit equation is normalized so
/// its highest-ranked derivative has coefficient one.
#[derive(Clone, Debug)]
pub enum Decision {
    Implicit { equation: LinDiffPoly<FieldElem>, certificate: Certificate },
    LowerDim { certificate: Certificate },
}

impl Decision {
    pub fn certificate(&self) -> &Certificate {
        match self {
            Decision::Implicit { certificate, .. } => certificate,
            Decision::LowerDim { certificate } => certificate,
        }
    }

    pub fn is_implicit(&self) -> bool {
        matches!(self, Decision::Implicit { .. })
    }
}

#[derive(Clone, Debug, Default)]
pub struct Options {
    /// User-supplied perturbation; `None` selects the default family.
    pub perturbation: Option<Perturbation>,
    /// Disables the sorted-order retry when the default perturbation yields
    /// a zero resultant.
    pub no_fallback: bool,
}

/// Lowest power of `p` in a nonzero perturbed resultant and its coefficient.
pub fn extract_lowest(
    dc: &LinDiffPoly<PertPoly>,
) -> Result<(usize, LinDiffPoly<FieldElem>), Error> {
    match dc.lowest_p_degree() {
        None => Err(Error::ZeroResultant("resultant is zero".into())),
        Some(d) => {
            let slice = dc.p_slice(d);
            debug_assert!(!slice.is_zero());
            Ok((d, slice))
        }
    }
}

/// Runs the decision procedure.
pub fn run(sys: &DppeSystem, opts: &Options) -> Result<Decision, Error> {
    match run_once(sys, opts.perturbation.as_ref()) {
        Ok(decision) => Ok(decision),
        Err(first @ (Error::ZeroResultant(_) | Error::OrderEscalation(_))) => {
            if opts.no_fallback || opts.perturbation.is_some() {
                return Err(first);
            }
            run_sorted_fallback(sys, first)
        }
        Err(other) => Err(other),
    }
}

/// Retry with equations permuted into nondecreasing order, rebuilding the
/// default perturbation, then undo the renaming on every reported
/// polynomial.
fn run_sorted_fallback(sys: &DppeSystem, first: Error) -> Result<Decision, Error> {
    let prof = profile(&sys.h)?;
    let mut perm: Vec<usize> = (1..=sys.n()).collect();
    perm.sort_by_key(|&i| prof.o[i - 1]);
    let sorted = sys.permuted(&perm);
    match run_once(&sorted, None) {
        Ok(decision) => Ok(relabel_decision(decision, &perm)),
        Err(second @ (Error::ZeroResultant(_) | Error::OrderEscalation(_))) => {
            Err(Error::ZeroResultant(format!(
                "default perturbation failed ({}); sorted retry failed ({})",
                first, second
            )))
        }
        Err(other) => Err(other),
    }
}

fn relabel_decision(decision: Decision, perm: &[usize]) -> Decision {
    let fix = |p: &LinDiffPoly<FieldElem>| p.relabel_x(perm);
    match decision {
        Decision::Implicit { equation, mut certificate } => {
            certificate.a_d = certificate.a_d.as_ref().map(fix);
            certificate.a_phi = certificate.a_phi.as_ref().map(fix);
            certificate.permutation = Some(perm.to_vec());
            Decision::Implicit { equation: fix(&equation), certificate }
        }
        Decision::LowerDim { mut certificate } => {
            certificate.a_d = certificate.a_d.as_ref().map(fix);
            certificate.a_phi = certificate.a_phi.as_ref().map(fix);
            certificate.permutation = Some(perm.to_vec());
            Decision::LowerDim { certificate }
        }
    }
}

fn run_once(sys: &DppeSystem, user_phi: Option<&Perturbation>) -> Result<Decision, Error> {
    sys.validate()?;
    let n = sys.n();
    let prof = profile(&sys.h)?;
    let s = leading_matrix(&sys.h, &prof);
    let rank_s = s.rank();

    let mut cert = Certificate {
        n,
        l: prof.l,
        rank_s,
        d_phi: None,
        a_d: None,
        content: None,
        a_phi: None,
        c_a: None,
        rank_ml1: None,
        perturbation: None,
        permutation: None,
    };

    if rank_s < n - 1 {
        return Ok(Decision::LowerDim { certificate: cert });
    }

    // With no derivatives anywhere the full rank of the leading matrix
    // already settles the dimension and the unperturbed resultant is
    // nonzero, so no perturbation is needed.
    let phi = match user_phi {
        Some(p) => p.clone(),
        None if prof.big_n == 0 => Perturbation::none(n),
        None => default_phi(&prof),
    };
    let pert = perturb(sys, &phi)?;
    cert.perturbation = Some(phi.clone());

    let dc = dcres(&pert.h, &pert.a, &prof);
    let (d_phi, a_d) = extract_lowest(&dc).map_err(|_| {
        Error::ZeroResultant(format!("perturbation [{}] yields a zero resultant", phi))
    })?;
    cert.d_phi = Some(d_phi);
    cert.a_d = Some(a_d.clone());
    debug_assert!(
        substitute(&a_d, sys).is_zero(),
        "lowest-degree slice must vanish under the parametrization"
    );

    let (content, a_phi) = id_content_primitive(&a_d, sys)?;
    let c_a = co_order(&a_phi, &prof)?;
    cert.content = Some(content);
    cert.a_phi = Some(a_phi.clone());
    cert.c_a = Some(c_a);

    if d_phi == 0 || d_phi as i64 == c_a {
        let equation = a_phi.normalize_lead();
        return Ok(Decision::Implicit { equation, certificate: cert });
    }

    // Only now pay for the rank of the principal block.
    let (block, _) = build_ml(&sys.h, &sys.a, &prof);
    let rank_ml1 = block.rank();
    cert.rank_ml1 = Some(rank_ml1);
    let g0 = prof.l - rank_ml1;
    if g0 as i64 > d_phi as i64 + 1 || (g0 as i64) < c_a + 1 {
        return Err(Error::Anomaly(format!(
            "echelon count {} violates its bounds: co-order {}, degree {}",
            g0, c_a, d_phi
        )));
    }
    if g0 as i64 > c_a + 1 {
        Ok(Decision::LowerDim { certificate: cert })
    } else {
        let equation = a_phi.normalize_lead();
        Ok(Decision::Implicit { equation, certificate: cert })
    }
}

/// Decomposition of the decision equation over the system, for reporting.
pub fn operator_family(
    equation: &LinDiffPoly<FieldElem>,
    sys: &DppeSystem,
) -> Vec<OrePoly> {
    decompose(equation, sys).0
}
