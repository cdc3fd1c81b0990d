//! Independent dimension verification: the reduced echelon basis of the
//! prolonged system over both variable families, linear pseudo-remainders,
//! and the characteristic-set construction they support.

use crate::dpoly::{DerVar, DppeSystem, LinDiffPoly, VarKind};
use crate::error::Error;
use crate::field::FieldElem;
use crate::matrix::Matrix;
use crate::resultant::{build_ml, profile, SystemProfile};

/// The basis read off the reduced row echelon form of the prolonged system:
/// `g` ascending in the elimination ranking, `g0` its members free of
/// parameters.
#[derive(Clone, Debug)]
pub struct EchelonBasis {
    pub g: Vec<LinDiffPoly<FieldElem>>,
    pub g0: Vec<LinDiffPoly<FieldElem>>,
    pub profile: SystemProfile,
}

/// Gaussian elimination on the `L x 2L` matrix whose columns are the
/// parameter derivatives, then the implicit-variable slots, then the
/// constant, all ranked decreasing. Rows read back as polynomials form the
/// reduced basis of the prolonged ideal.
pub fn echelon_basis(sys: &DppeSystem) -> Result<EchelonBasis, Error> {
    let prof = profile(&sys.h)?;
    let l = prof.l;
    let (block, last) = build_ml(&sys.h, &sys.a, &prof);

    let mut x_cols: Vec<DerVar> = prof.x_slots.clone();
    x_cols.sort_by(|a, b| b.cmp(a));

    let cols = 2 * l;
    let m = Matrix::from_fn(l, cols, |r, c| {
        if c < l - 1 {
            block.at(r, c).clone()
        } else if c < cols - 1 {
            let v = &x_cols[c - (l - 1)];
            if *v == prof.x_slots[r] {
                FieldElem::one()
            } else {
                FieldElem::zero()
            }
        } else {
            last[r].shift.neg()
        }
    });

    let (e, pivots) = m.rref();
    if pivots.len() != l {
        return Err(Error::Anomaly(format!(
            "prolonged system has rank {} instead of {}",
            pivots.len(),
            l
        )));
    }

    let mut g = Vec::with_capacity(l);
    for r in (0..l).rev() {
        let mut p = LinDiffPoly::zero();
        for c in 0..l - 1 {
            p.add_term(prof.v_cols[c], e.at(r, c).clone());
        }
        for (k, v) in x_cols.iter().enumerate() {
            p.add_term(*v, e.at(r, l - 1 + k).clone());
        }
        p.set_constant(e.at(r, cols - 1).clone());
        if p.is_zero() {
            return Err(Error::Anomaly("zero row in a full-rank echelon form".into()));
        }
        g.push(p);
    }
    let g0: Vec<_> = g.iter().filter(|p| !p.has_kind(VarKind::U)).cloned().collect();
    if g0.is_empty() {
        return Err(Error::Anomaly("no parameter-free element in the basis".into()));
    }
    Ok(EchelonBasis { g, g0, profile: prof })
}

/// Linear pseudo-remainder: eliminates the leader of `q` and every
/// derivative of it from `p` by exact reduction (initials are field units).
pub fn lin_prem(
    p: &LinDiffPoly<FieldElem>,
    q: &LinDiffPoly<FieldElem>,
) -> Result<LinDiffPoly<FieldElem>, Error> {
    let (lead, init) = match q.lead() {
        Some(x) => x,
        None => return Err(Error::ZeroDivisor),
    };
    let init = init.clone();
    let mut out = p.clone();
    loop {
        let m = out
            .vars()
            .filter(|v| v.base() == lead.base() && v.order >= lead.order)
            .map(|v| v.order)
            .max();
        let m = match m {
            Some(m) => m,
            None => break,
        };
        let c = out.coeff(&DerVar { order: m, ..lead });
        let factor = c.div(&init).expect("unit initial");
        let mut shifted = q.clone();
        for _ in 0..m - lead.order {
            shifted = shifted.derive();
        }
        out = out.sub(&shifted.scale_field(&factor));
    }
    Ok(out)
}

/// Reduces against a chain until fully reduced with respect to every
/// element.
fn prem_chain(
    p: &LinDiffPoly<FieldElem>,
    chain: &[LinDiffPoly<FieldElem>],
) -> Result<LinDiffPoly<FieldElem>, Error> {
    let mut cur = p.clone();
    loop {
        let mut next = cur.clone();
        for q in chain.iter().rev() {
            next = lin_prem(&next, q)?;
        }
        if next == cur {
            return Ok(next);
        }
        cur = next;
    }
}

/// A characteristic set of the prolonged differential ideal, and its
/// parameter-free part, whose size answers the dimension question:
/// dimension `n - |a0|`.
#[derive(Clone, Debug)]
pub struct Charset {
    pub chain: Vec<LinDiffPoly<FieldElem>>,
    pub a0: Vec<LinDiffPoly<FieldElem>>,
    pub n: usize,
}

impl Charset {
    pub fn dimension(&self) -> usize {
        self.n - self.a0.len()
    }

    /// True when the implicit ideal has dimension `n - 1`.
    pub fn full_dimensional(&self) -> bool {
        self.a0.len() == 1
    }
}

/// Builds a characteristic set from the echelon basis: walk the basis in
/// ascending order and adjoin every nonzero pseudo-remainder.
pub fn charset(sys: &DppeSystem) -> Result<Charset, Error> {
    let basis = echelon_basis(sys)?;
    charset_from_basis(sys.n(), &basis)
}

pub fn charset_from_basis(n: usize, basis: &EchelonBasis) -> Result<Charset, Error> {
    let mut chain: Vec<LinDiffPoly<FieldElem>> = vec![basis.g[0].clone()];
    let mut prev_lead = basis.g[0].lead().map(|(v, _)| v);
    for b in basis.g.iter().skip(1) {
        let lead = b.lead().map(|(v, _)| v);
        if lead == prev_lead {
            continue;
        }
        prev_lead = lead;
        let r = prem_chain(b, &chain)?;
        if !r.is_zero() {
            chain.push(r);
            chain.sort_by(|a, b| {
                let la = a.lead().map(|(v, _)| v);
                let lb = b.lead().map(|(v, _)| v);
                la.cmp(&lb)
            });
        }
    }
    let mut leaders: Vec<Option<DerVar>> =
        chain.iter().map(|p| p.lead().map(|(v, _)| v)).collect();
    leaders.sort();
    leaders.dedup();
    if leaders.len() != chain.len() {
        return Err(Error::Anomaly("characteristic chain has repeated leaders".into()));
    }
    let a0: Vec<_> = chain
        .iter()
        .filter(|p| !p.has_kind(VarKind::U))
        .cloned()
        .collect();
    Ok(Charset { chain, a0, n })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::{parse_document, parse_x_poly, Allow};

    fn example1() -> DppeSystem {
        parse_document(
            "field: Q\n\
             params: u1, u2\n\
             x1 = -u1 + u2 - u1' + u1'' + 4*u2' + 3*u2''\n\
             x2 = -u2 - u1' + u2''\n\
             x3 = -u2 - u1' - u2'\n",
        )
        .unwrap()
        .system
    }

    #[test]
    fn prem_leaves_unrelated_input_alone() {
        let p = parse_x_poly("x1' + x2").unwrap();
        let q = parse_x_poly("x3 + x2'").unwrap();
        assert_eq!(lin_prem(&p, &q).unwrap(), p);
    }

    #[test]
    fn prem_eliminates_leader_derivatives() {
        // prem(u1' + x1, u1 + x2) = x1 - x2'
        let p = crate::parse::parse_linear("u1' + x1", Allow { u: true, x: true, t: false })
            .unwrap();
        let q = crate::parse::parse_linear("u1 + x2", Allow { u: true, x: true, t: false })
            .unwrap();
        let r = lin_prem(&p, &q).unwrap();
        let expect = parse_x_poly("x1 - x2'").unwrap();
        assert_eq!(r, expect);
    }

    #[test]
    fn prem_by_zero_fails() {
        let p = parse_x_poly("x1").unwrap();
        assert!(matches!(
            lin_prem(&p, &LinDiffPoly::zero()),
            Err(Error::ZeroDivisor)
        ));
    }

    #[test]
    fn echelon_counts_example1() {
        let sys = example1();
        let basis = echelon_basis(&sys).unwrap();
        assert_eq!(basis.g.len(), 13);
        // ascending: first element is parameter-free
        assert!(!basis.g[0].has_kind(VarKind::U));
        assert_eq!(basis.g0.len(), 2);
        // cross-check against the principal-block rank
        let (block, _) = build_ml(&sys.h, &sys.a, &basis.profile);
        assert_eq!(basis.g0.len(), basis.profile.l - block.rank());
        // every parameter-free element vanishes under the parametrization
        for b in &basis.g0 {
            assert!(crate::dpoly::substitute(b, &sys).is_zero());
        }
    }

    #[test]
    fn charset_example1_is_full_dimensional() {
        let sys = example1();
        let cs = charset(&sys).unwrap();
        assert_eq!(cs.a0.len(), 1);
        assert_eq!(cs.dimension(), 2);
    }

    #[test]
    fn n_zero_full_rank_basis_shape() {
        let sys = parse_document(
            "field: Q\n\
             params: u1, u2\n\
             x1 = u1 + u2\n\
             x2 = u1 - u2\n\
             x3 = u1\n",
        )
        .unwrap()
        .system;
        let basis = echelon_basis(&sys).unwrap();
        // basis is {B0, u1 - U1(X), u2 - U2(X)} up to ordering
        assert_eq!(basis.g.len(), 3);
        assert_eq!(basis.g0.len(), 1);
        let with_u: Vec<_> = basis.g.iter().filter(|p| p.has_kind(VarKind::U)).collect();
        assert_eq!(with_u.len(), 2);
        for p in with_u {
            let (lead, c) = p.lead().unwrap();
            assert_eq!(lead.kind, VarKind::U);
            assert_eq!(lead.order, 0);
            assert!(c.is_one());
        }
        let cs = charset(&sys).unwrap();
        assert!(cs.full_dimensional());
    }
}
