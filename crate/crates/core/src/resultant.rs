//! The prolongation combinatorics and resultant matrices of a linear system:
//! order profile, prolonged polynomial sets, leading matrix, principal block
//! with its symbolic last column, homogeneous resultant matrix, and the
//! differential resultants computed from them.

use crate::dpoly::{Coeff, DerVar, LinDiffPoly, VarKind};
use crate::error::Error;
use crate::field::FieldElem;
use crate::matrix::{minor_determinants, Matrix};

/// Shared combinatorial data of a system: equation orders `o_i`, the
/// completeness offsets `gamma_j` and their sum `gamma`, the total order `N`,
/// the prolongation counts `L` and `Lh`, and the canonical column layouts.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SystemProfile {
    pub n: usize,
    pub o: Vec<usize>,
    pub gamma_j: Vec<usize>,
    pub gamma: usize,
    /// `N = sum o_i`.
    pub big_n: usize,
    /// Number of prolonged polynomials; the full matrix is `L x L`.
    pub l: usize,
    /// Number of homogeneous prolongations.
    pub lh: usize,
    /// Parameter-derivative columns of the principal block, ranked
    /// decreasing.
    pub v_cols: Vec<DerVar>,
    /// Columns of the homogeneous resultant matrix, ranked decreasing.
    pub vh_cols: Vec<DerVar>,
    /// The implicit-variable slot of each row, in row order: row `l(i,k)`
    /// carries `x_i` at derivative order `N - o_i - gamma - k`.
    pub x_slots: Vec<DerVar>,
}

impl SystemProfile {
    /// Row index (1-based) of the `k`-th prolongation of equation `i`.
    pub fn row_index(&self, i: usize, k: usize) -> usize {
        let prior: usize = self.o[..i - 1].iter().sum();
        (i - 1) * (self.big_n - self.gamma) - prior + i + k
    }

    /// Rows of equation `i` span this half-open 0-based range.
    pub fn block_range(&self, i: usize) -> std::ops::Range<usize> {
        let start = self.row_index(i, 0) - 1;
        let len = self.big_n - self.o[i - 1] - self.gamma + 1;
        start..start + len
    }
}

/// Computes the profile from the homogeneous parts of a system. Generic over
/// the coefficient ring so the perturbed system reuses it.
pub fn profile<R: Coeff>(h: &[LinDiffPoly<R>]) -> Result<SystemProfile, Error> {
    let n = h.len();
    if n < 2 {
        return Err(Error::InvalidSystem("need at least 2 equations".into()));
    }
    let o: Vec<usize> = h.iter().map(|hi| hi.u_order()).collect();
    let big_n: usize = o.iter().sum();
    let mut gamma_j = Vec::with_capacity(n - 1);
    for j in 1..n {
        let g = (0..n)
            .map(|i| o[i] as i64 - h[i].ord_in(VarKind::U, j))
            .min()
            .expect("nonempty system");
        if g < 0 {
            return Err(Error::InvalidSystem(format!(
                "parameter u{} exceeds the order of its equation",
                j
            )));
        }
        gamma_j.push(g as usize);
    }
    let gamma: usize = gamma_j.iter().sum();
    for i in 0..n {
        if gamma > big_n - o[i] {
            return Err(Error::InvalidSystem(
                "completeness index exceeds a prolongation bound".into(),
            ));
        }
    }
    let l: usize = o.iter().map(|oi| big_n - oi - gamma + 1).sum();
    let lh: usize = o.iter().map(|oi| big_n - oi - gamma).sum();

    let mut v_cols = Vec::new();
    let mut vh_cols = Vec::new();
    for j in 1..n {
        let top = big_n - gamma_j[j - 1] - gamma;
        for k in 0..=top {
            v_cols.push(DerVar::u(j, k));
        }
        for k in 0..top {
            vh_cols.push(DerVar::u(j, k));
        }
    }
    v_cols.sort_by(|a, b| b.cmp(a));
    vh_cols.sort_by(|a, b| b.cmp(a));
    debug_assert_eq!(v_cols.len(), l - 1);
    debug_assert_eq!(vh_cols.len(), lh);

    let mut x_slots = Vec::with_capacity(l);
    for i in 1..=n {
        let top = big_n - o[i - 1] - gamma;
        for k in 0..=top {
            x_slots.push(DerVar::x(i, top - k));
        }
    }
    debug_assert_eq!(x_slots.len(), l);

    let prof = SystemProfile { n, o, gamma_j, gamma, big_n, l, lh, v_cols, vh_cols, x_slots };
    // The row-index formula must agree with the block layout.
    debug_assert!((1..=n).all(|i| {
        let r = prof.block_range(i);
        prof.row_index(i, 0) == r.start + 1 && prof.row_index(i, r.len() - 1) == r.end
    }));
    Ok(prof)
}

/// The prolonged polynomial set: row `l(i,k)` holds the full polynomial
/// `d^(N - o_i - gamma - k) F_i`, including its implicit-variable slot and
/// constant.
pub fn build_ps<R: Coeff>(
    h: &[LinDiffPoly<R>],
    a: &[FieldElem],
    prof: &SystemProfile,
) -> Vec<LinDiffPoly<R>> {
    let mut rows = Vec::with_capacity(prof.l);
    for i in 1..=prof.n {
        let top = prof.big_n - prof.o[i - 1] - prof.gamma;
        let mut f = h[i - 1].clone();
        f.add_term(DerVar::x(i, 0), R::one());
        f.add_constant(&R::from_field(a[i - 1].neg()));
        let mut block = Vec::with_capacity(top + 1);
        block.push(f.clone());
        for _ in 0..top {
            let prev = block.last().unwrap();
            block.push(prev.derive());
        }
        block.reverse();
        rows.extend(block);
    }
    rows
}

/// The `n x (n-1)` leading matrix: entry `(i,j)` is the coefficient of the
/// parameter `u_{n-j}` at derivative order `o_i - gamma_{n-j}` in `F_i`.
pub fn leading_matrix<R: Coeff>(h: &[LinDiffPoly<R>], prof: &SystemProfile) -> Matrix<R> {
    Matrix::from_fn(prof.n, prof.n - 1, |r, c| {
        let i = r + 1;
        let j = prof.n - (c + 1); // parameter index for column c
        let ord = prof.o[i - 1] as i64 - prof.gamma_j[j - 1] as i64;
        if ord < 0 {
            R::zero()
        } else {
            h[i - 1].coeff(&DerVar::u(j, ord as usize))
        }
    })
}

/// Leading matrix with row `i` (1-based) removed.
pub fn sub_leading<R: Coeff>(s: &Matrix<R>, i: usize) -> Matrix<R> {
    s.without_row(i - 1)
}

/// One entry of the symbolic last column: the slot variable `x_i^(e)` and
/// the shift `d^e a_i` it carries.
#[derive(Clone, Debug)]
pub struct LastCol {
    pub var: DerVar,
    pub shift: FieldElem,
}

/// The principal `L x (L-1)` block of the full resultant matrix together
/// with its symbolic last column `x_i^(e) - d^e a_i`.
pub fn build_ml<R: Coeff>(
    h: &[LinDiffPoly<R>],
    a: &[FieldElem],
    prof: &SystemProfile,
) -> (Matrix<R>, Vec<LastCol>) {
    let ps = build_ps(h, a, prof);
    let block = Matrix::from_fn(prof.l, prof.l - 1, |r, c| ps[r].coeff(&prof.v_cols[c]));
    let last: Vec<LastCol> = prof
        .x_slots
        .iter()
        .enumerate()
        .map(|(r, v)| {
            let mut shift = a[v.index - 1].clone();
            for _ in 0..v.order {
                shift = shift.derive();
            }
            debug_assert!(ps[r].coeff(v) == R::one(), "slot coefficient must be 1");
            LastCol { var: *v, shift }
        })
        .collect();
    (block, last)
}

/// The square homogeneous resultant matrix over the homogeneous prolongation
/// set; rows with a negative prolongation bound are omitted. Requires
/// `N >= 1`.
pub fn build_mlh<R: Coeff>(
    h: &[LinDiffPoly<R>],
    prof: &SystemProfile,
) -> Result<Matrix<R>, Error> {
    if prof.big_n == 0 {
        return Err(Error::EmptyHomogeneousSet);
    }
    let mut rows: Vec<LinDiffPoly<R>> = Vec::with_capacity(prof.lh);
    for i in 1..=prof.n {
        let bound = prof.big_n as i64 - prof.o[i - 1] as i64 - prof.gamma as i64 - 1;
        if bound < 0 {
            continue;
        }
        let mut block = Vec::with_capacity(bound as usize + 1);
        block.push(h[i - 1].clone());
        for _ in 0..bound {
            let prev = block.last().unwrap();
            block.push(prev.derive());
        }
        block.reverse();
        rows.extend(block);
    }
    debug_assert_eq!(rows.len(), prof.lh);
    Ok(Matrix::from_fn(prof.lh, prof.lh, |r, c| {
        rows[r].coeff(&prof.vh_cols[c])
    }))
}

/// The differential resultant of the system, developed along the symbolic
/// last column: `sum b_r det(M_r) (x_i^(e) - d^e a_i)` where `M_r` deletes
/// row `r` from the principal block and `b_r` is the cofactor sign. The
/// minor determinants are independent and evaluated by the (optionally
/// parallel) minor sweep.
pub fn dcres<R: Coeff>(
    h: &[LinDiffPoly<R>],
    a: &[FieldElem],
    prof: &SystemProfile,
) -> LinDiffPoly<R> {
    let (block, last) = build_ml(h, a, prof);
    let dets = minor_determinants(&block);
    let mut out = LinDiffPoly::zero();
    for (r, (det, entry)) in dets.into_iter().zip(last.iter()).enumerate() {
        if det.is_zero() {
            continue;
        }
        // cofactor sign of entry (r+1, L), 1-based
        let signed = if (r + 1 + prof.l) % 2 == 0 { det } else { det.neg() };
        out.add_term(entry.var, signed.clone());
        let shift = signed.mul_field(&entry.shift);
        out.add_constant(&shift.neg());
    }
    out
}

/// Determinant of the homogeneous resultant matrix. Requires `N >= 1`.
pub fn dcres_h<R: Coeff>(h: &[LinDiffPoly<R>], prof: &SystemProfile) -> Result<R, Error> {
    Ok(build_mlh(h, prof)?.det())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dpoly::DppeSystem;
    use crate::parse::parse_document;

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

    fn example2() -> DppeSystem {
        parse_document(
            "field: Q\n\
             params: u1, u2, u3\n\
             x1 = 2*u1 - u3 + 3*u2' - u3'\n\
             x2 = -2*u1 + u3 + u1' - 3*u2'' + u3''\n\
             x3 = -2*u1 + u3 - 2*u2' - u3''\n\
             x4 = -2*u1 + u3 - 3*u2' + 2*u3'\n",
        )
        .unwrap()
        .system
    }

    #[test]
    fn profile_example1() {
        let sys = example1();
        let prof = profile(&sys.h).unwrap();
        assert_eq!(prof.o, vec![2, 2, 1]);
        assert_eq!(prof.big_n, 5);
        assert_eq!(prof.gamma_j, vec![0, 0]);
        assert_eq!(prof.gamma, 0);
        assert_eq!(prof.l, 13);
        assert_eq!(prof.lh, 10);
        assert_eq!(prof.v_cols.len(), 12);
        // row blocks: 4 + 4 + 5
        assert_eq!(prof.block_range(1), 0..4);
        assert_eq!(prof.block_range(2), 4..8);
        assert_eq!(prof.block_range(3), 8..13);
    }

    #[test]
    fn profile_example2() {
        let sys = example2();
        let prof = profile(&sys.h).unwrap();
        assert_eq!(prof.o, vec![1, 2, 2, 1]);
        assert_eq!(prof.big_n, 6);
        assert_eq!(prof.gamma_j, vec![1, 0, 0]);
        assert_eq!(prof.gamma, 1);
        assert_eq!(prof.l, 18);
        assert_eq!(prof.lh, 14);
    }

    #[test]
    fn profile_order_zero_system() {
        let sys = parse_document(
            "field: Q\n\
             params: u1, u2\n\
             x1 = u1 + u2\n\
             x2 = u1 - u2\n\
             x3 = u1\n",
        )
        .unwrap()
        .system;
        let prof = profile(&sys.h).unwrap();
        assert_eq!(prof.big_n, 0);
        assert_eq!(prof.l, 3);
        assert_eq!(
            prof.v_cols,
            vec![DerVar::u(2, 0), DerVar::u(1, 0)]
        );
        assert!(matches!(
            build_mlh(&sys.h, &prof),
            Err(Error::EmptyHomogeneousSet)
        ));
    }

    #[test]
    fn prolonged_set_counts() {
        let sys = example1();
        let prof = profile(&sys.h).unwrap();
        let ps = build_ps(&sys.h, &sys.a, &prof);
        assert_eq!(ps.len(), 13);
        // first row is d^3 F_1: slot x1^(3)
        assert_eq!(ps[0].coeff(&DerVar::x(1, 3)), FieldElem::one());
        // last row is F_3 itself: slot x3
        assert_eq!(ps[12].coeff(&DerVar::x(3, 0)), FieldElem::one());
        // every parameter derivative stays inside the column window
        for row in &ps {
            for v in row.vars() {
                if v.kind == VarKind::U {
                    assert!(prof.v_cols.contains(v));
                }
            }
        }
    }

    #[test]
    fn leading_matrix_from_definition() {
        // Example with mixed-order equations: computed from the definition,
        // column order u_{n-1} .. u_1.
        let sys = example2();
        let prof = profile(&sys.h).unwrap();
        let s = leading_matrix(&sys.h, &prof);
        let expect: Vec<i64> = vec![1, -3, -2, -1, 3, -1, 1, 0, 0, -2, 3, 2];
        for r in 0..4 {
            for c in 0..3 {
                assert_eq!(s.at(r, c), &FieldElem::from_int(expect[r * 3 + c]));
            }
        }
        assert_eq!(s.rank(), 3);
    }

    #[test]
    fn leading_matrix_rank_example1() {
        let sys = example1();
        let prof = profile(&sys.h).unwrap();
        let s = leading_matrix(&sys.h, &prof);
        // column order: u2 then u1; the u1'' coefficient of F_1 is -1
        let expect: Vec<i64> = vec![-3, -1, -1, 0, 1, 1];
        for r in 0..3 {
            for c in 0..2 {
                assert_eq!(s.at(r, c), &FieldElem::from_int(expect[r * 2 + c]));
            }
        }
        assert_eq!(s.rank(), 2);
    }

    #[test]
    fn last_column_records_shifts() {
        let sys = parse_document(
            "field: Q(t)\n\
             params: u1, u2\n\
             x1 = 3 - u1' - u1'' + u2 + 4*u2' + 3*u2''\n\
             x2 = -u1' - u2 + u2''\n\
             x3 = -2 - u1' - t*u2 - u2'\n",
        )
        .unwrap()
        .system;
        let prof = profile(&sys.h).unwrap();
        let (block, last) = build_ml(&sys.h, &sys.a, &prof);
        assert_eq!(block.rows(), 13);
        assert_eq!(block.cols(), 12);
        assert_eq!(last[0].var, DerVar::x(1, 3));
        assert!(last[0].shift.is_zero()); // d^3(3) = 0
        assert_eq!(last[3].var, DerVar::x(1, 0));
        assert_eq!(last[3].shift, FieldElem::from_int(3));
        assert_eq!(last[12].var, DerVar::x(3, 0));
        assert_eq!(last[12].shift, FieldElem::from_int(-2));
    }

    #[test]
    fn mlh_is_square_of_size_lh() {
        let sys = example1();
        let prof = profile(&sys.h).unwrap();
        let m = build_mlh(&sys.h, &prof).unwrap();
        assert_eq!(m.rows(), 10);
        assert_eq!(m.cols(), 10);
    }

    /// Brute-force oracle: determinant of the full L x L matrix with the
    /// symbolic last column, expanded over all permutations. Every
    /// permutation picks exactly one symbolic entry, so products stay
    /// linear.
    fn brute_force_dcres(
        h: &[LinDiffPoly<FieldElem>],
        a: &[FieldElem],
        prof: &SystemProfile,
    ) -> LinDiffPoly<FieldElem> {
        let (block, last) = build_ml(h, a, prof);
        let l = prof.l;
        let mut perm: Vec<usize> = (0..l).collect();
        let mut out = LinDiffPoly::zero();
        permute(&mut perm, 0, &mut |perm, sign| {
            // entry (r, perm[r]): column l-1 is symbolic
            let mut coeff = FieldElem::one();
            let mut sym: Option<usize> = None;
            for (r, &c) in perm.iter().enumerate() {
                if c == l - 1 {
                    sym = Some(r);
                } else {
                    coeff = coeff.mul(block.at(r, c));
                    if coeff.is_zero() {
                        return;
                    }
                }
            }
            let r = sym.expect("one symbolic pick per permutation");
            if sign < 0 {
                coeff = coeff.neg();
            }
            let mut term = LinDiffPoly::term(last[r].var, coeff.clone());
            term.add_constant(&coeff.mul(&last[r].shift).neg());
            out = out.add(&term);
        });
        out
    }

    fn permute(perm: &mut Vec<usize>, k: usize, visit: &mut impl FnMut(&[usize], i32)) {
        let n = perm.len();
        if k == n {
            // compute permutation sign by counting inversions
            let mut sign = 1;
            for i in 0..n {
                for j in i + 1..n {
                    if perm[i] > perm[j] {
                        sign = -sign;
                    }
                }
            }
            visit(perm, sign);
            return;
        }
        for i in k..n {
            perm.swap(k, i);
            permute(perm, k + 1, visit);
            perm.swap(k, i);
        }
    }

    #[test]
    fn dcres_matches_brute_force_on_small_systems() {
        // 2-equation, 1-parameter systems small enough for permutation
        // expansion
        for text in [
            "field: Q\nparams: u1\nx1 = u1 + 2*u1'\nx2 = -u1 + u1''\n",
            "field: Q\nparams: u1\nx1 = 3*u1'\nx2 = u1 - u1'\n",
            "field: Q\nparams: u1\nx1 = 1 + u1 - u1''\nx2 = -2 + u1 + u1''\n",
            "field: Q(t)\nparams: u1\nx1 = t*u1 + u1'\nx2 = u1 - t*u1'\n",
        ] {
            let sys = parse_document(text).unwrap().system;
            let prof = profile(&sys.h).unwrap();
            let fast = dcres(&sys.h, &sys.a, &prof);
            let slow = brute_force_dcres(&sys.h, &sys.a, &prof);
            assert_eq!(fast, slow, "system: {}", text);
        }
    }
}
