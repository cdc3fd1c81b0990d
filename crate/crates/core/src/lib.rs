//! Exact differential elimination for systems of linear differential
//! polynomial parametric equations.
//!
//! Given `n` equations `x_i = P_i(u_1, ..., u_{n-1})` that are linear in the
//! parameters and their derivatives, over `Q` or `Q(t)`, this crate decides
//! whether the implicit ideal of the parametrization has dimension `n - 1`
//! and, when it does, computes the implicit equation. The decision runs
//! through a perturbed differential resultant: the system is deformed by a
//! constant `p`, the resultant of the deformed system is developed along its
//! symbolic last column, and the lowest-degree coefficient in `p` provides a
//! nonzero member of the implicit ideal whose content and co-order settle
//! the dimension question. An independent characteristic-set oracle answers
//! the same question by Gaussian elimination over the prolonged system.
//!
//! All arithmetic is exact: big rationals, canonical rational functions of
//! `t`, and fraction-free determinant elimination. The minor determinants of
//! the last-column development are independent; with the `parallel` feature
//! (default) they are evaluated on a rayon pool, otherwise sequentially.

pub mod dpoly;
pub mod error;
pub mod field;
pub mod implicitize;
pub mod matrix;
pub mod oracle;
pub mod ore;
pub mod parse;
pub mod perturb;
pub mod pertpoly;
pub mod resultant;

pub use dpoly::{co_order, decompose, id_content_primitive, substitute};
pub use dpoly::{Coeff, DerVar, DppeSystem, LinDiffPoly, VarKind};
pub use error::Error;
pub use field::{FieldElem, FieldTag, Poly, Rat};
pub use implicitize::{run, Certificate, Decision, Options};
pub use matrix::Matrix;
pub use oracle::{charset, echelon_basis, lin_prem, Charset, EchelonBasis};
pub use ore::OrePoly;
pub use parse::{parse_document, ParsedSystem};
pub use perturb::{default_phi, perturb, Perturbation, PerturbedSystem};
pub use pertpoly::PertPoly;
pub use resultant::{build_ml, build_mlh, build_ps, dcres, dcres_h, leading_matrix, profile,
    sub_leading, SystemProfile};
