//! Temporary diagnostics (removed before finalizing).

use dppe_core::parse::parse_document;
use dppe_core::perturb::{default_phi, perturb};
use dppe_core::resultant::{build_ml, dcres, dcres_h, leading_matrix, profile};
use dppe_core::{decompose, id_content_primitive};

#[test]
fn diag_example1() {
    let sys = parse_document(
        "field: Q\n\
         params: u1, u2\n\
         x1 = -u1 + u2 - u1' + u1'' + 4*u2' + 3*u2''\n\
         x2 = -u2 - u1' + u2''\n\
         x3 = -u2 - u1' - u2'\n\
         phi: u1'' + u2, u1, u2'\n",
    )
    .unwrap();
    let phi = parse_document(
        "field: Q\n\
         params: u1, u2\n\
         x1 = -u1 + u2 - u1' + u1'' + 4*u2' + 3*u2''\n\
         x2 = -u2 - u1' + u2''\n\
         x3 = -u2 - u1' - u2'\n\
         phi: u1'' + u2, u1, u2'\n",
    )
    .unwrap()
    .phi
    .unwrap();
    let sys = sys.system;
    let prof = profile(&sys.h).unwrap();
    println!("L={} Lh={} gamma={} N={}", prof.l, prof.lh, prof.gamma, prof.big_n);
    let s = leading_matrix(&sys.h, &prof);
    println!("rank S = {}", s.rank());

    // unperturbed resultant should vanish
    let un = dcres(&sys.h, &sys.a, &prof);
    println!("unperturbed dcres zero? {}", un.is_zero());

    let pert = perturb(&sys, &phi).unwrap();
    let dc = dcres(&pert.h, &pert.a, &prof);
    let low = dc.lowest_p_degree();
    println!("lowest p degree = {:?}", low);
    let a_d = dc.p_slice(low.unwrap());
    println!("A_D = {}", a_d);
    let (ops, residual) = decompose(&a_d, &sys);
    println!("residual = {}", residual);
    for (i, op) in ops.iter().enumerate() {
        println!("L{} = {}", i + 1, op);
    }
    let (content, prim) = id_content_primitive(&a_d, &sys).unwrap();
    println!("content = {}", content);
    println!("prim = {}", prim);

    let dh = dcres_h(&pert.h, &prof).unwrap();
    println!("dcres_h = {}", dh);
    println!("deg_p dcres_h = {:?}", dh.degree());

    let (block, _) = build_ml(&sys.h, &sys.a, &prof);
    println!("rank M_L-1 = {} (L = {})", block.rank(), prof.l);
}
