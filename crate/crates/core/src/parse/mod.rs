//! Parser for system documents and the individual expression grammars.
//!
//! A document consists of a `field:` line (`Q` or `Q(t)`), a `params:` line
//! declaring `u1, ..., u<n-1>`, one equation line `x<i> = <linear expr>` per
//! implicit variable, and an optional `phi:` line with a comma-separated
//! perturbation. `#` starts a comment.

mod expr;

pub use expr::{Allow, Node};

use crate::dpoly::{DppeSystem, LinDiffPoly, VarKind};
use crate::error::Error;
use crate::field::{FieldElem, FieldTag};
use crate::ore::OrePoly;
use crate::perturb::Perturbation;

#[derive(Clone, Debug)]
pub struct ParsedSystem {
    pub system: DppeSystem,
    pub phi: Option<Perturbation>,
}

/// Parses a scalar coefficient expression in `t`.
pub fn parse_scalar(text: &str) -> Result<FieldElem, Error> {
    let node = expr::parse_expr(text, 1, 0)?;
    expr::eval_scalar(&node, 1)
}

/// Parses a differential operator expression in `d` (and `t`).
pub fn parse_ore(text: &str) -> Result<OrePoly, Error> {
    let node = expr::parse_expr(text, 1, 0)?;
    expr::eval_ore(&node, 1)
}

/// Parses a linear differential polynomial; `allow` selects which variable
/// families may occur.
pub fn parse_linear(text: &str, allow: Allow) -> Result<LinDiffPoly<FieldElem>, Error> {
    let node = expr::parse_expr(text, 1, 0)?;
    expr::eval_linear(&node, allow, 1)
}

/// Convenience for test expectations: a polynomial in the implicit
/// variables over `Q(t)`.
pub fn parse_x_poly(text: &str) -> Result<LinDiffPoly<FieldElem>, Error> {
    parse_linear(text, Allow { u: false, x: true, t: true })
}

/// Parses a comma-separated perturbation list (homogeneous, parameters
/// only).
pub fn parse_phi_list(text: &str, line: usize, n: usize) -> Result<Perturbation, Error> {
    parse_phi_list_at(text, line, 0, n)
}

fn parse_phi_list_at(
    text: &str,
    line: usize,
    col0: usize,
    n: usize,
) -> Result<Perturbation, Error> {
    let nodes = expr::parse_expr_list(text, line, col0)?;
    if nodes.len() != n {
        return Err(Error::semantic(
            line,
            format!("perturbation needs {} components, found {}", n, nodes.len()),
        ));
    }
    let mut phi = Vec::with_capacity(n);
    for node in &nodes {
        let p = expr::eval_linear(node, Allow { u: true, x: false, t: true }, line)?;
        if !p.constant().is_zero() {
            return Err(Error::semantic(
                line,
                "perturbation components must be homogeneous",
            ));
        }
        phi.push(p);
    }
    Ok(Perturbation { phi })
}

pub fn parse_document(text: &str) -> Result<ParsedSystem, Error> {
    let mut field: Option<(FieldTag, usize)> = None;
    let mut params: Option<(usize, usize)> = None; // (count, line)
    let mut equations: Vec<(usize, String, usize, usize)> = Vec::new(); // (index, rhs, line, col0)
    let mut phi_line: Option<(String, usize, usize)> = None;

    for (ln, raw) in text.lines().enumerate() {
        let line = ln + 1;
        let stripped = match raw.find('#') {
            Some(pos) => &raw[..pos],
            None => raw,
        };
        let s = stripped.trim();
        let base = stripped.len() - stripped.trim_start().len();
        if s.is_empty() {
            continue;
        }
        if let Some(rest) = s.strip_prefix("field:") {
            if field.is_some() {
                return Err(Error::semantic(line, "duplicate field line"));
            }
            let tag = match rest.trim() {
                "Q" => FieldTag::Q,
                "Q(t)" => FieldTag::Qt,
                other => {
                    return Err(Error::semantic(
                        line,
                        format!("unknown field '{}', expected Q or Q(t)", other),
                    ))
                }
            };
            field = Some((tag, line));
        } else if let Some(rest) = s.strip_prefix("params:") {
            if params.is_some() {
                return Err(Error::semantic(line, "duplicate params line"));
            }
            let names: Vec<&str> = rest.split(',').map(str::trim).collect();
            for (k, name) in names.iter().enumerate() {
                let expect = format!("u{}", k + 1);
                if *name != expect {
                    return Err(Error::semantic(
                        line,
                        format!("parameters must be u1, u2, ... in order; found '{}'", name),
                    ));
                }
            }
            params = Some((names.len(), line));
        } else if let Some(rest) = s.strip_prefix("phi:") {
            if phi_line.is_some() {
                return Err(Error::semantic(line, "duplicate phi line"));
            }
            let pad = rest.len() - rest.trim_start().len();
            phi_line = Some((rest.trim().to_string(), line, base + 4 + pad));
        } else if let Some(eq) = s.find('=') {
            let lhs = s[..eq].trim();
            let tail = &s[eq + 1..];
            let pad = tail.len() - tail.trim_start().len();
            let rhs = tail.trim();
            let index = lhs
                .strip_prefix('x')
                .and_then(|d| d.parse::<usize>().ok())
                .filter(|&i| i >= 1)
                .ok_or_else(|| {
                    Error::semantic(line, format!("left side must be x<i>, found '{}'", lhs))
                })?;
            if equations.iter().any(|(i, _, _, _)| *i == index) {
                return Err(Error::semantic(
                    line,
                    format!("duplicate equation for x{}", index),
                ));
            }
            equations.push((index, rhs.to_string(), line, base + eq + 1 + pad));
        } else {
            return Err(Error::semantic(line, format!("unrecognized line '{}'", s)));
        }
    }

    let (field, _) = field.ok_or_else(|| Error::semantic(0, "missing field line"))?;
    let (m, params_line) = params.ok_or_else(|| Error::semantic(0, "missing params line"))?;
    let n = equations.len();
    if n < 2 {
        return Err(Error::semantic(0, "need at least 2 equations"));
    }
    if m != n - 1 {
        return Err(Error::semantic(
            params_line,
            format!("{} equations need {} parameters, found {}", n, n - 1, m),
        ));
    }
    equations.sort_by_key(|(i, _, _, _)| *i);
    for (pos, (i, _, line, _)) in equations.iter().enumerate() {
        if *i != pos + 1 {
            return Err(Error::semantic(
                *line,
                format!("equations must cover x1..x{} exactly", n),
            ));
        }
    }

    let allow = Allow { u: true, x: false, t: field == FieldTag::Qt };
    let mut a = Vec::with_capacity(n);
    let mut h = Vec::with_capacity(n);
    for (i, rhs, line, col0) in &equations {
        let node = expr::parse_expr(rhs, *line, *col0)?;
        let p = expr::eval_linear(&node, allow, *line)?;
        if let Some(v) = p.vars().find(|v| v.index > m) {
            return Err(Error::semantic(
                *line,
                format!("u{} is not declared in params", v.index),
            ));
        }
        let _ = i;
        a.push(p.constant().clone());
        let mut hi = p.neg();
        hi.set_constant(FieldElem::zero());
        h.push(hi);
    }

    for j in 1..=m {
        if !h.iter().any(|hi| hi.ord_in(VarKind::U, j) >= 0) {
            return Err(Error::semantic(
                params_line,
                format!("parameter u{} is never used", j),
            ));
        }
    }

    let system = DppeSystem::new(field, a, h).map_err(|e| match e {
        Error::InvalidSystem(msg) => Error::semantic(0, msg),
        other => other,
    })?;

    let phi = match phi_line {
        None => None,
        Some((text, line, col0)) => {
            let p = parse_phi_list_at(&text, line, col0, n)?;
            if let Some(v) = p
                .phi
                .iter()
                .flat_map(|c| c.vars())
                .find(|v| v.index > m)
            {
                return Err(Error::semantic(
                    line,
                    format!("u{} is not declared in params", v.index),
                ));
            }
            Some(p)
        }
    };

    Ok(ParsedSystem { system, phi })
}

/// Renders a system (and optional perturbation) back into the document
/// grammar. `parse_document` of the output reproduces the system.
pub fn render_system(sys: &DppeSystem, phi: Option<&Perturbation>) -> String {
    let mut out = String::new();
    out.push_str(&format!("field: {}\n", sys.field));
    let params: Vec<String> = (1..sys.n()).map(|j| format!("u{}", j)).collect();
    out.push_str(&format!("params: {}\n", params.join(", ")));
    for i in 1..=sys.n() {
        out.push_str(&format!("x{} = {}\n", i, sys.p(i)));
    }
    if let Some(p) = phi {
        let parts: Vec<String> = p.phi.iter().map(|c| c.to_string()).collect();
        out.push_str(&format!("phi: {}\n", parts.join(", ")));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dpoly::DerVar;
    use crate::field::rat_frac;

    #[test]
    fn parses_example_system() {
        let doc = "# a three-equation system\n\
                   field: Q\n\
                   params: u1, u2\n\
                   x1 = -u1 + u2 - u1' + u1'' + 4*u2' + 3*u2''\n\
                   x2 = -u2 - u1' + u2''\n\
                   x3 = -u2 - u1' - u2'\n\
                   phi: u1'' + u2, u1, u2'\n";
        let parsed = parse_document(doc).unwrap();
        let sys = &parsed.system;
        assert_eq!(sys.n(), 3);
        assert!(sys.a.iter().all(|a| a.is_zero()));
        // H_1 = u1 - u2 + u1'' - u1' ... with the signs of F_1
        assert_eq!(sys.h[0].coeff(&DerVar::u(1, 0)), FieldElem::one());
        assert_eq!(sys.h[0].coeff(&DerVar::u(2, 2)), FieldElem::from_int(-3));
        let phi = parsed.phi.unwrap();
        assert_eq!(phi.phi.len(), 3);
        assert_eq!(phi.phi[0].coeff(&DerVar::u(1, 2)), FieldElem::one());
    }

    #[test]
    fn rejects_nonlinear_terms() {
        let doc = "field: Q\nparams: u1\nx1 = u1*u1\nx2 = u1\n";
        match parse_document(doc) {
            Err(Error::Semantic { line, msg }) => {
                assert_eq!(line, 3);
                assert!(msg.contains("nonlinear"));
            }
            other => panic!("expected a nonlinear error, got {:?}", other),
        }
    }

    #[test]
    fn rejects_x_on_right_side() {
        let doc = "field: Q\nparams: u1\nx1 = u1 + x2\nx2 = u1\n";
        assert!(matches!(parse_document(doc), Err(Error::Semantic { .. })));
    }

    #[test]
    fn rejects_t_over_q() {
        let doc = "field: Q\nparams: u1\nx1 = t*u1\nx2 = u1\n";
        assert!(matches!(parse_document(doc), Err(Error::Semantic { .. })));
    }

    #[test]
    fn rejects_unused_parameter() {
        let doc = "field: Q\nparams: u1, u2\nx1 = u1\nx2 = u1'\nx3 = u1''\n";
        assert!(matches!(parse_document(doc), Err(Error::Semantic { .. })));
    }

    #[test]
    fn rejects_all_constant_right_sides() {
        let doc = "field: Q\nparams: u1\nx1 = 1\nx2 = 2\n";
        assert!(parse_document(doc).is_err());
    }

    #[test]
    fn derivative_notations_agree() {
        let a = parse_linear("u1'' + u2", Allow { u: true, x: false, t: false }).unwrap();
        let b = parse_linear("u1^(2) + u2", Allow { u: true, x: false, t: false }).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn scalar_expressions() {
        assert_eq!(parse_scalar("1/2 + 1/3").unwrap(), FieldElem::from_rat(rat_frac(5, 6)));
        let e = parse_scalar("(t - 1)/(t + 1)").unwrap();
        assert!(!e.is_constant());
        assert!(parse_scalar("1/0").is_err());
    }

    #[test]
    fn ore_expressions() {
        let a = parse_ore("(d^2 + 1)*(d + 1)^2").unwrap();
        let b = parse_ore("d^4 + 2*d^3 + 2*d^2 + 2*d + 1").unwrap();
        assert_eq!(a, b);
        // noncommutative: d*t != t*d
        let dt = parse_ore("d*t").unwrap();
        let td = parse_ore("t*d").unwrap();
        assert_ne!(dt, td);
        assert_eq!(dt.sub(&td), OrePoly::one());
    }

    #[test]
    fn round_trip_canonical_forms() {
        let doc = "field: Q(t)\n\
                   params: u1, u2\n\
                   x1 = 3 - u1' - u1'' + u2 + 4*u2' + 3*u2''\n\
                   x2 = -u1' - u2 + u2''\n\
                   x3 = -2 - u1' - t*u2 - u2'\n";
        let parsed = parse_document(doc).unwrap();
        let rendered = render_system(&parsed.system, None);
        let reparsed = parse_document(&rendered).unwrap();
        assert_eq!(parsed.system.a, reparsed.system.a);
        assert_eq!(parsed.system.h, reparsed.system.h);
    }

    #[test]
    fn syntax_errors_carry_position() {
        match parse_document("field: Q\nparams: u1\nx1 = u1 +\nx2 = u1\n") {
            Err(Error::Syntax { line, col, .. }) => {
                assert_eq!(line, 3);
                assert!(col >= 9);
            }
            other => panic!("expected a syntax error, got {:?}", other),
        }
    }
}
