//! 0/1 feasibility models for "is this instance `t`-colorable?".
//!
//! Binary `x_v_c` means vertex `v` takes color `c` (both 1-based, vertices
//! numbered in colex order). Each vertex takes exactly one color, and for
//! every edge `e` and color `c` at most `r - 1` members of `e` take `c`. The
//! objective is constant, so the model is a pure feasibility question.
//!
//! Two textual dialects are written, one constraint per line:
//!
//! * [`LpDialect::LpSolve`], the `lp_solve` LP format
//!   (`min: ;`, rows ending in `;`, a trailing `bin` declaration);
//! * [`LpDialect::Cplex`], the CPLEX LP format read by CBC, GLPK and HiGHS.

use std::fmt::Write as _;
use std::io::Write;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::hypergraph::KneserInstance;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum LpDialect {
    #[default]
    LpSolve,
    Cplex,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct IlpStats {
    pub variables: usize,
    pub assignment_rows: usize,
    pub edge_rows: usize,
    pub edges: usize,
}

impl IlpStats {
    pub fn constraints(&self) -> usize {
        self.assignment_rows + self.edge_rows
    }
}

/// Writes the `t`-coloring model of `instance` to `sink`.
///
/// `max_edges` bounds edge enumeration; exceeding it is a budget error and
/// nothing is written.
pub fn export_ilp(
    instance: &KneserInstance,
    t: usize,
    dialect: LpDialect,
    max_edges: usize,
    sink: &mut impl Write,
) -> Result<IlpStats> {
    if t == 0 {
        return Err(Error::invalid("a coloring model needs at least one color"));
    }
    let edges = instance.edges(max_edges)?;
    let nv = instance.len();
    let rhs = instance.r() - 1;
    let stats = IlpStats {
        variables: nv * t,
        assignment_rows: nv,
        edge_rows: edges.len() * t,
        edges: edges.len(),
    };

    let var = |v: usize, c: usize| format!("x_{}_{}", v + 1, c);
    let mut out = String::new();
    let header = format!(
        "KG^{}([{}],{}) {}, {} colors: {} vertices, {} edges",
        instance.r(),
        instance.n(),
        instance.k(),
        instance.variant(),
        t,
        nv,
        edges.len()
    );

    match dialect {
        LpDialect::LpSolve => {
            writeln!(out, "/* {header} */").ok();
            writeln!(out, "min: ;").ok();
            writeln!(out).ok();
            for v in 0..nv {
                let terms: Vec<String> = (1..=t).map(|c| var(v, c)).collect();
                writeln!(out, "a{}: {} = 1;", v + 1, terms.join(" + ")).ok();
            }
            for (e, edge) in edges.iter().enumerate() {
                for c in 1..=t {
                    let terms: Vec<String> = edge.iter().map(|&v| var(v, c)).collect();
                    writeln!(out, "e{}_{}: {} <= {};", e + 1, c, terms.join(" + "), rhs).ok();
                }
            }
            if nv > 0 {
                writeln!(out).ok();
                let all: Vec<String> = (0..nv)
                    .flat_map(|v| (1..=t).map(move |c| (v, c)))
                    .map(|(v, c)| var(v, c))
                    .collect();
                writeln!(out, "bin {};", all.join(", ")).ok();
            }
        }
        LpDialect::Cplex => {
            writeln!(out, "\\ {header}").ok();
            writeln!(out, "Minimize").ok();
            if nv > 0 {
                writeln!(out, " obj: 0 {}", var(0, 1)).ok();
            } else {
                writeln!(out, " obj: 0").ok();
            }
            writeln!(out, "Subject To").ok();
            for v in 0..nv {
                let terms: Vec<String> = (1..=t).map(|c| var(v, c)).collect();
                writeln!(out, " a{}: {} = 1", v + 1, terms.join(" + ")).ok();
            }
            for (e, edge) in edges.iter().enumerate() {
                for c in 1..=t {
                    let terms: Vec<String> = edge.iter().map(|&v| var(v, c)).collect();
                    writeln!(out, " e{}_{}: {} <= {}", e + 1, c, terms.join(" + "), rhs).ok();
                }
            }
            if nv > 0 {
                writeln!(out, "Binary").ok();
                for v in 0..nv {
                    for c in 1..=t {
                        writeln!(out, " {}", var(v, c)).ok();
                    }
                }
            }
            writeln!(out, "End").ok();
        }
    }
    sink.write_all(out.as_bytes())?;
    Ok(stats)
}
