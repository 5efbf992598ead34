//! Debug serialization of problems in the sparse SDPA text format (`.dat-s`),
//! for cross-checking against external solvers.
//!
//! Matrix blocks map one-to-one; free scalar variables are encoded as the
//! customary split `y = u - v` in one trailing diagonal block (negative block
//! size in the header), two entries per variable. Entries are written one per
//! line as `<cons> <block> <i> <j> <value>` with 1-based indices, constraint
//! 0 being the objective.

use super::SdpProblem;
use std::fmt::Write;

pub fn to_sdpa_sparse(prob: &SdpProblem) -> String {
    let mut out = String::new();
    let nblocks = prob.block_dims.len() + usize::from(prob.free_vars > 0);
    let _ = writeln!(out, "* lyapcert SDP dump (free vars split as u - v in the last diagonal block)");
    let _ = writeln!(out, "{}", prob.constraints.len());
    let _ = writeln!(out, "{nblocks}");
    let mut dims: Vec<String> = prob.block_dims.iter().map(|d| d.to_string()).collect();
    if prob.free_vars > 0 {
        dims.push(format!("-{}", 2 * prob.free_vars));
    }
    let _ = writeln!(out, "{}", dims.join(" "));
    let rhs: Vec<String> = prob
        .constraints
        .iter()
        .map(|c| format!("{:.17e}", c.rhs))
        .collect();
    let _ = writeln!(out, "{}", rhs.join(" "));

    let free_block = prob.block_dims.len() + 1;
    let mut emit = |cons: usize, expr: &super::LinearExpr| {
        for t in &expr.matrix {
            let (i, j) = if t.row <= t.col {
                (t.row, t.col)
            } else {
                (t.col, t.row)
            };
            let _ = writeln!(
                out,
                "{cons} {} {} {} {:.17e}",
                t.block + 1,
                i + 1,
                j + 1,
                t.value
            );
        }
        for &(j, v) in &expr.free {
            let _ = writeln!(out, "{cons} {free_block} {} {} {:.17e}", 2 * j + 1, 2 * j + 1, v);
            let _ = writeln!(out, "{cons} {free_block} {} {} {:.17e}", 2 * j + 2, 2 * j + 2, -v);
        }
    };
    if !prob.objective.is_zero() {
        emit(0, &prob.objective);
    }
    for (i, c) in prob.constraints.iter().enumerate() {
        emit(i + 1, &c.expr);
    }
    out
}
