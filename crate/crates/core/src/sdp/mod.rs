//! Dense floating-point semidefinite feasibility solver.
//!
//! Problems couple symmetric matrix variables (one per block, constrained
//! positive semidefinite) with scalar free variables through linear equality
//! constraints. Pure feasibility problems (empty objective) are solved by
//! maximizing a uniform slack `lambda` with `G_b - lambda*I >= 0` for every
//! block, which turns the open condition "strictly feasible" into a
//! computable margin; a nonzero objective is maximized directly instead.
//!
//! The solver is a self-contained primal-dual interior-point method with
//! Nesterov-Todd scaling and a Mehrotra predictor-corrector step, on dense
//! linear algebra. Gram matrices at desk scale stay far below the sizes where
//! sparsity exploitation would pay off.

use std::fmt;

mod ipm;
mod linalg;
mod sdpa;

pub use ipm::{IpmOptions, IpmStatus};
pub use linalg::{sym_eigen, sym_min_eig, Mat};
pub use sdpa::to_sdpa_sparse;

/// Symmetric matrix in double precision, stored as the packed upper triangle.
#[derive(Clone, Debug, PartialEq)]
pub struct SymMatrixF {
    dim: usize,
    /// Row-major upper triangle: entry `(i, j)` with `i <= j` lives at
    /// `i*dim - i*(i-1)/2 + (j - i)`.
    upper: Vec<f64>,
}

impl SymMatrixF {
    pub fn zeros(dim: usize) -> SymMatrixF {
        SymMatrixF {
            dim,
            upper: vec![0.0; dim * (dim + 1) / 2],
        }
    }

    pub fn identity(dim: usize) -> SymMatrixF {
        let mut m = SymMatrixF::zeros(dim);
        for i in 0..dim {
            m.set(i, i, 1.0);
        }
        m
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    fn offset(&self, i: usize, j: usize) -> usize {
        let (i, j) = if i <= j { (i, j) } else { (j, i) };
        i * self.dim - i * (i + 1) / 2 + j
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.upper[self.offset(i, j)]
    }

    /// Sets the `(i, j)` and `(j, i)` entries at once.
    pub fn set(&mut self, i: usize, j: usize, v: f64) {
        let k = self.offset(i, j);
        self.upper[k] = v;
    }

    pub fn from_fn(dim: usize, mut f: impl FnMut(usize, usize) -> f64) -> SymMatrixF {
        let mut m = SymMatrixF::zeros(dim);
        for i in 0..dim {
            for j in i..dim {
                m.set(i, j, f(i, j));
            }
        }
        m
    }

    pub fn to_dense(&self) -> Mat {
        let mut m = Mat::zeros(self.dim);
        for i in 0..self.dim {
            for j in i..self.dim {
                let v = self.get(i, j);
                m.set(i, j, v);
                m.set(j, i, v);
            }
        }
        m
    }

    pub fn from_dense(m: &Mat) -> SymMatrixF {
        SymMatrixF::from_fn(m.n, |i, j| 0.5 * (m.get(i, j) + m.get(j, i)))
    }

    pub fn max_abs(&self) -> f64 {
        self.upper.iter().fold(0.0, |m, x| m.max(x.abs()))
    }
}

/// One coefficient of a linear functional on a matrix block: contributes
/// `value` at the symmetric entry pair `(row, col)`/`(col, row)`, so the
/// functional reads `value * G[row][col]` on the diagonal and
/// `2 * value * G[row][col]` off it.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MatrixCoeff {
    pub block: usize,
    pub row: usize,
    pub col: usize,
    pub value: f64,
}

/// A linear functional over all block entries and free scalars.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct LinearExpr {
    pub matrix: Vec<MatrixCoeff>,
    pub free: Vec<(usize, f64)>,
}

impl LinearExpr {
    pub fn is_zero(&self) -> bool {
        self.matrix.is_empty() && self.free.is_empty()
    }
}

/// A single equality constraint `expr = rhs`.
#[derive(Clone, Debug, PartialEq)]
pub struct Constraint {
    pub expr: LinearExpr,
    pub rhs: f64,
}

/// A semidefinite feasibility problem with equality constraints.
#[derive(Clone, Debug)]
pub struct SdpProblem {
    pub block_dims: Vec<usize>,
    pub free_vars: usize,
    pub constraints: Vec<Constraint>,
    /// Maximized when nonzero; an all-zero objective requests pure
    /// feasibility, in which case the uniform slack is maximized instead.
    pub objective: LinearExpr,
}

impl SdpProblem {
    pub fn feasibility(block_dims: Vec<usize>, free_vars: usize) -> SdpProblem {
        SdpProblem {
            block_dims,
            free_vars,
            constraints: Vec::new(),
            objective: LinearExpr::default(),
        }
    }

    pub fn push(&mut self, expr: LinearExpr, rhs: f64) {
        self.constraints.push(Constraint { expr, rhs });
    }

    fn validate(&self) -> Result<(), String> {
        if self.constraints.is_empty() {
            return Err("problem has no constraints".into());
        }
        for (ci, c) in self.constraints.iter().enumerate() {
            for t in &c.expr.matrix {
                let dim = *self
                    .block_dims
                    .get(t.block)
                    .ok_or_else(|| format!("constraint {ci}: block {} out of range", t.block))?;
                if t.row >= dim || t.col >= dim {
                    return Err(format!("constraint {ci}: entry out of range"));
                }
            }
            for &(j, _) in &c.expr.free {
                if j >= self.free_vars {
                    return Err(format!("constraint {ci}: free variable {j} out of range"));
                }
            }
        }
        Ok(())
    }

    /// Value of a linear functional at a candidate point.
    fn eval_expr(&self, expr: &LinearExpr, blocks: &[Mat], free: &[f64]) -> f64 {
        let mut acc = 0.0;
        for t in &expr.matrix {
            let w = if t.row == t.col { 1.0 } else { 2.0 };
            acc += w * t.value * blocks[t.block].get(t.row, t.col);
        }
        for &(j, v) in &expr.free {
            acc += v * free[j];
        }
        acc
    }
}

/// A converged solver answer.
#[derive(Clone, Debug)]
pub struct SdpSolution {
    pub blocks: Vec<SymMatrixF>,
    pub free_values: Vec<f64>,
    /// Largest equality-constraint violation at the returned point.
    pub max_residual: f64,
    /// Certified lower bound on the smallest eigenvalue, per block.
    pub min_eig_lower: Vec<f64>,
    /// The maximized uniform slack (feasibility mode), or the objective value.
    pub optimum: f64,
    pub iterations: usize,
}

#[derive(Clone, Debug)]
pub enum SdpOutcome {
    Solution(SdpSolution),
    /// The slack maximization converged to a clearly negative margin, or the
    /// equalities are inconsistent as a linear system.
    Infeasible { slack: f64 },
    NumericalFailure(String),
}

impl SdpOutcome {
    pub fn solution(&self) -> Option<&SdpSolution> {
        match self {
            SdpOutcome::Solution(s) => Some(s),
            _ => None,
        }
    }
}

/// Factorization failure: a pivot fell below the semidefiniteness threshold.
#[derive(Clone, Debug, PartialEq)]
pub struct NotPsd {
    pub pivot_index: usize,
    pub pivot_value: f64,
}

impl fmt::Display for NotPsd {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "matrix is not positive semidefinite: pivot {} is {:.3e}",
            self.pivot_index, self.pivot_value
        )
    }
}

impl std::error::Error for NotPsd {}

/// `G = L D L^T` with unit lower-triangular `L` and nonnegative diagonal `D`.
///
/// Pivots below `-10 * eps * max|G|` abort with [`NotPsd`]; pivots in the
/// clamp zone `(-threshold, 0]` are set to zero with the column of `L` below
/// them zeroed, which is the right completion for inputs that are PSD up to
/// solver noise.
pub fn ldl_decompose(g: &SymMatrixF) -> Result<(Mat, Vec<f64>), NotPsd> {
    let n = g.dim();
    let threshold = 10.0 * f64::EPSILON * g.max_abs().max(1.0);
    let mut l = Mat::identity(n);
    let mut d = vec![0.0; n];
    for j in 0..n {
        let mut dj = g.get(j, j);
        for k in 0..j {
            dj -= l.get(j, k) * l.get(j, k) * d[k];
        }
        if dj < -threshold {
            return Err(NotPsd {
                pivot_index: j,
                pivot_value: dj,
            });
        }
        if dj <= 0.0 {
            d[j] = 0.0;
            continue; // column of L stays zero below the unit diagonal
        }
        d[j] = dj;
        for i in (j + 1)..n {
            let mut v = g.get(i, j);
            for k in 0..j {
                v -= l.get(i, k) * l.get(j, k) * d[k];
            }
            l.set(i, j, v / dj);
        }
    }
    Ok((l, d))
}

/// Semidefiniteness test for `G - shift*I` by elimination, strict about
/// clamped pivots with mass left below them.
fn psd_shifted(g: &SymMatrixF, shift: f64) -> bool {
    let n = g.dim();
    let scale = g.max_abs().max(shift.abs()).max(1.0);
    let threshold = 10.0 * f64::EPSILON * scale;
    let mut l = Mat::identity(n);
    let mut d = vec![0.0; n];
    for j in 0..n {
        let mut dj = g.get(j, j) - shift;
        for k in 0..j {
            dj -= l.get(j, k) * l.get(j, k) * d[k];
        }
        if dj < -threshold {
            return false;
        }
        if dj <= threshold {
            // a semidefinite matrix has no residual mass under a null pivot
            for i in (j + 1)..n {
                let mut v = g.get(i, j);
                for k in 0..j {
                    v -= l.get(i, k) * l.get(j, k) * d[k];
                }
                if v.abs() > 1e3 * threshold {
                    return false;
                }
            }
            d[j] = 0.0;
            continue;
        }
        d[j] = dj;
        for i in (j + 1)..n {
            let mut v = g.get(i, j);
            for k in 0..j {
                v -= l.get(i, k) * l.get(j, k) * d[k];
            }
            l.set(i, j, v / dj);
        }
    }
    true
}

/// Lower bound on the smallest eigenvalue, within `1e-9 * max(1, |G|)` of the
/// true value, by bisection on the shifted factorization.
pub fn min_eig_estimate(g: &SymMatrixF) -> f64 {
    let n = g.dim();
    if n == 0 {
        return 0.0;
    }
    let scale = g.max_abs().max(1.0);
    // Gershgorin lower bound and the smallest diagonal entry bracket lambda_min
    let mut lo = f64::INFINITY;
    let mut hi = f64::INFINITY;
    for i in 0..n {
        let mut row = 0.0;
        for j in 0..n {
            if j != i {
                row += g.get(i, j).abs();
            }
        }
        lo = lo.min(g.get(i, i) - row);
        hi = hi.min(g.get(i, i));
    }
    hi += 2.0 * f64::EPSILON * scale;
    if !psd_shifted(g, lo) {
        // numerically possible only marginally below the Gershgorin bound
        lo -= 1e-6 * scale;
    }
    let tol = 1e-9 * scale;
    while hi - lo > tol {
        let mid = 0.5 * (lo + hi);
        if psd_shifted(g, mid) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    lo
}

/// Solves the feasibility problem, maximizing the uniform eigenvalue slack;
/// see the module docs for the exact contract.
pub fn sdp_solve(prob: &SdpProblem, tol: f64) -> SdpOutcome {
    assert!(tol > 0.0, "tolerance must be positive");
    if let Err(e) = prob.validate() {
        return SdpOutcome::NumericalFailure(e);
    }
    // Inconsistent equalities never become feasible at any slack; catch them
    // before handing the IPM an unbounded-dual problem.
    if let Some(residual) = linear_inconsistency(prob) {
        if residual > 1e-6 * (1.0 + max_abs_rhs(prob)) {
            return SdpOutcome::Infeasible {
                slack: f64::NEG_INFINITY,
            };
        }
    }
    let feasibility_mode = prob.objective.is_zero();
    let cone = ipm::ConeProblem::from_sdp(prob, feasibility_mode);
    let opts = IpmOptions {
        tol,
        ..IpmOptions::default()
    };
    let res = ipm::solve(&cone, &opts);
    match res.status {
        IpmStatus::Converged => {}
        IpmStatus::MaxIter | IpmStatus::Stalled => {
            // a stalled run with tiny primal residual and a clearly negative
            // slack is an infeasibility certificate in practice
            if feasibility_mode {
                let slack = res.free[cone.nfree - 1];
                if res.primal_res < 1e-6 && slack < -50.0 * tol {
                    return SdpOutcome::Infeasible { slack };
                }
            }
            return SdpOutcome::NumericalFailure(format!(
                "no convergence after {} iterations (primal {:.2e}, dual {:.2e}, gap {:.2e})",
                res.iterations, res.primal_res, res.dual_res, res.rel_gap
            ));
        }
    }

    let (blocks, free_values, optimum) = if feasibility_mode {
        let slack = res.free[cone.nfree - 1];
        if slack < -50.0 * tol {
            return SdpOutcome::Infeasible { slack };
        }
        let blocks: Vec<Mat> = res
            .x_blocks
            .iter()
            .map(|z| {
                let mut x = z.clone();
                for i in 0..x.n {
                    let v = x.get(i, i) + slack;
                    x.set(i, i, v);
                }
                x
            })
            .collect();
        (blocks, res.free[..prob.free_vars].to_vec(), slack)
    } else {
        (res.x_blocks.clone(), res.free.clone(), -res.obj_primal)
    };

    let mut max_residual: f64 = 0.0;
    for c in &prob.constraints {
        let v = prob.eval_expr(&c.expr, &blocks, &free_values);
        max_residual = max_residual.max((v - c.rhs).abs());
    }
    let blocks: Vec<SymMatrixF> = blocks.iter().map(SymMatrixF::from_dense).collect();
    let min_eig_lower = blocks.iter().map(min_eig_estimate).collect();
    SdpOutcome::Solution(SdpSolution {
        blocks,
        free_values,
        max_residual,
        min_eig_lower,
        optimum,
        iterations: res.iterations,
    })
}

fn max_abs_rhs(prob: &SdpProblem) -> f64 {
    prob.constraints
        .iter()
        .fold(0.0, |m, c| m.max(c.rhs.abs()))
}

/// Least-squares check of the equality system over unrestricted unknowns.
/// Returns the residual of the ridge-regularized minimizer, `None` when the
/// system is too large to be worth checking.
fn linear_inconsistency(prob: &SdpProblem) -> Option<f64> {
    // unknowns: packed upper triangles of every block, then the frees
    let mut offsets = Vec::with_capacity(prob.block_dims.len());
    let mut nvar = 0;
    for &d in &prob.block_dims {
        offsets.push(nvar);
        nvar += d * (d + 1) / 2;
    }
    let free_base = nvar;
    nvar += prob.free_vars;
    if nvar > 4000 {
        return None;
    }
    let m = prob.constraints.len();
    let mut rows: Vec<Vec<(usize, f64)>> = Vec::with_capacity(m);
    for c in &prob.constraints {
        let mut row: Vec<(usize, f64)> = Vec::new();
        for t in &c.expr.matrix {
            let d = prob.block_dims[t.block];
            let (i, j) = if t.row <= t.col {
                (t.row, t.col)
            } else {
                (t.col, t.row)
            };
            let idx = offsets[t.block] + i * d - i * (i + 1) / 2 + j;
            let w = if i == j { 1.0 } else { 2.0 };
            row.push((idx, w * t.value));
        }
        for &(j, v) in &c.expr.free {
            row.push((free_base + j, v));
        }
        rows.push(row);
    }
    // normal equations with a tiny ridge
    let mut ata = Mat::zeros(nvar);
    let mut atb = vec![0.0; nvar];
    let mut scale: f64 = 1.0;
    for (row, c) in rows.iter().zip(&prob.constraints) {
        for &(i, vi) in row {
            scale = scale.max(vi.abs());
            atb[i] += vi * c.rhs;
            for &(j, vj) in row {
                let v = ata.get(i, j) + vi * vj;
                ata.set(i, j, v);
            }
        }
    }
    let ridge = 1e-12 * scale * scale;
    for i in 0..nvar {
        let v = ata.get(i, i) + ridge;
        ata.set(i, i, v);
    }
    let l = linalg::cholesky(&ata)?;
    let x = linalg::cholesky_solve(&l, &atb);
    let mut worst: f64 = 0.0;
    for (row, c) in rows.iter().zip(&prob.constraints) {
        let mut acc = -c.rhs;
        for &(i, vi) in row {
            acc += vi * x[i];
        }
        worst = worst.max(acc.abs());
    }
    Some(worst)
}
