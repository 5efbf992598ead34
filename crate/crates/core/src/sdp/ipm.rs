//! Primal-dual interior-point method with Nesterov-Todd scaling and a
//! Mehrotra predictor-corrector step, for the cone
//!
//! ```text
//! minimize    sum_b <C_b, X_b> + c_f . y
//! subject to  sum_b <A_ib, X_b> + f_i . y = b_i      (i = 0..m)
//!             X_b >= 0 (PSD), y free
//! ```
//!
//! Free variables are kept in the Newton system rather than split into signed
//! parts: after eliminating `dX` and `dS` the reduced system is the saddle
//! problem `[M F; F^T 0] [dnu; dy] = [h; rf]` with the usual NT Schur
//! complement `M_ij = sum_b <A_ib, W_b A_jb W_b>`, solved by a Cholesky of
//! `M` and the small dense Schur complement `F^T M^-1 F`.

use super::linalg::{
    cholesky, cholesky_solve, congruence_inv, sym_eigen, sym_min_eig, Mat,
};
use super::SdpProblem;

#[derive(Clone, Copy, Debug)]
pub struct IpmOptions {
    pub tol: f64,
    pub max_iter: usize,
    /// Fraction of the step to the cone boundary.
    pub step_frac: f64,
}

impl Default for IpmOptions {
    fn default() -> IpmOptions {
        IpmOptions {
            tol: 1e-9,
            max_iter: 200,
            step_frac: 0.98,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum IpmStatus {
    Converged,
    MaxIter,
    Stalled,
}

/// Conic standard form with per-constraint dense symmetric coefficient
/// matrices (one optional slot per block).
pub struct ConeProblem {
    pub dims: Vec<usize>,
    pub nfree: usize,
    pub c_blocks: Vec<Mat>,
    pub c_free: Vec<f64>,
    pub a_blocks: Vec<Vec<Option<Mat>>>,
    pub a_free: Vec<Vec<(usize, f64)>>,
    pub rhs: Vec<f64>,
}

impl ConeProblem {
    /// Lowers an [`SdpProblem`]. With `add_slack` the uniform-slack
    /// substitution `X_b = Z_b + lambda I` is applied: the cone variables
    /// become the `Z_b`, one extra free variable holds `lambda` (last index)
    /// and the objective switches to `min -lambda`.
    pub fn from_sdp(prob: &SdpProblem, add_slack: bool) -> ConeProblem {
        let nblocks = prob.block_dims.len();
        let m = prob.constraints.len();
        let nfree = prob.free_vars + usize::from(add_slack);
        let slack_idx = prob.free_vars;

        let mut a_blocks: Vec<Vec<Option<Mat>>> = Vec::with_capacity(m);
        let mut a_free: Vec<Vec<(usize, f64)>> = Vec::with_capacity(m);
        let mut rhs = Vec::with_capacity(m);
        for c in &prob.constraints {
            let mut mats: Vec<Option<Mat>> = vec![None; nblocks];
            for t in &c.expr.matrix {
                let mat =
                    mats[t.block].get_or_insert_with(|| Mat::zeros(prob.block_dims[t.block]));
                let v = mat.get(t.row, t.col) + t.value;
                mat.set(t.row, t.col, v);
                if t.row != t.col {
                    let v = mat.get(t.col, t.row) + t.value;
                    mat.set(t.col, t.row, v);
                }
            }
            let mut frees: Vec<(usize, f64)> = Vec::new();
            for &(j, v) in &c.expr.free {
                match frees.iter_mut().find(|(k, _)| *k == j) {
                    Some(slot) => slot.1 += v,
                    None => frees.push((j, v)),
                }
            }
            if add_slack {
                let tr: f64 = mats.iter().flatten().map(Mat::trace).sum();
                if tr != 0.0 {
                    frees.push((slack_idx, tr));
                }
            }
            a_blocks.push(mats);
            a_free.push(frees);
            rhs.push(c.rhs);
        }

        let mut c_blocks: Vec<Mat> = prob.block_dims.iter().map(|&d| Mat::zeros(d)).collect();
        let mut c_free = vec![0.0; nfree];
        if add_slack {
            c_free[slack_idx] = -1.0;
        } else {
            // maximize the given objective = minimize its negation
            for t in &prob.objective.matrix {
                let mat = &mut c_blocks[t.block];
                let v = mat.get(t.row, t.col) - t.value;
                mat.set(t.row, t.col, v);
                if t.row != t.col {
                    let v = mat.get(t.col, t.row) - t.value;
                    mat.set(t.col, t.row, v);
                }
            }
            for &(j, v) in &prob.objective.free {
                c_free[j] -= v;
            }
        }
        ConeProblem {
            dims: prob.block_dims.clone(),
            nfree,
            c_blocks,
            c_free,
            a_blocks,
            a_free,
            rhs,
        }
    }

    fn apply_row(&self, i: usize, blocks: &[Mat], free: &[f64]) -> f64 {
        let mut acc = 0.0;
        for (b, a) in self.a_blocks[i].iter().enumerate() {
            if let Some(a) = a {
                acc += a.frob_inner(&blocks[b]);
            }
        }
        for &(j, v) in &self.a_free[i] {
            acc += v * free[j];
        }
        acc
    }
}

pub struct IpmResult {
    pub x_blocks: Vec<Mat>,
    pub free: Vec<f64>,
    pub obj_primal: f64,
    pub primal_res: f64,
    pub dual_res: f64,
    pub rel_gap: f64,
    pub status: IpmStatus,
    pub iterations: usize,
}

struct Scaling {
    w: Mat,
    t: Mat,
    t_inv: Mat,
    v_q: Mat,
    v_lambda: Vec<f64>,
}

/// NT scaling point: `W S W = X`, plus the square-root machinery needed for
/// the scaled complementarity equation.
fn nt_scaling(x: &Mat, s: &Mat) -> Scaling {
    let floor = 1e-14;
    let (qs, ls) = sym_eigen(s);
    let ls: Vec<f64> = ls.into_iter().map(|v| v.max(floor)).collect();
    let s_sqrt = Mat::conjugate_diag(&qs, &ls.iter().map(|v| v.sqrt()).collect::<Vec<_>>());
    let s_isqrt =
        Mat::conjugate_diag(&qs, &ls.iter().map(|v| 1.0 / v.sqrt()).collect::<Vec<_>>());
    let mut e = s_sqrt.matmul(x).matmul(&s_sqrt);
    e.symmetrize();
    let (qe, le) = sym_eigen(&e);
    let le: Vec<f64> = le.into_iter().map(|v| v.max(floor)).collect();
    let e_sqrt = Mat::conjugate_diag(&qe, &le.iter().map(|v| v.sqrt()).collect::<Vec<_>>());
    let mut w = s_isqrt.matmul(&e_sqrt).matmul(&s_isqrt);
    w.symmetrize();
    let (qw, lw) = sym_eigen(&w);
    let lw: Vec<f64> = lw.into_iter().map(|v| v.max(floor)).collect();
    let t = Mat::conjugate_diag(&qw, &lw.iter().map(|v| v.sqrt()).collect::<Vec<_>>());
    let t_inv = Mat::conjugate_diag(&qw, &lw.iter().map(|v| 1.0 / v.sqrt()).collect::<Vec<_>>());
    let mut v = t.matmul(s).matmul(&t);
    v.symmetrize();
    let (v_q, v_lambda) = sym_eigen(&v);
    let v_lambda: Vec<f64> = v_lambda.into_iter().map(|v| v.max(floor)).collect();
    Scaling {
        w,
        t,
        t_inv,
        v_q,
        v_lambda,
    }
}

/// Solves `(V U + U V) / 2 = R` for symmetric `R` through V's eigenbasis.
fn lyapunov_solve(sc: &Scaling, r: &Mat) -> Mat {
    let n = r.n;
    // hat(R) = Q^T R Q
    let mut qtr = Mat::zeros(n);
    for i in 0..n {
        for j in 0..n {
            let mut acc = 0.0;
            for k in 0..n {
                acc += sc.v_q.get(k, i) * r.get(k, j);
            }
            qtr.set(i, j, acc);
        }
    }
    let mut hat = qtr.matmul(&sc.v_q);
    for i in 0..n {
        for j in 0..n {
            let v = 2.0 * hat.get(i, j) / (sc.v_lambda[i] + sc.v_lambda[j]);
            hat.set(i, j, v);
        }
    }
    // back to the original basis
    let mut out = sc.v_q.matmul(&hat);
    let mut qt = Mat::zeros(n);
    for i in 0..n {
        for j in 0..n {
            qt.set(i, j, sc.v_q.get(j, i));
        }
    }
    out = out.matmul(&qt);
    out.symmetrize();
    out
}

/// Largest step in `[0, 1]` keeping `P + alpha D` in the cone, before the
/// boundary fraction is applied.
fn max_step(p: &Mat, d: &Mat) -> f64 {
    let mut pj = p.clone();
    let scale = p.max_abs().max(1.0);
    let mut l = cholesky(&pj);
    let mut jitter = 1e-14 * scale;
    while l.is_none() && jitter < scale {
        for i in 0..pj.n {
            let v = pj.get(i, i) + jitter;
            pj.set(i, i, v);
        }
        jitter *= 100.0;
        l = cholesky(&pj);
    }
    let l = match l {
        Some(l) => l,
        None => return 0.0,
    };
    let y = congruence_inv(&l, d);
    let lam = sym_min_eig(&y);
    if lam >= -1e-13 {
        1.0
    } else {
        (-1.0 / lam).min(1.0)
    }
}

fn cholesky_with_jitter(m: &Mat) -> Option<Mat> {
    if let Some(l) = cholesky(m) {
        return Some(l);
    }
    let scale = m.max_abs().max(1e-30);
    let mut jitter = 1e-13 * scale;
    for _ in 0..12 {
        let mut mj = m.clone();
        for i in 0..mj.n {
            let v = mj.get(i, i) + jitter;
            mj.set(i, i, v);
        }
        if let Some(l) = cholesky(&mj) {
            return Some(l);
        }
        jitter *= 100.0;
    }
    None
}

pub fn solve(cone: &ConeProblem, opts: &IpmOptions) -> IpmResult {
    let nblocks = cone.dims.len();
    let m = cone.rhs.len();
    let nf = cone.nfree;
    let total_dim: usize = cone.dims.iter().sum::<usize>().max(1);

    // start at (1 + trace-heuristic) * I, duals at I
    let mut x_blocks: Vec<Mat> = Vec::with_capacity(nblocks);
    for (b, &d) in cone.dims.iter().enumerate() {
        let mut worst: f64 = 0.0;
        for i in 0..m {
            if let Some(a) = &cone.a_blocks[i][b] {
                let fnorm = a.frob_inner(a).sqrt();
                worst = worst.max(cone.rhs[i].abs() / (1.0 + fnorm));
            }
        }
        x_blocks.push(Mat::scaled_identity(d, 1.0 + worst));
    }
    let mut s_blocks: Vec<Mat> = cone.dims.iter().map(|&d| Mat::identity(d)).collect();
    let mut nu = vec![0.0; m];
    let mut free = vec![0.0; nf];

    let bmax = cone.rhs.iter().fold(0.0f64, |a, v| a.max(v.abs()));
    let cmax = cone
        .c_blocks
        .iter()
        .map(Mat::max_abs)
        .fold(0.0f64, f64::max)
        .max(cone.c_free.iter().fold(0.0f64, |a, v| a.max(v.abs())));

    let mut best_score = f64::INFINITY;
    let mut best_iter = 0usize;
    let mut status = IpmStatus::MaxIter;
    let mut iterations = 0;
    let (mut primal_res, mut dual_res, mut rel_gap) = (f64::INFINITY, f64::INFINITY, f64::INFINITY);

    for iter in 0..opts.max_iter {
        iterations = iter;
        // residuals
        let mut rp = vec![0.0; m];
        for i in 0..m {
            rp[i] = cone.rhs[i] - cone.apply_row(i, &x_blocks, &free);
        }
        let mut rd: Vec<Mat> = Vec::with_capacity(nblocks);
        for b in 0..nblocks {
            let mut r = cone.c_blocks[b].clone();
            for i in 0..m {
                if let Some(a) = &cone.a_blocks[i][b] {
                    r.add_scaled(a, -nu[i]);
                }
            }
            r.add_scaled(&s_blocks[b], -1.0);
            rd.push(r);
        }
        let mut rf = cone.c_free.clone();
        for i in 0..m {
            for &(j, v) in &cone.a_free[i] {
                rf[j] -= v * nu[i];
            }
        }

        let mut gap = 0.0;
        for b in 0..nblocks {
            gap += x_blocks[b].frob_inner(&s_blocks[b]);
        }
        let mu = gap / total_dim as f64;

        let mut pobj = cone
            .c_free
            .iter()
            .zip(&free)
            .map(|(c, y)| c * y)
            .sum::<f64>();
        for b in 0..nblocks {
            pobj += cone.c_blocks[b].frob_inner(&x_blocks[b]);
        }
        let dobj: f64 = cone.rhs.iter().zip(&nu).map(|(b, n)| b * n).sum();

        primal_res = rp.iter().fold(0.0f64, |a, v| a.max(v.abs())) / (1.0 + bmax);
        dual_res = rd
            .iter()
            .map(Mat::max_abs)
            .fold(0.0f64, f64::max)
            .max(rf.iter().fold(0.0f64, |a, v| a.max(v.abs())))
            / (1.0 + cmax);
        rel_gap = mu / (1.0 + pobj.abs().max(dobj.abs()));

        if primal_res <= opts.tol && dual_res <= opts.tol && rel_gap <= opts.tol {
            status = IpmStatus::Converged;
            break;
        }
        let score = primal_res.max(dual_res).max(rel_gap);
        if score < 0.99 * best_score {
            best_score = score;
            best_iter = iter;
        }
        if iter > 60 && iter - best_iter > 40 {
            status = IpmStatus::Stalled;
            break;
        }

        // NT scalings and the Schur complement
        let scalings: Vec<Scaling> = (0..nblocks)
            .map(|b| nt_scaling(&x_blocks[b], &s_blocks[b]))
            .collect();

        let mut waw: Vec<Vec<Option<Mat>>> = Vec::with_capacity(m);
        for i in 0..m {
            let mut per_block = Vec::with_capacity(nblocks);
            for b in 0..nblocks {
                per_block.push(cone.a_blocks[i][b].as_ref().map(|a| {
                    let mut u = scalings[b].w.matmul(a).matmul(&scalings[b].w);
                    u.symmetrize();
                    u
                }));
            }
            waw.push(per_block);
        }
        let mut schur = Mat::zeros(m);
        for i in 0..m {
            for j in i..m {
                let mut acc = 0.0;
                for b in 0..nblocks {
                    if let (Some(a), Some(u)) = (&cone.a_blocks[i][b], &waw[j][b]) {
                        acc += a.frob_inner(u);
                    }
                }
                schur.set(i, j, acc);
                schur.set(j, i, acc);
            }
        }
        let schur_l = match cholesky_with_jitter(&schur) {
            Some(l) => l,
            None => {
                status = IpmStatus::Stalled;
                break;
            }
        };

        // fmat[i][j]: dense free-coefficient matrix
        let mut fmat = vec![vec![0.0; nf.max(1)]; m];
        for i in 0..m {
            for &(j, v) in &cone.a_free[i] {
                fmat[i][j] = v;
            }
        }
        // G = M^-1 F and K = F^T M^-1 F
        let (gcols, k_l) = if nf > 0 {
            let mut gcols: Vec<Vec<f64>> = Vec::with_capacity(nf);
            for j in 0..nf {
                let col: Vec<f64> = (0..m).map(|i| fmat[i][j]).collect();
                gcols.push(cholesky_solve(&schur_l, &col));
            }
            let mut k = Mat::zeros(nf);
            for a in 0..nf {
                for b2 in a..nf {
                    let mut acc = 0.0;
                    for i in 0..m {
                        acc += fmat[i][a] * gcols[b2][i];
                    }
                    k.set(a, b2, acc);
                    k.set(b2, a, acc);
                }
            }
            let k_l = match cholesky_with_jitter(&k) {
                Some(l) => l,
                None => {
                    status = IpmStatus::Stalled;
                    break;
                }
            };
            (gcols, Some(k_l))
        } else {
            (Vec::new(), None)
        };

        // One base elimination pass on the saddle system
        // [M F; F^T 0] [dnu; dy] = [h; rf2].
        let saddle_base = |h: &[f64], rf2: &[f64]| -> (Vec<f64>, Vec<f64>) {
            let u = cholesky_solve(&schur_l, h);
            if nf == 0 {
                return (u, Vec::new());
            }
            let k_l = k_l.as_ref().expect("factor exists when nf > 0");
            let mut rhs_y = vec![0.0; nf];
            for (j, slot) in rhs_y.iter_mut().enumerate() {
                let mut acc = -rf2[j];
                for i in 0..m {
                    acc += fmat[i][j] * u[i];
                }
                *slot = acc;
            }
            let dy = cholesky_solve(k_l, &rhs_y);
            let mut dnu = u;
            for (j, g) in gcols.iter().enumerate() {
                for i in 0..m {
                    dnu[i] -= g[i] * dy[j];
                }
            }
            (dnu, dy)
        };
        // The Schur complement turns badly conditioned as mu shrinks; two
        // rounds of iterative refinement keep the primal residual falling
        // all the way to the requested tolerance.
        let saddle_solve = |h: &[f64], rf2: &[f64]| -> (Vec<f64>, Vec<f64>) {
            let (mut dnu, mut dy) = saddle_base(h, rf2);
            for _ in 0..2 {
                let mut res_h = h.to_vec();
                for i in 0..m {
                    for j in 0..m {
                        res_h[i] -= schur.get(i, j) * dnu[j];
                    }
                    for j in 0..nf {
                        res_h[i] -= fmat[i][j] * dy[j];
                    }
                }
                let mut res_f = rf2.to_vec();
                for (j, slot) in res_f.iter_mut().enumerate() {
                    for i in 0..m {
                        *slot -= fmat[i][j] * dnu[i];
                    }
                }
                let (cnu, cy) = saddle_base(&res_h, &res_f);
                for i in 0..m {
                    dnu[i] += cnu[i];
                }
                for j in 0..nf {
                    dy[j] += cy[j];
                }
            }
            (dnu, dy)
        };

        let w_rd_w: Vec<Mat> = (0..nblocks)
            .map(|b| {
                let mut u = scalings[b].w.matmul(&rd[b]).matmul(&scalings[b].w);
                u.symmetrize();
                u
            })
            .collect();

        let solve_directions = |rc: &[Mat]| -> (Vec<f64>, Vec<f64>, Vec<Mat>, Vec<Mat>) {
            let mut h = rp.clone();
            for i in 0..m {
                for b in 0..nblocks {
                    if let Some(a) = &cone.a_blocks[i][b] {
                        h[i] -= a.frob_inner(&rc[b]);
                        h[i] += a.frob_inner(&w_rd_w[b]);
                    }
                }
            }
            let (dnu, dy) = saddle_solve(&h, &rf);
            let mut ds: Vec<Mat> = Vec::with_capacity(nblocks);
            let mut dx: Vec<Mat> = Vec::with_capacity(nblocks);
            for b in 0..nblocks {
                let mut s_dir = rd[b].clone();
                for i in 0..m {
                    if let Some(a) = &cone.a_blocks[i][b] {
                        s_dir.add_scaled(a, -dnu[i]);
                    }
                }
                let mut x_dir = rc[b].clone();
                let mut wsw = scalings[b].w.matmul(&s_dir).matmul(&scalings[b].w);
                wsw.symmetrize();
                x_dir.add_scaled(&wsw, -1.0);
                x_dir.symmetrize();
                ds.push(s_dir);
                dx.push(x_dir);
            }
            (dnu, dy, dx, ds)
        };

        // predictor: target XS -> 0, i.e. Rc = -X
        let rc_aff: Vec<Mat> = x_blocks
            .iter()
            .map(|x| {
                let mut nx = x.clone();
                nx.scale(-1.0);
                nx
            })
            .collect();
        let (_, _, dx_aff, ds_aff) = solve_directions(&rc_aff);

        let mut alpha_p_aff = 1.0f64;
        let mut alpha_d_aff = 1.0f64;
        for b in 0..nblocks {
            alpha_p_aff = alpha_p_aff.min(max_step(&x_blocks[b], &dx_aff[b]));
            alpha_d_aff = alpha_d_aff.min(max_step(&s_blocks[b], &ds_aff[b]));
        }
        let mut gap_aff = 0.0;
        for b in 0..nblocks {
            let mut xa = x_blocks[b].clone();
            xa.add_scaled(&dx_aff[b], alpha_p_aff);
            let mut sa = s_blocks[b].clone();
            sa.add_scaled(&ds_aff[b], alpha_d_aff);
            gap_aff += xa.frob_inner(&sa);
        }
        let mu_aff = (gap_aff / total_dim as f64).max(0.0);
        let mut sigma = if mu > 0.0 {
            (mu_aff / mu).powi(3).clamp(1e-10, 1.0)
        } else {
            1e-10
        };
        // Keep the barrier from racing below the infeasibility level: once mu
        // drops far under the primal residual the Schur complement becomes
        // too ill-conditioned to recover feasibility in double precision.
        let rp_abs = rp.iter().fold(0.0f64, |a, v| a.max(v.abs()));
        if rp_abs > 10.0 * mu {
            sigma = sigma.max(0.5);
        }
        if rp_abs > 1e3 * mu {
            sigma = sigma.max(0.9);
        }

        // corrector in the scaled space: L_V(dXhat + dShat) = sigma mu I - V^2
        // - sym(dXhat_aff dShat_aff)
        let mut rc: Vec<Mat> = Vec::with_capacity(nblocks);
        for b in 0..nblocks {
            let sc = &scalings[b];
            let n = cone.dims[b];
            let mut dxh = sc.t_inv.matmul(&dx_aff[b]).matmul(&sc.t_inv);
            dxh.symmetrize();
            let mut dsh = sc.t.matmul(&ds_aff[b]).matmul(&sc.t);
            dsh.symmetrize();
            let prod = dxh.matmul(&dsh);
            let mut corr = Mat::zeros(n);
            for i in 0..n {
                for j in 0..n {
                    corr.set(i, j, 0.5 * (prod.get(i, j) + prod.get(j, i)));
                }
            }
            let v_sq = Mat::conjugate_diag(
                &sc.v_q,
                &sc.v_lambda.iter().map(|l| l * l).collect::<Vec<_>>(),
            );
            let mut target = Mat::scaled_identity(n, sigma * mu);
            target.add_scaled(&v_sq, -1.0);
            target.add_scaled(&corr, -1.0);
            let in_v = lyapunov_solve(sc, &target);
            let mut back = sc.t.matmul(&in_v).matmul(&sc.t);
            back.symmetrize();
            rc.push(back);
        }
        let (dnu, dy, dx, ds) = solve_directions(&rc);

        let mut alpha_p = 1.0f64;
        let mut alpha_d = 1.0f64;
        for b in 0..nblocks {
            alpha_p = alpha_p.min(opts.step_frac * max_step(&x_blocks[b], &dx[b]));
            alpha_d = alpha_d.min(opts.step_frac * max_step(&s_blocks[b], &ds[b]));
        }
        alpha_p = alpha_p.min(1.0);
        alpha_d = alpha_d.min(1.0);

        for b in 0..nblocks {
            x_blocks[b].add_scaled(&dx[b], alpha_p);
            x_blocks[b].symmetrize();
            s_blocks[b].add_scaled(&ds[b], alpha_d);
            s_blocks[b].symmetrize();
        }
        for i in 0..m {
            nu[i] += alpha_d * dnu[i];
        }
        for j in 0..nf {
            free[j] += alpha_d * dy[j];
        }
    }

    let pobj = {
        let mut acc = cone
            .c_free
            .iter()
            .zip(&free)
            .map(|(c, y)| c * y)
            .sum::<f64>();
        for b in 0..nblocks {
            acc += cone.c_blocks[b].frob_inner(&x_blocks[b]);
        }
        acc
    };
    IpmResult {
        x_blocks,
        free,
        obj_primal: pobj,
        primal_res,
        dual_res,
        rel_gap,
        status,
        iterations: iterations + 1,
    }
}
