//! Dense symmetric linear algebra for the interior-point solver: full-storage
//! symmetric matrices, Cholesky and LDL^T factorizations, and a cyclic Jacobi
//! eigensolver. Everything here is double precision; exactness is restored
//! downstream by the rounding/absorption layer.

/// Dense square matrix, row-major. Symmetry is maintained by the call sites
/// that need it (`sym_*` helpers re-symmetrize after products).
#[derive(Clone, Debug, PartialEq)]
pub struct Mat {
    pub n: usize,
    pub a: Vec<f64>,
}

impl Mat {
    pub fn zeros(n: usize) -> Mat {
        Mat {
            n,
            a: vec![0.0; n * n],
        }
    }

    pub fn identity(n: usize) -> Mat {
        let mut m = Mat::zeros(n);
        for i in 0..n {
            m.a[i * n + i] = 1.0;
        }
        m
    }

    pub fn scaled_identity(n: usize, s: f64) -> Mat {
        let mut m = Mat::zeros(n);
        for i in 0..n {
            m.a[i * n + i] = s;
        }
        m
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.a[i * self.n + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: f64) {
        self.a[i * self.n + j] = v;
    }

    pub fn add_scaled(&mut self, other: &Mat, s: f64) {
        debug_assert_eq!(self.n, other.n);
        for (x, y) in self.a.iter_mut().zip(&other.a) {
            *x += s * y;
        }
    }

    pub fn scale(&mut self, s: f64) {
        for x in self.a.iter_mut() {
            *x *= s;
        }
    }

    pub fn matmul(&self, other: &Mat) -> Mat {
        debug_assert_eq!(self.n, other.n);
        let n = self.n;
        let mut out = Mat::zeros(n);
        for i in 0..n {
            for k in 0..n {
                let aik = self.a[i * n + k];
                if aik == 0.0 {
                    continue;
                }
                let row = &other.a[k * n..(k + 1) * n];
                let orow = &mut out.a[i * n..(i + 1) * n];
                for (o, &b) in orow.iter_mut().zip(row) {
                    *o += aik * b;
                }
            }
        }
        out
    }

    pub fn symmetrize(&mut self) {
        let n = self.n;
        for i in 0..n {
            for j in (i + 1)..n {
                let v = 0.5 * (self.a[i * n + j] + self.a[j * n + i]);
                self.a[i * n + j] = v;
                self.a[j * n + i] = v;
            }
        }
    }

    pub fn trace(&self) -> f64 {
        (0..self.n).map(|i| self.a[i * self.n + i]).sum()
    }

    pub fn frob_inner(&self, other: &Mat) -> f64 {
        self.a.iter().zip(&other.a).map(|(x, y)| x * y).sum()
    }

    pub fn max_abs(&self) -> f64 {
        self.a.iter().fold(0.0, |m, x| m.max(x.abs()))
    }

    /// `P * D * P^T` for diagonal `D` given as a slice.
    pub fn conjugate_diag(p: &Mat, d: &[f64]) -> Mat {
        let n = p.n;
        let mut out = Mat::zeros(n);
        for i in 0..n {
            for j in i..n {
                let mut acc = 0.0;
                for (k, dk) in d.iter().enumerate() {
                    acc += p.a[i * n + k] * dk * p.a[j * n + k];
                }
                out.a[i * n + j] = acc;
                out.a[j * n + i] = acc;
            }
        }
        out
    }
}

/// Eigendecomposition of a symmetric matrix by cyclic Jacobi rotations.
/// Returns `(q, lambda)` with `m = q * diag(lambda) * q^T`; eigenvalues are
/// not sorted. Accuracy is ample for the desk-scale matrices used here.
pub fn sym_eigen(m: &Mat) -> (Mat, Vec<f64>) {
    let n = m.n;
    let mut a = m.clone();
    a.symmetrize();
    let mut q = Mat::identity(n);
    if n <= 1 {
        let lambda = if n == 1 { vec![a.a[0]] } else { vec![] };
        return (q, lambda);
    }
    let max_sweeps = 30 + 2 * n;
    for _ in 0..max_sweeps {
        let mut off = 0.0;
        for i in 0..n {
            for j in (i + 1)..n {
                off += a.get(i, j).abs();
            }
        }
        if off <= 1e-14 * (1.0 + a.max_abs()) {
            break;
        }
        for p in 0..n {
            for r in (p + 1)..n {
                let apr = a.get(p, r);
                if apr.abs() <= 1e-300 {
                    continue;
                }
                let app = a.get(p, p);
                let arr = a.get(r, r);
                let theta = (arr - app) / (2.0 * apr);
                let t = if theta >= 0.0 {
                    1.0 / (theta + (1.0 + theta * theta).sqrt())
                } else {
                    -1.0 / (-theta + (1.0 + theta * theta).sqrt())
                };
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = t * c;
                // rotate rows/columns p and r
                for k in 0..n {
                    let akp = a.get(k, p);
                    let akr = a.get(k, r);
                    a.set(k, p, c * akp - s * akr);
                    a.set(k, r, s * akp + c * akr);
                }
                for k in 0..n {
                    let apk = a.get(p, k);
                    let ark = a.get(r, k);
                    a.set(p, k, c * apk - s * ark);
                    a.set(r, k, s * apk + c * ark);
                }
                for k in 0..n {
                    let qkp = q.get(k, p);
                    let qkr = q.get(k, r);
                    q.set(k, p, c * qkp - s * qkr);
                    q.set(k, r, s * qkp + c * qkr);
                }
            }
        }
    }
    let lambda = (0..n).map(|i| a.get(i, i)).collect();
    (q, lambda)
}

pub fn sym_min_eig(m: &Mat) -> f64 {
    let (_, lambda) = sym_eigen(m);
    lambda.into_iter().fold(f64::INFINITY, f64::min)
}

/// Cholesky factor `L` with `m = L L^T`. Fails on a nonpositive pivot.
pub fn cholesky(m: &Mat) -> Option<Mat> {
    let n = m.n;
    let mut l = Mat::zeros(n);
    for i in 0..n {
        for j in 0..=i {
            let mut sum = m.get(i, j);
            for k in 0..j {
                sum -= l.get(i, k) * l.get(j, k);
            }
            if i == j {
                if sum <= 0.0 {
                    return None;
                }
                l.set(i, i, sum.sqrt());
            } else {
                l.set(i, j, sum / l.get(j, j));
            }
        }
    }
    Some(l)
}

/// Solves `L y = b` for lower-triangular `L`.
pub fn solve_lower(l: &Mat, b: &[f64]) -> Vec<f64> {
    let n = l.n;
    let mut y = b.to_vec();
    for i in 0..n {
        for k in 0..i {
            let v = y[k] * l.get(i, k);
            y[i] -= v;
        }
        y[i] /= l.get(i, i);
    }
    y
}

/// Solves `L^T x = b` for lower-triangular `L`.
pub fn solve_lower_transpose(l: &Mat, b: &[f64]) -> Vec<f64> {
    let n = l.n;
    let mut x = b.to_vec();
    for i in (0..n).rev() {
        for k in (i + 1)..n {
            let v = x[k] * l.get(k, i);
            x[i] -= v;
        }
        x[i] /= l.get(i, i);
    }
    x
}

pub fn cholesky_solve(l: &Mat, b: &[f64]) -> Vec<f64> {
    solve_lower_transpose(l, &solve_lower(l, b))
}

/// `L^{-1} D L^{-T}` for symmetric `D`, used for generalized eigenvalue step
/// lengths.
pub fn congruence_inv(l: &Mat, d: &Mat) -> Mat {
    let n = l.n;
    // columns of D: solve L Y = D, then L Z^T = Y^T
    let mut y = Mat::zeros(n);
    for j in 0..n {
        let col: Vec<f64> = (0..n).map(|i| d.get(i, j)).collect();
        let s = solve_lower(l, &col);
        for i in 0..n {
            y.set(i, j, s[i]);
        }
    }
    let mut z = Mat::zeros(n);
    for i in 0..n {
        let row: Vec<f64> = (0..n).map(|j| y.get(i, j)).collect();
        let s = solve_lower(l, &row);
        for j in 0..n {
            z.set(i, j, s[j]);
        }
    }
    z.symmetrize();
    z
}
