//! Dense symmetric/Hermitian eigenvalue routines and singular values.
//!
//! Small matrices go through cyclic Jacobi sweeps in a fixed order; large ones
//! through Householder tridiagonalisation followed by implicit QL. Both paths
//! are deterministic: identical inputs give bit-identical outputs.

use nalgebra::DMatrix;

use crate::error::{Error, Result};

/// Matrices up to this dimension are diagonalised by Jacobi sweeps.
pub const JACOBI_MAX_DIM: usize = 96;

const MAX_SWEEPS: usize = 100;

/// Eigen-decomposition of a real symmetric matrix.
#[derive(Debug, Clone)]
pub struct SymmetricEigen {
    /// Eigenvalues in ascending order.
    pub values: Vec<f64>,
    /// Orthonormal eigenvectors stored as columns, matching `values`.
    pub vectors: DMatrix<f64>,
}

/// Cyclic Jacobi diagonalisation with row-ordered sweeps.
pub fn jacobi_eigen(a: &DMatrix<f64>) -> SymmetricEigen {
    let n = a.nrows();
    assert_eq!(n, a.ncols(), "jacobi_eigen needs a square matrix");
    // symmetric, so the column-major buffer doubles as row-major
    let mut m: Vec<f64> = a.as_slice().to_vec();
    let mut v = vec![0.0; n * n];
    for i in 0..n {
        v[i * n + i] = 1.0;
    }
    let frob: f64 = m.iter().map(|x| x * x).sum::<f64>().sqrt();
    for _ in 0..MAX_SWEEPS {
        let mut off = 0.0;
        for p in 0..n {
            for q in (p + 1)..n {
                off += m[p * n + q] * m[p * n + q];
            }
        }
        if off.sqrt() <= 1e-17 * frob || off == 0.0 {
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = m[p * n + q];
                if apq == 0.0 {
                    continue;
                }
                let app = m[p * n + p];
                let aqq = m[q * n + q];
                let theta = (aqq - app) / (2.0 * apq);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for k in 0..n {
                    let akp = m[k * n + p];
                    let akq = m[k * n + q];
                    m[k * n + p] = c * akp - s * akq;
                    m[k * n + q] = s * akp + c * akq;
                }
                for k in 0..n {
                    let apk = m[p * n + k];
                    let aqk = m[q * n + k];
                    m[p * n + k] = c * apk - s * aqk;
                    m[q * n + k] = s * apk + c * aqk;
                }
                m[p * n + q] = 0.0;
                m[q * n + p] = 0.0;
                for k in 0..n {
                    let vkp = v[k * n + p];
                    let vkq = v[k * n + q];
                    v[k * n + p] = c * vkp - s * vkq;
                    v[k * n + q] = s * vkp + c * vkq;
                }
            }
        }
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| m[i * n + i].total_cmp(&m[j * n + j]));
    let values = order.iter().map(|&i| m[i * n + i]).collect();
    let vectors = DMatrix::from_fn(n, n, |row, col| v[row * n + order[col]]);
    SymmetricEigen { values, vectors }
}

/// Householder reduction of a symmetric matrix (row-major, full storage) to
/// tridiagonal form. Returns `(diagonal, subdiagonal)`; the subdiagonal has
/// length `n` with a trailing zero.
fn tridiagonalize(mut a: Vec<f64>, n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut diag = vec![0.0; n];
    let mut off = vec![0.0; n];
    let mut v = vec![0.0; n];
    let mut p = vec![0.0; n];
    for k in 0..n.saturating_sub(2) {
        let start = k + 1;
        let m = n - start;
        let row = &a[k * n + start..k * n + n];
        let norm = row.iter().map(|x| x * x).sum::<f64>().sqrt();
        diag[k] = a[k * n + k];
        if norm == 0.0 {
            off[k] = 0.0;
            continue;
        }
        let alpha = if row[0] > 0.0 { -norm } else { norm };
        let v = &mut v[..m];
        v.copy_from_slice(row);
        v[0] -= alpha;
        let vnorm2: f64 = v.iter().map(|x| x * x).sum();
        let beta = 2.0 / vnorm2;
        off[k] = alpha;
        // p = beta * B v
        let p = &mut p[..m];
        for i in 0..m {
            let r = &a[(start + i) * n + start..(start + i) * n + n];
            p[i] = beta * r.iter().zip(v.iter()).map(|(x, y)| x * y).sum::<f64>();
        }
        let kfac = 0.5 * beta * p.iter().zip(v.iter()).map(|(x, y)| x * y).sum::<f64>();
        for i in 0..m {
            p[i] -= kfac * v[i];
        }
        // B -= v w^T + w v^T with w stored in p
        for i in 0..m {
            let vi = v[i];
            let wi = p[i];
            let r = &mut a[(start + i) * n + start..(start + i) * n + n];
            for ((x, &vj), &wj) in r.iter_mut().zip(v.iter()).zip(p.iter()) {
                *x -= vi * wj + wi * vj;
            }
        }
    }
    if n >= 2 {
        diag[n - 2] = a[(n - 2) * n + n - 2];
        off[n - 2] = a[(n - 2) * n + n - 1];
    }
    if n >= 1 {
        diag[n - 1] = a[n * n - 1];
    }
    (diag, off)
}

/// Implicit QL iteration on a symmetric tridiagonal matrix; eigenvalues only.
fn tridiagonal_ql(d: &mut [f64], e: &mut [f64]) -> Result<()> {
    let n = d.len();
    for l in 0..n {
        let mut iter = 0;
        loop {
            let mut m = l;
            while m + 1 < n {
                let dd = d[m].abs() + d[m + 1].abs();
                if e[m].abs() <= f64::EPSILON * dd {
                    break;
                }
                m += 1;
            }
            if m == l {
                break;
            }
            iter += 1;
            if iter > 60 {
                return Err(Error::Solver(format!(
                    "implicit QL failed to converge for eigenvalue {l}"
                )));
            }
            let mut g = (d[l + 1] - d[l]) / (2.0 * e[l]);
            let mut r = g.hypot(1.0);
            g = d[m] - d[l] + e[l] / (g + r.copysign(g));
            let (mut s, mut c, mut p) = (1.0, 1.0, 0.0);
            let mut i = m;
            let mut deflated = false;
            while i > l {
                i -= 1;
                let f = s * e[i];
                let b = c * e[i];
                r = f.hypot(g);
                e[i + 1] = r;
                if r == 0.0 {
                    d[i + 1] -= p;
                    e[m] = 0.0;
                    deflated = true;
                    break;
                }
                s = f / r;
                c = g / r;
                g = d[i + 1] - p;
                r = (d[i] - g) * s + 2.0 * c * b;
                p = s * r;
                d[i + 1] = g + p;
                g = c * r - b;
            }
            if deflated {
                continue;
            }
            d[l] -= p;
            e[l] = g;
            e[m] = 0.0;
        }
    }
    Ok(())
}

/// Eigenvalues of a symmetric matrix via tridiagonalisation and implicit QL,
/// ascending.
pub fn tridiagonal_eigenvalues(a: &DMatrix<f64>) -> Result<Vec<f64>> {
    let n = a.nrows();
    if n != a.ncols() {
        return Err(Error::Validation("eigenvalues need a square matrix".into()));
    }
    let (mut d, mut e) = tridiagonalize(a.as_slice().to_vec(), n);
    tridiagonal_ql(&mut d, &mut e)?;
    d.sort_by(f64::total_cmp);
    Ok(d)
}

/// Ascending eigenvalues of a symmetric matrix; picks the method by size.
pub fn symmetric_eigenvalues(a: &DMatrix<f64>) -> Result<Vec<f64>> {
    if a.nrows() <= JACOBI_MAX_DIM {
        if a.nrows() != a.ncols() {
            return Err(Error::Validation("eigenvalues need a square matrix".into()));
        }
        Ok(jacobi_eigen(a).values)
    } else {
        tridiagonal_eigenvalues(a)
    }
}

/// Singular values in descending order (one-sided Jacobi).
pub fn singular_values(a: &DMatrix<f64>) -> Vec<f64> {
    let (rows, cols) = a.shape();
    // work on the orientation with fewer columns
    let work = if cols > rows { a.transpose() } else { a.clone() };
    let (rows, cols) = work.shape();
    let mut col: Vec<Vec<f64>> = (0..cols).map(|j| work.column(j).iter().copied().collect()).collect();
    for _ in 0..MAX_SWEEPS {
        let mut rotated = false;
        for p in 0..cols {
            for q in (p + 1)..cols {
                let (alpha, beta, gamma) = {
                    let (cp, cq) = (&col[p], &col[q]);
                    let mut alpha = 0.0;
                    let mut beta = 0.0;
                    let mut gamma = 0.0;
                    for i in 0..rows {
                        alpha += cp[i] * cp[i];
                        beta += cq[i] * cq[i];
                        gamma += cp[i] * cq[i];
                    }
                    (alpha, beta, gamma)
                };
                if gamma == 0.0 || gamma.abs() <= f64::EPSILON * (alpha * beta).sqrt() {
                    continue;
                }
                rotated = true;
                let zeta = (beta - alpha) / (2.0 * gamma);
                let t = zeta.signum() / (zeta.abs() + (1.0 + zeta * zeta).sqrt());
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = c * t;
                let (left, right) = col.split_at_mut(q);
                let cp = &mut left[p];
                let cq = &mut right[0];
                for i in 0..rows {
                    let x = cp[i];
                    let y = cq[i];
                    cp[i] = c * x - s * y;
                    cq[i] = s * x + c * y;
                }
            }
        }
        if !rotated {
            break;
        }
    }
    let mut sv: Vec<f64> = col
        .iter()
        .map(|c| c.iter().map(|x| x * x).sum::<f64>().sqrt())
        .collect();
    sv.sort_by(|a, b| b.total_cmp(a));
    sv
}

/// Hermitian matrix stored as real and (optional) imaginary parts.
#[derive(Debug, Clone, PartialEq)]
pub struct HermitianMatrix {
    pub re: DMatrix<f64>,
    pub im: Option<DMatrix<f64>>,
}

impl HermitianMatrix {
    pub fn real(re: DMatrix<f64>) -> Self {
        Self { re, im: None }
    }

    /// Builds from parts, dropping an identically zero imaginary part.
    pub fn from_parts(re: DMatrix<f64>, im: DMatrix<f64>) -> Self {
        let im = if im.iter().all(|&x| x == 0.0) { None } else { Some(im) };
        Self { re, im }
    }

    pub fn dim(&self) -> usize {
        self.re.nrows()
    }

    /// Largest deviation from Hermitian symmetry relative to the largest entry.
    pub fn hermiticity_defect(&self) -> f64 {
        let n = self.dim();
        let mut scale = 0.0f64;
        let mut defect = 0.0f64;
        for i in 0..n {
            for j in 0..n {
                scale = scale.max(self.re[(i, j)].abs());
                defect = defect.max((self.re[(i, j)] - self.re[(j, i)]).abs());
                if let Some(im) = &self.im {
                    scale = scale.max(im[(i, j)].abs());
                    defect = defect.max((im[(i, j)] + im[(j, i)]).abs());
                }
            }
        }
        if scale == 0.0 {
            0.0
        } else {
            defect / scale
        }
    }

    /// Real symmetric matrix `[[Re, -Im], [Im, Re]]` whose spectrum is the
    /// Hermitian spectrum with every eigenvalue doubled.
    pub fn real_embedding(&self) -> DMatrix<f64> {
        let n = self.dim();
        match &self.im {
            None => self.re.clone(),
            Some(im) => DMatrix::from_fn(2 * n, 2 * n, |i, j| {
                let (bi, ri) = (i / n, i % n);
                let (bj, rj) = (j / n, j % n);
                match (bi, bj) {
                    (0, 0) | (1, 1) => self.re[(ri, rj)],
                    (0, 1) => -im[(ri, rj)],
                    _ => im[(ri, rj)],
                }
            }),
        }
    }

    /// Ascending eigenvalues.
    pub fn eigenvalues(&self) -> Result<Vec<f64>> {
        let values = symmetric_eigenvalues(&self.real_embedding())?;
        Ok(match self.im {
            None => values,
            Some(_) => values.into_iter().step_by(2).collect(),
        })
    }

    /// Spectral calculus `f(H)` for small matrices.
    pub fn map_spectrum<F: Fn(f64) -> f64>(&self, f: F) -> HermitianMatrix {
        let n = self.dim();
        let emb = self.real_embedding();
        let eig = jacobi_eigen(&emb);
        let q = &eig.vectors;
        let fl: Vec<f64> = eig.values.iter().map(|&x| f(x)).collect();
        let k = emb.nrows();
        let full = DMatrix::from_fn(k, k, |i, j| {
            (0..k).map(|s| q[(i, s)] * fl[s] * q[(j, s)]).sum::<f64>()
        });
        match self.im {
            None => HermitianMatrix::real(full),
            Some(_) => HermitianMatrix::from_parts(
                full.view((0, 0), (n, n)).into_owned(),
                full.view((n, 0), (n, n)).into_owned(),
            ),
        }
    }

    pub fn trace(&self) -> f64 {
        self.re.trace()
    }
}
