//! Small dense complex linear algebra for two-qubit problems.
//!
//! Everything here works on matrices of dimension 2, 3 or 4 (8 internally,
//! for the real embedding used by the Hermitian eigensolver). The two-qubit
//! basis is ordered `|ee>, |eg>, |ge>, |gg>` with the first atom as the slow
//! index, and `|e>` is the +1 eigenvector of sigma_z.

use std::fmt;
use std::ops::{Add, Mul, Sub};

use num_complex::Complex64 as C64;

use crate::error::{Error, Result};

/// Index of `|e1 e2>` in the two-qubit basis.
pub const EE: usize = 0;
/// Index of `|e1 g2>`.
pub const EG: usize = 1;
/// Index of `|g1 e2>`.
pub const GE: usize = 2;
/// Index of `|g1 g2>`.
pub const GG: usize = 3;

const ZERO: C64 = C64::new(0.0, 0.0);
const ONE: C64 = C64::new(1.0, 0.0);

/// Row-major dense complex matrix.
#[derive(Clone, PartialEq)]
pub struct ComplexMatrix {
    rows: usize,
    cols: usize,
    data: Vec<C64>,
}

impl fmt::Debug for ComplexMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "ComplexMatrix {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            write!(f, "  ")?;
            for j in 0..self.cols {
                let z = self[(i, j)];
                write!(f, "{:+.6e}{:+.6e}i  ", z.re, z.im)?;
            }
            writeln!(f)?;
        }
        write!(f, "]")
    }
}

impl ComplexMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![ZERO; rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = ONE;
        }
        m
    }

    /// Builds a matrix from nested rows; all rows must have equal length.
    pub fn from_rows<R: AsRef<[C64]>>(rows: &[R]) -> Self {
        let n_rows = rows.len();
        let n_cols = rows.first().map_or(0, |r| r.as_ref().len());
        let mut data = Vec::with_capacity(n_rows * n_cols);
        for r in rows {
            let r = r.as_ref();
            assert_eq!(r.len(), n_cols, "ragged rows in ComplexMatrix::from_rows");
            data.extend_from_slice(r);
        }
        Self {
            rows: n_rows,
            cols: n_cols,
            data,
        }
    }

    pub fn from_real_diagonal(diag: &[f64]) -> Self {
        let mut m = Self::zeros(diag.len(), diag.len());
        for (i, &d) in diag.iter().enumerate() {
            m[(i, i)] = C64::new(d, 0.0);
        }
        m
    }

    /// Projector `|v><v|`.
    pub fn outer(v: &[C64]) -> Self {
        let n = v.len();
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                m[(i, j)] = v[i] * v[j].conj();
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn get(&self, row: usize, col: usize) -> Option<C64> {
        (row < self.rows && col < self.cols).then(|| self.data[row * self.cols + col])
    }

    pub fn dagger(&self) -> Self {
        let mut out = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out[(j, i)] = self[(i, j)].conj();
            }
        }
        out
    }

    pub fn trace(&self) -> C64 {
        (0..self.rows.min(self.cols)).map(|i| self[(i, i)]).sum()
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    /// Largest elementwise modulus of `self - other`.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        assert_eq!(
            (self.rows, self.cols),
            (other.rows, other.cols),
            "shape mismatch in max_abs_diff"
        );
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    pub fn scale(&self, s: C64) -> Self {
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|z| z * s).collect(),
        }
    }

    /// Kronecker product `self ⊗ other`.
    pub fn kron(&self, other: &Self) -> Self {
        let rows = self.rows * other.rows;
        let cols = self.cols * other.cols;
        let mut out = Self::zeros(rows, cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                let a = self[(i, j)];
                for k in 0..other.rows {
                    for l in 0..other.cols {
                        out[(i * other.rows + k, j * other.cols + l)] = a * other[(k, l)];
                    }
                }
            }
        }
        out
    }

    /// Checks `|m - m†| <= tol` entrywise, reporting the worst offending entry.
    pub fn check_hermitian(&self, tol: f64) -> Result<()> {
        if !self.is_square() {
            return Err(Error::NotSquare {
                rows: self.rows,
                cols: self.cols,
            });
        }
        let mut worst = (0, 0, 0.0_f64);
        for i in 0..self.rows {
            for j in i..self.cols {
                let d = (self[(i, j)] - self[(j, i)].conj()).norm();
                if d > worst.2 || d.is_nan() {
                    worst = (i, j, d);
                }
            }
        }
        if worst.2 > tol || worst.2.is_nan() {
            return Err(Error::NotHermitian {
                row: worst.0,
                col: worst.1,
                deviation: worst.2,
            });
        }
        Ok(())
    }
}

impl std::ops::Index<(usize, usize)> for ComplexMatrix {
    type Output = C64;

    fn index(&self, (row, col): (usize, usize)) -> &C64 {
        assert!(
            row < self.rows && col < self.cols,
            "index ({row}, {col}) out of bounds for {}x{} matrix",
            self.rows,
            self.cols
        );
        &self.data[row * self.cols + col]
    }
}

impl std::ops::IndexMut<(usize, usize)> for ComplexMatrix {
    fn index_mut(&mut self, (row, col): (usize, usize)) -> &mut C64 {
        assert!(
            row < self.rows && col < self.cols,
            "index ({row}, {col}) out of bounds for {}x{} matrix",
            self.rows,
            self.cols
        );
        &mut self.data[row * self.cols + col]
    }
}

impl Mul for &ComplexMatrix {
    type Output = ComplexMatrix;

    fn mul(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!(self.cols, rhs.rows, "shape mismatch in matrix product");
        let mut out = ComplexMatrix::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(i, k)];
                if a == ZERO {
                    continue;
                }
                for j in 0..rhs.cols {
                    out[(i, j)] += a * rhs[(k, j)];
                }
            }
        }
        out
    }
}

impl Add for &ComplexMatrix {
    type Output = ComplexMatrix;

    fn add(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        ComplexMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a + b).collect(),
        }
    }
}

impl Sub for &ComplexMatrix {
    type Output = ComplexMatrix;

    fn sub(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        ComplexMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a - b).collect(),
        }
    }
}

/// Pauli matrix `sigma_n` for `n` in 1..=3 (x, y, z), in the `(|e>, |g>)` basis.
pub fn pauli(n: usize) -> ComplexMatrix {
    let i = C64::new(0.0, 1.0);
    match n {
        1 => ComplexMatrix::from_rows(&[[ZERO, ONE], [ONE, ZERO]]),
        2 => ComplexMatrix::from_rows(&[[ZERO, -i], [i, ZERO]]),
        3 => ComplexMatrix::from_rows(&[[ONE, ZERO], [ZERO, -ONE]]),
        _ => panic!("Pauli index must be 1, 2 or 3, got {n}"),
    }
}

/// Eigenvalues (ascending) and matching eigenvectors of a real symmetric
/// matrix, stored row-major in `a` with side `n`.
///
/// Cyclic Jacobi rotations, stopping once the off-diagonal Frobenius norm
/// drops below `1e-14 * ||a||_F`.
pub(crate) fn jacobi_symmetric(a: &[f64], n: usize) -> Result<(Vec<f64>, Vec<f64>)> {
    const MAX_SWEEPS: usize = 100;
    debug_assert_eq!(a.len(), n * n);

    let mut a = a.to_vec();
    let mut v = vec![0.0; n * n];
    for i in 0..n {
        v[i * n + i] = 1.0;
    }

    let norm = a.iter().map(|x| x * x).sum::<f64>().sqrt();
    let off_norm = |a: &[f64]| -> f64 {
        let mut s = 0.0;
        for i in 0..n {
            for j in 0..n {
                if i != j {
                    s += a[i * n + j] * a[i * n + j];
                }
            }
        }
        s.sqrt()
    };

    let threshold = 1e-14 * norm;
    let mut sweeps = 0;
    while off_norm(&a) > threshold {
        if sweeps == MAX_SWEEPS {
            return Err(Error::NoConvergence {
                sweeps,
                off_norm: off_norm(&a),
            });
        }
        sweeps += 1;
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = a[p * n + q];
                if apq == 0.0 {
                    continue;
                }
                let theta = (a[q * n + q] - a[p * n + p]) / (2.0 * apq);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;

                for k in 0..n {
                    let akp = a[k * n + p];
                    let akq = a[k * n + q];
                    a[k * n + p] = c * akp - s * akq;
                    a[k * n + q] = s * akp + c * akq;
                }
                for k in 0..n {
                    let apk = a[p * n + k];
                    let aqk = a[q * n + k];
                    a[p * n + k] = c * apk - s * aqk;
                    a[q * n + k] = s * apk + c * aqk;
                }
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
    order.sort_by(|&i, &j| a[i * n + i].total_cmp(&a[j * n + j]));
    let values = order.iter().map(|&i| a[i * n + i]).collect();
    let mut vectors = vec![0.0; n * n];
    for (col, &src) in order.iter().enumerate() {
        for row in 0..n {
            vectors[row * n + col] = v[row * n + src];
        }
    }
    Ok((values, vectors))
}

/// Eigen-decomposition of a Hermitian matrix.
#[derive(Debug, Clone)]
pub struct HermitianEigen {
    /// Ascending eigenvalues.
    pub values: Vec<f64>,
    /// Unit eigenvectors as columns, in the order of `values`.
    pub vectors: ComplexMatrix,
}

impl HermitianEigen {
    /// Largest `||m v - lambda v||` over all eigenpairs.
    pub fn max_residual(&self, m: &ComplexMatrix) -> f64 {
        let n = self.values.len();
        let mut worst = 0.0_f64;
        for k in 0..n {
            let mut r2 = 0.0;
            for i in 0..n {
                let mut mv = ZERO;
                for j in 0..n {
                    mv += m[(i, j)] * self.vectors[(j, k)];
                }
                r2 += (mv - self.vectors[(i, k)] * self.values[k]).norm_sqr();
            }
            worst = worst.max(r2.sqrt());
        }
        worst
    }
}

/// Hermitian eigendecomposition for dimension up to 4.
///
/// The `n x n` Hermitian matrix `A + iB` is embedded as the real symmetric
/// `[[A, -B], [B, A]]`, whose spectrum is that of the original with every
/// eigenvalue doubled. Eigenvector `(x; y)` of the embedding maps back to
/// `x + iy`.
pub fn hermitian_eigen(m: &ComplexMatrix) -> Result<HermitianEigen> {
    if !m.is_square() {
        return Err(Error::NotSquare {
            rows: m.rows(),
            cols: m.cols(),
        });
    }
    let n = m.rows();
    if n == 0 || n > 4 {
        return Err(Error::UnsupportedDimension(n));
    }
    m.check_hermitian(1e-10)?;

    let big = 2 * n;
    let mut emb = vec![0.0; big * big];
    for i in 0..n {
        for j in 0..n {
            // symmetrize so that tiny Hermiticity noise cannot stall Jacobi
            let z = 0.5 * (m[(i, j)] + m[(j, i)].conj());
            emb[i * big + j] = z.re;
            emb[(i + n) * big + (j + n)] = z.re;
            emb[i * big + (j + n)] = -z.im;
            emb[(i + n) * big + j] = z.im;
        }
    }
    let (vals, vecs) = jacobi_symmetric(&emb, big)?;

    // Eigenvalues come in equal pairs and, inside a degenerate cluster, the
    // complex images of the real vectors can be linearly dependent. Greedily
    // take the candidate with the largest component orthogonal to what is
    // already chosen; that component always has norm >= 1/sqrt(n).
    let images: Vec<Vec<C64>> = (0..big)
        .map(|k| {
            (0..n)
                .map(|i| C64::new(vecs[i * big + k], vecs[(i + n) * big + k]))
                .collect()
        })
        .collect();
    let mut used = vec![false; big];
    let mut chosen: Vec<(f64, Vec<C64>)> = Vec::with_capacity(n);
    for _ in 0..n {
        let mut best: Option<(usize, Vec<C64>, f64)> = None;
        for (k, img) in images.iter().enumerate() {
            if used[k] {
                continue;
            }
            let mut cand = img.clone();
            for (_, u) in &chosen {
                let proj: C64 = u.iter().zip(&cand).map(|(a, b)| a.conj() * b).sum();
                for (c, a) in cand.iter_mut().zip(u) {
                    *c -= proj * a;
                }
            }
            let norm = cand.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
            if best.as_ref().is_none_or(|b| norm > b.2) {
                best = Some((k, cand, norm));
            }
        }
        let (k, mut cand, norm) = best.expect("candidates remain");
        used[k] = true;
        for c in cand.iter_mut() {
            *c /= norm;
        }
        chosen.push((vals[k], cand));
    }
    chosen.sort_by(|a, b| a.0.total_cmp(&b.0));
    let values: Vec<f64> = chosen.iter().map(|c| c.0).collect();
    let mut vectors = ComplexMatrix::zeros(n, n);
    for (col, (_, v)) in chosen.iter().enumerate() {
        for (row, z) in v.iter().enumerate() {
            vectors[(row, col)] = *z;
        }
    }
    Ok(HermitianEigen { values, vectors })
}

/// Ascending real eigenvalues of a Hermitian matrix of dimension at most 4.
pub fn hermitian_eigenvalues(m: &ComplexMatrix) -> Result<Vec<f64>> {
    hermitian_eigen(m).map(|e| e.values)
}

/// Real 3x3 matrix, row-major.
pub type Matrix3 = [[f64; 3]; 3];

/// Ascending eigenvalues of a real symmetric 3x3 matrix.
pub fn symmetric3_eigenvalues(m: &Matrix3) -> Result<[f64; 3]> {
    for i in 0..3 {
        for j in (i + 1)..3 {
            let d = (m[i][j] - m[j][i]).abs();
            if d > 1e-12 || d.is_nan() {
                return Err(Error::NotSymmetric {
                    row: i,
                    col: j,
                    deviation: d,
                });
            }
        }
    }
    let mut flat = [0.0; 9];
    for i in 0..3 {
        for j in 0..3 {
            flat[i * 3 + j] = 0.5 * (m[i][j] + m[j][i]);
        }
    }
    let (vals, _) = jacobi_symmetric(&flat, 3)?;
    Ok([vals[0], vals[1], vals[2]])
}

/// `a^T * a` for a real 3x3 matrix.
pub fn gram3(a: &Matrix3) -> Matrix3 {
    let mut out = [[0.0; 3]; 3];
    for i in 0..3 {
        for j in 0..3 {
            out[i][j] = (0..3).map(|k| a[k][i] * a[k][j]).sum();
        }
    }
    out
}

/// A validated two-qubit density matrix over `|ee>, |eg>, |ge>, |gg>`.
#[derive(Debug, Clone, PartialEq)]
pub struct TwoQubitDensityMatrix(ComplexMatrix);

impl TwoQubitDensityMatrix {
    /// Default tolerances: Hermiticity and trace to 1e-12, smallest eigenvalue
    /// no lower than -1e-10.
    pub fn new(m: ComplexMatrix) -> Result<Self> {
        Self::with_tolerances(m, 1e-12, 1e-12, 1e-10)
    }

    /// Same checks with caller-chosen tolerances, for numerically
    /// integrated states whose trace is only as good as the quadrature.
    pub fn with_tolerances(
        m: ComplexMatrix,
        hermitian_tol: f64,
        trace_tol: f64,
        psd_tol: f64,
    ) -> Result<Self> {
        if m.rows() != 4 || m.cols() != 4 {
            return Err(Error::UnsupportedDimension(m.rows().max(m.cols())));
        }
        m.check_hermitian(hermitian_tol)
            .map_err(|e| match e {
                Error::NotHermitian { deviation, .. } => Error::InvalidDensityMatrix {
                    property: "hermitian",
                    deviation,
                },
                other => other,
            })?;
        let tr = m.trace();
        let trace_dev = (tr - ONE).norm();
        if trace_dev > trace_tol || trace_dev.is_nan() {
            return Err(Error::InvalidDensityMatrix {
                property: "unit trace",
                deviation: trace_dev,
            });
        }
        let min = hermitian_eigenvalues(&m)?[0];
        if min < -psd_tol {
            return Err(Error::InvalidDensityMatrix {
                property: "positive semidefinite",
                deviation: -min,
            });
        }
        Ok(Self(m))
    }

    /// Pure state `|v><v|`; `v` must be normalized.
    pub fn pure(v: [C64; 4]) -> Result<Self> {
        Self::new(ComplexMatrix::outer(&v))
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.0
    }

    pub fn into_matrix(self) -> ComplexMatrix {
        self.0
    }

    pub fn element(&self, row: usize, col: usize) -> C64 {
        self.0[(row, col)]
    }
}

/// Transposes the second qubit's indices: `((i,j),(k,l)) -> ((i,l),(k,j))`.
pub fn partial_transpose_second(rho: &TwoQubitDensityMatrix) -> ComplexMatrix {
    partial_transpose_second_raw(rho.matrix())
}

pub(crate) fn partial_transpose_second_raw(m: &ComplexMatrix) -> ComplexMatrix {
    let mut out = ComplexMatrix::zeros(4, 4);
    for i in 0..2 {
        for j in 0..2 {
            for k in 0..2 {
                for l in 0..2 {
                    out[(2 * i + l, 2 * k + j)] = m[(2 * i + j, 2 * k + l)];
                }
            }
        }
    }
    out
}

/// Correlation tensor `t[n][m] = tr(rho sigma_n ⊗ sigma_m)` with
/// `sigma_1..3 = x, y, z`.
pub fn pauli_correlation_matrix(rho: &TwoQubitDensityMatrix) -> Result<Matrix3> {
    let mut t = [[0.0; 3]; 3];
    for n in 0..3 {
        for m in 0..3 {
            let op = pauli(n + 1).kron(&pauli(m + 1));
            let value = (rho.matrix() * &op).trace();
            if value.im.abs() > 1e-10 {
                return Err(Error::ComplexCorrelation {
                    n: n + 1,
                    m: m + 1,
                    imag: value.im,
                });
            }
            t[n][m] = value.re;
        }
    }
    Ok(t)
}
