//! Small self-contained dense complex linear algebra.
//!
//! Everything here is sized for the problems in this workspace: 2x2 and 4x4
//! covariance blocks, and Fock-space operators up to a few thousand rows.
//! Two independent Hermitian eigenvalue routes are provided (cyclic Jacobi
//! and Householder tridiagonalisation + implicit QL) so that each can be
//! checked against the other.

use num_complex::Complex64;
use std::ops::{Index, IndexMut};

pub type C64 = Complex64;

pub const ZERO: C64 = C64::new(0.0, 0.0);
pub const ONE: C64 = C64::new(1.0, 0.0);
pub const I: C64 = C64::new(0.0, 1.0);

/// Dense row-major complex matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct CMatrix {
    rows: usize,
    cols: usize,
    data: Vec<C64>,
}

impl CMatrix {
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

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> C64) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Self { rows, cols, data }
    }

    pub fn from_rows<const N: usize>(rows: &[[C64; N]; N]) -> Self {
        Self::from_fn(N, N, |i, j| rows[i][j])
    }

    pub fn to_array<const N: usize>(&self) -> [[C64; N]; N] {
        assert_eq!((self.rows, self.cols), (N, N), "shape mismatch");
        let mut out = [[ZERO; N]; N];
        for (i, row) in out.iter_mut().enumerate() {
            for (j, v) in row.iter_mut().enumerate() {
                *v = self[(i, j)];
            }
        }
        out
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

    pub fn as_slice(&self) -> &[C64] {
        &self.data
    }

    pub fn as_mut_slice(&mut self) -> &mut [C64] {
        &mut self.data
    }

    pub fn row(&self, i: usize) -> &[C64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)].conj())
    }

    pub fn matmul(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.rows, "inner dimension mismatch");
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            let out_row = &mut out.data[i * other.cols..(i + 1) * other.cols];
            for k in 0..self.cols {
                let a = self.data[i * self.cols + k];
                if a == ZERO {
                    continue;
                }
                let b_row = &other.data[k * other.cols..(k + 1) * other.cols];
                for (o, b) in out_row.iter_mut().zip(b_row) {
                    *o += a * b;
                }
            }
        }
        out
    }

    pub fn scale(&self, s: C64) -> Self {
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|v| v * s).collect(),
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(a, b)| a - b)
                .collect(),
        }
    }

    pub fn trace(&self) -> C64 {
        (0..self.rows.min(self.cols)).map(|i| self[(i, i)]).sum()
    }

    /// Maximum absolute column sum.
    pub fn norm1(&self) -> f64 {
        (0..self.cols)
            .map(|j| (0..self.rows).map(|i| self[(i, j)].norm()).sum::<f64>())
            .fold(0.0, f64::max)
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|v| v.norm()).fold(0.0, f64::max)
    }

    /// Largest entrywise deviation from Hermiticity.
    pub fn hermiticity_defect(&self) -> f64 {
        assert!(self.is_square());
        let mut worst: f64 = 0.0;
        for i in 0..self.rows {
            for j in i..self.cols {
                worst = worst.max((self[(i, j)] - self[(j, i)].conj()).norm());
            }
        }
        worst
    }

    /// Principal submatrix on the given index set.
    pub fn submatrix(&self, idx: &[usize]) -> Self {
        Self::from_fn(idx.len(), idx.len(), |i, j| self[(idx[i], idx[j])])
    }
}

impl Index<(usize, usize)> for CMatrix {
    type Output = C64;
    fn index(&self, (i, j): (usize, usize)) -> &C64 {
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for CMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut C64 {
        &mut self.data[i * self.cols + j]
    }
}

/// Determinant by LU decomposition with partial pivoting.
pub fn det(a: &CMatrix) -> C64 {
    assert!(a.is_square(), "determinant of a non-square matrix");
    let n = a.rows();
    let mut m = a.clone();
    let mut det = ONE;
    for k in 0..n {
        let pivot = (k..n)
            .max_by(|&x, &y| m[(x, k)].norm().total_cmp(&m[(y, k)].norm()))
            .unwrap_or(k);
        if m[(pivot, k)] == ZERO {
            return ZERO;
        }
        if pivot != k {
            for j in 0..n {
                let tmp = m[(k, j)];
                m[(k, j)] = m[(pivot, j)];
                m[(pivot, j)] = tmp;
            }
            det = -det;
        }
        let p = m[(k, k)];
        det *= p;
        for i in k + 1..n {
            let f = m[(i, k)] / p;
            if f == ZERO {
                continue;
            }
            for j in k + 1..n {
                let v = m[(k, j)];
                m[(i, j)] -= f * v;
            }
        }
    }
    det
}

pub fn det2(m: &[[C64; 2]; 2]) -> C64 {
    m[0][0] * m[1][1] - m[0][1] * m[1][0]
}

pub fn inv2(m: &[[C64; 2]; 2]) -> Option<[[C64; 2]; 2]> {
    let d = det2(m);
    if d.norm() == 0.0 {
        return None;
    }
    Some([[m[1][1] / d, -m[0][1] / d], [-m[1][0] / d, m[0][0] / d]])
}

pub fn mul2(a: &[[C64; 2]; 2], b: &[[C64; 2]; 2]) -> [[C64; 2]; 2] {
    let mut out = [[ZERO; 2]; 2];
    for i in 0..2 {
        for j in 0..2 {
            out[i][j] = a[i][0] * b[0][j] + a[i][1] * b[1][j];
        }
    }
    out
}

pub fn adj2(a: &[[C64; 2]; 2]) -> [[C64; 2]; 2] {
    [
        [a[0][0].conj(), a[1][0].conj()],
        [a[0][1].conj(), a[1][1].conj()],
    ]
}

/// Eigenvalues of a Hermitian matrix by cyclic complex Jacobi rotations,
/// sorted ascending. Intended for small matrices.
pub fn eigvalsh_jacobi(a: &CMatrix) -> Vec<f64> {
    assert!(a.is_square());
    let n = a.rows();
    let mut m = a.clone();
    for sweep in 0..100 {
        let mut off = 0.0;
        for p in 0..n {
            for q in p + 1..n {
                off += m[(p, q)].norm_sqr();
            }
        }
        let scale: f64 = (0..n).map(|i| m[(i, i)].re.powi(2)).sum::<f64>() + off;
        if off <= 1e-34 * scale || off == 0.0 {
            break;
        }
        debug_assert!(sweep < 99, "Jacobi failed to converge");
        for p in 0..n {
            for q in p + 1..n {
                let w = m[(p, q)];
                let wa = w.norm();
                if wa == 0.0 {
                    continue;
                }
                // Phase so that the (p, q) entry becomes real and positive.
                let u = w / wa;
                let app = m[(p, p)].re;
                let aqq = m[(q, q)].re;
                let tau = (aqq - app) / (2.0 * wa);
                let t = if tau >= 0.0 {
                    1.0 / (tau + (1.0 + tau * tau).sqrt())
                } else {
                    -1.0 / (-tau + (1.0 + tau * tau).sqrt())
                };
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = t * c;
                for r in 0..n {
                    if r == p || r == q {
                        continue;
                    }
                    let x = m[(r, p)];
                    let y = m[(r, q)] * u.conj();
                    let rp = x * c - y * s;
                    let rq = y * c + x * s;
                    m[(r, p)] = rp;
                    m[(p, r)] = rp.conj();
                    m[(r, q)] = rq;
                    m[(q, r)] = rq.conj();
                }
                m[(p, p)] = C64::new(app - t * wa, 0.0);
                m[(q, q)] = C64::new(aqq + t * wa, 0.0);
                m[(p, q)] = ZERO;
                m[(q, p)] = ZERO;
            }
        }
    }
    let mut ev: Vec<f64> = (0..n).map(|i| m[(i, i)].re).collect();
    ev.sort_by(f64::total_cmp);
    ev
}

/// Eigenvalues of a Hermitian matrix via Householder reduction to a real
/// symmetric tridiagonal matrix followed by implicit QL, sorted ascending.
pub fn eigvalsh(a: &CMatrix) -> Vec<f64> {
    assert!(a.is_square());
    let n = a.rows();
    if n == 0 {
        return Vec::new();
    }
    let mut m = a.clone();
    let mut e = vec![0.0; n];
    let mut v = vec![ZERO; n];
    let mut p = vec![ZERO; n];
    for k in 0..n.saturating_sub(2) {
        let len = n - k - 1;
        let alpha = (k + 1..n).map(|i| m[(i, k)].norm_sqr()).sum::<f64>().sqrt();
        if alpha == 0.0 {
            e[k] = 0.0;
            continue;
        }
        let x0 = m[(k + 1, k)];
        let phase = if x0.norm() > 0.0 { x0 / x0.norm() } else { ONE };
        for i in 0..len {
            v[i] = m[(k + 1 + i, k)];
        }
        v[0] += phase * alpha;
        let vnorm2: f64 = v[..len].iter().map(|z| z.norm_sqr()).sum();
        let beta = 2.0 / vnorm2;
        for i in 0..len {
            let row = &m.data[(k + 1 + i) * n + k + 1..(k + 1 + i) * n + n];
            let mut acc = ZERO;
            for (a_ij, v_j) in row.iter().zip(&v[..len]) {
                acc += a_ij * v_j;
            }
            p[i] = acc * beta;
        }
        let kk: f64 = v[..len]
            .iter()
            .zip(&p[..len])
            .map(|(vi, pi)| (vi.conj() * pi).re)
            .sum::<f64>()
            * beta
            / 2.0;
        for i in 0..len {
            p[i] -= v[i] * kk;
        }
        for i in 0..len {
            let vi = v[i];
            let qi = p[i];
            let row = &mut m.data[(k + 1 + i) * n + k + 1..(k + 1 + i) * n + n];
            for (j, a_ij) in row.iter_mut().enumerate() {
                *a_ij -= vi * p[j].conj() + qi * v[j].conj();
            }
        }
        e[k] = alpha;
    }
    if n >= 2 {
        e[n - 2] = m[(n - 1, n - 2)].norm();
    }
    let mut d: Vec<f64> = (0..n).map(|i| m[(i, i)].re).collect();
    tridiagonal_ql(&mut d, &mut e);
    d.sort_by(f64::total_cmp);
    d
}

/// Implicit QL on a symmetric tridiagonal matrix with diagonal `d` and
/// sub-diagonal `e` (`e[i]` couples `i` and `i + 1`). Eigenvalues land in `d`.
fn tridiagonal_ql(d: &mut [f64], e: &mut [f64]) {
    let n = d.len();
    if n < 2 {
        return;
    }
    e[n - 1] = 0.0;
    for l in 0..n {
        let mut iter = 0;
        loop {
            let mut m = l;
            while m < n - 1 {
                let dd = d[m].abs() + d[m + 1].abs();
                if e[m].abs() + dd == dd {
                    break;
                }
                m += 1;
            }
            if m == l {
                break;
            }
            iter += 1;
            assert!(iter <= 200, "QL iteration failed to converge");
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
}

/// Splits the index set of a square matrix into the connected components of
/// its nonzero pattern. Structural zeros are exact zeros.
pub fn block_components(a: &CMatrix) -> Vec<Vec<usize>> {
    let n = a.rows();
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(parent: &mut [usize], mut x: usize) -> usize {
        while parent[x] != x {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        x
    }
    for i in 0..n {
        for j in i + 1..n {
            if a[(i, j)] != ZERO || a[(j, i)] != ZERO {
                let (ri, rj) = (find(&mut parent, i), find(&mut parent, j));
                if ri != rj {
                    parent[ri.max(rj)] = ri.min(rj);
                }
            }
        }
    }
    let mut groups: std::collections::BTreeMap<usize, Vec<usize>> = Default::default();
    for i in 0..n {
        let r = find(&mut parent, i);
        groups.entry(r).or_default().push(i);
    }
    groups.into_values().collect()
}

/// Hermitian eigenvalues, diagonalising each structurally decoupled block
/// separately. Sorted ascending.
pub fn eigvalsh_blocked(a: &CMatrix) -> Vec<f64> {
    let mut ev = Vec::with_capacity(a.rows());
    for block in block_components(a) {
        if block.len() == 1 {
            ev.push(a[(block[0], block[0])].re);
        } else {
            ev.extend(eigvalsh(&a.submatrix(&block)));
        }
    }
    ev.sort_by(f64::total_cmp);
    ev
}

/// Matrix exponential by scaling and squaring with a Taylor kernel.
pub fn expm(a: &CMatrix) -> CMatrix {
    assert!(a.is_square());
    let n = a.rows();
    let norm = a.norm1();
    let squarings = if norm > 0.5 {
        (norm / 0.5).log2().ceil() as u32
    } else {
        0
    };
    let scaled = a.scale(C64::new(0.5f64.powi(squarings as i32), 0.0));
    let mut result = CMatrix::identity(n);
    let mut term = CMatrix::identity(n);
    for k in 1..40 {
        term = term.matmul(&scaled).scale(C64::new(1.0 / k as f64, 0.0));
        result = result.add(&term);
        if term.max_abs() <= f64::EPSILON * 1e-3 * result.max_abs() {
            break;
        }
    }
    for _ in 0..squarings {
        result = result.matmul(&result);
    }
    result
}
