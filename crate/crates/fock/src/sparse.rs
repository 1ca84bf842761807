//! Sparse operators on the truncated two-mode space, indexed `n1 * d2 + n2`.

use gaussent_core::linalg::{C64, ZERO};

/// Row-major sparse matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct SparseOp {
    dim: usize,
    rows: Vec<Vec<(usize, C64)>>,
}

/// `<n + c - q| a†^c a^q |n>` on a space of dimension `d`, or `None` when
/// the result leaves the space.
fn monomial_element(n: usize, c: usize, q: usize, d: usize) -> Option<(usize, f64)> {
    if n < q || n - q + c >= d {
        return None;
    }
    let mut v = 1.0f64;
    for k in (n - q + 1)..=n {
        v *= (k as f64).sqrt();
    }
    for k in (n - q + 1)..=(n - q + c) {
        v *= (k as f64).sqrt();
    }
    Some((n - q + c, v))
}

/// One term `coef * (a1†^c1 a1^q1) (a2†^c2 a2^q2)` of a normal-ordered
/// polynomial.
#[derive(Clone, Copy, Debug)]
pub struct Monomial {
    pub coef: C64,
    pub c1: usize,
    pub q1: usize,
    pub c2: usize,
    pub q2: usize,
}

impl Monomial {
    pub fn new(coef: C64, (c1, q1): (usize, usize), (c2, q2): (usize, usize)) -> Self {
        Self {
            coef,
            c1,
            q1,
            c2,
            q2,
        }
    }
}

impl SparseOp {
    pub fn from_monomials(d1: usize, d2: usize, terms: &[Monomial]) -> Self {
        let dim = d1 * d2;
        let mut rows: Vec<Vec<(usize, C64)>> = vec![Vec::new(); dim];
        for n1 in 0..d1 {
            for n2 in 0..d2 {
                let col = n1 * d2 + n2;
                for t in terms {
                    let Some((m1, v1)) = monomial_element(n1, t.c1, t.q1, d1) else {
                        continue;
                    };
                    let Some((m2, v2)) = monomial_element(n2, t.c2, t.q2, d2) else {
                        continue;
                    };
                    rows[m1 * d2 + m2].push((col, t.coef * (v1 * v2)));
                }
            }
        }
        for row in &mut rows {
            row.sort_by_key(|e| e.0);
            let mut merged: Vec<(usize, C64)> = Vec::with_capacity(row.len());
            for &(j, v) in row.iter() {
                match merged.last_mut() {
                    Some(last) if last.0 == j => last.1 += v,
                    _ => merged.push((j, v)),
                }
            }
            merged.retain(|e| e.1 != ZERO);
            *row = merged;
        }
        Self { dim, rows }
    }

    pub fn rows(&self) -> &[Vec<(usize, C64)>] {
        &self.rows
    }

    pub fn apply(&self, x: &[C64], out: &mut [C64]) {
        for (o, row) in out.iter_mut().zip(&self.rows) {
            *o = row.iter().map(|&(j, v)| v * x[j]).sum();
        }
    }

    /// Maximum absolute column sum.
    pub fn norm1(&self) -> f64 {
        let mut col = vec![0.0; self.dim];
        for row in &self.rows {
            for &(j, v) in row {
                col[j] += v.norm();
            }
        }
        col.into_iter().fold(0.0, f64::max)
    }

    /// `x <- exp(self) x` by a scaled Taylor series.
    pub fn expm_action(&self, x: &mut [C64]) {
        let norm = self.norm1();
        if norm == 0.0 {
            return;
        }
        let steps = norm.ceil().max(1.0) as usize;
        let h = 1.0 / steps as f64;
        let mut term = vec![ZERO; self.dim];
        let mut next = vec![ZERO; self.dim];
        for _ in 0..steps {
            term.copy_from_slice(x);
            for k in 1..60 {
                self.apply(&term, &mut next);
                let s = h / k as f64;
                let mut tn = 0.0f64;
                for (t, n) in term.iter_mut().zip(&next) {
                    *t = n * s;
                    tn = tn.max(t.norm());
                }
                for (xi, t) in x.iter_mut().zip(&term) {
                    *xi += t;
                }
                let xn = x.iter().fold(0.0f64, |m, z| m.max(z.norm()));
                if tn <= 1e-18 * xn.max(1e-300) {
                    break;
                }
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use gaussent_core::linalg::{expm, CMatrix};

    fn dense(op: &SparseOp) -> CMatrix {
        let mut m = CMatrix::zeros(op.dim, op.dim);
        for (i, row) in op.rows.iter().enumerate() {
            for &(j, v) in row {
                m[(i, j)] = v;
            }
        }
        m
    }

    #[test]
    fn ladder_elements() {
        let a =
            SparseOp::from_monomials(4, 1, &[Monomial::new(C64::new(1.0, 0.0), (0, 1), (0, 0))]);
        let m = dense(&a);
        for n in 1..4 {
            assert!((m[(n - 1, n)].re - (n as f64).sqrt()).abs() < 1e-15);
        }
        let num =
            SparseOp::from_monomials(5, 1, &[Monomial::new(C64::new(1.0, 0.0), (1, 1), (0, 0))]);
        let m = dense(&num);
        for n in 0..5 {
            assert!((m[(n, n)].re - n as f64).abs() < 1e-14);
        }
    }

    #[test]
    fn expm_action_matches_dense() {
        let r = C64::new(0.7, 0.0);
        let g = SparseOp::from_monomials(
            6,
            6,
            &[
                Monomial::new(r, (0, 1), (0, 1)),
                Monomial::new(-r, (1, 0), (1, 0)),
            ],
        );
        let u = expm(&dense(&g));
        let mut x = vec![ZERO; 36];
        x[7] = C64::new(1.0, 0.0);
        g.expm_action(&mut x);
        for i in 0..36 {
            assert!((x[i] - u[(i, 7)]).norm() < 1e-13);
        }
    }
}
