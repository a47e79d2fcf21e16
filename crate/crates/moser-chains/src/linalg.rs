//! Dense Gauss-Jordan elimination over an exact (or floating) real field.

use crate::series::scalar::RealScalar;
use crate::series::Coeff;

/// Row-major dense matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct Matrix<R> {
    rows: usize,
    cols: usize,
    data: Vec<R>,
}

/// Result of reducing `A` to reduced row echelon form, with the
/// accumulated row operations `E` such that `E·A = reduced`.
#[derive(Clone, Debug)]
pub struct Rref<R> {
    pub reduced: Matrix<R>,
    pub transform: Matrix<R>,
    /// Pivot column of each nonzero row, in row order.
    pub pivots: Vec<usize>,
}

impl<R: RealScalar> Matrix<R> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix { rows, cols, data: vec![R::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, R::one());
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<R>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        let mut data = Vec::with_capacity(r * c);
        for row in rows {
            assert_eq!(row.len(), c, "ragged matrix");
            data.extend(row);
        }
        Matrix { rows: r, cols: c, data }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &R {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: R) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[R] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn map<S: RealScalar, F: Fn(&R) -> S>(&self, f: F) -> Matrix<S> {
        Matrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(f).collect() }
    }

    pub fn mul_vec(&self, v: &[R]) -> Vec<R> {
        assert_eq!(v.len(), self.cols);
        (0..self.rows)
            .map(|i| {
                let mut acc = R::zero();
                for (a, b) in self.row(i).iter().zip(v) {
                    if !a.is_zero() && !b.is_zero() {
                        acc = acc.plus(&a.times(b));
                    }
                }
                acc
            })
            .collect()
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    /// `row[target] -= factor · row[source]`.
    fn eliminate(&mut self, target: usize, source: usize, factor: &R) {
        for j in 0..self.cols {
            let s = self.get(source, j).clone();
            if s.is_zero() {
                continue;
            }
            let v = self.get(target, j).minus(&factor.times(&s));
            self.set(target, j, v);
        }
    }

    fn scale_row(&mut self, i: usize, factor: &R) {
        for j in 0..self.cols {
            let v = self.get(i, j).times(factor);
            self.set(i, j, v);
        }
    }

    /// Gauss-Jordan reduction. `tol` only matters for floating scalars.
    pub fn rref(&self, tol: f64) -> Rref<R> {
        let mut a = self.clone();
        let mut e = Self::identity(self.rows);
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..self.cols {
            if r == self.rows {
                break;
            }
            let Some(p) = (r..self.rows).find(|&i| a.get(i, c).is_pivot(tol)) else {
                continue;
            };
            a.swap_rows(r, p);
            e.swap_rows(r, p);
            let inv = R::one().over(a.get(r, c)).expect("pivot is invertible");
            a.scale_row(r, &inv);
            e.scale_row(r, &inv);
            for i in 0..self.rows {
                if i != r && !a.get(i, c).is_zero() {
                    let f = a.get(i, c).clone();
                    a.eliminate(i, r, &f);
                    e.eliminate(i, r, &f);
                }
            }
            pivots.push(c);
            r += 1;
        }
        Rref { reduced: a, transform: e, pivots }
    }

    pub fn rank(&self) -> usize {
        self.rref(1e-12).pivots.len()
    }

    /// Basis of the right kernel.
    pub fn kernel(&self) -> Vec<Vec<R>> {
        let red = self.rref(1e-12);
        let free: Vec<usize> = (0..self.cols).filter(|c| !red.pivots.contains(c)).collect();
        free.iter()
            .map(|&fc| {
                let mut v = vec![R::zero(); self.cols];
                v[fc] = R::one();
                for (i, &pc) in red.pivots.iter().enumerate() {
                    v[pc] = red.reduced.get(i, fc).negate();
                }
                v
            })
            .collect()
    }
}

impl<R: RealScalar> Rref<R> {
    /// A particular solution of `A·x = b` with free unknowns set to zero,
    /// or `None` if the system is inconsistent.
    pub fn solve(&self, b: &[R], tol: f64) -> Option<Vec<R>> {
        let eb = self.transform.mul_vec(b);
        let rank = self.pivots.len();
        let scale = 1.0 + b.iter().map(|v| v.to_f64().abs()).fold(0.0, f64::max);
        if eb[rank..].iter().any(|v| v.is_pivot(tol * scale)) {
            return None;
        }
        let mut x = vec![R::zero(); self.reduced.cols()];
        for (i, &c) in self.pivots.iter().enumerate() {
            x[c] = eb[i].clone();
        }
        Some(x)
    }
}

/// Solves a small square complex system `M·x = b` by Gaussian elimination
/// with partial pivoting on magnitude. `None` if singular.
pub fn solve_complex<C: Coeff>(m: &[Vec<C>], b: &[C]) -> Option<Vec<C>> {
    let n = b.len();
    let mut a: Vec<Vec<C>> = m.iter().zip(b).map(|(r, v)| r.iter().cloned().chain([v.clone()]).collect()).collect();
    for c in 0..n {
        let p = (c..n)
            .filter(|&i| !a[i][c].is_zero())
            .max_by(|&i, &j| a[i][c].magnitude().total_cmp(&a[j][c].magnitude()))?;
        a.swap(c, p);
        let inv = a[c][c].inv()?;
        for i in 0..n {
            if i != c && !a[i][c].is_zero() {
                let f = a[i][c].times(&inv);
                for j in c..=n {
                    let v = a[i][j].minus(&f.times(&a[c][j]));
                    a[i][j] = v;
                }
            }
        }
    }
    Some((0..n).map(|i| a[i][n].times(&a[i][i].inv().expect("nonzero pivot"))).collect())
}
