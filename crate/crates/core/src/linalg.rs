//! Dense complex matrices, one-sided Jacobi SVD, and filtered least squares.

use crate::scalar::{creal, lit, Cx, Real};

/// Row-major dense complex matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct CMatrix<T> {
    rows: usize,
    cols: usize,
    data: Vec<Cx<T>>,
}

impl<T: Real> CMatrix<T> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self { rows, cols, data: vec![creal(T::zero()); rows * cols] }
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Cx<T>) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for r in 0..rows {
            for c in 0..cols {
                data.push(f(r, c));
            }
        }
        Self { rows, cols, data }
    }

    pub fn from_rows(rows: &[Vec<Cx<T>>]) -> Self {
        let cols = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|r| r.len() == cols), "ragged rows");
        Self { rows: rows.len(), cols, data: rows.concat() }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> Cx<T> {
        self.data[r * self.cols + c]
    }

    #[inline]
    pub fn set(&mut self, r: usize, c: usize, v: Cx<T>) {
        self.data[r * self.cols + c] = v;
    }

    pub fn row(&self, r: usize) -> &[Cx<T>] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |r, c| self.get(c, r).conj())
    }

    pub fn mul_vec(&self, x: &[Cx<T>]) -> Vec<Cx<T>> {
        assert_eq!(x.len(), self.cols);
        (0..self.rows)
            .map(|r| self.row(r).iter().zip(x).fold(creal(T::zero()), |a, (&m, &v)| a + m * v))
            .collect()
    }

    fn column(&self, c: usize) -> Vec<Cx<T>> {
        (0..self.rows).map(|r| self.get(r, c)).collect()
    }
}

/// Thin SVD `A = U diag(s) Vᴴ` with `s` sorted descending.
#[derive(Debug, Clone)]
pub struct Svd<T> {
    /// Left singular vectors as columns, `rows × k`.
    pub u: Vec<Vec<Cx<T>>>,
    pub s: Vec<T>,
    /// Right singular vectors as columns, `cols × k`.
    pub v: Vec<Vec<Cx<T>>>,
}

impl<T: Real> Svd<T> {
    pub fn max_sv(&self) -> T {
        self.s.first().copied().unwrap_or(T::zero())
    }

    pub fn min_sv(&self) -> T {
        self.s.last().copied().unwrap_or(T::zero())
    }

    /// `σ_max/σ_min`, infinite when the smallest singular value vanishes.
    pub fn cond(&self) -> T {
        let lo = self.min_sv();
        if lo == T::zero() {
            T::infinity()
        } else {
            self.max_sv() / lo
        }
    }

    pub fn rank(&self, rel_tol: T) -> usize {
        let cut = rel_tol * self.max_sv();
        self.s.iter().filter(|&&x| x > cut).count()
    }
}

fn dot<T: Real>(a: &[Cx<T>], b: &[Cx<T>]) -> Cx<T> {
    a.iter().zip(b).fold(creal(T::zero()), |acc, (&x, &y)| acc + x.conj() * y)
}

fn norm_sq<T: Real>(a: &[Cx<T>]) -> T {
    a.iter().map(|z| z.norm_sqr()).sum()
}

/// One-sided Jacobi SVD of a tall or square matrix given by columns.
fn jacobi_tall<T: Real>(mut cols: Vec<Vec<Cx<T>>>) -> Svd<T> {
    let n = cols.len();
    let mut v: Vec<Vec<Cx<T>>> = (0..n)
        .map(|j| (0..n).map(|i| creal(if i == j { T::one() } else { T::zero() })).collect())
        .collect();
    let tol = T::epsilon() * lit(8.0);
    for _sweep in 0..80 {
        let mut rotated = false;
        for p in 0..n {
            for q in (p + 1)..n {
                let alpha = norm_sq(&cols[p]);
                let beta = norm_sq(&cols[q]);
                let gamma = dot(&cols[p], &cols[q]);
                let g = gamma.norm();
                if g == T::zero() || g <= tol * (alpha * beta).sqrt() {
                    continue;
                }
                rotated = true;
                let phase = gamma / g;
                let zeta = (beta - alpha) / (lit::<T>(2.0) * g);
                let sign = if zeta >= T::zero() { T::one() } else { -T::one() };
                let t = sign / (zeta.abs() + (T::one() + zeta * zeta).sqrt());
                let c = T::one() / (T::one() + t * t).sqrt();
                let s = c * t;
                let ph = phase.conj();
                let (left, right) = cols.split_at_mut(q);
                rotate(&mut left[p], &mut right[0], c, s, ph);
                let (lv, rv) = v.split_at_mut(q);
                rotate(&mut lv[p], &mut rv[0], c, s, ph);
            }
        }
        if !rotated {
            break;
        }
    }
    let mut trip: Vec<(T, Vec<Cx<T>>, Vec<Cx<T>>)> = cols
        .into_iter()
        .zip(v)
        .map(|(col, vcol)| {
            let s = norm_sq(&col).sqrt();
            let u = if s > T::zero() { col.iter().map(|&z| z / s).collect() } else { col };
            (s, u, vcol)
        })
        .collect();
    trip.sort_by(|a, b| b.0.partial_cmp(&a.0).unwrap_or(std::cmp::Ordering::Equal));
    let mut out = Svd { u: Vec::new(), s: Vec::new(), v: Vec::new() };
    for (s, u, vc) in trip {
        out.s.push(s);
        out.u.push(u);
        out.v.push(vc);
    }
    out
}

/// Applies the rotation that orthogonalizes `x` and `e^{-iφ} y`.
fn rotate<T: Real>(x: &mut [Cx<T>], y: &mut [Cx<T>], c: T, s: T, ph: Cx<T>) {
    for (a, b) in x.iter_mut().zip(y.iter_mut()) {
        let yb = *b * ph;
        let na = *a * c - yb * s;
        let nb = *a * s + yb * c;
        *a = na;
        *b = nb;
    }
}

/// Thin singular value decomposition.
pub fn svd<T: Real>(a: &CMatrix<T>) -> Svd<T> {
    if a.rows() >= a.cols() {
        jacobi_tall((0..a.cols()).map(|c| a.column(c)).collect())
    } else {
        let t = jacobi_tall((0..a.rows()).map(|r| a.row(r).iter().map(|z| z.conj()).collect()).collect());
        Svd { u: t.v, s: t.s, v: t.u }
    }
}

/// Solution of a filtered least-squares problem.
#[derive(Debug, Clone)]
pub struct LstsqSolution<T> {
    pub x: Vec<Cx<T>>,
    pub singular_values: Vec<T>,
    /// Number of singular values above `rank_tol·σ_max`.
    pub rank: usize,
    /// Euclidean norm of `Ax − b`.
    pub residual: T,
}

/// Minimizes `‖Ax − b‖² + μ‖x‖²`; with `μ = 0` returns the minimum-norm
/// solution after discarding singular values below `rank_tol·σ_max`.
pub fn lstsq<T: Real>(a: &CMatrix<T>, b: &[Cx<T>], mu: T, rank_tol: T) -> LstsqSolution<T> {
    assert_eq!(a.rows(), b.len());
    let dec = svd(a);
    let cut = rank_tol * dec.max_sv();
    let mut x = vec![creal(T::zero()); a.cols()];
    for ((s, u), v) in dec.s.iter().zip(&dec.u).zip(&dec.v) {
        if *s <= cut || *s == T::zero() {
            continue;
        }
        let coef = dot(u, b) * (*s / (*s * *s + mu));
        for (xi, vi) in x.iter_mut().zip(v) {
            *xi = *xi + *vi * coef;
        }
    }
    let ax = a.mul_vec(&x);
    let residual = ax.iter().zip(b).map(|(p, q)| (*p - *q).norm_sqr()).sum::<T>().sqrt();
    LstsqSolution { x, rank: dec.rank(rank_tol), singular_values: dec.s, residual }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn random_matrix(rows: usize, cols: usize, seed: u64) -> CMatrix<f64> {
        let mut state = seed.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
        let mut next = move || {
            state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            ((state >> 11) as f64 / (1u64 << 53) as f64) * 2.0 - 1.0
        };
        CMatrix::from_fn(rows, cols, |_, _| Cx::new(next(), next()))
    }

    fn reconstruct(d: &Svd<f64>, rows: usize, cols: usize) -> CMatrix<f64> {
        CMatrix::from_fn(rows, cols, |r, c| {
            (0..d.s.len()).fold(Cx::new(0.0, 0.0), |acc, k| acc + d.u[k][r] * d.s[k] * d.v[k][c].conj())
        })
    }

    #[test]
    fn diagonal_singular_values() {
        let a = CMatrix::from_fn(3, 3, |r, c| if r == c { Cx::new([3.0, -5.0, 1.0][r], 0.0) } else { Cx::new(0.0, 0.0) });
        let d = svd(&a);
        assert_eq!(d.s, vec![5.0, 3.0, 1.0]);
    }

    #[test]
    fn duplicated_row_is_rank_deficient() {
        let mut rows = vec![
            vec![Cx::new(1.0, 2.0), Cx::new(0.5, -1.0), Cx::new(0.0, 0.3)],
            vec![Cx::new(0.0, 1.0), Cx::new(2.0, 0.0), Cx::new(-1.0, 0.0)],
        ];
        rows.push(rows[0].clone());
        let d = svd(&CMatrix::from_rows(&rows));
        assert_eq!(d.rank(1e-12), 2);
        assert!(d.min_sv() <= 1e-12 * d.max_sv());
    }

    proptest! {
        #[test]
        fn svd_reconstructs(rows in 1usize..9, cols in 1usize..9, seed in 0u64..10_000) {
            let a = random_matrix(rows, cols, seed);
            let d = svd(&a);
            let b = reconstruct(&d, rows, cols);
            for r in 0..rows {
                for c in 0..cols {
                    prop_assert!((a.get(r, c) - b.get(r, c)).norm() < 1e-12);
                }
            }
            for w in d.s.windows(2) {
                prop_assert!(w[0] >= w[1]);
            }
        }

        #[test]
        fn lstsq_matches_normal_equations(seed in 0u64..10_000) {
            let a = random_matrix(8, 4, seed);
            let b: Vec<Cx<f64>> = random_matrix(8, 1, seed + 1).mul_vec(&[Cx::new(1.0, 0.0)]);
            let sol = lstsq(&a, &b, 0.0, 1e-12);
            let r: Vec<Cx<f64>> = a.mul_vec(&sol.x).iter().zip(&b).map(|(p, q)| *p - *q).collect();
            let g = a.adjoint().mul_vec(&r);
            for z in g {
                prop_assert!(z.norm() < 1e-11);
            }
        }
    }

    #[test]
    fn minimum_norm_for_underdetermined() {
        let a = CMatrix::from_rows(&[vec![Cx::new(1.0, 0.0), Cx::new(1.0, 0.0)]]);
        let sol = lstsq(&a, &[Cx::new(2.0, 0.0)], 0.0, 1e-12);
        assert!((sol.x[0] - Cx::new(1.0, 0.0)).norm() < 1e-14);
        assert!((sol.x[1] - Cx::new(1.0, 0.0)).norm() < 1e-14);
    }
}
