//! Householder QR, with optional column pivoting for rank-revealing
//! least-squares solves.

use super::{dot, norm2, LinalgError, Matrix};

/// Columns whose remaining norm falls below this fraction of the first
/// pivot are treated as numerically dependent.
pub const PIVOT_RTOL: f64 = 1e-12;

struct Reflector {
    start: usize,
    v: Vec<f64>,
    beta: f64,
}

impl Reflector {
    /// Reflector mapping `x` onto `alpha * e_1`. `None` when `x` is zero.
    fn new(start: usize, x: &[f64]) -> Option<(Self, f64)> {
        let norm = norm2(x);
        if norm == 0.0 {
            return None;
        }
        let alpha = if x[0] >= 0.0 { -norm } else { norm };
        let mut v = x.to_vec();
        v[0] -= alpha;
        let beta = 2.0 / dot(&v, &v);
        Some((Self { start, v, beta }, alpha))
    }

    fn apply(&self, x: &mut [f64]) {
        let tail = &mut x[self.start..];
        let s = self.beta * dot(&self.v, tail);
        for (t, &v) in tail.iter_mut().zip(&self.v) {
            *t -= s * v;
        }
    }
}

pub(crate) struct HouseholderQr {
    rows: usize,
    cols: usize,
    /// Column-major working copy; upper triangle holds R after factoring.
    r_cols: Vec<Vec<f64>>,
    reflectors: Vec<Reflector>,
    perm: Vec<usize>,
    rank: usize,
}

impl HouseholderQr {
    pub(crate) fn factor(a: &Matrix, pivoting: bool) -> Self {
        let (rows, cols) = (a.rows(), a.cols());
        let mut r_cols: Vec<Vec<f64>> = (0..cols).map(|j| a.column(j)).collect();
        let mut perm: Vec<usize> = (0..cols).collect();
        let mut reflectors = Vec::new();
        let steps = rows.min(cols);
        let mut rank = 0;
        let mut first_pivot = 0.0;

        for k in 0..steps {
            if pivoting {
                let (p, pn) = (k..cols)
                    .map(|j| (j, norm2(&r_cols[j][k..])))
                    .fold((k, -1.0), |best, cur| if cur.1 > best.1 { cur } else { best });
                if k == 0 {
                    first_pivot = pn;
                }
                if pn == 0.0 || pn <= PIVOT_RTOL * first_pivot {
                    break;
                }
                r_cols.swap(k, p);
                perm.swap(k, p);
            }
            if let Some((h, alpha)) = Reflector::new(k, &r_cols[k][k..]) {
                r_cols[k][k] = alpha;
                r_cols[k][k + 1..].iter_mut().for_each(|v| *v = 0.0);
                for col in r_cols.iter_mut().skip(k + 1) {
                    h.apply(col);
                }
                reflectors.push(h);
            }
            rank += 1;
        }
        Self { rows, cols, r_cols, reflectors, perm, rank }
    }

    pub(crate) fn apply_qt(&self, x: &mut [f64]) {
        for h in &self.reflectors {
            h.apply(x);
        }
    }

    pub(crate) fn apply_q(&self, x: &mut [f64]) {
        for h in self.reflectors.iter().rev() {
            h.apply(x);
        }
    }

    fn r_entry(&self, i: usize, j: usize) -> f64 {
        self.r_cols[j][i]
    }

    pub(crate) fn r(&self) -> Matrix {
        Matrix::from_fn(self.rows, self.cols, |i, j| if i <= j { self.r_entry(i, j) } else { 0.0 })
    }

    pub(crate) fn q(&self) -> Matrix {
        let mut q = Matrix::zeros(self.rows, self.rows);
        let mut e = vec![0.0; self.rows];
        for j in 0..self.rows {
            e.iter_mut().for_each(|v| *v = 0.0);
            e[j] = 1.0;
            self.apply_q(&mut e);
            for i in 0..self.rows {
                q[(i, j)] = e[i];
            }
        }
        q
    }
}

/// Solves `R[0..k, 0..k] z = c` for upper-triangular `R` given column-major.
fn back_substitute(r_cols: &[Vec<f64>], c: &[f64]) -> Vec<f64> {
    let k = c.len();
    let mut z = c.to_vec();
    for i in (0..k).rev() {
        let s: f64 = ((i + 1)..k).map(|j| r_cols[j][i] * z[j]).sum();
        z[i] = (z[i] - s) / r_cols[i][i];
    }
    z
}

/// Thin QR factorization `A = Q R` with `Q` square orthogonal.
pub fn householder_qr(a: &Matrix) -> (Matrix, Matrix) {
    let f = HouseholderQr::factor(a, false);
    (f.q(), f.r())
}

/// Minimum-norm least-squares solution of `min ||W y - r||_2`.
///
/// Column-pivoted QR detects the numerical rank; when `W` is rank deficient
/// a second QR of the leading trapezoid picks the minimum-norm solution on
/// that rank.
pub fn solve_least_squares(w: &Matrix, r: &[f64]) -> Result<Vec<f64>, LinalgError> {
    if r.len() != w.rows() {
        return Err(LinalgError::DimensionMismatch {
            op: "solve_least_squares",
            expected: w.rows(),
            found: r.len(),
        });
    }
    let m = w.cols();
    let f = HouseholderQr::factor(w, true);
    let rank = f.rank;
    let mut y = vec![0.0; m];
    if rank == 0 {
        return Ok(y);
    }

    let mut qtr = r.to_vec();
    f.apply_qt(&mut qtr);
    let c = &qtr[..rank];

    let z = if rank == m {
        back_substitute(&f.r_cols, c)
    } else {
        // T = [R11 R12] is rank x m with full row rank; T^T = Q2 R2.
        let t_transpose = Matrix::from_fn(m, rank, |j, i| if i <= j { f.r_entry(i, j) } else { 0.0 });
        let g = HouseholderQr::factor(&t_transpose, false);
        // R2^T w = c by forward substitution.
        let mut wv = vec![0.0; m];
        for i in 0..rank {
            let s: f64 = (0..i).map(|j| g.r_entry(j, i) * wv[j]).sum();
            wv[i] = (c[i] - s) / g.r_entry(i, i);
        }
        g.apply_q(&mut wv);
        wv
    };

    for (k, &p) in f.perm.iter().enumerate() {
        y[p] = z[k];
    }
    Ok(y)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn approx_eq(a: &[f64], b: &[f64], tol: f64) -> bool {
        a.len() == b.len() && a.iter().zip(b).all(|(x, y)| (x - y).abs() <= tol)
    }

    #[test]
    fn qr_reconstructs_input() {
        let a = Matrix::from_rows(&[[2.0, -1.0, 0.5], [1.0, 3.0, -2.0], [0.0, 1.0, 4.0], [1.0, 1.0, 1.0]])
            .unwrap();
        let (q, r) = householder_qr(&a);
        let qr = q.matmul(&r).unwrap();
        assert!(approx_eq(qr.as_slice(), a.as_slice(), 1e-14));
        let qtq = q.transpose().matmul(&q).unwrap();
        assert!(approx_eq(qtq.as_slice(), Matrix::identity(4).as_slice(), 1e-14));
        for i in 0..4 {
            for j in 0..i.min(3) {
                assert_eq!(r[(i, j)], 0.0);
            }
        }
    }

    #[test]
    fn single_column() {
        let w = Matrix::from_rows(&[[2.0], [0.0]]).unwrap();
        assert_eq!(solve_least_squares(&w, &[2.0, 1.0]).unwrap(), vec![1.0]);
    }

    #[test]
    fn zero_column_gives_zero() {
        let w = Matrix::from_rows(&[[0.0], [0.0]]).unwrap();
        assert_eq!(solve_least_squares(&w, &[1.0, 1.0]).unwrap(), vec![0.0]);
    }

    #[test]
    fn identity_recovers_rhs() {
        let y = solve_least_squares(&Matrix::identity(2), &[5.0, -5.0]).unwrap();
        assert!(approx_eq(&y, &[5.0, -5.0], 1e-15));
    }

    #[test]
    fn rank_deficient_is_minimum_norm() {
        // Two identical columns: any y1 + y2 = 1 fits r exactly; the minimum
        // norm choice splits it evenly.
        let w = Matrix::from_rows(&[[1.0, 1.0], [0.0, 0.0], [0.0, 0.0]]).unwrap();
        let y = solve_least_squares(&w, &[1.0, 3.0, -2.0]).unwrap();
        assert!(approx_eq(&y, &[0.5, 0.5], 1e-14), "{y:?}");

        let w = Matrix::from_rows(&[[1.0, 2.0, 0.0], [1.0, 2.0, 0.0], [0.0, 0.0, 1.0]]).unwrap();
        let y = solve_least_squares(&w, &[5.0, 5.0, 3.0]).unwrap();
        // Columns 1 and 2 are parallel: minimum norm over y1 + 2 y2 = 5.
        assert!(approx_eq(&y, &[1.0, 2.0, 3.0], 1e-13), "{y:?}");
    }

    #[test]
    fn wide_system_is_minimum_norm() {
        let w = Matrix::from_rows(&[[1.0, 1.0]]).unwrap();
        let y = solve_least_squares(&w, &[2.0]).unwrap();
        assert!(approx_eq(&y, &[1.0, 1.0], 1e-14));
    }

    #[test]
    fn dimension_mismatch() {
        assert!(solve_least_squares(&Matrix::identity(3), &[1.0]).is_err());
    }
}
