use std::cmp::Ordering;

use super::{IndexSet, IndexStrategy};
use crate::error::SolveError;
use crate::linalg::Matrix;

/// The `m` positions of largest `|scores[j]|`, ties going to the lower index.
pub fn greedy_indices(scores: &[f64], m: usize) -> Result<IndexSet, SolveError> {
    let n = scores.len();
    if m == 0 || m > n {
        return Err(SolveError::InvalidSubspaceDimension { m, n });
    }
    let mut order: Vec<usize> = (0..n).collect();
    let by_magnitude = |&i: &usize, &j: &usize| {
        scores[j].abs().partial_cmp(&scores[i].abs()).unwrap_or(Ordering::Equal).then(i.cmp(&j))
    };
    if m < n {
        order.select_nth_unstable_by(m - 1, by_magnitude);
    }
    order.truncate(m);
    IndexSet::new(order, n)
}

/// `m` consecutive indices starting at `cursor` (0-based), wrapping modulo `n`.
pub(crate) fn cyclic_indices(n: usize, m: usize, cursor: usize) -> Result<IndexSet, SolveError> {
    if m == 0 || m > n {
        return Err(SolveError::InvalidSubspaceDimension { m, n });
    }
    IndexSet::new((0..m).map(|k| (cursor + k) % n).collect(), n)
}

/// Index selection for an oblique step: greedy ranks coordinates by
/// `|(A^T r)_j|`, cyclic takes the window starting at `cursor`.
pub fn select_indices(
    strategy: IndexStrategy,
    a: &Matrix,
    r: &[f64],
    m: usize,
    cursor: usize,
) -> Result<IndexSet, SolveError> {
    match strategy {
        IndexStrategy::Cyclic => cyclic_indices(a.cols(), m, cursor),
        IndexStrategy::Greedy => greedy_indices(&a.matvec_transpose(r)?, m),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn greedy_by_magnitude() {
        let s = greedy_indices(&[0.1, -5.0, 3.0], 2).unwrap();
        assert_eq!(s.one_based(), vec![2, 3]);
    }

    #[test]
    fn greedy_ties_prefer_low_index() {
        assert_eq!(greedy_indices(&[1.0, 1.0, 1.0], 2).unwrap().one_based(), vec![1, 2]);
        assert_eq!(greedy_indices(&[0.0, -2.0, 2.0, 2.0], 2).unwrap().one_based(), vec![2, 3]);
    }

    #[test]
    fn cyclic_wraps_and_sorts() {
        // 1-based cursor 4 on n = 5 with m = 3 gives {4, 5, 1}.
        assert_eq!(cyclic_indices(5, 3, 3).unwrap().one_based(), vec![1, 4, 5]);
        assert_eq!(cyclic_indices(5, 5, 2).unwrap(), IndexSet::full(5));
    }

    #[test]
    fn select_uses_normal_residual() {
        // A^T r = (0.1, -5, 3) for A = I.
        let a = Matrix::identity(3);
        let s = select_indices(IndexStrategy::Greedy, &a, &[0.1, -5.0, 3.0], 2, 0).unwrap();
        assert_eq!(s.one_based(), vec![2, 3]);
        let a = Matrix::from_rows(&[[1.0, 0.0], [1.0, 1.0]]).unwrap();
        // A^T (1, 1) = (2, 1).
        let s = select_indices(IndexStrategy::Greedy, &a, &[1.0, 1.0], 1, 0).unwrap();
        assert_eq!(s.one_based(), vec![1]);
    }

    #[test]
    fn m_larger_than_n_is_rejected() {
        let a = Matrix::identity(3);
        for strategy in [IndexStrategy::Greedy, IndexStrategy::Cyclic] {
            assert_eq!(
                select_indices(strategy, &a, &[1.0; 3], 4, 0),
                Err(SolveError::InvalidSubspaceDimension { m: 4, n: 3 })
            );
        }
    }
}
