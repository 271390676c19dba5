use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::IntegerMatrix;

/// `left * original * right == diag(diagonal)` with both transforms
/// unimodular and `diagonal[i] | diagonal[i + 1]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SmithDecomposition {
    pub left: IntegerMatrix,
    pub diagonal: Vec<BigInt>,
    pub right: IntegerMatrix,
}

impl SmithDecomposition {
    /// Number of nonzero invariant factors, i.e. the rank over `Q`.
    pub fn rank(&self) -> usize {
        self.diagonal.iter().filter(|d| !d.is_zero()).count()
    }

    pub fn diagonal_matrix(&self) -> IntegerMatrix {
        IntegerMatrix::diagonal(self.left.rows(), self.right.cols(), &self.diagonal)
    }
}

/// Position of the nonzero entry of smallest absolute value in the trailing
/// submatrix starting at `(t, t)`; ties go to the first one in row-major order.
fn smallest_pivot(a: &IntegerMatrix, t: usize) -> Option<(usize, usize)> {
    let mut best: Option<(usize, usize, BigInt)> = None;
    for i in t..a.rows() {
        for j in t..a.cols() {
            let x = &a[(i, j)];
            if x.is_zero() {
                continue;
            }
            let ax = x.abs();
            if best.as_ref().map_or(true, |(_, _, b)| ax < *b) {
                best = Some((i, j, ax));
            }
        }
    }
    best.map(|(i, j, _)| (i, j))
}

pub fn smith_normal_form(m: &IntegerMatrix) -> SmithDecomposition {
    let (rows, cols) = (m.rows(), m.cols());
    let mut a = m.clone();
    let mut left = IntegerMatrix::identity(rows);
    let mut right = IntegerMatrix::identity(cols);

    'outer: for t in 0..rows.min(cols) {
        loop {
            let Some((pi, pj)) = smallest_pivot(&a, t) else {
                break 'outer;
            };
            a.swap_rows(t, pi);
            left.swap_rows(t, pi);
            a.swap_cols(t, pj);
            right.swap_cols(t, pj);

            let pivot = a[(t, t)].clone();
            let mut cleared = true;
            for i in t + 1..rows {
                let q = &a[(i, t)] / &pivot;
                if !q.is_zero() {
                    a.add_row_multiple(i, t, &-&q);
                    left.add_row_multiple(i, t, &-&q);
                }
                if !a[(i, t)].is_zero() {
                    cleared = false;
                }
            }
            for j in t + 1..cols {
                let q = &a[(t, j)] / &pivot;
                if !q.is_zero() {
                    a.add_col_multiple(j, t, &-&q);
                    right.add_col_multiple(j, t, &-&q);
                }
                if !a[(t, j)].is_zero() {
                    cleared = false;
                }
            }
            if !cleared {
                continue;
            }

            // The pivot must divide the whole trailing block.
            let offender = (t + 1..rows).find(|&i| {
                (t + 1..cols).any(|j| !a[(i, j)].is_multiple_of(&pivot))
            });
            match offender {
                Some(i) => {
                    let one = BigInt::one();
                    a.add_row_multiple(t, i, &one);
                    left.add_row_multiple(t, i, &one);
                }
                None => break,
            }
        }
        if a[(t, t)].is_negative() {
            a.negate_row(t);
            left.negate_row(t);
        }
    }

    let diagonal = (0..rows.min(cols)).map(|i| a[(i, i)].clone()).collect();
    SmithDecomposition {
        left,
        diagonal,
        right,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ints(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    fn check(m: &IntegerMatrix) -> SmithDecomposition {
        let snf = smith_normal_form(m);
        let prod = snf.left.mul(m).unwrap().mul(&snf.right).unwrap();
        assert_eq!(prod, snf.diagonal_matrix());
        assert_eq!(snf.left.determinant().unwrap().abs(), BigInt::one());
        assert_eq!(snf.right.determinant().unwrap().abs(), BigInt::one());
        for w in snf.diagonal.windows(2) {
            if w[0].is_zero() {
                assert!(w[1].is_zero());
            } else {
                assert!(w[1].is_multiple_of(&w[0]));
            }
        }
        snf
    }

    #[test]
    fn identity_is_its_own_normal_form() {
        let snf = check(&IntegerMatrix::identity(2));
        assert_eq!(snf.diagonal, ints(&[1, 1]));
        assert_eq!(snf.left, IntegerMatrix::identity(2));
        assert_eq!(snf.right, IntegerMatrix::identity(2));
    }

    #[test]
    fn zero_one_by_one() {
        let snf = check(&IntegerMatrix::from_i64_rows(&[[0]]));
        assert_eq!(snf.diagonal, ints(&[0]));
    }

    #[test]
    fn two_by_two_example() {
        // d1 = gcd of entries = 2, d1 * d2 = |det| = 8
        let m = IntegerMatrix::from_i64_rows(&[[2, 4], [6, 8]]);
        let snf = check(&m);
        assert_eq!(snf.diagonal, ints(&[2, 4]));
    }

    #[test]
    fn coprime_diagonal_merges() {
        let snf = check(&IntegerMatrix::from_i64_rows(&[[2, 0], [0, 3]]));
        assert_eq!(snf.diagonal, ints(&[1, 6]));
    }

    #[test]
    fn rectangular_and_degenerate_shapes() {
        check(&IntegerMatrix::from_i64_rows(&[[4, 6, 10], [6, 9, 15]]));
        check(&IntegerMatrix::from_i64_rows(&[[0, 0], [0, 0], [0, 7]]));
        let empty = smith_normal_form(&IntegerMatrix::zeros(0, 3));
        assert!(empty.diagonal.is_empty());
        assert_eq!(empty.right, IntegerMatrix::identity(3));
    }

    #[test]
    fn deterministic() {
        let m = IntegerMatrix::from_i64_rows(&[[3, 5, -7], [12, -4, 8], [1, 1, 1]]);
        assert_eq!(smith_normal_form(&m), smith_normal_form(&m));
    }
}
