//! Exact integer and prime-field linear algebra.
//!
//! Everything downstream works with [`IntegerMatrix`]. Computations "over a
//! field" take a [`Field`] tag: over `Q` vectors are kept as primitive integer
//! vectors (a `Q`-subspace is represented by its saturated integer lattice),
//! over `Z/p` they are kept as canonical residues in `[0, p)`.

mod lattice;
mod matrix;
pub mod modp;
mod smith;

use std::fmt;

use num_bigint::BigInt;
use num_traits::Zero;

use crate::error::{Error, Result};

pub use lattice::{
    cokernel, content, element_order, hermite_normal_form, is_prime, is_primitive,
    kernel_basis, prime_divisors, primitive_part, AbelianGroupStructure,
};
pub use matrix::{dot, IntegerMatrix};
pub use smith::{smith_normal_form, SmithDecomposition};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Field {
    Rationals,
    Prime(u64),
}

impl Field {
    pub fn prime(p: u64) -> Result<Self> {
        if is_prime(p) {
            Ok(Field::Prime(p))
        } else {
            Err(Error::NotPrime(p))
        }
    }

    /// Canonical representative of an integer vector in this field.
    pub fn normalize(&self, v: &[BigInt]) -> Vec<BigInt> {
        match *self {
            Field::Rationals => v.to_vec(),
            Field::Prime(p) => v.iter().map(|x| BigInt::from(modp::reduce(x, p))).collect(),
        }
    }

    pub fn is_zero(&self, x: &BigInt) -> bool {
        match *self {
            Field::Rationals => x.is_zero(),
            Field::Prime(p) => modp::reduce(x, p) == 0,
        }
    }
}

impl fmt::Display for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Field::Rationals => write!(f, "Q"),
            Field::Prime(p) => write!(f, "F{p}"),
        }
    }
}

pub fn rank_mod_p(m: &IntegerMatrix, p: u64) -> Result<usize> {
    if !is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    let rows: Vec<Vec<u64>> = (0..m.rows()).map(|i| modp::reduce_vec(m.row(i), p)).collect();
    Ok(modp::rank(&rows, m.cols(), p))
}

/// Basis of the kernel of `m` over `field`.
pub fn kernel_over(field: Field, m: &IntegerMatrix) -> Vec<Vec<BigInt>> {
    match field {
        Field::Rationals => kernel_basis(m),
        Field::Prime(p) => {
            let rows: Vec<Vec<u64>> =
                (0..m.rows()).map(|i| modp::reduce_vec(m.row(i), p)).collect();
            modp::nullspace(&rows, m.cols(), p)
                .into_iter()
                .map(|v| v.into_iter().map(BigInt::from).collect())
                .collect()
        }
    }
}

/// Dimension of the span of `vectors` (each of length `dim`) over `field`.
pub fn rank_over(field: Field, vectors: &[Vec<BigInt>], dim: usize) -> usize {
    match field {
        Field::Rationals => IntegerMatrix::from_rows(vectors.to_vec(), dim)
            .expect("vector length")
            .rank(),
        Field::Prime(p) => {
            let rows: Vec<Vec<u64>> = vectors.iter().map(|v| modp::reduce_vec(v, p)).collect();
            modp::rank(&rows, dim, p)
        }
    }
}

/// A basis of the span of `vectors` over `field`, canonical for the span:
/// the saturated Hermite basis over `Q`, the reduced echelon basis over `Z/p`.
pub fn span_basis(field: Field, vectors: &[Vec<BigInt>], dim: usize) -> Vec<Vec<BigInt>> {
    match field {
        Field::Rationals => {
            // saturate: the span over Q meets Z^dim in the kernel of the
            // annihilator of the vectors
            let m = IntegerMatrix::from_rows(vectors.to_vec(), dim).expect("vector length");
            let annihilator = kernel_basis(&m);
            let ann = IntegerMatrix::from_rows(annihilator, dim).expect("vector length");
            kernel_basis(&ann)
        }
        Field::Prime(p) => {
            let mut rows: Vec<Vec<u64>> = vectors.iter().map(|v| modp::reduce_vec(v, p)).collect();
            modp::rref(&mut rows, dim, p);
            rows.into_iter()
                .map(|v| v.into_iter().map(BigInt::from).collect())
                .collect()
        }
    }
}

pub fn same_span(field: Field, a: &[Vec<BigInt>], b: &[Vec<BigInt>], dim: usize) -> bool {
    let ra = rank_over(field, a, dim);
    let rb = rank_over(field, b, dim);
    if ra != rb {
        return false;
    }
    let joined: Vec<Vec<BigInt>> = a.iter().chain(b).cloned().collect();
    rank_over(field, &joined, dim) == ra
}

/// `{x : form(v, x) = 0 for all v in vectors}` where `form(v, x) = v^T F x`.
pub fn orthogonal_complement(
    field: Field,
    vectors: &[Vec<BigInt>],
    form: &IntegerMatrix,
) -> Vec<Vec<BigInt>> {
    let n = form.cols();
    let rows: Vec<Vec<BigInt>> = vectors
        .iter()
        .map(|v| form.transpose().mul_vec(v).expect("vector length"))
        .collect();
    let m = IntegerMatrix::from_rows(rows, n).expect("vector length");
    kernel_over(field, &m)
}

/// `u^T F v`, reduced into the field.
pub fn bilinear(field: Field, form: &IntegerMatrix, u: &[BigInt], v: &[BigInt]) -> BigInt {
    let fv = form.mul_vec(v).expect("vector length");
    field.normalize(&[dot(u, &fv)]).remove(0)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ints(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    #[test]
    fn rank_mod_p_examples() {
        let m = IntegerMatrix::from_i64_rows(&[[2, 4], [6, 8]]);
        assert_eq!(rank_mod_p(&m, 2).unwrap(), 0);
        assert_eq!(rank_mod_p(&IntegerMatrix::identity(3), 5).unwrap(), 3);
        assert_eq!(rank_mod_p(&IntegerMatrix::from_i64_rows(&[[3]]), 3).unwrap(), 0);
        assert_eq!(rank_mod_p(&m, 4), Err(Error::NotPrime(4)));
    }

    #[test]
    fn kernel_mod_p_larger_than_rational() {
        let m = IntegerMatrix::from_i64_rows(&[[2, 0], [0, 1]]);
        assert!(kernel_over(Field::Rationals, &m).is_empty());
        assert_eq!(kernel_over(Field::Prime(2), &m), vec![ints(&[1, 0])]);
    }

    #[test]
    fn span_comparison() {
        let a = vec![ints(&[1, 1, 0]), ints(&[0, 1, 1])];
        let b = vec![ints(&[1, 2, 1]), ints(&[1, 0, -1])];
        assert!(same_span(Field::Rationals, &a, &b, 3));
        let c = vec![ints(&[2, 0, 0]), ints(&[0, 1, 1])];
        assert!(!same_span(Field::Rationals, &a, &c, 3));
        // mod 2 both vectors of b reduce to (1,0,1)
        assert!(!same_span(Field::Prime(2), &a, &b, 3));
        assert!(same_span(Field::Prime(2), &b, &[ints(&[3, 0, 5])], 3));
    }

    #[test]
    fn rational_span_basis_is_saturated() {
        let basis = span_basis(Field::Rationals, &[ints(&[2, 4])], 2);
        assert_eq!(basis, vec![ints(&[1, 2])]);
    }

    #[test]
    fn symplectic_complement_of_a_line() {
        let j = IntegerMatrix::from_i64_rows(&[[0, 1], [-1, 0]]);
        let perp = orthogonal_complement(Field::Rationals, &[ints(&[1, 0])], &j);
        assert_eq!(perp, vec![ints(&[1, 0])]);
    }
}
