//! Re-checks of reported results using only raw input data, direct
//! arithmetic and rank computations.

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use suture_core::boundary_homology::{BoundaryPresentation, Sign};
use suture_core::exact_linalg::{dot, rank_over};
use suture_core::Field;

pub fn gcd_all(v: &[BigInt]) -> BigInt {
    v.iter().fold(BigInt::zero(), |g, x| g.gcd(x))
}

pub fn is_small_prime(q: u64) -> bool {
    q >= 2 && (2..).take_while(|d| d * d <= q).all(|d| q % d != 0)
}

pub fn in_field_zero(field: Field, x: &BigInt) -> bool {
    match field {
        Field::Rationals => x.is_zero(),
        Field::Prime(p) => (x % BigInt::from(p)).is_zero(),
    }
}

/// The signed intersection pairing on `H_1(∂M)`, summed block by block.
pub fn omega(p: &BoundaryPresentation, u: &[BigInt], v: &[BigInt]) -> BigInt {
    let mut total = BigInt::zero();
    let mut offset = 0;
    for c in p.components() {
        let mut block = BigInt::zero();
        for i in 0..c.surface.genus {
            let a = offset + 2 * i;
            let b = a + 1;
            block += &u[a] * &v[b] - &u[b] * &v[a];
        }
        if c.sign == Sign::Minus {
            block = -block;
        }
        total += block;
        offset += c.surface.dim();
    }
    total
}

/// `Σ_j columns[j] v_j` for the given column range of the stored inclusion.
pub fn image(p: &BoundaryPresentation, cols: std::ops::Range<usize>, v: &[BigInt]) -> Vec<BigInt> {
    let m = p.inclusion();
    (0..m.rows())
        .map(|i| {
            m.row(i)[cols.clone()]
                .iter()
                .zip(v)
                .fold(BigInt::zero(), |s, (a, b)| s + a * b)
        })
        .collect()
}

/// Whether `x` lies in the span of the relations over `field`.
pub fn vanishes_in_ambient(field: Field, p: &BoundaryPresentation, x: &[BigInt]) -> bool {
    if p.relations().is_empty() {
        return x.iter().all(|e| in_field_zero(field, e));
    }
    let n = p.ambient_rank();
    let base = rank_over(field, p.relations(), n);
    let mut with: Vec<Vec<BigInt>> = p.relations().to_vec();
    with.push(x.to_vec());
    rank_over(field, &with, n) == base
}

/// `dim ker(H → H_1(M) ⊗ field)` for the given column range, from ranks.
pub fn kernel_dimension(field: Field, p: &BoundaryPresentation, cols: std::ops::Range<usize>) -> usize {
    let n = p.ambient_rank();
    let width = cols.len();
    let columns: Vec<Vec<BigInt>> = cols.map(|j| p.inclusion().column(j)).collect();
    let rel = rank_over(field, p.relations(), n);
    let mut joined = columns;
    joined.extend(p.relations().iter().cloned());
    width - (rank_over(field, &joined, n) - rel)
}

pub fn chi(functionals: &[Vec<BigInt>], h: &[BigInt]) -> BigInt {
    functionals
        .iter()
        .map(|f| dot(f, h))
        .fold(BigInt::zero(), |m, x| m.max(x))
}

pub fn bottom<'a>(
    classes: impl Iterator<Item = &'a Vec<BigInt>>,
    functionals: &[Vec<BigInt>],
    h: &[BigInt],
) -> BTreeSet<Vec<BigInt>> {
    let target = -chi(functionals, h);
    classes.filter(|a| dot(a, h) == target).cloned().collect()
}

pub fn combine(m: &BigInt, h1: &[BigInt], h2: &[BigInt]) -> Vec<BigInt> {
    h1.iter().zip(h2).map(|(a, b)| m * a + b).collect()
}

/// Whether `q` divides the torsion of `Z^rows / span(vectors)`, read off
/// from a rank drop modulo `q`.
pub fn rank_drops(vectors: &[Vec<BigInt>], dim: usize, q: u64) -> bool {
    rank_over(Field::Prime(q), vectors, dim) < rank_over(Field::Rationals, vectors, dim)
}

pub fn positive(x: &BigInt) -> bool {
    x.is_positive()
}

pub fn unit(x: &BigInt) -> bool {
    x.abs().is_one()
}
