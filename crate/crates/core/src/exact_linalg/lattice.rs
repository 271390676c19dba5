use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::smith::smith_normal_form;
use super::IntegerMatrix;

/// Finitely generated abelian group `Z^free_rank ⊕ Z/t1 ⊕ ... ⊕ Z/tk` with
/// `t1 | t2 | ... | tk` and every `ti > 1`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct AbelianGroupStructure {
    pub free_rank: usize,
    pub torsion_coefficients: Vec<BigInt>,
}

impl AbelianGroupStructure {
    pub fn trivial() -> Self {
        Self::default()
    }

    pub fn free(rank: usize) -> Self {
        Self {
            free_rank: rank,
            torsion_coefficients: Vec::new(),
        }
    }

    pub fn is_trivial(&self) -> bool {
        self.free_rank == 0 && self.torsion_coefficients.is_empty()
    }

    pub fn is_free(&self) -> bool {
        self.torsion_coefficients.is_empty()
    }

    /// Distinct primes dividing the torsion part, ascending.
    pub fn torsion_primes(&self) -> Vec<u64> {
        let mut primes: Vec<u64> = self
            .torsion_coefficients
            .iter()
            .flat_map(prime_divisors)
            .collect();
        primes.sort_unstable();
        primes.dedup();
        primes
    }
}

impl std::fmt::Display for AbelianGroupStructure {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let mut parts = Vec::new();
        if self.free_rank > 0 {
            parts.push(if self.free_rank == 1 {
                "Z".to_string()
            } else {
                format!("Z^{}", self.free_rank)
            });
        }
        parts.extend(self.torsion_coefficients.iter().map(|t| format!("Z/{t}")));
        if parts.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", parts.join(" + "))
        }
    }
}

/// gcd of the entries; zero for the zero vector.
pub fn content(v: &[BigInt]) -> BigInt {
    v.iter().fold(BigInt::zero(), |g, x| g.gcd(x))
}

pub fn is_primitive(v: &[BigInt]) -> bool {
    content(v).is_one()
}

/// Divides out the content. The zero vector is returned unchanged.
pub fn primitive_part(v: &[BigInt]) -> Vec<BigInt> {
    let c = content(v);
    if c.is_zero() {
        return v.to_vec();
    }
    v.iter().map(|x| x / &c).collect()
}

/// Row-style Hermite normal form of the lattice spanned by `vectors`.
///
/// The returned rows are in echelon form, each pivot is positive and the
/// entries above a pivot lie in `[0, pivot)`. Zero rows are dropped, so the
/// result is the canonical basis of the lattice.
pub fn hermite_normal_form(vectors: &[Vec<BigInt>], dim: usize) -> Vec<Vec<BigInt>> {
    let mut rows: Vec<Vec<BigInt>> = vectors.to_vec();
    let mut pivot_row = 0;
    let mut pivots = Vec::new();
    for col in 0..dim {
        loop {
            // smallest |entry| in this column among the unprocessed rows
            let best = (pivot_row..rows.len())
                .filter(|&i| !rows[i][col].is_zero())
                .min_by(|&a, &b| rows[a][col].abs().cmp(&rows[b][col].abs()));
            let Some(best) = best else { break };
            rows.swap(pivot_row, best);
            let mut done = true;
            for i in pivot_row + 1..rows.len() {
                if rows[i][col].is_zero() {
                    continue;
                }
                let q = &rows[i][col] / &rows[pivot_row][col];
                let (head, tail) = rows.split_at_mut(i);
                sub_multiple(&mut tail[0], &head[pivot_row], &q);
                if !rows[i][col].is_zero() {
                    done = false;
                }
            }
            if done {
                break;
            }
        }
        if pivot_row < rows.len() && !rows[pivot_row][col].is_zero() {
            if rows[pivot_row][col].is_negative() {
                for x in rows[pivot_row].iter_mut() {
                    *x = -std::mem::take(x);
                }
            }
            pivots.push((pivot_row, col));
            pivot_row += 1;
        }
    }
    rows.truncate(pivot_row);
    // reduce entries above each pivot
    for &(r, c) in &pivots {
        let p = rows[r][c].clone();
        for i in 0..r {
            let q = rows[i][c].div_floor(&p);
            if !q.is_zero() {
                let (head, tail) = rows.split_at_mut(r);
                sub_multiple(&mut head[i], &tail[0], &q);
            }
        }
    }
    rows
}

fn sub_multiple(target: &mut [BigInt], source: &[BigInt], q: &BigInt) {
    for (t, s) in target.iter_mut().zip(source) {
        *t -= s * q;
    }
}

/// Basis of the saturated integer kernel `{x in Z^n : m x = 0}`.
///
/// The kernel of an integer matrix is always a direct summand of `Z^n`; the
/// basis is read off the right Smith transform and returned in Hermite normal
/// form, each vector primitive.
pub fn kernel_basis(m: &IntegerMatrix) -> Vec<Vec<BigInt>> {
    let snf = smith_normal_form(m);
    let r = snf.rank();
    let raw: Vec<Vec<BigInt>> = (r..m.cols()).map(|j| snf.right.column(j)).collect();
    hermite_normal_form(&raw, m.cols())
        .into_iter()
        .map(|v| primitive_part(&v))
        .collect()
}

/// Structure of `Z^rows / image(m)`.
pub fn cokernel(m: &IntegerMatrix) -> AbelianGroupStructure {
    let snf = smith_normal_form(m);
    let r = snf.rank();
    AbelianGroupStructure {
        free_rank: m.rows() - r,
        torsion_coefficients: snf
            .diagonal
            .iter()
            .filter(|d| !d.is_zero() && !d.is_one())
            .cloned()
            .collect(),
    }
}

/// Order of the class of `v` in `Z^n / span(relations)`; `None` when the class
/// has infinite order.
pub fn element_order(v: &[BigInt], relations: &[Vec<BigInt>]) -> Option<BigInt> {
    let n = v.len();
    if relations.is_empty() {
        return if v.iter().all(Zero::is_zero) {
            Some(BigInt::one())
        } else {
            None
        };
    }
    let rel = IntegerMatrix::from_columns(relations, n).expect("relation length");
    let snf = smith_normal_form(&rel);
    let y = snf.left.mul_vec(v).expect("vector length");
    let mut order = BigInt::one();
    for (i, yi) in y.iter().enumerate() {
        let d = snf.diagonal.get(i).cloned().unwrap_or_else(BigInt::zero);
        if d.is_zero() {
            if !yi.is_zero() {
                return None;
            }
            continue;
        }
        let g = d.gcd(yi);
        order = order.lcm(&(&d / g));
    }
    Some(order)
}

/// Distinct prime divisors of `|n|` by trial division.
pub fn prime_divisors(n: &BigInt) -> Vec<u64> {
    let mut n = n.abs();
    let mut out = Vec::new();
    if n.is_zero() {
        return out;
    }
    let mut p = 2u64;
    while BigInt::from(p) * BigInt::from(p) <= n {
        if (&n % p).is_zero() {
            out.push(p);
            while (&n % p).is_zero() {
                n /= p;
            }
        }
        p += if p == 2 { 1 } else { 2 };
    }
    if n > BigInt::one() {
        out.push(n.to_u64().expect("prime factor exceeds u64"));
    }
    out
}

pub fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    if p < 4 {
        return true;
    }
    if p % 2 == 0 {
        return false;
    }
    let mut d = 3u64;
    while d.saturating_mul(d) <= p {
        if p % d == 0 {
            return false;
        }
        d += 2;
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ints(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    #[test]
    fn kernel_examples() {
        let k = kernel_basis(&IntegerMatrix::from_i64_rows(&[[1, 1]]));
        assert_eq!(k, vec![ints(&[1, -1])]);
        let k = kernel_basis(&IntegerMatrix::from_i64_rows(&[[2, 4]]));
        assert_eq!(k, vec![ints(&[2, -1])]);
        assert!(kernel_basis(&IntegerMatrix::identity(3)).is_empty());
    }

    #[test]
    fn kernel_is_saturated() {
        // over Q the kernel is spanned by (2, 2, -1); saturation keeps it primitive
        let m = IntegerMatrix::from_i64_rows(&[[1, 0, 2], [0, 1, 2]]);
        let k = kernel_basis(&m);
        assert_eq!(k, vec![ints(&[2, 2, -1])]);
        // zero matrix: kernel is everything, standard basis in HNF
        let k = kernel_basis(&IntegerMatrix::zeros(1, 2));
        assert_eq!(k, vec![ints(&[1, 0]), ints(&[0, 1])]);
    }

    #[test]
    fn cokernel_examples() {
        let c = cokernel(&IntegerMatrix::from_i64_rows(&[[2, 0], [0, 3]]));
        assert_eq!(c.free_rank, 0);
        assert_eq!(c.torsion_coefficients, ints(&[6]));
        assert_eq!(cokernel(&IntegerMatrix::zeros(1, 1)), AbelianGroupStructure::free(1));
        assert!(cokernel(&IntegerMatrix::from_i64_rows(&[[1]])).is_trivial());
    }

    #[test]
    fn content_examples() {
        assert_eq!(content(&ints(&[2, 4, 6])), BigInt::from(2));
        assert_eq!(content(&ints(&[0, 0])), BigInt::zero());
        assert_eq!(content(&ints(&[3, 5])), BigInt::one());
        assert_eq!(content(&ints(&[-4, 6])), BigInt::from(2));
    }

    #[test]
    fn hnf_is_canonical() {
        let a = hermite_normal_form(&[ints(&[2, 4, 1]), ints(&[0, 3, 3])], 3);
        let b = hermite_normal_form(&[ints(&[2, 7, 4]), ints(&[2, 4, 1]), ints(&[4, 11, 5])], 3);
        assert_eq!(a, b);
        assert_eq!(a.len(), 2);
    }

    #[test]
    fn element_orders() {
        // Z/2 + Z, presented by the relation (0, 2)
        let rel = vec![ints(&[0, 2])];
        assert_eq!(element_order(&ints(&[0, 1]), &rel), Some(BigInt::from(2)));
        assert_eq!(element_order(&ints(&[0, 2]), &rel), Some(BigInt::one()));
        assert_eq!(element_order(&ints(&[1, 0]), &rel), None);
        let rel = vec![ints(&[6])];
        assert_eq!(element_order(&ints(&[4]), &rel), Some(BigInt::from(3)));
    }

    #[test]
    fn primes() {
        assert_eq!(prime_divisors(&BigInt::from(360)), vec![2, 3, 5]);
        assert_eq!(prime_divisors(&BigInt::from(-49)), vec![7]);
        assert!(prime_divisors(&BigInt::one()).is_empty());
        assert!(is_prime(2) && is_prime(11) && is_prime(7919));
        assert!(!is_prime(0) && !is_prime(1) && !is_prime(91));
    }
}
