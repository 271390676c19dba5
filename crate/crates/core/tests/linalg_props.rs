use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, ToPrimitive, Zero};
use proptest::prelude::*;

use suture_core::exact_linalg::{
    content, kernel_basis, primitive_part, rank_mod_p, smith_normal_form, IntegerMatrix,
};
use suture_core::primitive_pair::crt_lift;

fn det(m: &[Vec<i128>]) -> i128 {
    match m.len() {
        0 => 1,
        1 => m[0][0],
        n => (0..n)
            .map(|j| {
                let minor: Vec<Vec<i128>> = m[1..]
                    .iter()
                    .map(|row| row.iter().enumerate().filter(|(c, _)| *c != j).map(|(_, x)| *x).collect())
                    .collect();
                let sign = if j % 2 == 0 { 1 } else { -1 };
                sign * m[0][j] * det(&minor)
            })
            .sum(),
    }
}

fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    if k == 0 {
        return vec![vec![]];
    }
    if n < k {
        return vec![];
    }
    let mut out = subsets(n - 1, k);
    for mut s in subsets(n - 1, k - 1) {
        s.push(n - 1);
        out.push(s);
    }
    out
}

fn minors(m: &[Vec<i64>], k: usize) -> Vec<i128> {
    let rows = m.len();
    let cols = if rows == 0 { 0 } else { m[0].len() };
    let mut out = Vec::new();
    for rs in subsets(rows, k) {
        for cs in subsets(cols, k) {
            let sub: Vec<Vec<i128>> = rs
                .iter()
                .map(|&r| cs.iter().map(|&c| m[r][c] as i128).collect())
                .collect();
            out.push(det(&sub));
        }
    }
    out
}

fn brute_rank(m: &[Vec<i64>], modulus: Option<i128>) -> usize {
    let rows = m.len();
    let cols = if rows == 0 { 0 } else { m[0].len() };
    (1..=rows.min(cols))
        .rev()
        .find(|&k| {
            minors(m, k).iter().any(|d| match modulus {
                None => *d != 0,
                Some(p) => d.rem_euclid(p) != 0,
            })
        })
        .unwrap_or(0)
}

fn to_matrix(m: &[Vec<i64>], cols: usize) -> IntegerMatrix {
    IntegerMatrix::from_rows(
        m.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect(),
        cols,
    )
    .unwrap()
}

fn small_matrix() -> impl Strategy<Value = (usize, usize, Vec<Vec<i64>>)> {
    (1usize..=4, 1usize..=4).prop_flat_map(|(r, c)| {
        proptest::collection::vec(proptest::collection::vec(-6i64..=6, c), r)
            .prop_map(move |m| (r, c, m))
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn smith_matches_determinantal_divisors((_, c, m) in small_matrix()) {
        let a = to_matrix(&m, c);
        let snf = smith_normal_form(&a);
        prop_assert_eq!(snf.left.mul(&a).unwrap().mul(&snf.right).unwrap(), snf.diagonal_matrix());
        prop_assert_eq!(snf.left.determinant().unwrap().abs(), BigInt::from(1));
        prop_assert_eq!(snf.right.determinant().unwrap().abs(), BigInt::from(1));
        let mut prefix = BigInt::from(1);
        for (k, d) in snf.diagonal.iter().enumerate() {
            prop_assert!(!d.is_negative());
            prefix *= d;
            let g = minors(&m, k + 1).iter().fold(0i128, |g, x| g.gcd(x));
            prop_assert_eq!(prefix.to_i128().unwrap(), g);
        }
        for w in snf.diagonal.windows(2) {
            if !w[1].is_zero() {
                prop_assert!((&w[1] % &w[0]).is_zero());
            }
        }
    }

    #[test]
    fn kernel_is_saturated_and_complete((_, c, m) in small_matrix()) {
        let a = to_matrix(&m, c);
        let k = kernel_basis(&a);
        prop_assert_eq!(k.len() + brute_rank(&m, None), c);
        for v in &k {
            prop_assert!(a.mul_vec(v).unwrap().iter().all(Zero::is_zero));
            prop_assert_eq!(content(v), BigInt::from(1));
        }
        if !k.is_empty() {
            // saturated iff the maximal minors of the basis are coprime
            let basis: Vec<Vec<i64>> = (0..c)
                .map(|i| k.iter().map(|v| v[i].to_i64().unwrap()).collect())
                .collect();
            let g = minors(&basis, k.len()).iter().fold(0i128, |g, x| g.gcd(x));
            prop_assert_eq!(g, 1);
        }
    }

    #[test]
    fn rank_agrees_with_minors((_, c, m) in small_matrix(), p in prop::sample::select(vec![2u64, 3, 5, 7])) {
        let a = to_matrix(&m, c);
        prop_assert_eq!(a.rank(), brute_rank(&m, None));
        prop_assert_eq!(rank_mod_p(&a, p).unwrap(), brute_rank(&m, Some(p as i128)));
    }

    #[test]
    fn content_divides_out(v in proptest::collection::vec(-50i64..=50, 1..6), s in 1i64..20) {
        let v: Vec<BigInt> = v.into_iter().map(BigInt::from).collect();
        let scaled: Vec<BigInt> = v.iter().map(|x| x * s).collect();
        prop_assert_eq!(content(&scaled), content(&v) * s);
        let p = primitive_part(&scaled);
        if v.iter().any(|x| !x.is_zero()) {
            prop_assert_eq!(content(&p), BigInt::from(1));
        }
    }
}

const PRIMES: [u64; 11] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31];

proptest! {
    #![proptest_config(ProptestConfig::with_cases(150))]

    #[test]
    fn crt_matches_enumeration(
        picks in proptest::sample::subsequence(PRIMES.to_vec(), 1..=3),
        m in 1usize..=4,
        seed in any::<u64>(),
    ) {
        let modulus: u64 = picks.iter().product();
        prop_assume!(modulus <= 1000);
        let residues: Vec<Vec<BigInt>> = picks
            .iter()
            .enumerate()
            .map(|(i, &q)| (0..m).map(|j| BigInt::from((seed >> (i * 8 + j * 2)) % q)).collect())
            .collect();
        let x = crt_lift(&picks, &residues, m).unwrap();
        for j in 0..m {
            let hits: Vec<u64> = (0..modulus)
                .filter(|&t| picks.iter().zip(&residues).all(|(&q, r)| BigInt::from(t % q) == r[j]))
                .collect();
            prop_assert_eq!(hits.len(), 1);
            prop_assert_eq!(&x[j], &BigInt::from(hits[0]));
        }
    }
}
