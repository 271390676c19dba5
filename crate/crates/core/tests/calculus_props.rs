use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive};
use proptest::prelude::*;

use suture_core::floer_simplicity::tower_homology;
use suture_core::norm_calculus::{
    check_h1h2_part1, check_h1h2_part2, stabilization_bound, validate_adjunction, BasicClassSet,
    NormOracle,
};
use suture_core::surface_calculus::{
    classify_annulus, cut_paste_class, lower_sub_threshold, verify_lower_sub, AnnulusType,
    SurfaceClass,
};

type V = Vec<i64>;

fn big(v: &[i64]) -> Vec<BigInt> {
    v.iter().map(|&x| BigInt::from(x)).collect()
}

fn pair(a: &[i64], b: &[i64]) -> i64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn chi(phis: &[V], h: &[i64]) -> i64 {
    phis.iter().map(|p| pair(p, h)).max().unwrap_or(0).max(0)
}

fn bottom(classes: &[V], phis: &[V], h: &[i64]) -> BTreeSet<V> {
    let c = chi(phis, h);
    classes.iter().filter(|a| pair(a, h) == -c).cloned().collect()
}

/// Symmetric functionals plus classes inside their hull: vertices, integral
/// midpoints and 0.
fn norm_instance() -> impl Strategy<Value = (usize, Vec<V>, Vec<V>, V, V)> {
    (1usize..=3).prop_flat_map(|r| {
        let vec = proptest::collection::vec(-3i64..=3, r);
        (
            Just(r),
            proptest::collection::vec(vec.clone(), 1..=3),
            proptest::collection::vec(any::<bool>(), 16),
            vec.clone(),
            vec,
        )
            .prop_map(|(r, gens, picks, h1, h2)| {
                let mut phis: Vec<V> = Vec::new();
                for g in gens.iter().filter(|g| g.iter().any(|&x| x != 0)) {
                    phis.push(g.clone());
                    phis.push(g.iter().map(|x| -x).collect());
                }
                let mut candidates: BTreeSet<V> = phis.iter().cloned().collect();
                candidates.insert(vec![0; r]);
                for a in &phis {
                    for b in &phis {
                        let s: V = a.iter().zip(b).map(|(x, y)| x + y).collect();
                        if s.iter().all(|x| x % 2 == 0) {
                            candidates.insert(s.iter().map(|x| x / 2).collect());
                        }
                    }
                }
                let classes: Vec<V> = candidates
                    .into_iter()
                    .zip(picks.iter().cycle())
                    .filter(|(_, &keep)| keep)
                    .map(|(c, _)| c)
                    .take(16)
                    .collect();
                (r, phis, classes, h1, h2)
            })
    })
}

fn build(r: usize, phis: &[V], classes: &[V]) -> (NormOracle, BasicClassSet) {
    let norm = NormOracle::new(r, phis.iter().map(|p| big(p)).collect()).unwrap();
    let b = BasicClassSet::new(r, classes.iter().map(|c| big(c)).collect()).unwrap();
    (norm, b)
}

fn to_set(b: &BasicClassSet) -> BTreeSet<V> {
    b.classes()
        .map(|c| c.iter().map(|x| x.to_i64().unwrap()).collect())
        .collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn chi_minus_is_a_seminorm((r, phis, _, h, k) in norm_instance(), n in -4i64..=4) {
        let norm = NormOracle::new(r, phis.iter().map(|p| big(p)).collect()).unwrap();
        let hk: V = h.iter().zip(&k).map(|(a, b)| a + b).collect();
        let nh: V = h.iter().map(|a| n * a).collect();
        let c = |v: &V| norm.chi_minus(&big(v)).unwrap();
        prop_assert!(c(&hk) <= c(&h) + c(&k));
        prop_assert_eq!(c(&nh), c(&h) * BigInt::from(n.abs()));
        prop_assert!(!c(&h).is_negative());
        prop_assert_eq!(c(&h), BigInt::from(chi(&phis, &h)));
    }

    #[test]
    fn sum_and_stabilization_hold((r, phis, classes, h1, h2) in norm_instance()) {
        let (norm, b) = build(r, &phis, &classes);
        prop_assert!(validate_adjunction(&b, &norm).unwrap().consistent());
        let (g1, g2) = (big(&h1), big(&h2));
        let sum: V = h1.iter().zip(&h2).map(|(a, b)| a + b).collect();

        let p1 = check_h1h2_part1(&b, &norm, &g1, &g2).unwrap();
        let additive = chi(&phis, &sum) == chi(&phis, &h1) + chi(&phis, &h2);
        prop_assert_eq!(p1.additive, additive);
        if additive {
            let lhs = bottom(&classes, &phis, &sum);
            let rhs: BTreeSet<V> = bottom(&classes, &phis, &h1)
                .intersection(&bottom(&classes, &phis, &h2))
                .cloned()
                .collect();
            prop_assert_eq!(&lhs, &rhs);
            prop_assert_eq!(to_set(&p1.bottom_of_sum), lhs);
        }

        let p2 = check_h1h2_part2(&b, &norm, &g1, &g2).unwrap();
        prop_assert_eq!(p2.strict, !additive);
        if !additive {
            let triple: BTreeSet<V> = bottom(&classes, &phis, &h1)
                .intersection(&bottom(&classes, &phis, &h2))
                .filter(|a| bottom(&classes, &phis, &sum).contains(*a))
                .cloned()
                .collect();
            prop_assert!(triple.is_empty());
            prop_assert_eq!(p2.holds(), Some(true));
        }

        let s = stabilization_bound(&b, &norm, &g1, &g2).unwrap();
        prop_assert!(s.window_verified);
        let m0 = s.m0.to_i64().unwrap();
        let base = bottom(&classes, &phis, &h1);
        let linear = |m: i64| {
            let v: V = h1.iter().zip(&h2).map(|(a, b)| m * a + b).collect();
            chi(&phis, &v) - m * chi(&phis, &h1)
        };
        let constant = linear(m0);
        for m in m0..=(3 * m0).max(m0 + 30) {
            let v: V = h1.iter().zip(&h2).map(|(a, b)| m * a + b).collect();
            prop_assert!(bottom(&classes, &phis, &v).is_subset(&base), "m = {}", m);
            prop_assert_eq!(linear(m), constant);
        }
    }

    #[test]
    fn annulus_type_depends_on_vanishing(a in proptest::collection::vec(-2i64..=2, 2), b in proptest::collection::vec(-2i64..=2, 2)) {
        let t = classify_annulus(&big(&a), &big(&b));
        let expected = match (a.iter().any(|&x| x != 0), b.iter().any(|&x| x != 0)) {
            (true, true) => AnnulusType::NN,
            (true, false) => AnnulusType::NS,
            (false, true) => AnnulusType::SN,
            (false, false) => AnnulusType::SS,
        };
        prop_assert_eq!(t, expected);
    }

    #[test]
    fn cut_paste_composes(
        s in proptest::collection::vec(-5i64..=5, 3),
        g in proptest::collection::vec(-5i64..=5, 3),
        es in -6i64..=0,
        eg in -6i64..=0,
        m1 in 0u64..10,
        m2 in 0u64..10,
    ) {
        let s = SurfaceClass::new(big(&s), BigInt::from(es));
        let g = SurfaceClass::new(big(&g), BigInt::from(eg));
        let direct = cut_paste_class(&s, &g, m1 + m2).unwrap();
        let staged = cut_paste_class(&cut_paste_class(&s, &g, m1).unwrap(), &g, m2).unwrap();
        prop_assert_eq!(direct, staged);
    }

    #[test]
    fn lower_sub_beyond_threshold(
        pairs in proptest::collection::vec((-8i64..=8, -8i64..=8), 0..10),
        es in -6i64..=0,
        eg in -6i64..=-1,
    ) {
        let classes: Vec<Vec<BigInt>> = (0..pairs.len() as i64).map(|i| big(&[i])).collect();
        let b = BasicClassSet::new(1, classes.clone()).unwrap();
        let s = SurfaceClass::new(big(&[0]), BigInt::from(es)).with_pairings(
            classes.iter().zip(&pairs).map(|(c, (x, _))| (c.clone(), BigInt::from(*x))).collect(),
        );
        let g = SurfaceClass::new(big(&[0]), BigInt::from(eg)).with_pairings(
            classes.iter().zip(&pairs).map(|(c, (_, y))| (c.clone(), BigInt::from(*y))).collect(),
        );
        let m0 = lower_sub_threshold(&b, &s).unwrap().to_u64().unwrap();
        let expected = 1 + pairs.iter().map(|(x, _)| (x - es).abs()).max().unwrap_or(0);
        prop_assert_eq!(m0 as i64, expected);
        for m in m0..=m0 + 20 {
            let r = verify_lower_sub(&b, &s, &g, m).unwrap();
            prop_assert!(r.holds);
            // oracle: α with ⟨α,G^(m)⟩ ≤ χ(G^(m)) satisfies ⟨α,G⟩ ≤ χ(G)
            for (x, y) in &pairs {
                if x + (m as i64) * y <= es + (m as i64) * eg {
                    prop_assert!(*y <= eg);
                }
            }
        }
    }
}

#[test]
fn unit_towers_are_depth_independent() {
    for code in 0..125i64 {
        let tail = [code % 5 - 2, (code / 5) % 5 - 2, code / 25 - 2];
        for lead in [-1i64, 1] {
            let f = big(&[lead, tail[0], tail[1], tail[2]]);
            let deg = f.iter().rposition(|c| c.signum() != BigInt::from(0)).unwrap() + 1;
            let reference = tower_homology(&f, deg + 1).unwrap();
            for depth in deg + 1..deg + 7 {
                let r = tower_homology(&f, depth).unwrap();
                assert_eq!(r.kernel_rank, reference.kernel_rank);
                assert_eq!(r.cokernel, reference.cokernel);
                assert!(r.stable && r.hfplus_is_z);
            }
        }
    }
}
