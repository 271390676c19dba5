//! Presentations that are known to arise from compact 3-manifolds, and random
//! builders on top of them.
//!
//! Arbitrary integer matrices need not come from a manifold, so test corpora
//! are assembled from a few models and operations that do:
//!
//! * `G × I` ([`product`]),
//! * the interior connected sum of two genus-`g` handlebodies
//!   ([`handlebody_sum`], both maps forget the `b` classes),
//! * the twisted product model [`twisted`], whose inclusions are
//!   `diag(d, 1)` and `diag(1, d)` on each symplectic pair,
//! * boundary connected sums, connected sums with `S^1 × S^2` and lens spaces,
//! * unimodular changes of basis of `H_1(M)` and symplectic changes of basis of
//!   each boundary surface.

use num_bigint::BigInt;
use num_traits::{One, Zero};
use rand::seq::SliceRandom;
use rand::Rng;

use crate::boundary_homology::{BoundaryComponent, BoundaryPresentation, Sign, SurfaceHomology};
use crate::exact_linalg::IntegerMatrix;

pub fn product(genus: usize) -> BoundaryPresentation {
    let id = IntegerMatrix::identity(2 * genus);
    BoundaryPresentation::two_sided(&id, &id).expect("product shape")
}

/// Interior connected sum of two handlebodies: `ai ↦ ei` on `G+`, `ai ↦ fi`
/// on `G-`, every `bi ↦ 0`. Here `υ = g`.
pub fn handlebody_sum(genus: usize) -> BoundaryPresentation {
    let mut plus = IntegerMatrix::zeros(2 * genus, 2 * genus);
    let mut minus = IntegerMatrix::zeros(2 * genus, 2 * genus);
    for i in 0..genus {
        plus[(i, 2 * i)] = BigInt::one();
        minus[(genus + i, 2 * i)] = BigInt::one();
    }
    BoundaryPresentation::two_sided(&plus, &minus).expect("handlebody shape")
}

/// Genus `divisors.len()`: on the `i`-th symplectic pair `ι+ = diag(di, 1)`
/// and `ι- = diag(1, di)`. The rational kernel is the graph of
/// `diag(di, 1/di)`, which is symplectic, and `coker ι± ≅ ⊕ Z/di`.
pub fn twisted(divisors: &[u64]) -> BoundaryPresentation {
    let n = 2 * divisors.len();
    let mut plus = IntegerMatrix::zeros(n, n);
    let mut minus = IntegerMatrix::zeros(n, n);
    for (i, &d) in divisors.iter().enumerate() {
        plus[(2 * i, 2 * i)] = BigInt::from(d);
        plus[(2 * i + 1, 2 * i + 1)] = BigInt::one();
        minus[(2 * i, 2 * i)] = BigInt::one();
        minus[(2 * i + 1, 2 * i + 1)] = BigInt::from(d);
    }
    BoundaryPresentation::two_sided(&plus, &minus).expect("twisted shape")
}

pub fn solid_torus() -> BoundaryPresentation {
    handlebody(1)
}

/// Genus-`g` handlebody with one boundary component: the `ai` are meridians
/// (`ai ↦ 0`) and `bi ↦ ei`.
pub fn handlebody(genus: usize) -> BoundaryPresentation {
    let mut m = IntegerMatrix::zeros(genus, 2 * genus);
    for i in 0..genus {
        m[(i, 2 * i + 1)] = BigInt::one();
    }
    BoundaryPresentation::new(
        vec![BoundaryComponent {
            surface: SurfaceHomology::new(genus),
            sign: Sign::Plus,
        }],
        genus,
        m,
    )
    .expect("handlebody shape")
}

fn unsigned_blocks(p: &BoundaryPresentation) -> (IntegerMatrix, IntegerMatrix) {
    let (ip, im) = p.plus_minus().expect("two-sided presentation");
    (p.component_map(ip), p.component_map(im))
}

/// Boundary connected sum along `G+` followed by a 1-handle joining the two
/// `G-` surfaces. Genera add; the 1-handle contributes a free generator of
/// `H_1(M)` that no boundary curve hits.
pub fn boundary_connected_sum(
    first: &BoundaryPresentation,
    second: &BoundaryPresentation,
) -> BoundaryPresentation {
    let (p1, m1) = unsigned_blocks(first);
    let (p2, m2) = unsigned_blocks(second);
    let handle = IntegerMatrix::zeros(1, 0);
    let plus = IntegerMatrix::block_diagonal(&[&p1, &p2, &handle]);
    let minus = IntegerMatrix::block_diagonal(&[&m1, &m2, &handle]);
    BoundaryPresentation::two_sided(&plus, &minus).expect("sum shape")
}

/// Disjoint union of boundaries with `H_1` adding: the interior connected sum
/// of two manifolds.
pub fn connected_sum(first: &BoundaryPresentation, second: &BoundaryPresentation) -> BoundaryPresentation {
    let mut components = first.components().to_vec();
    components.extend_from_slice(second.components());
    let inclusion = IntegerMatrix::block_diagonal(&[first.inclusion(), second.inclusion()]);
    let mut relations: Vec<Vec<BigInt>> = first
        .relations()
        .iter()
        .map(|r| {
            let mut r = r.clone();
            r.resize(first.ambient_rank() + second.ambient_rank(), BigInt::zero());
            r
        })
        .collect();
    for r in second.relations() {
        let mut v = vec![BigInt::zero(); first.ambient_rank()];
        v.extend(r.iter().cloned());
        relations.push(v);
    }
    BoundaryPresentation::with_relations(
        components,
        first.ambient_rank() + second.ambient_rank(),
        inclusion,
        relations,
    )
    .expect("connected sum shape")
}

/// `M # (S^1 × S^2)`.
pub fn with_s1xs2(p: &BoundaryPresentation) -> BoundaryPresentation {
    with_extra_generator(p, None)
}

/// `M # L(n, 1)`: adds a generator of order `n`.
pub fn with_lens_summand(p: &BoundaryPresentation, n: u64) -> BoundaryPresentation {
    with_extra_generator(p, Some(n))
}

fn with_extra_generator(p: &BoundaryPresentation, order: Option<u64>) -> BoundaryPresentation {
    let r = p.ambient_rank();
    let inclusion = p
        .inclusion()
        .vstack(&IntegerMatrix::zeros(1, p.boundary_dim()))
        .expect("shape");
    let mut relations: Vec<Vec<BigInt>> = p
        .relations()
        .iter()
        .map(|v| {
            let mut v = v.clone();
            v.push(BigInt::zero());
            v
        })
        .collect();
    if let Some(n) = order {
        let mut v = vec![BigInt::zero(); r + 1];
        v[r] = BigInt::from(n);
        relations.push(v);
    }
    BoundaryPresentation::with_relations(p.components().to_vec(), r + 1, inclusion, relations)
        .expect("shape")
}

/// Random unimodular matrix as a product of elementary operations.
pub fn random_unimodular<R: Rng + ?Sized>(n: usize, steps: usize, rng: &mut R) -> IntegerMatrix {
    let mut u = IntegerMatrix::identity(n);
    if n < 2 {
        if n == 1 && rng.gen_bool(0.5) {
            u.negate_row(0);
        }
        return u;
    }
    for _ in 0..steps {
        let i = rng.gen_range(0..n);
        let mut j = rng.gen_range(0..n - 1);
        if j >= i {
            j += 1;
        }
        match rng.gen_range(0..4) {
            0 => u.swap_rows(i, j),
            1 => u.negate_row(i),
            _ => {
                let k = BigInt::from(rng.gen_range(-2i64..=2));
                u.add_row_multiple(i, j, &k);
            }
        }
    }
    u
}

/// Random element of `Sp(2g, Z)` as a product of transvections
/// `x ↦ x + ω(v, x) v`.
pub fn random_symplectic<R: Rng + ?Sized>(genus: usize, steps: usize, rng: &mut R) -> IntegerMatrix {
    let n = 2 * genus;
    let j = SurfaceHomology::new(genus).intersection_form();
    let mut s = IntegerMatrix::identity(n);
    for _ in 0..steps {
        let v: Vec<BigInt> = (0..n).map(|_| BigInt::from(rng.gen_range(-1i64..=1))).collect();
        // T = I + v v^T J
        let vj = j.transpose().mul_vec(&v).expect("shape");
        let mut t = IntegerMatrix::identity(n);
        for a in 0..n {
            for b in 0..n {
                t[(a, b)] += &v[a] * &vj[b];
            }
        }
        s = t.mul(&s).expect("shape");
    }
    s
}

/// Random unimodular change of basis of `H_1(M)` and random symplectic
/// changes of basis of every boundary surface.
pub fn change_basis<R: Rng + ?Sized>(p: &BoundaryPresentation, rng: &mut R) -> BoundaryPresentation {
    let u = random_unimodular(p.ambient_rank(), 3 * p.ambient_rank() + 2, rng);
    let blocks: Vec<IntegerMatrix> = p
        .components()
        .iter()
        .map(|c| random_symplectic(c.surface.genus, 2 * c.surface.genus + 1, rng))
        .collect();
    let refs: Vec<&IntegerMatrix> = blocks.iter().collect();
    let s = IntegerMatrix::block_diagonal(&refs);
    let inclusion = u
        .mul(p.inclusion())
        .and_then(|m| m.mul(&s))
        .expect("shape");
    let relations = p
        .relations()
        .iter()
        .map(|r| u.mul_vec(r).expect("shape"))
        .collect();
    BoundaryPresentation::with_relations(p.components().to_vec(), p.ambient_rank(), inclusion, relations)
        .expect("shape")
}

/// Knobs for [`random_two_sided`].
#[derive(Debug, Clone)]
pub struct TwoSidedConfig {
    pub min_genus: usize,
    pub max_genus: usize,
    /// Primes that may appear as twisting divisors.
    pub primes: Vec<u64>,
    pub allow_verticals: bool,
    pub allow_torsion_summands: bool,
}

impl Default for TwoSidedConfig {
    fn default() -> Self {
        Self {
            min_genus: 1,
            max_genus: 4,
            primes: vec![2, 3, 5, 7],
            allow_verticals: true,
            allow_torsion_summands: false,
        }
    }
}

fn random_piece<R: Rng + ?Sized>(genus: usize, cfg: &TwoSidedConfig, rng: &mut R) -> BoundaryPresentation {
    let choices = if cfg.allow_verticals { 3 } else { 2 };
    match rng.gen_range(0..choices) {
        0 => product(genus),
        1 => {
            let divisors: Vec<u64> = (0..genus)
                .map(|_| {
                    if cfg.primes.is_empty() || rng.gen_bool(0.3) {
                        1
                    } else {
                        let a = *cfg.primes.choose(rng).unwrap();
                        if rng.gen_bool(0.2) {
                            a * *cfg.primes.choose(rng).unwrap()
                        } else {
                            a
                        }
                    }
                })
                .collect();
            twisted(&divisors)
        }
        _ => handlebody_sum(genus),
    }
}

/// Random valid two-component presentation with both genera equal.
pub fn random_two_sided<R: Rng + ?Sized>(cfg: &TwoSidedConfig, rng: &mut R) -> BoundaryPresentation {
    let genus = rng.gen_range(cfg.min_genus..=cfg.max_genus);
    let split = if genus >= 2 && rng.gen_bool(0.4) {
        rng.gen_range(1..genus)
    } else {
        genus
    };
    let mut p = random_piece(split, cfg, rng);
    if split < genus {
        let q = random_piece(genus - split, cfg, rng);
        p = boundary_connected_sum(&p, &q);
    }
    if rng.gen_bool(0.2) {
        p = with_s1xs2(&p);
    }
    if cfg.allow_torsion_summands && rng.gen_bool(0.3) {
        let n = *[2u64, 3, 4, 6].choose(rng).unwrap();
        p = with_lens_summand(&p, n);
    }
    change_basis(&p, rng)
}

/// Random valid presentation with any number of components: connected sums
/// of two-sided pieces and handlebodies.
pub fn random_presentation<R: Rng + ?Sized>(cfg: &TwoSidedConfig, rng: &mut R) -> BoundaryPresentation {
    let mut p = if rng.gen_bool(0.75) {
        random_two_sided(cfg, rng)
    } else {
        let g = rng.gen_range(cfg.min_genus.max(1)..=cfg.max_genus);
        change_basis(&handlebody(g), rng)
    };
    if rng.gen_bool(0.25) {
        let g = rng.gen_range(1..=2);
        p = connected_sum(&p, &change_basis(&handlebody(g), rng));
    }
    p
}
