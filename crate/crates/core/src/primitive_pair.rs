//! Primitive classes `c+ ∈ H_1(G+)`, `c- ∈ H_1(G-)` with the same image in
//! `H_1(M; Q)`.
//!
//! When some class on `G±` already dies rationally (`υ > 0`) the pair is read
//! off the vertical subspaces. Otherwise a kernel element `b = (b+, b-)` is
//! chosen whose residue modulo each excluded prime avoids the two subspaces
//! `A±_q`; then `b±` have equal content and dividing it out gives the pair.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::boundary_homology::{upsilon, BoundaryPresentation, Sign};
use crate::error::{Error, Result};
use crate::exact_linalg::{
    cokernel, content, element_order, is_prime, kernel_basis, kernel_over, modp, primitive_part,
    smith_normal_form, Field, IntegerMatrix,
};

/// Exhaustive residue search is used while `q^k` stays below this.
pub const ENUMERATION_LIMIT: u64 = 1_000_000;
const SAMPLE_ATTEMPTS: usize = 64;

/// Primes at which a kernel element may fail to give primitive classes.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct ExcludedPrimeSet {
    /// Union of the two sources below, ascending.
    pub primes: Vec<u64>,
    /// Torsion primes of `coker ι+` and `coker ι-`.
    pub from_inclusions: Vec<u64>,
    /// Torsion primes of `H±/Pr±(K)`.
    pub from_projections: Vec<u64>,
}

impl ExcludedPrimeSet {
    pub fn from_primes(mut primes: Vec<u64>) -> Self {
        primes.sort_unstable();
        primes.dedup();
        Self {
            primes,
            ..Self::default()
        }
    }

    pub fn is_empty(&self) -> bool {
        self.primes.is_empty()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PrimitivePair {
    pub c_plus: Vec<BigInt>,
    pub c_minus: Vec<BigInt>,
    pub multiplier: BigInt,
}

impl PrimitivePair {
    /// Checks primitivity and `m (ι+(c+) - ι-(c-)) = 0` in `H_1(M)`.
    pub fn verify(&self, p: &BoundaryPresentation) -> Result<bool> {
        if !content(&self.c_plus).is_one() || !content(&self.c_minus).is_one() {
            return Ok(false);
        }
        if !self.multiplier.is_positive() {
            return Ok(false);
        }
        let diff = image_difference(p, &self.c_plus, &self.c_minus)?;
        let scaled: Vec<BigInt> = diff.iter().map(|x| x * &self.multiplier).collect();
        Ok(element_order(&scaled, p.relations()) == Some(BigInt::one()))
    }
}

/// Residues of `K/qK` in the coordinates of the kernel basis.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ApSubspace {
    pub prime: u64,
    pub side: Sign,
    /// Dimension of `K/qK`.
    pub ambient_dim: usize,
    /// Reduced echelon basis over `Z/q`.
    pub basis: Vec<Vec<u64>>,
}

impl ApSubspace {
    pub fn dimension(&self) -> usize {
        self.basis.len()
    }

    pub fn contains(&self, v: &[u64]) -> bool {
        let mut rows = self.basis.clone();
        rows.push(v.to_vec());
        modp::rank(&rows, self.ambient_dim, self.prime) == self.basis.len()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ResidueMethod {
    Enumerated,
    Sampled,
    Structured,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ResidueChoice {
    pub prime: u64,
    pub residue: Vec<u64>,
    pub method: ResidueMethod,
    pub dim_plus: usize,
    pub dim_minus: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KernelElement {
    /// `b = (b+, b-)` in the coordinates of `H_1(∂M)`.
    pub b: Vec<BigInt>,
    /// Coefficients of `b` in the saturated kernel basis.
    pub coefficients: Vec<BigInt>,
    pub kernel_basis: Vec<Vec<BigInt>>,
    pub residues: Vec<ResidueChoice>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Branch {
    Vertical,
    Kernel,
}

/// Full transcript of a search.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PairSearch {
    pub pair: PrimitivePair,
    pub branch: Branch,
    pub upsilon: usize,
    pub excluded: ExcludedPrimeSet,
    pub kernel_element: Option<KernelElement>,
}

/// Replaces the ambient group by `H_1(M)/Torsion`.
pub fn normalize_torsion_free(p: &BoundaryPresentation) -> BoundaryPresentation {
    if !p.has_torsion_data() {
        return p.clone();
    }
    let n = p.ambient_rank();
    let rel = IntegerMatrix::from_columns(p.relations(), n).expect("relation length");
    let snf = smith_normal_form(&rel);
    let r = snf.rank();
    // rows r.. of the left transform are coordinates on the free quotient
    let quotient = snf.left.row_block(r, n);
    let inclusion = quotient.mul(p.inclusion()).expect("shape");
    p.with_inclusion(n - r, inclusion).expect("shape")
}

fn sides(p: &BoundaryPresentation) -> Result<(usize, usize)> {
    let (ip, im) = p.plus_minus()?;
    let gp = p.components()[ip].surface.genus;
    let gm = p.components()[im].surface.genus;
    if gp != gm {
        return Err(Error::InvalidPresentation(format!(
            "boundary genera differ: {gp} and {gm}"
        )));
    }
    if gp == 0 {
        return Err(Error::InvalidPresentation("boundary genus must be positive".into()));
    }
    Ok((ip, im))
}

fn projection(p: &BoundaryPresentation, side: usize, v: &[BigInt]) -> Vec<BigInt> {
    v[p.block_range(side)].to_vec()
}

/// Matrix whose columns are `Pr(K_j)` for the kernel basis `K`.
fn projection_matrix(p: &BoundaryPresentation, side: usize, kernel: &[Vec<BigInt>]) -> IntegerMatrix {
    let cols: Vec<Vec<BigInt>> = kernel.iter().map(|k| projection(p, side, k)).collect();
    IntegerMatrix::from_columns(&cols, p.components()[side].surface.dim()).expect("shape")
}

fn image_difference(
    p: &BoundaryPresentation,
    c_plus: &[BigInt],
    c_minus: &[BigInt],
) -> Result<Vec<BigInt>> {
    let (ip, im) = p.plus_minus()?;
    let a = p.component_map(ip).mul_vec(c_plus)?;
    let b = p.component_map(im).mul_vec(c_minus)?;
    Ok(a.iter().zip(&b).map(|(x, y)| x - y).collect())
}

pub fn excluded_primes(p: &BoundaryPresentation) -> Result<ExcludedPrimeSet> {
    let (ip, im) = sides(p)?;
    let q = normalize_torsion_free(p);
    let mut from_inclusions = cokernel(&q.component_map(ip)).torsion_primes();
    from_inclusions.extend(cokernel(&q.component_map(im)).torsion_primes());
    from_inclusions.sort_unstable();
    from_inclusions.dedup();

    let kernel = kernel_basis(q.inclusion());
    let mut from_projections = Vec::new();
    for side in [ip, im] {
        from_projections.extend(cokernel(&projection_matrix(&q, side, &kernel)).torsion_primes());
    }
    from_projections.sort_unstable();
    from_projections.dedup();

    let mut primes: Vec<u64> = from_inclusions.iter().chain(&from_projections).copied().collect();
    primes.sort_unstable();
    primes.dedup();
    Ok(ExcludedPrimeSet {
        primes,
        from_inclusions,
        from_projections,
    })
}

/// `A±_q`: classes of `K/qK` whose projection to `H±` is divisible by `q`.
pub fn a_p_subspace(p: &BoundaryPresentation, q: u64, side: Sign) -> Result<ApSubspace> {
    if !is_prime(q) {
        return Err(Error::NotPrime(q));
    }
    let (ip, im) = sides(p)?;
    if upsilon(p)? > 0 {
        return Err(Error::InvalidInput(
            "residue subspaces are only defined when no boundary class dies rationally".into(),
        ));
    }
    let norm = normalize_torsion_free(p);
    let kernel = kernel_basis(norm.inclusion());
    ap_from_kernel(&norm, &kernel, q, side, if side == Sign::Plus { ip } else { im })
}

fn ap_from_kernel(
    p: &BoundaryPresentation,
    kernel: &[Vec<BigInt>],
    q: u64,
    side: Sign,
    index: usize,
) -> Result<ApSubspace> {
    let genus = p.components()[index].surface.genus;
    let basis = kernel_over(Field::Prime(q), &projection_matrix(p, index, kernel))
        .into_iter()
        .map(|v| modp::reduce_vec(&v, q))
        .collect::<Vec<_>>();
    let mut basis = basis;
    modp::rref(&mut basis, kernel.len(), q);
    if basis.len() > genus {
        return Err(Error::ApDimensionExceeded {
            prime: q,
            side: side.symbol(),
            dimension: basis.len(),
            genus,
        });
    }
    Ok(ApSubspace {
        prime: q,
        side,
        ambient_dim: kernel.len(),
        basis,
    })
}

/// Unique `x` with `x ≡ r_i (mod p_i)` in every coordinate, entries in `[0, P)`.
pub fn crt_lift(primes: &[u64], residues: &[Vec<BigInt>], m: usize) -> Result<Vec<BigInt>> {
    if primes.len() != residues.len() {
        return Err(Error::DimensionMismatch {
            expected: primes.len(),
            found: residues.len(),
        });
    }
    for (i, &q) in primes.iter().enumerate() {
        if !is_prime(q) {
            return Err(Error::NotPrime(q));
        }
        if primes[..i].contains(&q) {
            return Err(Error::DuplicatePrime(q));
        }
    }
    if let Some(bad) = residues.iter().find(|r| r.len() != m) {
        return Err(Error::DimensionMismatch {
            expected: m,
            found: bad.len(),
        });
    }
    let mut x = vec![BigInt::zero(); m];
    let mut modulus = BigInt::one();
    for (&q, r) in primes.iter().zip(residues) {
        let q = BigInt::from(q);
        // modulus^{-1} mod q
        let inv = modulus.extended_gcd(&q).x.mod_floor(&q);
        for (xi, ri) in x.iter_mut().zip(r) {
            let t = ((ri - &*xi) * &inv).mod_floor(&q);
            *xi += &modulus * t;
        }
        modulus *= q;
    }
    Ok(x)
}

fn choose_residue(
    plus: &ApSubspace,
    minus: &ApSubspace,
    rng: &mut ChaCha8Rng,
) -> Result<(Vec<u64>, ResidueMethod)> {
    let q = plus.prime;
    let k = plus.ambient_dim;
    let admissible = |v: &[u64]| !plus.contains(v) && !minus.contains(v);
    let total = u32::try_from(k).ok().and_then(|k| q.checked_pow(k));
    if let Some(total) = total.filter(|&t| t <= ENUMERATION_LIMIT) {
        let mut v = vec![0u64; k];
        for index in 0..total {
            let mut rest = index;
            for slot in v.iter_mut().rev() {
                *slot = rest % q;
                rest /= q;
            }
            if admissible(&v) {
                return Ok((v, ResidueMethod::Enumerated));
            }
        }
        return Err(Error::NoAdmissibleResidue { prime: q });
    }
    for _ in 0..SAMPLE_ATTEMPTS {
        let v: Vec<u64> = (0..k).map(|_| rng.gen_range(0..q)).collect();
        if admissible(&v) {
            return Ok((v, ResidueMethod::Sampled));
        }
    }
    structured_residue(plus, minus)
        .map(|v| (v, ResidueMethod::Structured))
        .ok_or(Error::NoAdmissibleResidue { prime: q })
}

/// Unit vector at a non-pivot column lies outside the span of an echelon basis.
fn outside(a: &ApSubspace) -> Option<Vec<u64>> {
    let pivots: Vec<usize> = a
        .basis
        .iter()
        .filter_map(|row| row.iter().position(|&x| x != 0))
        .collect();
    let free = (0..a.ambient_dim).find(|c| !pivots.contains(c))?;
    let mut v = vec![0u64; a.ambient_dim];
    v[free] = 1;
    Some(v)
}

fn structured_residue(plus: &ApSubspace, minus: &ApSubspace) -> Option<Vec<u64>> {
    let q = plus.prime;
    let plus_in_minus = plus.basis.iter().all(|v| minus.contains(v));
    let minus_in_plus = minus.basis.iter().all(|v| plus.contains(v));
    if plus_in_minus {
        return outside(minus);
    }
    if minus_in_plus {
        return outside(plus);
    }
    // x in A+ \ A-, y in A- \ A+: x + y lies in neither
    let x = plus.basis.iter().find(|v| !minus.contains(v))?;
    let y = minus.basis.iter().find(|v| !plus.contains(v))?;
    Some(x.iter().zip(y).map(|(a, b)| (a + b) % q).collect())
}

pub fn find_kernel_element(
    p: &BoundaryPresentation,
    excluded: &ExcludedPrimeSet,
) -> Result<KernelElement> {
    find_kernel_element_seeded(p, excluded, 0)
}

/// `seed` only matters for primes too large to enumerate.
pub fn find_kernel_element_seeded(
    p: &BoundaryPresentation,
    excluded: &ExcludedPrimeSet,
    seed: u64,
) -> Result<KernelElement> {
    let (ip, im) = sides(p)?;
    if upsilon(p)? > 0 {
        return Err(Error::InvalidInput(
            "kernel search requires that no boundary class dies rationally".into(),
        ));
    }
    let norm = normalize_torsion_free(p);
    let kernel = kernel_basis(norm.inclusion());
    let k = kernel.len();
    if k == 0 {
        return Err(Error::InvalidPresentation("boundary kernel is zero".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut residues = Vec::new();
    for &q in &excluded.primes {
        let plus = ap_from_kernel(&norm, &kernel, q, Sign::Plus, ip)?;
        let minus = ap_from_kernel(&norm, &kernel, q, Sign::Minus, im)?;
        let (residue, method) = choose_residue(&plus, &minus, &mut rng)?;
        residues.push(ResidueChoice {
            prime: q,
            residue,
            method,
            dim_plus: plus.dimension(),
            dim_minus: minus.dimension(),
        });
    }
    let coefficients = if residues.is_empty() {
        let mut e = vec![BigInt::zero(); k];
        e[0] = BigInt::one();
        e
    } else {
        let primes: Vec<u64> = residues.iter().map(|r| r.prime).collect();
        let rs: Vec<Vec<BigInt>> = residues
            .iter()
            .map(|r| r.residue.iter().map(|&x| BigInt::from(x)).collect())
            .collect();
        crt_lift(&primes, &rs, k)?
    };
    let n = norm.boundary_dim();
    let mut b = vec![BigInt::zero(); n];
    for (c, v) in coefficients.iter().zip(&kernel) {
        for (bi, vi) in b.iter_mut().zip(v) {
            *bi += c * vi;
        }
    }
    Ok(KernelElement {
        b,
        coefficients,
        kernel_basis: kernel,
        residues,
    })
}

pub fn extract_primitive_pair(
    b: &[BigInt],
    p: &BoundaryPresentation,
    excluded: &ExcludedPrimeSet,
) -> Result<PrimitivePair> {
    let (ip, im) = sides(p)?;
    if b.len() != p.boundary_dim() {
        return Err(Error::DimensionMismatch {
            expected: p.boundary_dim(),
            found: b.len(),
        });
    }
    let b_plus = projection(p, ip, b);
    let b_minus = projection(p, im, b);
    let k_plus = content(&b_plus);
    let k_minus = content(&b_minus);
    for &q in &excluded.primes {
        for (side, k) in [('+', &k_plus), ('-', &k_minus)] {
            if (k % q).is_zero() {
                return Err(Error::InvalidInput(format!(
                    "b{side} is divisible by the excluded prime {q}"
                )));
            }
        }
    }
    if k_plus != k_minus || k_plus.is_zero() {
        return Err(Error::ContentMismatch {
            plus: k_plus.to_string(),
            minus: k_minus.to_string(),
        });
    }
    let c_plus = primitive_part(&b_plus);
    let c_minus = primitive_part(&b_minus);
    let diff = image_difference(p, &c_plus, &c_minus)?;
    let multiplier = element_order(&diff, p.relations()).ok_or_else(|| {
        Error::InvalidPresentation("the two classes are not rationally homologous".into())
    })?;
    Ok(PrimitivePair {
        c_plus,
        c_minus,
        multiplier,
    })
}

pub fn find_primitive_homologous_pair(p: &BoundaryPresentation) -> Result<PrimitivePair> {
    Ok(search_primitive_pair(p, 0)?.pair)
}

pub fn search_primitive_pair(p: &BoundaryPresentation, seed: u64) -> Result<PairSearch> {
    let (ip, im) = sides(p)?;
    let ups = upsilon(p)?;
    if ups > 0 {
        let v_plus = p.kernel_in_ambient(Field::Rationals, &p.component_map(ip));
        let v_minus = p.kernel_in_ambient(Field::Rationals, &p.component_map(im));
        let (Some(c_plus), Some(c_minus)) = (v_plus.first(), v_minus.first()) else {
            return Err(Error::InvalidPresentation(
                "vertical subspaces have different dimensions".into(),
            ));
        };
        let order = |map: IntegerMatrix, c: &[BigInt]| -> Result<BigInt> {
            let image = map.mul_vec(c)?;
            element_order(&image, p.relations()).ok_or_else(|| {
                Error::InvalidPresentation("vertical class has infinite order".into())
            })
        };
        let m_plus = order(p.component_map(ip), c_plus)?;
        let m_minus = order(p.component_map(im), c_minus)?;
        return Ok(PairSearch {
            pair: PrimitivePair {
                c_plus: c_plus.clone(),
                c_minus: c_minus.clone(),
                multiplier: m_plus.lcm(&m_minus),
            },
            branch: Branch::Vertical,
            upsilon: ups,
            excluded: ExcludedPrimeSet::default(),
            kernel_element: None,
        });
    }
    let excluded = excluded_primes(p)?;
    let element = find_kernel_element_seeded(p, &excluded, seed)?;
    let pair = extract_primitive_pair(&element.b, p, &excluded)?;
    Ok(PairSearch {
        pair,
        branch: Branch::Kernel,
        upsilon: 0,
        excluded,
        kernel_element: Some(element),
    })
}
