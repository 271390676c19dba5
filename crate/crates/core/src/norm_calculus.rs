//! A Thurston-type seminorm given by its dual functionals, and the calculus of
//! bottommost basic classes.
//!
//! `χ_-(h) = max_{φ ∈ Φ} ⟨φ, h⟩` for a finite symmetric set `Φ` containing 0.
//! For a finite set `B` of classes, `ℬ(h) = {α ∈ B : ⟨α, h⟩ = -χ_-(h)}`.

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::exact_linalg::dot;

/// Largest rank for which hull membership is decided by linear programming.
pub const EXACT_HULL_RANK: usize = 6;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NormOracle {
    rank: usize,
    functionals: Vec<Vec<BigInt>>,
}

impl NormOracle {
    /// `functionals` must be closed under negation; 0 is added if missing.
    pub fn new(rank: usize, functionals: Vec<Vec<BigInt>>) -> Result<Self> {
        check_lengths(rank, &functionals)?;
        let mut set: BTreeSet<Vec<BigInt>> = functionals.into_iter().collect();
        for phi in &set {
            let neg: Vec<BigInt> = phi.iter().map(|x| -x).collect();
            if !set.contains(&neg) {
                return Err(Error::InvalidInput(format!(
                    "functional set is not symmetric: {} has no negative",
                    fmt_vec(phi)
                )));
            }
        }
        set.insert(vec![BigInt::zero(); rank]);
        Ok(Self {
            rank,
            functionals: set.into_iter().collect(),
        })
    }

    pub fn from_i64(rank: usize, functionals: &[&[i64]]) -> Result<Self> {
        Self::new(rank, functionals.iter().map(|f| to_big(f)).collect())
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    /// Sorted, including 0.
    pub fn functionals(&self) -> &[Vec<BigInt>] {
        &self.functionals
    }

    pub fn chi_minus(&self, h: &[BigInt]) -> Result<BigInt> {
        self.check(h)?;
        Ok(self
            .functionals
            .iter()
            .map(|phi| dot(phi, h))
            .max()
            .unwrap_or_else(BigInt::zero))
    }

    /// Functionals attaining `χ_-(h)`.
    pub fn maximizers(&self, h: &[BigInt]) -> Result<Vec<Vec<BigInt>>> {
        let best = self.chi_minus(h)?;
        Ok(self
            .functionals
            .iter()
            .filter(|phi| dot(phi, h) == best)
            .cloned()
            .collect())
    }

    fn check(&self, h: &[BigInt]) -> Result<()> {
        if h.len() != self.rank {
            return Err(Error::DimensionMismatch {
                expected: self.rank,
                found: h.len(),
            });
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct BasicClassSet {
    rank: usize,
    classes: BTreeSet<Vec<BigInt>>,
}

impl BasicClassSet {
    pub fn new(rank: usize, classes: Vec<Vec<BigInt>>) -> Result<Self> {
        check_lengths(rank, &classes)?;
        Ok(Self {
            rank,
            classes: classes.into_iter().collect(),
        })
    }

    pub fn from_i64(rank: usize, classes: &[&[i64]]) -> Result<Self> {
        Self::new(rank, classes.iter().map(|c| to_big(c)).collect())
    }

    pub fn empty(rank: usize) -> Self {
        Self {
            rank,
            classes: BTreeSet::new(),
        }
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn classes(&self) -> impl Iterator<Item = &Vec<BigInt>> {
        self.classes.iter()
    }

    pub fn len(&self) -> usize {
        self.classes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.classes.is_empty()
    }

    pub fn contains(&self, alpha: &[BigInt]) -> bool {
        self.classes.contains(alpha)
    }

    pub fn is_subset(&self, other: &Self) -> bool {
        self.classes.is_subset(&other.classes)
    }

    pub fn intersection(&self, other: &Self) -> Self {
        Self {
            rank: self.rank,
            classes: self.classes.intersection(&other.classes).cloned().collect(),
        }
    }

    fn filtered(&self, keep: impl Fn(&[BigInt]) -> bool) -> Self {
        Self {
            rank: self.rank,
            classes: self.classes.iter().filter(|a| keep(a)).cloned().collect(),
        }
    }
}

fn check_lengths(rank: usize, vectors: &[Vec<BigInt>]) -> Result<()> {
    match vectors.iter().find(|v| v.len() != rank) {
        Some(bad) => Err(Error::DimensionMismatch {
            expected: rank,
            found: bad.len(),
        }),
        None => Ok(()),
    }
}

fn to_big(v: &[i64]) -> Vec<BigInt> {
    v.iter().map(|&x| BigInt::from(x)).collect()
}

fn fmt_vec(v: &[BigInt]) -> String {
    let parts: Vec<String> = v.iter().map(|x| x.to_string()).collect();
    format!("({})", parts.join(", "))
}

fn add(a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

fn combine(m: &BigInt, h1: &[BigInt], h2: &[BigInt]) -> Vec<BigInt> {
    h1.iter().zip(h2).map(|(x, y)| m * x + y).collect()
}

pub fn chi_minus(norm: &NormOracle, h: &[BigInt]) -> Result<BigInt> {
    norm.chi_minus(h)
}

pub fn bottommost(b: &BasicClassSet, norm: &NormOracle, h: &[BigInt]) -> Result<BasicClassSet> {
    if b.rank != norm.rank {
        return Err(Error::DimensionMismatch {
            expected: norm.rank,
            found: b.rank,
        });
    }
    let target = -norm.chi_minus(h)?;
    Ok(b.filtered(|alpha| dot(alpha, h) == target))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Part1Report {
    pub chi_h1: BigInt,
    pub chi_h2: BigInt,
    pub chi_sum: BigInt,
    pub additive: bool,
    /// `ℬ(h1 + h2)`.
    pub bottom_of_sum: BasicClassSet,
    /// `ℬ(h1) ∩ ℬ(h2)`.
    pub intersection: BasicClassSet,
    pub sets_equal: bool,
}

impl Part1Report {
    /// Equality is only demanded when the norm is additive on the pair.
    pub fn holds(&self) -> bool {
        !self.additive || self.sets_equal
    }
}

pub fn check_h1h2_part1(
    b: &BasicClassSet,
    norm: &NormOracle,
    h1: &[BigInt],
    h2: &[BigInt],
) -> Result<Part1Report> {
    let chi_h1 = norm.chi_minus(h1)?;
    let chi_h2 = norm.chi_minus(h2)?;
    let sum = add(h1, h2);
    let chi_sum = norm.chi_minus(&sum)?;
    let bottom_of_sum = bottommost(b, norm, &sum)?;
    let intersection = bottommost(b, norm, h1)?.intersection(&bottommost(b, norm, h2)?);
    Ok(Part1Report {
        additive: chi_sum == &chi_h1 + &chi_h2,
        sets_equal: bottom_of_sum == intersection,
        chi_h1,
        chi_h2,
        chi_sum,
        bottom_of_sum,
        intersection,
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Part2Report {
    pub chi_h1: BigInt,
    pub chi_h2: BigInt,
    pub chi_sum: BigInt,
    pub strict: bool,
    /// `ℬ(h1) ∩ ℬ(h2) ∩ ℬ(h1 + h2)`.
    pub triple: BasicClassSet,
}

impl Part2Report {
    /// `None` when the norm is additive on the pair.
    pub fn holds(&self) -> Option<bool> {
        self.strict.then(|| self.triple.is_empty())
    }
}

pub fn check_h1h2_part2(
    b: &BasicClassSet,
    norm: &NormOracle,
    h1: &[BigInt],
    h2: &[BigInt],
) -> Result<Part2Report> {
    let chi_h1 = norm.chi_minus(h1)?;
    let chi_h2 = norm.chi_minus(h2)?;
    let sum = add(h1, h2);
    let chi_sum = norm.chi_minus(&sum)?;
    let triple = bottommost(b, norm, h1)?
        .intersection(&bottommost(b, norm, h2)?)
        .intersection(&bottommost(b, norm, &sum)?);
    Ok(Part2Report {
        strict: chi_sum < &chi_h1 + &chi_h2,
        chi_h1,
        chi_h2,
        chi_sum,
        triple,
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StabilizationReport {
    /// For every `m ≥ m0`: `χ_-(m h1 + h2) = m χ_-(h1) + constant` and
    /// `ℬ(m h1 + h2) ⊆ ℬ(h1)`. Smallest value with both properties.
    pub m0: BigInt,
    /// Smallest `m` from which `χ_-(m h1 + h2)` is linear in `m`.
    pub linear_from: BigInt,
    /// Smallest `m` from which the maximizing functionals no longer change.
    pub argmax_stable_from: BigInt,
    pub slope: BigInt,
    pub constant: BigInt,
    /// Values `m ≥ linear_from` at which some class outside `ℬ(h1)` enters
    /// `ℬ(m h1 + h2)`.
    pub exceptional: Vec<BigInt>,
    pub bottom_h1: BasicClassSet,
    pub bottom_at_m0: BasicClassSet,
    /// Argmax set constant on `[m0, m0 + |Φ|]` and the inclusion at `m0`,
    /// checked by direct evaluation.
    pub window_verified: bool,
}

fn ceil_div(a: &BigInt, b: &BigInt) -> BigInt {
    -((-a).div_floor(b))
}

/// Exact stabilization threshold for `ℬ(m h1 + h2) ⊆ ℬ(h1)`.
///
/// With `a_φ = ⟨φ, h1⟩`, `b_φ = ⟨φ, h2⟩`, `a* = χ_-(h1)` and `C` the largest
/// `b_φ` among `a_φ = a*`, eventually `χ_-(m h1 + h2) = m a* + C`. Past that
/// point a class `α` lies in `ℬ(m h1 + h2)` iff
/// `m (⟨α, h1⟩ + a*) = -(⟨α, h2⟩ + C)`, which pins down a single `m` unless
/// `α ∈ ℬ(h1)`.
pub fn stabilization_bound(
    b: &BasicClassSet,
    norm: &NormOracle,
    h1: &[BigInt],
    h2: &[BigInt],
) -> Result<StabilizationReport> {
    let slope = norm.chi_minus(h1)?;
    norm.check(h2)?;
    let pairs: Vec<(BigInt, BigInt)> = norm
        .functionals
        .iter()
        .map(|phi| (dot(phi, h1), dot(phi, h2)))
        .collect();
    let constant = pairs
        .iter()
        .filter(|(a, _)| *a == slope)
        .map(|(_, b)| b.clone())
        .max()
        .expect("0 is a functional");

    let one = BigInt::one();
    let mut linear_from = one.clone();
    let mut argmax_stable_from = one.clone();
    for (a, bv) in pairs.iter().filter(|(a, _)| *a < slope) {
        let gap = &slope - a;
        let excess = bv - &constant;
        linear_from = linear_from.max(ceil_div(&excess, &gap));
        argmax_stable_from = argmax_stable_from.max(excess.div_floor(&gap) + 1);
    }

    let mut exceptional: Vec<BigInt> = Vec::new();
    for alpha in b.classes() {
        let delta = dot(alpha, h1) + &slope;
        if delta.is_zero() {
            continue;
        }
        let num = -(dot(alpha, h2) + &constant);
        if (&num % &delta).is_zero() {
            let m = num / &delta;
            if m >= linear_from {
                exceptional.push(m);
            }
        }
    }
    exceptional.sort();
    exceptional.dedup();
    let m0 = match exceptional.last() {
        Some(last) => (last + BigInt::one()).max(linear_from.clone()),
        None => linear_from.clone(),
    };

    let bottom_h1 = bottommost(b, norm, h1)?;
    let bottom_at_m0 = bottommost(b, norm, &combine(&m0, h1, h2))?;
    let window_verified = {
        let end = &m0 + BigInt::from(norm.functionals.len());
        let settled = m0.clone().max(argmax_stable_from.clone());
        let reference = norm.maximizers(&combine(&settled, h1, h2))?;
        let mut ok = true;
        let mut m = m0.clone();
        while ok && m <= end {
            let point = combine(&m, h1, h2);
            ok = norm.chi_minus(&point)? == &m * &slope + &constant
                && bottommost(b, norm, &point)?.is_subset(&bottom_h1)
                && (m < settled || norm.maximizers(&point)? == reference);
            m += 1;
        }
        ok
    };
    Ok(StabilizationReport {
        m0,
        linear_from,
        argmax_stable_from,
        slope,
        constant,
        exceptional,
        bottom_h1,
        bottom_at_m0,
        window_verified,
    })
}

/// `ℬ(g_next) ⊆ ℬ(g_prev)`, both taken in `B_next`.
pub fn check_successor_condition(
    b_next: &BasicClassSet,
    norm_next: &NormOracle,
    g_prev: &[BigInt],
    g_next: &[BigInt],
) -> Result<bool> {
    Ok(bottommost(b_next, norm_next, g_next)?.is_subset(&bottommost(b_next, norm_next, g_prev)?))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum HullMethod {
    Exact,
    /// Only checked against a finite set of probe classes.
    Partial,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClassVerdict {
    pub class: Vec<BigInt>,
    pub consistent: bool,
    /// Convex weights on the functionals, exact method only.
    pub weights: Option<Vec<BigRational>>,
    /// A probe `h` with `|⟨α, h⟩| > χ_-(h)`, partial method only.
    pub witness: Option<Vec<BigInt>>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AdjunctionReport {
    pub method: HullMethod,
    pub verdicts: Vec<ClassVerdict>,
}

impl AdjunctionReport {
    pub fn consistent(&self) -> bool {
        self.verdicts.iter().all(|v| v.consistent)
    }
}

pub fn validate_adjunction(b: &BasicClassSet, norm: &NormOracle) -> Result<AdjunctionReport> {
    validate_adjunction_with(b, norm, None)
}

/// Probes are only used above [`EXACT_HULL_RANK`]; by default all of
/// `{-1, 0, 1}^r` when that is small, otherwise `±e_i ± e_j`.
pub fn validate_adjunction_with(
    b: &BasicClassSet,
    norm: &NormOracle,
    probes: Option<&[Vec<BigInt>]>,
) -> Result<AdjunctionReport> {
    if b.rank != norm.rank {
        return Err(Error::DimensionMismatch {
            expected: norm.rank,
            found: b.rank,
        });
    }
    if norm.rank <= EXACT_HULL_RANK {
        let verdicts = b
            .classes()
            .map(|alpha| {
                let weights = convex_weights(&norm.functionals, alpha);
                ClassVerdict {
                    class: alpha.clone(),
                    consistent: weights.is_some(),
                    weights,
                    witness: None,
                }
            })
            .collect();
        return Ok(AdjunctionReport {
            method: HullMethod::Exact,
            verdicts,
        });
    }
    let default;
    let probes = match probes {
        Some(p) => {
            check_lengths(norm.rank, p)?;
            p
        }
        None => {
            default = default_probes(norm.rank);
            &default[..]
        }
    };
    let mut verdicts = Vec::new();
    for alpha in b.classes() {
        let mut witness = None;
        for h in probes {
            if dot(alpha, h).abs() > norm.chi_minus(h)? {
                witness = Some(h.clone());
                break;
            }
        }
        verdicts.push(ClassVerdict {
            class: alpha.clone(),
            consistent: witness.is_none(),
            weights: None,
            witness,
        });
    }
    Ok(AdjunctionReport {
        method: HullMethod::Partial,
        verdicts,
    })
}

fn default_probes(rank: usize) -> Vec<Vec<BigInt>> {
    let mut out = Vec::new();
    if rank <= 10 {
        let total = 3usize.pow(rank as u32);
        for mut index in 0..total {
            let mut v = Vec::with_capacity(rank);
            for _ in 0..rank {
                v.push(BigInt::from((index % 3) as i64 - 1));
                index /= 3;
            }
            out.push(v);
        }
        return out;
    }
    for i in 0..rank {
        for j in i..rank {
            for (si, sj) in [(1, 1), (1, -1), (-1, 1), (-1, -1)] {
                let mut v = vec![BigInt::zero(); rank];
                v[i] += si;
                if i != j {
                    v[j] += sj;
                }
                out.push(v);
            }
        }
    }
    out
}

/// Convex weights expressing `target` in terms of `points`, if any, by a
/// phase-one simplex over `Q` with Bland's rule.
pub fn convex_weights(points: &[Vec<BigInt>], target: &[BigInt]) -> Option<Vec<BigRational>> {
    let r = target.len();
    let n = points.len();
    let rows = r + 1;
    let cols = n + rows;
    let zero = BigRational::zero();
    // constraints: sum_j λ_j φ_j = target, sum_j λ_j = 1
    let mut t: Vec<Vec<BigRational>> = Vec::with_capacity(rows);
    let mut rhs: Vec<BigRational> = Vec::with_capacity(rows);
    for i in 0..rows {
        let mut row = vec![zero.clone(); cols];
        for (j, phi) in points.iter().enumerate() {
            row[j] = if i < r {
                BigRational::from_integer(phi[i].clone())
            } else {
                BigRational::one()
            };
        }
        let mut b = if i < r {
            BigRational::from_integer(target[i].clone())
        } else {
            BigRational::one()
        };
        if b.is_negative() {
            for x in row.iter_mut() {
                *x = -std::mem::take(x);
            }
            b = -b;
        }
        row[n + i] = BigRational::one();
        t.push(row);
        rhs.push(b);
    }
    let mut basis: Vec<usize> = (n..cols).collect();
    // reduced costs of the phase-one objective (sum of artificials)
    let mut cost = vec![zero.clone(); cols];
    let mut value = zero.clone();
    for i in 0..rows {
        for j in 0..n {
            cost[j] -= &t[i][j];
        }
        value -= &rhs[i];
    }
    loop {
        let Some(enter) = (0..cols).find(|&j| cost[j].is_negative()) else {
            break;
        };
        let mut leave: Option<usize> = None;
        for i in 0..rows {
            if !t[i][enter].is_positive() {
                continue;
            }
            leave = match leave {
                None => Some(i),
                Some(l) => {
                    let a = &rhs[i] / &t[i][enter];
                    let b = &rhs[l] / &t[l][enter];
                    if a < b || (a == b && basis[i] < basis[l]) {
                        Some(i)
                    } else {
                        Some(l)
                    }
                }
            };
        }
        // phase-one objective is bounded below by 0
        let leave = leave.expect("bounded phase-one problem");
        let pivot = t[leave][enter].clone();
        for x in t[leave].iter_mut() {
            *x /= &pivot;
        }
        rhs[leave] /= &pivot;
        for i in 0..rows {
            if i == leave || t[i][enter].is_zero() {
                continue;
            }
            let f = t[i][enter].clone();
            for j in 0..cols {
                let d = &f * &t[leave][j];
                t[i][j] -= d;
            }
            let d = &f * &rhs[leave];
            rhs[i] -= d;
        }
        let f = cost[enter].clone();
        for j in 0..cols {
            let d = &f * &t[leave][j];
            cost[j] -= d;
        }
        value -= &f * &rhs[leave];
        basis[leave] = enter;
    }
    if !value.is_zero() {
        return None;
    }
    let mut weights = vec![zero; n];
    for (i, &j) in basis.iter().enumerate() {
        if j < n {
            weights[j] = rhs[i].clone();
        }
    }
    Some(weights)
}
