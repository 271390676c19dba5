//! Rank tables for Floer groups graded by `Spin^c` classes, and the checks
//! that only use their support and ranks.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::exact_linalg::{cokernel, dot, AbelianGroupStructure, IntegerMatrix};
use crate::norm_calculus::{BasicClassSet, NormOracle};

/// Ranks of a group graded by classes in `Z^rank`; absent classes have rank 0.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SpincRankTable {
    rank: usize,
    entries: BTreeMap<Vec<BigInt>, u64>,
}

impl SpincRankTable {
    pub fn new(rank: usize, entries: Vec<(Vec<BigInt>, u64)>) -> Result<Self> {
        Ok(Self {
            rank,
            entries: collect_entries(rank, entries)?,
        })
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn entries(&self) -> &BTreeMap<Vec<BigInt>, u64> {
        &self.entries
    }

    pub fn rank_at(&self, class: &[BigInt]) -> u64 {
        self.entries.get(class).copied().unwrap_or(0)
    }

    pub fn total(&self) -> u64 {
        self.entries.values().sum()
    }
}

fn collect_entries(
    rank: usize,
    entries: Vec<(Vec<BigInt>, u64)>,
) -> Result<BTreeMap<Vec<BigInt>, u64>> {
    let mut map = BTreeMap::new();
    for (class, r) in entries {
        if class.len() != rank {
            return Err(Error::DimensionMismatch {
                expected: rank,
                found: class.len(),
            });
        }
        if r == 0 {
            return Err(Error::InvalidInput(format!(
                "rank table lists class {class:?} with rank 0"
            )));
        }
        if map.insert(class.clone(), r).is_some() {
            return Err(Error::InvalidInput(format!("class {class:?} listed twice")));
        }
    }
    Ok(map)
}

/// Knot ranks graded by relative classes, with `j*` to the ambient classes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KnotRankTable {
    rank: usize,
    entries: BTreeMap<Vec<BigInt>, u64>,
    /// `j*`: relative classes to ambient classes, `ambient_rank × rank`.
    pullback: IntegerMatrix,
    /// `j_*`: ambient `H_2` to relative `H_2`, if supplied.
    pushforward: Option<IntegerMatrix>,
    /// `|[∂F] · [μ]|` for the Seifert class under consideration.
    meridian_pairing: Option<BigInt>,
}

impl KnotRankTable {
    pub fn new(
        rank: usize,
        entries: Vec<(Vec<BigInt>, u64)>,
        pullback: IntegerMatrix,
    ) -> Result<Self> {
        if pullback.cols() != rank {
            return Err(Error::DimensionMismatch {
                expected: rank,
                found: pullback.cols(),
            });
        }
        Ok(Self {
            rank,
            entries: collect_entries(rank, entries)?,
            pullback,
            pushforward: None,
            meridian_pairing: None,
        })
    }

    pub fn with_pushforward(mut self, pushforward: IntegerMatrix) -> Result<Self> {
        if pushforward.rows() != self.rank {
            return Err(Error::DimensionMismatch {
                expected: self.rank,
                found: pushforward.rows(),
            });
        }
        self.pushforward = Some(pushforward);
        Ok(self)
    }

    pub fn with_meridian_pairing(mut self, pairing: BigInt) -> Result<Self> {
        if pairing.is_negative() {
            return Err(Error::InvalidInput("meridian pairing is an absolute value".into()));
        }
        self.meridian_pairing = Some(pairing);
        Ok(self)
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn ambient_rank(&self) -> usize {
        self.pullback.rows()
    }

    pub fn entries(&self) -> &BTreeMap<Vec<BigInt>, u64> {
        &self.entries
    }

    pub fn pullback(&self) -> &IntegerMatrix {
        &self.pullback
    }

    pub fn pushforward(&self) -> Option<&IntegerMatrix> {
        self.pushforward.as_ref()
    }

    pub fn meridian_pairing(&self) -> Option<&BigInt> {
        self.meridian_pairing.as_ref()
    }

    pub fn total(&self) -> u64 {
        self.entries.values().sum()
    }

    /// Ranks summed over the fibres of `j*`.
    pub fn pushed_ranks(&self) -> BTreeMap<Vec<BigInt>, u64> {
        let mut out = BTreeMap::new();
        for (xi, r) in &self.entries {
            let c = self.pullback.mul_vec(xi).expect("pullback shape");
            *out.entry(c).or_insert(0) += r;
        }
        out
    }
}

/// Per-class comparison of a knot table with an ambient table.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClassComparison {
    pub class: Vec<BigInt>,
    pub knot: u64,
    pub ambient: u64,
}

/// All classes in either support, with the knot ranks summed over `j*`.
/// Fails if the knot side is smaller anywhere.
pub fn compare_tables(k: &KnotRankTable, t: &SpincRankTable) -> Result<Vec<ClassComparison>> {
    if k.ambient_rank() != t.rank() {
        return Err(Error::DimensionMismatch {
            expected: t.rank(),
            found: k.ambient_rank(),
        });
    }
    let pushed = k.pushed_ranks();
    let mut classes: Vec<Vec<BigInt>> = pushed.keys().chain(t.entries.keys()).cloned().collect();
    classes.sort();
    classes.dedup();
    let mut out = Vec::with_capacity(classes.len());
    for class in classes {
        let knot = pushed.get(&class).copied().unwrap_or(0);
        let ambient = t.rank_at(&class);
        if knot < ambient {
            return Err(Error::RankInequality(format!(
                "class {class:?}: knot rank {knot} is below ambient rank {ambient}"
            )));
        }
        out.push(ClassComparison {
            class,
            knot,
            ambient,
        });
    }
    Ok(out)
}

pub fn basic_classes_from_ranks(t: &SpincRankTable) -> BasicClassSet {
    BasicClassSet::new(t.rank, t.entries.keys().cloned().collect()).expect("class lengths")
}

pub fn is_floer_simple(k: &KnotRankTable, t: &SpincRankTable) -> Result<bool> {
    compare_tables(k, t)?;
    Ok(k.total() == t.total())
}

/// Equality of ranks on every class `c` with `⟨c, h⟩ ≤ -χ_-(h)`.
pub fn is_bottommostly_simple(
    k: &KnotRankTable,
    t: &SpincRankTable,
    norm: &NormOracle,
    h: &[BigInt],
) -> Result<bool> {
    if norm.rank() != t.rank() {
        return Err(Error::DimensionMismatch {
            expected: t.rank(),
            found: norm.rank(),
        });
    }
    let bound = -norm.chi_minus(h)?;
    Ok(compare_tables(k, t)?
        .iter()
        .filter(|c| dot(&c.class, h) <= bound)
        .all(|c| c.knot == c.ambient))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExtremeClassReport {
    pub min: BigInt,
    pub max: BigInt,
    pub expected_min: BigInt,
    pub expected_max: BigInt,
    pub min_ok: bool,
    pub max_ok: bool,
}

impl ExtremeClassReport {
    pub fn holds(&self) -> bool {
        self.min_ok && self.max_ok
    }
}

/// The pairings `⟨ξ, F⟩` over the support should range from `-χ_F` to
/// `χ_F + 2 |[∂F]·[μ]|`.
pub fn check_extreme_classes(
    k: &KnotRankTable,
    f_class: &[BigInt],
    chi_f: &BigInt,
) -> Result<ExtremeClassReport> {
    if f_class.len() != k.rank {
        return Err(Error::DimensionMismatch {
            expected: k.rank,
            found: f_class.len(),
        });
    }
    if chi_f.is_negative() {
        return Err(Error::InvalidInput("χ_F must be nonnegative".into()));
    }
    let mu = k
        .meridian_pairing
        .clone()
        .ok_or_else(|| Error::MissingPairing("meridian pairing not declared".into()))?;
    let pairings: Vec<BigInt> = k.entries.keys().map(|xi| dot(xi, f_class)).collect();
    let (Some(min), Some(max)) = (pairings.iter().min(), pairings.iter().max()) else {
        return Err(Error::EmptySupport);
    };
    let expected_min = -chi_f.clone();
    let expected_max = chi_f + BigInt::from(2) * mu;
    Ok(ExtremeClassReport {
        min_ok: *min == expected_min,
        max_ok: *max == expected_max,
        min: min.clone(),
        max: max.clone(),
        expected_min,
        expected_max,
    })
}

pub fn check_norm_restriction(norm_y: &NormOracle, norm_x: &NormOracle, h: &[BigInt]) -> Result<bool> {
    if norm_y.rank() != norm_x.rank() {
        return Err(Error::DimensionMismatch {
            expected: norm_y.rank(),
            found: norm_x.rank(),
        });
    }
    Ok(norm_y.chi_minus(h)? == norm_x.chi_minus(h)?)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DepthHomology {
    pub depth: usize,
    pub kernel_rank: usize,
    pub cokernel: AbelianGroupStructure,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TowerReport {
    pub depth: usize,
    pub kernel_rank: usize,
    pub cokernel: AbelianGroupStructure,
    /// Depths `max(1, d - deg f) ..= d`.
    pub window: Vec<DepthHomology>,
    pub stable: bool,
    pub hfplus_is_z: bool,
}

/// Lowest and highest `U`-degree with nonzero coefficient; coefficients are
/// indexed from `U^1`.
fn degrees(f: &[BigInt]) -> Option<(usize, usize)> {
    let low = f.iter().position(|c| !c.is_zero())?;
    let high = f.iter().rposition(|c| !c.is_zero())?;
    Some((low + 1, high + 1))
}

/// Matrix of `x̃_k ↦ f(U) ỹ_k` truncated at depth `d`, where `x̃_k`, `ỹ_k`
/// stand for `U^{-k} x̃`, `U^{-k} ỹ`. Rows are `ỹ_0 .. ỹ_{d-1}`; columns run
/// over every `x̃_k` whose image lies in those rows.
pub fn tower_matrix(f: &[BigInt], depth: usize) -> IntegerMatrix {
    let Some((low, _)) = degrees(f) else {
        return IntegerMatrix::zeros(depth, depth);
    };
    let cols = depth + low;
    let mut m = IntegerMatrix::zeros(depth, cols);
    for k in 0..cols {
        for (i, c) in f.iter().enumerate() {
            let j = i + 1;
            if j <= k && k - j < depth {
                m[(k - j, k)] = c.clone();
            }
        }
    }
    m
}

fn depth_homology(f: &[BigInt], depth: usize) -> DepthHomology {
    let m = tower_matrix(f, depth);
    DepthHomology {
        depth,
        kernel_rank: m.cols() - m.rank(),
        cokernel: cokernel(&m),
    }
}

/// `f` is given by its coefficients of `U^1, U^2, ...`.
pub fn tower_homology(f: &[BigInt], depth: usize) -> Result<TowerReport> {
    if depth == 0 {
        return Err(Error::InvalidInput("tower depth must be at least 1".into()));
    }
    let deg = degrees(f).map_or(0, |(_, high)| high);
    let start = depth.saturating_sub(deg).max(1);
    let window: Vec<DepthHomology> = (start..=depth).map(|d| depth_homology(f, d)).collect();
    let last = window.last().expect("nonempty window").clone();
    let stable = window
        .iter()
        .all(|w| w.kernel_rank == last.kernel_rank && w.cokernel == last.cokernel);
    Ok(TowerReport {
        depth,
        kernel_rank: last.kernel_rank,
        hfplus_is_z: stable && last.kernel_rank == 1 && last.cokernel.is_trivial(),
        cokernel: last.cokernel,
        window,
        stable,
    })
}

/// Same, with coefficients indexed from `U^0`; a nonzero constant term is
/// rejected.
pub fn tower_homology_from_polynomial(coefficients: &[BigInt], depth: usize) -> Result<TowerReport> {
    match coefficients.split_first() {
        Some((c, rest)) if c.is_zero() => tower_homology(rest, depth),
        Some((c, _)) => Err(Error::InvalidInput(format!(
            "f(0) must vanish, constant term is {c}"
        ))),
        None => tower_homology(&[], depth),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BundleVerdict {
    /// The knot must be the unknot.
    Contradiction,
    Consistent,
    /// The unique bottommost class hypothesis was not declared.
    Inconclusive,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BundleObstruction {
    pub lhs: BigInt,
    pub required: BigInt,
    pub bound: BigInt,
    pub meridian_term: BigInt,
    pub verdict: BundleVerdict,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BundleInput {
    /// `χ_-(G) = 2g - 2` of the fibre.
    pub chi_g: BigInt,
    pub n: BigInt,
    /// `χ_-(n[G] + [F])`.
    pub chi_plus: BigInt,
    /// `χ_-(n[G] - [F])`.
    pub chi_minus: BigInt,
    /// `χ_-(2n[G])`.
    pub chi_double: BigInt,
    /// `F` is a closed class: no meridian contribution.
    pub closed_class: bool,
    pub unique_bottommost: bool,
}

/// Compares the forced value `-2n χ_-(G)` of the bottommost pairing with the
/// bound `-χ_-(2n[G]) - 2` obtained when `F` meets the knot.
pub fn bundle_unknot_obstruction(input: &BundleInput) -> Result<BundleObstruction> {
    let two = BigInt::from(2);
    if input.chi_g < two || input.chi_g.is_odd() {
        return Err(Error::InvalidInput(format!(
            "χ_-(G) must be a positive even integer, got {}",
            input.chi_g
        )));
    }
    if !input.n.is_positive() {
        return Err(Error::InvalidInput("n must be positive".into()));
    }
    let expected_double = &two * &input.n * &input.chi_g;
    if input.chi_double != expected_double {
        return Err(Error::InvalidInput(format!(
            "χ_-(2n[G]) = {} but a fibre gives {expected_double}",
            input.chi_double
        )));
    }
    let total = &input.chi_plus + &input.chi_minus;
    if total < input.chi_double {
        return Err(Error::InvalidInput(format!(
            "subadditivity fails: {} + {} < {}",
            input.chi_plus, input.chi_minus, input.chi_double
        )));
    }
    let meridian_term = if !input.closed_class && total > input.chi_double {
        two.clone()
    } else {
        BigInt::zero()
    };
    let lhs = -&input.chi_plus - &input.chi_minus - &meridian_term;
    let required = -&two * &input.n * &input.chi_g;
    let bound = -&input.chi_double - &meridian_term;
    let verdict = if !input.unique_bottommost {
        BundleVerdict::Inconclusive
    } else if required > bound {
        BundleVerdict::Contradiction
    } else {
        BundleVerdict::Consistent
    };
    Ok(BundleObstruction {
        lhs,
        required,
        bound,
        meridian_term,
        verdict,
    })
}

/// Ranks as a sorted list, for reports.
pub fn ranks_as_vec(map: &BTreeMap<Vec<BigInt>, u64>) -> Vec<(Vec<BigInt>, u64)> {
    map.iter().map(|(k, v)| (k.clone(), *v)).collect()
}

/// Coefficient of `U^1` is a unit.
pub fn has_unit_leading_coefficient(f: &[BigInt]) -> bool {
    f.first().map_or(false, |c| c.abs().is_one())
}
