//! Homology-level bookkeeping for cut-and-paste of surfaces and for product
//! annuli.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::exact_linalg::dot;
use crate::norm_calculus::BasicClassSet;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SurfaceClass {
    pub homology: Vec<BigInt>,
    /// Euler characteristic, signed.
    pub euler: BigInt,
    /// `α ↦ ⟨α, [S]⟩` for the classes of some basic class set.
    pub pairings: Option<BTreeMap<Vec<BigInt>, BigInt>>,
}

impl SurfaceClass {
    pub fn new(homology: Vec<BigInt>, euler: BigInt) -> Self {
        Self {
            homology,
            euler,
            pairings: None,
        }
    }

    pub fn with_pairings(mut self, pairings: BTreeMap<Vec<BigInt>, BigInt>) -> Self {
        self.pairings = Some(pairings);
        self
    }

    /// Fills the pairing data with `α · homology` for every `α ∈ B`.
    pub fn with_computed_pairings(self, b: &BasicClassSet) -> Result<Self> {
        if b.rank() != self.homology.len() {
            return Err(Error::DimensionMismatch {
                expected: self.homology.len(),
                found: b.rank(),
            });
        }
        let map = b.classes().map(|a| (a.clone(), dot(a, &self.homology))).collect();
        Ok(self.with_pairings(map))
    }

    /// `χ_- = max(0, -χ)` for a connected surface.
    pub fn euler_neg(&self) -> BigInt {
        (-&self.euler).max(BigInt::zero())
    }

    pub fn pairing(&self, alpha: &[BigInt]) -> Result<BigInt> {
        self.pairings
            .as_ref()
            .and_then(|m| m.get(alpha).cloned())
            .ok_or_else(|| Error::MissingPairing(format!("no pairing recorded for {alpha:?}")))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum AnnulusType {
    NN,
    NS,
    SN,
    SS,
}

impl fmt::Display for AnnulusType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            AnnulusType::NN => "NN",
            AnnulusType::NS => "NS",
            AnnulusType::SN => "SN",
            AnnulusType::SS => "SS",
        };
        f.write_str(s)
    }
}

/// First letter for `∂_- A`, second for `∂_+ A`; a curve is separating iff
/// its class is zero.
pub fn classify_annulus(c_minus: &[BigInt], c_plus: &[BigInt]) -> AnnulusType {
    let minus = c_minus.iter().any(|x| !x.is_zero());
    let plus = c_plus.iter().any(|x| !x.is_zero());
    match (minus, plus) {
        (true, true) => AnnulusType::NN,
        (true, false) => AnnulusType::NS,
        (false, true) => AnnulusType::SN,
        (false, false) => AnnulusType::SS,
    }
}

/// Class of the surface obtained from `s` and `m` copies of `g`. Pairings are
/// kept for the classes recorded on both inputs.
pub fn cut_paste_class(s: &SurfaceClass, g: &SurfaceClass, m: u64) -> Result<SurfaceClass> {
    if s.homology.len() != g.homology.len() {
        return Err(Error::DimensionMismatch {
            expected: s.homology.len(),
            found: g.homology.len(),
        });
    }
    let m = BigInt::from(m);
    let homology = s
        .homology
        .iter()
        .zip(&g.homology)
        .map(|(a, b)| a + &m * b)
        .collect();
    let euler = &s.euler + &m * &g.euler;
    let pairings = match (&s.pairings, &g.pairings) {
        (Some(ps), Some(pg)) => Some(
            ps.iter()
                .filter_map(|(alpha, x)| pg.get(alpha).map(|y| (alpha.clone(), x + &m * y)))
                .collect(),
        ),
        _ => None,
    };
    Ok(SurfaceClass {
        homology,
        euler,
        pairings,
    })
}

/// `1 + max_{α ∈ B} |⟨α, S⟩ - χ(S)|`.
pub fn lower_sub_threshold(b: &BasicClassSet, s: &SurfaceClass) -> Result<BigInt> {
    let mut gap = BigInt::zero();
    for alpha in b.classes() {
        gap = gap.max((s.pairing(alpha)? - &s.euler).abs());
    }
    Ok(gap + 1)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LowerSubReport {
    pub m: u64,
    pub threshold: BigInt,
    pub below_threshold: bool,
    /// `{α : ⟨α, G^(m)⟩ ≤ χ(G^(m))}`.
    pub lower_at_m: BasicClassSet,
    /// `{α : ⟨α, G⟩ ≤ χ(G)}`.
    pub lower_at_g: BasicClassSet,
    pub holds: bool,
}

fn lower_set(b: &BasicClassSet, surface: &SurfaceClass) -> Result<BasicClassSet> {
    let mut keep = Vec::new();
    for alpha in b.classes() {
        if surface.pairing(alpha)? <= surface.euler {
            keep.push(alpha.clone());
        }
    }
    BasicClassSet::new(b.rank(), keep)
}

/// Compares the two sublevel sets by enumeration of `B`. The threshold is
/// reported but not enforced, so sub-threshold values can be examined.
pub fn verify_lower_sub(
    b: &BasicClassSet,
    s: &SurfaceClass,
    g: &SurfaceClass,
    m: u64,
) -> Result<LowerSubReport> {
    let threshold = lower_sub_threshold(b, s)?;
    let gm = cut_paste_class(s, g, m)?;
    let lower_at_m = lower_set(b, &gm)?;
    let lower_at_g = lower_set(b, g)?;
    Ok(LowerSubReport {
        m,
        below_threshold: BigInt::from(m) < threshold,
        holds: lower_at_m.is_subset(&lower_at_g),
        threshold,
        lower_at_m,
        lower_at_g,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(x: &[i64]) -> Vec<BigInt> {
        x.iter().map(|&a| BigInt::from(a)).collect()
    }

    fn surface(euler: i64, pairings: &[(&[i64], i64)]) -> SurfaceClass {
        SurfaceClass::new(v(&[0]), BigInt::from(euler)).with_pairings(
            pairings.iter().map(|(a, x)| (v(a), BigInt::from(*x))).collect(),
        )
    }

    #[test]
    fn annulus_types() {
        assert_eq!(classify_annulus(&v(&[1, 0]), &v(&[0, 1])), AnnulusType::NN);
        assert_eq!(classify_annulus(&v(&[1, 0]), &v(&[0, 0])), AnnulusType::NS);
        assert_eq!(classify_annulus(&v(&[0, 0]), &v(&[0, 3])), AnnulusType::SN);
        assert_eq!(classify_annulus(&v(&[0, 0]), &v(&[0, 0])), AnnulusType::SS);
        assert_eq!(AnnulusType::NS.to_string(), "NS");
    }

    #[test]
    fn cut_paste_arithmetic() {
        let s = surface(-2, &[(&[1], 1)]);
        let g = surface(-2, &[(&[1], -2)]);
        assert_eq!(cut_paste_class(&s, &g, 0).unwrap(), s);
        let c = cut_paste_class(&s, &g, 3).unwrap();
        assert_eq!(c.euler, BigInt::from(-8));
        assert_eq!(c.euler_neg(), BigInt::from(8));
        let c = cut_paste_class(&s, &g, 4).unwrap();
        assert_eq!(c.pairing(&v(&[1])).unwrap(), BigInt::from(-7));
    }

    #[test]
    fn cut_paste_is_additive_in_m() {
        let s = SurfaceClass::new(v(&[1, 2]), BigInt::from(-4));
        let g = SurfaceClass::new(v(&[0, 1]), BigInt::from(-2));
        let direct = cut_paste_class(&s, &g, 5).unwrap();
        let staged = cut_paste_class(&cut_paste_class(&s, &g, 2).unwrap(), &g, 3).unwrap();
        assert_eq!(direct, staged);
    }

    #[test]
    fn thresholds() {
        let b = BasicClassSet::from_i64(1, &[&[1], &[2]]).unwrap();
        let s = surface(-2, &[(&[1], -1), (&[2], 3)]);
        assert_eq!(lower_sub_threshold(&b, &s).unwrap(), BigInt::from(6));
        assert_eq!(lower_sub_threshold(&BasicClassSet::empty(1), &s).unwrap(), BigInt::from(1));
        let flat = surface(-2, &[(&[1], -2), (&[2], -2)]);
        assert_eq!(lower_sub_threshold(&b, &flat).unwrap(), BigInt::from(1));
        let partial = surface(-2, &[(&[1], 0)]);
        assert!(matches!(lower_sub_threshold(&b, &partial), Err(Error::MissingPairing(_))));
    }

    #[test]
    fn sub_threshold_counterexample() {
        let b = BasicClassSet::from_i64(1, &[&[1]]).unwrap();
        let s = surface(-2, &[(&[1], -6)]);
        let g = surface(-2, &[(&[1], -1)]);
        let r = verify_lower_sub(&b, &s, &g, 1).unwrap();
        assert_eq!(r.threshold, BigInt::from(5));
        assert!(r.below_threshold);
        assert!(!r.holds);
        for m in 5..=25 {
            assert!(verify_lower_sub(&b, &s, &g, m).unwrap().holds);
        }
        assert!(verify_lower_sub(&BasicClassSet::empty(1), &s, &g, 1).unwrap().holds);
    }

    #[test]
    fn computed_pairings() {
        let b = BasicClassSet::from_i64(2, &[&[1, -1], &[2, 0]]).unwrap();
        let s = SurfaceClass::new(v(&[3, 1]), BigInt::from(-2))
            .with_computed_pairings(&b)
            .unwrap();
        assert_eq!(s.pairing(&v(&[1, -1])).unwrap(), BigInt::from(2));
        assert_eq!(s.pairing(&v(&[2, 0])).unwrap(), BigInt::from(6));
    }
}
