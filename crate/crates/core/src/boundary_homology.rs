//! First homology of the boundary of a 3-manifold, the intersection forms on
//! it and the kernel of the inclusion into the ambient first homology.
//!
//! A [`BoundaryPresentation`] stores one block of columns per boundary
//! component, already multiplied by the component's orientation sign. For the
//! usual two-component boundary `G+ ⊔ (-G-)` the matrix is `[ι+ | -ι-]`, so a
//! kernel vector `(x+, x-)` is exactly a pair with `ι+(x+) = ι-(x-)`.

use num_bigint::BigInt;
use num_traits::One;

use crate::error::{Error, Result};
use crate::exact_linalg::{
    bilinear, kernel_over, orthogonal_complement, rank_over, same_span, span_basis, Field,
    IntegerMatrix,
};

/// `H_1` of a closed orientable surface of genus `g` in the basis
/// `a1, b1, ..., ag, bg`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct SurfaceHomology {
    pub genus: usize,
}

impl SurfaceHomology {
    pub fn new(genus: usize) -> Self {
        Self { genus }
    }

    pub fn dim(&self) -> usize {
        2 * self.genus
    }

    /// `ω(ai, bi) = 1`, `ω(bi, ai) = -1`, everything else zero.
    pub fn intersection_form(&self) -> IntegerMatrix {
        let mut j = IntegerMatrix::zeros(self.dim(), self.dim());
        for i in 0..self.genus {
            j[(2 * i, 2 * i + 1)] = BigInt::one();
            j[(2 * i + 1, 2 * i)] = -BigInt::one();
        }
        j
    }

    pub fn basis_label(&self, index: usize) -> String {
        let letter = if index % 2 == 0 { 'a' } else { 'b' };
        format!("{letter}{}", index / 2 + 1)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn from_i64(s: i64) -> Result<Self> {
        match s {
            1 => Ok(Sign::Plus),
            -1 => Ok(Sign::Minus),
            _ => Err(Error::InvalidInput(format!("orientation sign must be ±1, got {s}"))),
        }
    }

    pub fn as_i64(self) -> i64 {
        match self {
            Sign::Plus => 1,
            Sign::Minus => -1,
        }
    }

    pub fn symbol(self) -> char {
        match self {
            Sign::Plus => '+',
            Sign::Minus => '-',
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct BoundaryComponent {
    pub surface: SurfaceHomology,
    pub sign: Sign,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BoundaryPresentation {
    components: Vec<BoundaryComponent>,
    ambient_rank: usize,
    inclusion: IntegerMatrix,
    /// Relations of `H_1(M)` as vectors in `Z^ambient_rank`; empty when the
    /// ambient group is free.
    relations: Vec<Vec<BigInt>>,
}

impl BoundaryPresentation {
    pub fn new(
        components: Vec<BoundaryComponent>,
        ambient_rank: usize,
        inclusion: IntegerMatrix,
    ) -> Result<Self> {
        Self::with_relations(components, ambient_rank, inclusion, Vec::new())
    }

    pub fn with_relations(
        components: Vec<BoundaryComponent>,
        ambient_rank: usize,
        inclusion: IntegerMatrix,
        relations: Vec<Vec<BigInt>>,
    ) -> Result<Self> {
        let total: usize = components.iter().map(|c| c.surface.dim()).sum();
        if inclusion.rows() != ambient_rank {
            return Err(Error::DimensionMismatch {
                expected: ambient_rank,
                found: inclusion.rows(),
            });
        }
        if inclusion.cols() != total {
            return Err(Error::DimensionMismatch {
                expected: total,
                found: inclusion.cols(),
            });
        }
        if let Some(bad) = relations.iter().find(|r| r.len() != ambient_rank) {
            return Err(Error::DimensionMismatch {
                expected: ambient_rank,
                found: bad.len(),
            });
        }
        Ok(Self {
            components,
            ambient_rank,
            inclusion,
            relations,
        })
    }

    /// Two components `G+` (sign +1) and `G-` (sign -1), given the unsigned
    /// maps `ι+` and `ι-` into `H_1(M)`.
    pub fn two_sided(iota_plus: &IntegerMatrix, iota_minus: &IntegerMatrix) -> Result<Self> {
        if iota_plus.rows() != iota_minus.rows() {
            return Err(Error::DimensionMismatch {
                expected: iota_plus.rows(),
                found: iota_minus.rows(),
            });
        }
        for m in [iota_plus, iota_minus] {
            if m.cols() % 2 != 0 {
                return Err(Error::InvalidInput(format!(
                    "surface block has odd width {}",
                    m.cols()
                )));
            }
        }
        let inclusion = iota_plus.hstack(&iota_minus.scaled(&-BigInt::one()))?;
        Self::new(
            vec![
                BoundaryComponent {
                    surface: SurfaceHomology::new(iota_plus.cols() / 2),
                    sign: Sign::Plus,
                },
                BoundaryComponent {
                    surface: SurfaceHomology::new(iota_minus.cols() / 2),
                    sign: Sign::Minus,
                },
            ],
            iota_plus.rows(),
            inclusion,
        )
    }

    pub fn components(&self) -> &[BoundaryComponent] {
        &self.components
    }

    pub fn ambient_rank(&self) -> usize {
        self.ambient_rank
    }

    /// The stored inclusion matrix, component blocks pre-multiplied by sign.
    pub fn inclusion(&self) -> &IntegerMatrix {
        &self.inclusion
    }

    pub fn relations(&self) -> &[Vec<BigInt>] {
        &self.relations
    }

    pub fn has_torsion_data(&self) -> bool {
        !self.relations.is_empty()
    }

    /// `dim H_1(∂M)`.
    pub fn boundary_dim(&self) -> usize {
        self.components.iter().map(|c| c.surface.dim()).sum()
    }

    /// Column range of component `i`.
    pub fn block_range(&self, i: usize) -> std::ops::Range<usize> {
        let start: usize = self.components[..i].iter().map(|c| c.surface.dim()).sum();
        start..start + self.components[i].surface.dim()
    }

    /// The stored (signed) block of component `i`.
    pub fn signed_block(&self, i: usize) -> IntegerMatrix {
        let r = self.block_range(i);
        self.inclusion.column_block(r.start, r.end)
    }

    /// The map `H_1(G_i) -> H_1(M)` induced by inclusion, with the sign undone.
    pub fn component_map(&self, i: usize) -> IntegerMatrix {
        let block = self.signed_block(i);
        match self.components[i].sign {
            Sign::Plus => block,
            Sign::Minus => block.scaled(&-BigInt::one()),
        }
    }

    /// Intersection form on `H_1(∂M)`: the direct sum of the component forms,
    /// each multiplied by its orientation sign.
    pub fn intersection_form(&self) -> IntegerMatrix {
        let forms: Vec<IntegerMatrix> = self
            .components
            .iter()
            .map(|c| {
                let j = c.surface.intersection_form();
                match c.sign {
                    Sign::Plus => j,
                    Sign::Minus => j.scaled(&-BigInt::one()),
                }
            })
            .collect();
        let refs: Vec<&IntegerMatrix> = forms.iter().collect();
        IntegerMatrix::block_diagonal(&refs)
    }

    /// Indices of `(G+, G-)`; requires exactly two components of opposite sign.
    pub fn plus_minus(&self) -> Result<(usize, usize)> {
        if self.components.len() != 2 {
            return Err(Error::ComponentCount {
                expected: 2,
                found: self.components.len(),
            });
        }
        match (self.components[0].sign, self.components[1].sign) {
            (Sign::Plus, Sign::Minus) => Ok((0, 1)),
            (Sign::Minus, Sign::Plus) => Ok((1, 0)),
            _ => Err(Error::InvalidPresentation(
                "the two boundary components must carry opposite signs".into(),
            )),
        }
    }

    /// Kernel over `field` of `map` followed by the quotient by the relations.
    pub fn kernel_in_ambient(&self, field: Field, map: &IntegerMatrix) -> Vec<Vec<BigInt>> {
        if self.relations.is_empty() {
            return kernel_over(field, map);
        }
        let n = map.cols();
        let rel = IntegerMatrix::from_columns(&self.relations, self.ambient_rank)
            .expect("relation length");
        let augmented = map.hstack(&rel).expect("shape");
        let projected: Vec<Vec<BigInt>> = kernel_over(field, &augmented)
            .into_iter()
            .map(|v| v[..n].to_vec())
            .collect();
        span_basis(field, &projected, n)
    }

    /// Same presentation with the inclusion matrix replaced.
    pub(crate) fn with_inclusion(
        &self,
        ambient_rank: usize,
        inclusion: IntegerMatrix,
    ) -> Result<Self> {
        Self::new(self.components.clone(), ambient_rank, inclusion)
    }
}

/// Kernel of `i_*` over a field.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LagrangianKernel {
    pub field: Field,
    pub basis: Vec<Vec<BigInt>>,
}

impl LagrangianKernel {
    pub fn dimension(&self) -> usize {
        self.basis.len()
    }
}

pub fn boundary_kernel(p: &BoundaryPresentation, field: Field) -> LagrangianKernel {
    LagrangianKernel {
        field,
        basis: p.kernel_in_ambient(field, p.inclusion()),
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LagrangianReport {
    pub field: Field,
    pub isotropic: bool,
    pub half_dimensional: bool,
    pub dimension: usize,
    pub expected_dimension: usize,
    /// First pair of basis indices with nonzero pairing, if any.
    pub witness: Option<(usize, usize)>,
}

impl LagrangianReport {
    pub fn is_lagrangian(&self) -> bool {
        self.isotropic && self.half_dimensional
    }
}

pub fn verify_lagrangian(k: &LagrangianKernel, p: &BoundaryPresentation) -> Result<LagrangianReport> {
    let n = p.boundary_dim();
    if let Some(bad) = k.basis.iter().find(|v| v.len() != n) {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: bad.len(),
        });
    }
    let form = p.intersection_form();
    let mut witness = None;
    'scan: for i in 0..k.basis.len() {
        for j in i + 1..k.basis.len() {
            let w = bilinear(k.field, &form, &k.basis[i], &k.basis[j]);
            if !k.field.is_zero(&w) {
                witness = Some((i, j));
                break 'scan;
            }
        }
    }
    let dimension = rank_over(k.field, &k.basis, n);
    Ok(LagrangianReport {
        field: k.field,
        isotropic: witness.is_none(),
        half_dimensional: 2 * dimension == n,
        dimension,
        expected_dimension: n / 2,
        witness,
    })
}

/// `im Pr±`, `V±` and the orthogonality relations between them.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VerticalReport {
    pub field: Field,
    pub image_plus: Vec<Vec<BigInt>>,
    pub image_minus: Vec<Vec<BigInt>>,
    pub vertical_plus: Vec<Vec<BigInt>>,
    pub vertical_minus: Vec<Vec<BigInt>>,
    /// `V+ = (im Pr+)^⊥` and `(V+)^⊥ = im Pr+`.
    pub orthogonal_plus: bool,
    pub orthogonal_minus: bool,
}

impl VerticalReport {
    pub fn dims_equal(&self) -> bool {
        self.vertical_plus.len() == self.vertical_minus.len()
    }

    pub fn holds(&self) -> bool {
        self.dims_equal() && self.orthogonal_plus && self.orthogonal_minus
    }
}

pub fn projections_and_verticals(p: &BoundaryPresentation, field: Field) -> Result<VerticalReport> {
    let (ip, im) = p.plus_minus()?;
    let kernel = boundary_kernel(p, field);
    let mut images = Vec::new();
    let mut verticals = Vec::new();
    let mut orth = Vec::new();
    for side in [ip, im] {
        let range = p.block_range(side);
        let dim = range.len();
        let projected: Vec<Vec<BigInt>> = kernel
            .basis
            .iter()
            .map(|v| v[range.clone()].to_vec())
            .collect();
        let image = span_basis(field, &projected, dim);
        let vertical = p.kernel_in_ambient(field, &p.component_map(side));
        let form = p.components()[side].surface.intersection_form();
        let perp_image = orthogonal_complement(field, &image, &form);
        let perp_vertical = orthogonal_complement(field, &vertical, &form);
        orth.push(
            same_span(field, &vertical, &perp_image, dim) && same_span(field, &image, &perp_vertical, dim),
        );
        images.push(image);
        verticals.push(vertical);
    }
    let vertical_minus = verticals.pop().unwrap();
    let vertical_plus = verticals.pop().unwrap();
    let image_minus = images.pop().unwrap();
    let image_plus = images.pop().unwrap();
    Ok(VerticalReport {
        field,
        image_plus,
        image_minus,
        vertical_plus,
        vertical_minus,
        orthogonal_plus: orth[0],
        orthogonal_minus: orth[1],
    })
}

/// `υ = dim_Q V+`.
pub fn upsilon(p: &BoundaryPresentation) -> Result<usize> {
    let (ip, _) = p.plus_minus()?;
    Ok(p.kernel_in_ambient(Field::Rationals, &p.component_map(ip)).len())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ints(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    fn product(g: usize) -> BoundaryPresentation {
        let id = IntegerMatrix::identity(2 * g);
        BoundaryPresentation::two_sided(&id, &id).unwrap()
    }

    fn solid_torus() -> BoundaryPresentation {
        BoundaryPresentation::new(
            vec![BoundaryComponent {
                surface: SurfaceHomology::new(1),
                sign: Sign::Plus,
            }],
            1,
            IntegerMatrix::from_i64_rows(&[[0, 1]]),
        )
        .unwrap()
    }

    #[test]
    fn standard_form() {
        let j = SurfaceHomology::new(2).intersection_form();
        assert_eq!(
            j,
            IntegerMatrix::from_i64_rows(&[[0, 1, 0, 0], [-1, 0, 0, 0], [0, 0, 0, 1], [0, 0, -1, 0]])
        );
    }

    #[test]
    fn product_kernel_is_the_diagonal() {
        let p = product(1);
        assert_eq!(p.inclusion(), &IntegerMatrix::from_i64_rows(&[[1, 0, -1, 0], [0, 1, 0, -1]]));
        let k = boundary_kernel(&p, Field::Rationals);
        assert_eq!(k.basis, vec![ints(&[1, 0, 1, 0]), ints(&[0, 1, 0, 1])]);
        let r = verify_lagrangian(&k, &p).unwrap();
        assert!(r.isotropic && r.half_dimensional);
    }

    #[test]
    fn solid_torus_meridian() {
        let p = solid_torus();
        let k = boundary_kernel(&p, Field::Rationals);
        assert_eq!(k.basis, vec![ints(&[1, 0])]);
        let r = verify_lagrangian(&k, &p).unwrap();
        assert!(r.is_lagrangian());
    }

    #[test]
    fn identity_inclusion_is_flagged() {
        let p = BoundaryPresentation::new(
            vec![BoundaryComponent {
                surface: SurfaceHomology::new(1),
                sign: Sign::Plus,
            }],
            2,
            IntegerMatrix::identity(2),
        )
        .unwrap();
        let k = boundary_kernel(&p, Field::Rationals);
        assert!(k.basis.is_empty());
        let r = verify_lagrangian(&k, &p).unwrap();
        assert!(r.isotropic);
        assert!(!r.half_dimensional);
    }

    #[test]
    fn kernel_length_checked() {
        let p = product(1);
        let k = LagrangianKernel {
            field: Field::Rationals,
            basis: vec![ints(&[1, 0])],
        };
        assert!(matches!(verify_lagrangian(&k, &p), Err(Error::DimensionMismatch { .. })));
    }

    #[test]
    fn product_genus_two_verticals() {
        let p = product(2);
        for field in [Field::Rationals, Field::Prime(2), Field::Prime(3)] {
            let r = projections_and_verticals(&p, field).unwrap();
            assert_eq!(r.image_plus.len(), 4);
            assert!(r.vertical_plus.is_empty() && r.vertical_minus.is_empty());
            assert!(r.holds());
        }
        assert_eq!(upsilon(&p).unwrap(), 0);
    }

    #[test]
    fn both_maps_zero_is_diagnosed() {
        let zero = IntegerMatrix::zeros(0, 2);
        let p = BoundaryPresentation::two_sided(&zero, &zero).unwrap();
        let r = projections_and_verticals(&p, Field::Rationals).unwrap();
        assert_eq!(r.vertical_plus.len(), 2);
        assert_eq!(r.image_plus.len(), 2);
        assert!(!r.orthogonal_plus && !r.orthogonal_minus);
        let k = boundary_kernel(&p, Field::Rationals);
        assert!(!verify_lagrangian(&k, &p).unwrap().is_lagrangian());
    }

    #[test]
    fn nonsingular_blocks_have_no_verticals() {
        let plus = IntegerMatrix::from_i64_rows(&[[2, 0], [0, 1]]);
        let p = BoundaryPresentation::two_sided(&plus, &IntegerMatrix::identity(2)).unwrap();
        let r = projections_and_verticals(&p, Field::Rationals).unwrap();
        assert!(r.vertical_plus.is_empty() && r.vertical_minus.is_empty());
        assert_eq!(upsilon(&p).unwrap(), 0);
    }

    #[test]
    fn killed_class_raises_upsilon() {
        // a1 -> 0 on both sides, b1 -> e1
        let m = IntegerMatrix::from_i64_rows(&[[0, 1]]);
        let p = BoundaryPresentation::two_sided(&m, &m).unwrap();
        assert!(upsilon(&p).unwrap() >= 1);
        let genus_zero = BoundaryPresentation::two_sided(&IntegerMatrix::zeros(1, 0), &IntegerMatrix::zeros(1, 0)).unwrap();
        assert_eq!(upsilon(&genus_zero).unwrap(), 0);
    }

    #[test]
    fn component_count_checked() {
        assert!(matches!(
            projections_and_verticals(&solid_torus(), Field::Rationals),
            Err(Error::ComponentCount { expected: 2, found: 1 })
        ));
    }

    #[test]
    fn torsion_relations_enlarge_mod_p_kernel() {
        // a1 -> e1 of order 2, b1 -> 0
        let p = BoundaryPresentation::with_relations(
            vec![BoundaryComponent {
                surface: SurfaceHomology::new(1),
                sign: Sign::Plus,
            }],
            1,
            IntegerMatrix::from_i64_rows(&[[1, 0]]),
            vec![ints(&[2])],
        )
        .unwrap();
        assert_eq!(boundary_kernel(&p, Field::Rationals).basis, vec![ints(&[1, 0]), ints(&[0, 1])]);
        assert_eq!(boundary_kernel(&p, Field::Prime(3)).dimension(), 2);
        assert_eq!(boundary_kernel(&p, Field::Prime(2)).dimension(), 1);
    }

    #[test]
    fn labels() {
        let s = SurfaceHomology::new(2);
        assert_eq!(s.basis_label(0), "a1");
        assert_eq!(s.basis_label(3), "b2");
    }
}
