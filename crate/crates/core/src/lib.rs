//! Exact homological calculus for sutured-manifold hierarchies.
//!
//! The crate is organised bottom-up:
//!
//! * [`exact_linalg`]: integer matrices, Smith normal form, saturated kernels,
//!   cokernels and linear algebra over `Q` and `Z/p`.
//! * [`boundary_homology`]: first homology of boundary surfaces, their
//!   intersection forms and the Lagrangian kernel of the inclusion map.
//! * [`primitive_pair`]: the search for primitive classes `c+`, `c-` on the two
//!   boundary surfaces that become homologous in the ambient manifold.
//! * [`norm_calculus`]: Thurston seminorms given by a dual functional set and
//!   the calculus of bottommost basic classes.
//! * [`floer_simplicity`]: rank-table checks for knots, the `U`-tower model and
//!   the fibred unknot obstruction.
//! * [`surface_calculus`]: cut-and-paste class arithmetic and product annulus
//!   types.
//! * [`generators`]: presentations that are known to come from 3-manifolds,
//!   plus random instance builders used by the test-suites.

pub mod boundary_homology;
pub mod error;
pub mod exact_linalg;
pub mod floer_simplicity;
pub mod generators;
pub mod norm_calculus;
pub mod primitive_pair;
pub mod surface_calculus;

pub use error::{Error, Result};
pub use exact_linalg::{AbelianGroupStructure, Field, IntegerMatrix, SmithDecomposition};
