//! Real spherical harmonics, cubature grids and discrete transforms.

mod grid;
mod legendre;
mod regularity;
mod transform;
mod ylm;

pub use grid::{build_gauss_grid, gauss_legendre, CubatureGrid};
pub use legendre::{assoc_legendre, NormalizedLegendre};
pub use regularity::tail_regularity_diagnostic;
pub use transform::{analyze, cubature_residual, synthesize, CoefficientPanel, FieldSnapshot};
pub use ylm::{harmonic_count, harmonic_index, real_sph_harm, HarmonicEvaluator, SphericalPoint};
