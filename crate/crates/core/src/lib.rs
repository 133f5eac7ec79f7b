//! Hyperbolic orbifold groups in the Poincaré disk.
//!
//! The crate covers the full pipeline from an extended Conway symbol to
//! distinct isotopy classes of equivariant tilings:
//!
//! - [`moebius`]: isometries of the disk as SU(1,1) matrices, with type
//!   classification.
//! - [`orbifold`]: Conway symbols, Euler characteristic and the standard
//!   presentation of the orbifold group.
//! - [`geometry`]: concrete realizations of kaleidoscopic, stellate and
//!   surface groups together with generator-word vertex recipes.
//! - [`tiling`]: finite patches of the induced tessellation.
//! - [`dsym`]: decorations, Delaney-Dress symbols and GLUE/SPLIT.
//! - [`isotopy`]: automorphisms as word maps acting on generator sets.
//!
//! The crate is `no_std` and only needs `alloc`. Text formats, rendering and
//! the command line live in the `isotile` crate.
#![no_std]

extern crate alloc;

#[cfg(test)]
extern crate std;

pub mod dsym;
pub mod geometry;
pub mod isotopy;
pub mod moebius;
pub mod orbifold;
pub mod tiling;

mod ball;
mod index;

pub use dsym::{DSymbol, OrbifoldDecoration};
pub use geometry::{Anchor, AnchorWord, GeometricGroup};
pub use isotopy::{Automorphism, AutomorphismVerdict, Orientation};
pub use moebius::{DiskPoint, Geodesic, Isometry, IsometryClass};
pub use orbifold::{ConwaySymbol, CurvatureClass, GeneratorKind, Order, Presentation, Word};
pub use tiling::TilingPatch;

/// Complex scalar used for disk coordinates and matrix entries.
pub type Complex = num_complex::Complex64;

/// Exact rational used for Euler characteristics and curvatures.
pub type Rational = num_rational::Ratio<i64>;

/// Tolerance for algebraic identities between isometries.
pub const IDENTITY_TOL: f64 = 1e-9;
