//! Exact-arithmetic toolkit for incidence geometry of point configurations in
//! complex space: ordinary-line counting, Latin-square triple systems,
//! dependency matrices, matrix scaling, diagonal-dominant rank bounds, and
//! executable checks of the classical and refined ordinary-line inequalities.
//!
//! All geometric predicates are decided exactly (Gaussian rationals or
//! cyclotomic extensions); floating point is confined to Sinkhorn iteration
//! and reporting.

pub mod configgen;
pub mod depmat;
pub mod exactgeom;
pub mod latin;
pub mod scalerank;
pub mod verify;

pub use exactgeom::field::{ExactField, GaussianRational};
pub use exactgeom::geom::{IncidenceStructure, Line, PointConfig};
pub use exactgeom::matrix::Mat;
