//! Exact representation of point configurations in ℂ^d: coordinate fields,
//! collinearity, line enumeration, incidence statistics and exact rank.

pub mod field;
pub mod geom;
pub mod matrix;

pub use field::{ExactField, GaussianRational};
pub use geom::{GeomError, IncidenceStructure, Line, PointConfig};
pub use matrix::Mat;
