//! Generators and serialization for example configurations, plus the
//! cyclotomic coordinate field they live in.

pub mod cyclotomic;
pub mod enclosure;
pub mod format;
pub mod generators;

pub use cyclotomic::{Cyclotomic, CyclotomicField};
pub use format::{parse, serialize, ParseError};
pub use generators::{
    apex_index, coplanar_plus, coplanar_plus_fermat, fermat, fermat_affine, fermat_with_apex,
    generate, random_generic, AnyConfig, ConfigError, ConfigRecipe,
};
