//! Exact computational tools for triple lines, orchard configurations and
//! cubic curves.
//!
//! All geometry is done over the rationals with canonical integer
//! homogeneous coordinates; nothing outside the halving demo and the SVG
//! renderer touches floating point.

pub mod cli;
pub mod conic;
pub mod cubic;
pub mod error;
pub mod generators;
pub mod group_law;
pub mod io;
mod keys;
pub mod plot;
pub mod projective;
pub mod rich_lines;
pub mod surface;
pub mod tenpoint;

pub use error::{Error, Result};
pub use projective::{
    apply_transform, collinear, incident, join, meet, signed_ratio, ProjLine, ProjPoint, Projectivity, Rational,
};
pub use rich_lines::{
    direction_count, green_tao_bound, k_rich_count, spanned_lines, tripartite_count, Pattern, PointSet,
    RichLine, RichLineTable,
};
