//! Affine spaces, the valuation `Val`, the Galois operators and the point
//! maps induced by substitutions.

mod pointset;
mod space;
mod val;

pub use pointset::PointSet;
pub use space::{enumerate_points, AffineSpace, Point};
pub(crate) use val::cylindrify;
pub use val::{filter_contains, lker_contains, points_of_formulas, s_star_points, s_tilde_points, val, PointMap};
