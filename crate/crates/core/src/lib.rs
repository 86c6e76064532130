//! Spanning competitors for compact sets in a ball, built by recursive
//! slicing and coning, with explicit isoperimetric constants and a numerical
//! model of the deformation flows that realize them.
//!
//! The measure used throughout is the Hausdorff measure normalized by
//! `1/2^d`: on a d-rectifiable set it equals Lebesgue d-volume divided by
//! the volume `α_d` of the unit d-ball. A unit segment therefore has
//! 1-measure `0.5` and the unit disk has 2-measure `1`.
//!
//! ```
//! use reifenberg::{measure, shapes};
//!
//! let seg = shapes::segment(&[0.0, 0.0], &[1.0, 0.0]);
//! let h1 = measure::measure_simplicial(&seg, 1).unwrap();
//! assert!((h1.value - 0.5).abs() < 1e-12);
//! ```

pub mod boundary;
pub mod clip;
pub mod complex;
pub mod cone;
pub mod constants;
pub mod distance;
pub mod error;
pub mod flow;
pub mod io;
pub mod measure;
pub mod point;
pub mod shapes;
pub mod slice;
pub mod slicing;
pub mod span;

pub use complex::{Simplex, SimplicialSet, Tag};
pub use constants::ConstantLedger;
pub use error::{Error, Result};
pub use point::{ClosedBall, Point};
pub use slice::{DSlice, Interval};

/// Default tolerance for geometric membership tests.
pub const GEOM_TOL: f64 = 1e-9;

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/measures.md")]
    mod measures {}
    #[doc = include_str!("../../../book/src/slices.md")]
    mod slices {}
    #[doc = include_str!("../../../book/src/slabs.md")]
    mod slabs {}
    #[doc = include_str!("../../../book/src/cones.md")]
    mod cones {}
    #[doc = include_str!("../../../book/src/constants.md")]
    mod constants {}
    #[doc = include_str!("../../../book/src/span.md")]
    mod span {}
    #[doc = include_str!("../../../book/src/flows.md")]
    mod flows {}
    #[doc = include_str!("../../../book/src/cli.md")]
    mod cli {}
}
