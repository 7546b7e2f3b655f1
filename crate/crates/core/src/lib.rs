//! Medial axes of closed planar sets, union-of-balls reconstruction, and
//! an exact test for which points the medial axis can recover.

// `!(x > 0.0)` is used on purpose so that NaN is rejected too
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod cli;
pub mod error;
pub mod export;
pub mod geometry;
pub mod hull;
pub mod medial;
pub mod reconstruction;
pub mod scenarios;
pub mod shape;
pub mod stability;

pub use error::{Error, Result};
pub use geometry::{Ball, Hyperplane, Point, Side, Vector, Window};
pub use shape::{Chain, Curve, Piece, Shape};
