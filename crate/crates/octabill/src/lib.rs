//! Exact outer billiards on the regular octagon.
//!
//! Arithmetic is exact in Q(√2) throughout. The modules build from field
//! arithmetic up through the pinwheel map, the renormalizable compressed
//! system on the octagon, its substitution coding, and the two limiting
//! fractals.

pub mod billiards;
pub mod error;
pub mod field;
pub mod fractal;
pub mod geom;
pub mod graph;
pub mod octagon;
pub mod pinwheel;
pub mod render;
pub mod subst;
pub mod toy;
pub mod verify;

pub use error::{Error, Result};
pub use field::QuadVal;
pub use geom::{ConvexPolygon, OrientedLine, Point2, Similarity, Strip, Vec2};
