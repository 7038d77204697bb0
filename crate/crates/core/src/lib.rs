//! Boundary measure estimation for an unknown set from a point sample.
//!
//! Random lines are drawn from the motion-invariant measure and the number
//! of times each line crosses the boundary is estimated from the sample,
//! either through a union of balls ([`dw`]) or through the alpha-convex
//! hull ([`alphahull`], planar only). Averaging the counts and scaling by
//! the normalizing constant gives the surface measure ([`crofton`]).

pub mod alphahull;
pub mod cloud;
pub mod crofton;
pub mod dw;
pub mod error;
pub mod geom;
pub mod grid;
pub mod rbm;
pub mod shapes;

pub use cloud::{PointCloud, Provenance};
pub use error::{Error, Result};
