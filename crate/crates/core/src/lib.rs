//! Numerical study of closed geodesics in the Gaussian-weighted half-plane
//! {r > 0} with metric lambda^2 (dr^2 + dx^2), lambda = r^(n-1) e^(-(x^2+r^2)/4).
//! Rotating such a geodesic about the x-axis yields a self-shrinking torus of
//! the mean curvature flow.
//!
//! The crate provides:
//! - pointwise metric quantities and model geodesic lengths ([`metric`]),
//! - discrete closed curves and their functionals ([`curve`]),
//! - the modified curve shortening flow V_g = k_g / K ([`flow`]),
//! - the one-parameter family of Gauss-area-2pi rounded rectangles and the
//!   bisection locating its critical member ([`family`]),
//! - an independent geodesic shooting construction ([`shoot`]),
//! - numerical verification of the supporting inequalities ([`verify`]).

pub mod curve;
pub mod error;
pub mod flow;
pub mod family;
pub mod metric;
pub mod quad;
pub mod shoot;
pub mod verify;

pub use curve::{CurvePosition, DiscreteCurve};
pub use error::{Error, Result};
pub use family::{FamilyMember, RectangleSpec};
pub use flow::{FlowConfig, FlowOutcome, FlowOutcomeKind};
pub use metric::{Dimension, Point};
