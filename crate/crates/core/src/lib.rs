//! Einstein Kropina metrics on Lie groups and reductive homogeneous spaces.
//!
//! The algebraic side works directly with structure constants: curvature of
//! left-invariant metrics, the Killing condition `ad W + ad* W = 0`, and the
//! Nomizu curvature of `G/H`. The numeric side evaluates the Finsler Ricci
//! curvature of a Kropina metric in an exponential chart with truncated
//! Taylor arithmetic, as an independent check of the Einstein equation.

#![allow(clippy::needless_range_loop, clippy::neg_cmp_op_on_partial_ord)]

pub mod catalog;
pub mod chart;
pub mod cli;
pub mod error;
pub mod homog;
pub mod instance;
pub mod jet;
pub mod kropina;
pub mod lie;
pub mod linalg;
pub mod report;
pub mod riemann;

pub use error::{Error, Result};
pub use kropina::{Certificate, Check, NavigationData, Verdict, WKind};
pub use lie::{BilinearForm, Bracket, InnerProduct, LieAlgebra};
pub use riemann::EinsteinFit;
