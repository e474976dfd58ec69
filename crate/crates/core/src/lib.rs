//! Mapping classes of closed surfaces acting on simple closed curves.
//!
//! Curves are entered on a fixed fan triangulation of the `(4g+2)`-gon model,
//! which also supplies homology, and are compared on a one-vertex
//! triangulation with only the polygon centre marked ([`marked`]). Dehn twists
//! are evaluated exactly on arbitrary-precision normal coordinates, words are
//! checked for triviality through their action on a filling family of curves
//! and on first homology, and [`replay`] assembles verified words over the
//! rotation and the order-two element `τ∘T_b` for every Humphries twist.

pub mod curves;
pub mod error;
pub mod homology;
pub mod marked;
pub mod replay;
pub mod seeds;
pub mod surface;
pub mod triangulation;
pub mod twist;
pub mod words;

pub use curves::{Multicurve, NormalCurve};
pub use error::{Error, Result};
pub use surface::{PolygonSurface, SimplicialMap};
pub use words::{Engine, IdentityVerdict, Letter, MCWord};
