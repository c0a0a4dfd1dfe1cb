//! Finitary combinatorics of trees, coloured operads and dendroidal sets.
//!
//! The crate provides, at a scale where everything is exhaustively checkable:
//!
//! * the category of finite rooted trees and its morphisms ([`tree`]);
//! * finite simplicial sets with homology and horn-filling reports ([`sset`]);
//! * finite coloured operads, free cells and an explicit pushout along a full
//!   embedding of categories ([`operad`]);
//! * computable presheaves on the tree category: representables, horns, Segal
//!   cores, nerves, normality and inner-Kan checks, inner-anodyne
//!   certificates, and the free-cell filtration ([`dset`], [`anodyne`],
//!   [`filtration`]);
//! * the Boardman–Vogt resolution of a tree, its functoriality, decorated
//!   operads and the homotopy coherent nerve ([`bv`]);
//! * preoperads (simplicial dendroidal sets with discrete colours) with Segal
//!   checks and the generating inclusions of their homotopy theory
//!   ([`preoper`]).
//!
//! All global statements about presheaves are bounded by an explicit tree
//! size; reports restate the bound.

pub mod anodyne;
pub mod bv;
pub mod decorated;
pub mod dset;
pub mod error;
pub mod filtration;
pub mod json;
pub mod operad;
pub mod preoper;
pub mod pushout;
pub mod soperad;
pub mod sset;
pub mod tree;

pub use error::{Error, Result};
