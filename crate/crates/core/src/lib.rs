//! Exact-arithmetic toolkit for the fundamental groups of indecomposable
//! 3-dimensional Poincaré duality complexes whose group is the fundamental
//! group of a finite graph of finite groups.
//!
//! The crate decides whether such a group passes the known obstructions
//! (infinite normalizers of finite subgroups, periodic cohomology of vertex
//! groups, torsion-action asymmetry between the augmentation ideal and its
//! conjugate-transpose partner), and for the realizable family it constructs
//! an explicit self-dual chain complex certificate.
//!
//! Everything is exact: multiplication tables for groups, integer
//! coefficients for group rings, Smith normal form over the integers.

pub mod amalgam;
pub mod catalog;
pub mod dsl;
pub mod engine;
pub mod fox;
pub mod gog;
pub mod group;
pub mod modinv;
pub mod report;
pub mod ring;
pub mod snf;
pub mod toddcox;
pub mod word;

pub use engine::{decide, Verdict, VerdictKind};
pub use gog::{GraphOfGroups, OrientationData};
pub use group::FiniteGroup;
