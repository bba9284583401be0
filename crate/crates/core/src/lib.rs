//! Fusion rings, McKay quivers, fusion-equivariant central charges and
//! Harder-Narasimhan filtrations for small examples.

#![allow(clippy::needless_range_loop)]

pub mod cli;
pub mod finite_group;
pub mod formats;
pub mod fusion_ring;
pub mod k0_module;
pub mod oracle;
pub mod quiver_stability;
