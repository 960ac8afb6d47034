//! Exact symbolic engine for foliations of projective space induced by Lie
//! algebras of linear vector fields.

// Index loops mirror the formulas they implement.
#![allow(clippy::needless_range_loop)]

pub mod catalog;
pub mod exterior;
pub mod foliation;
pub mod frontend;
pub mod invariants;
pub mod linlie;
pub mod symcore;
