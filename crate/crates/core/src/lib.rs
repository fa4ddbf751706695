//! Exact computational toolkit for joints configurations: construction and
//! detection of joints, vanishing-order constraint systems over exact
//! fields, weight balancing, and exact bound certificates.

pub mod algebra;
pub mod geometry;
pub mod combinatorics;
pub mod configs;
pub mod polymethod;
pub mod variational;
