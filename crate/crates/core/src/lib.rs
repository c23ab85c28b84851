//! Quadratic equations over free groups and free products, commutator
//! genus, and homomorphisms of surface groups.

pub mod genus;
pub mod group;
pub mod product;
pub mod quadratic;
pub mod suites;
pub mod surface;
pub mod words;
