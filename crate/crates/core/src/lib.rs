pub mod complex;
pub mod exact;
pub mod polytope;
pub mod triangulation;
pub mod union_find;
pub mod verifier;
pub mod volume;
