pub mod collision;
pub mod consistency;
pub mod ensemble;
pub mod equivalence;
pub mod interpolation;
