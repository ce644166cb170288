//! Left-invariant almost paracontact structures on Lie groups: Levi-Civita
//! connection, Nijenhuis tensors, the two natural connections with their
//! torsion, and classification of the fundamental tensor.

pub mod analysis;
pub mod classifier;
pub mod cli;
pub mod emit;
pub mod fixtures;
pub mod input;
pub mod levi_civita;
pub mod natural;
pub mod nijenhuis;
pub mod report;
pub mod scalar;
pub mod structure;
pub mod synthetic;
pub mod tensor;
