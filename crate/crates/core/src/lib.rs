pub mod arith;
pub mod classifier;
pub mod families;
pub mod presentation;
pub mod simplifier;
pub mod verifier;
