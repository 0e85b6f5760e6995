//! Sampling and sparsity bounds for symmetric Dirichlet distributions at
//! extreme shape parameters.

pub mod bounds;
pub mod experiments;
pub mod logspace;
pub mod samplers;
pub mod special;
