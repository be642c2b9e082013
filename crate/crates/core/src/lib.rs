pub mod classifier;
pub mod cli;
pub mod families;
pub mod hamiltonian;
pub mod normalform;
pub mod simulator;
pub mod trigpoly;
