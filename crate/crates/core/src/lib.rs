//! Compile CNF formulas to Max2XOR, QUBO and Ising models through clause
//! gadgets, certify gadget parameters exhaustively and search for gadgets
//! with the largest energy gap.

pub mod cli;
pub mod convert;
pub mod formula;
pub mod gadgets;
pub mod lp;
pub mod max2xor;
pub mod rational;
pub mod search;
pub mod verify;

pub use rational::Rational;
