//! Exact simulation of the W-state N-Queens marking circuit.
//!
//! The system register holds one qubit per board cell, prepared as a product of
//! per-row W states so that every basis label places exactly one queen in each
//! row. Column parity is kicked back onto `n - 1` ancillas with an H-CZ-H
//! sandwich, and every pair of rows gets a diagonal ancilla that a set of
//! Toffolis flips to `|0>` when the two queens share a diagonal. Post-selecting
//! the all-ones ancilla pattern leaves exactly the N-Queens solutions.
//!
//! * [`board`]: classical boards, predicates, backtracking oracle.
//! * [`circuit`]: register layout, gate IR, stage builders and gate census.
//! * [`sim`]: sparse statevector engine, readout and seeded sampling.
//! * [`analysis`]: decoding, post-selection and oracle equivalence reports.
//! * [`qasm`]: OpenQASM 2.0 export and the matching minimal reader.

pub mod analysis;
pub mod board;
pub mod circuit;
mod error;
pub mod qasm;
pub mod sim;

pub use error::{Error, Result};
