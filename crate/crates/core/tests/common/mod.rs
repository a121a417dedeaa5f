#![allow(dead_code)]

use std::path::PathBuf;

use qnq_core::circuit::{Gate, RegisterLayout};
use qnq_core::sim::SparseState;
use rand::seq::{IndexedRandom, SliceRandom};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Random gate stream over `layout`. Branching gates (H, RY, CRY) and all
/// multi-qubit gates stay on `active` randomly chosen qubits so the support
/// is bounded by `2^active`; X may hit any qubit.
pub struct GateFuzzer {
    rng: ChaCha8Rng,
    all: usize,
    active: Vec<usize>,
}

impl GateFuzzer {
    pub fn new(layout: &RegisterLayout, active: usize, seed: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let all = layout.total_qubits();
        let mut qubits: Vec<usize> = (0..all).collect();
        qubits.shuffle(&mut rng);
        qubits.truncate(active.min(all));
        Self {
            rng,
            all,
            active: qubits,
        }
    }

    fn pick(&mut self, k: usize) -> Vec<usize> {
        let mut chosen: Vec<usize> = self
            .active
            .choose_multiple(&mut self.rng, k)
            .copied()
            .collect();
        chosen.shuffle(&mut self.rng);
        chosen
    }

    pub fn next_gate(&mut self) -> Gate {
        let theta = self
            .rng
            .random_range(-std::f64::consts::TAU..std::f64::consts::TAU);
        match self.rng.random_range(0..7) {
            0 => Gate::X {
                target: self.rng.random_range(0..self.all),
            },
            1 => Gate::H {
                target: self.pick(1)[0],
            },
            2 => Gate::Ry {
                theta,
                target: self.pick(1)[0],
            },
            3 => {
                let q = self.pick(2);
                Gate::Cx {
                    control: q[0],
                    target: q[1],
                }
            }
            4 => {
                let q = self.pick(2);
                Gate::Cry {
                    theta,
                    control: q[0],
                    target: q[1],
                }
            }
            5 => {
                let q = self.pick(2);
                Gate::Cz {
                    control: q[0],
                    target: q[1],
                }
            }
            _ => {
                let q = self.pick(3);
                Gate::Ccx {
                    controls: [q[0], q[1]],
                    target: q[2],
                }
            }
        }
    }
}

/// Largest per-label amplitude difference over the union of both supports.
pub fn max_amplitude_diff(a: &SparseState, b: &SparseState) -> f64 {
    a.iter()
        .chain(b.iter())
        .map(|(&l, _)| (a.amplitude(l) - b.amplitude(l)).norm())
        .fold(0.0, f64::max)
}

pub fn golden_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("tests")
        .join("golden")
}
