//! Sparse statevector engine.
//!
//! A state is a hash map from basis label to complex amplitude holding only
//! the nonzero terms. Permutation gates (X, CX, CCX) relabel terms and CZ
//! negates them, so they never recompute an amplitude. H, RY and CRY split
//! each term into at most two and merge collisions by addition; anything whose
//! magnitude falls below [`PRUNE_THRESHOLD`] is dropped.
//!
//! Labels are 128-bit, which covers every layout up to `n = 9`
//! (125 qubits). The solver circuit never holds more than `2·n^n` terms.

use std::cmp::Ordering;
use std::collections::HashMap;
use std::f64::consts::FRAC_1_SQRT_2;
use std::fmt::{self, Write as _};

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::circuit::{Circuit, Gate, RegisterLayout};
use crate::{Error, Result};

pub const PRUNE_THRESHOLD: f64 = 1e-12;

/// Widest register a [`BasisLabel`] can address.
pub const MAX_QUBITS: usize = 128;

/// Name of the generator behind [`sample`], recorded in reports.
pub const RNG_ALGORITHM: &str = "ChaCha8Rng";

/// Computational basis label; qubit `q` is bit `q`.
///
/// Ordering is lexicographic over the bit sequence read qubit 0 first, which
/// is the order of the printed bitstrings.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct BasisLabel(u128);

impl BasisLabel {
    pub const ZERO: BasisLabel = BasisLabel(0);

    pub fn from_bits(bits: u128) -> Self {
        Self(bits)
    }

    pub fn bits(self) -> u128 {
        self.0
    }

    #[inline]
    pub fn bit(self, q: usize) -> bool {
        (self.0 >> q) & 1 == 1
    }

    #[inline]
    pub fn flipped(self, q: usize) -> Self {
        Self(self.0 ^ (1u128 << q))
    }

    #[inline]
    pub fn with_bit(self, q: usize, value: bool) -> Self {
        if value {
            Self(self.0 | (1u128 << q))
        } else {
            Self(self.0 & !(1u128 << q))
        }
    }

    /// `width` characters `'0'`/`'1'`, qubit 0 first.
    pub fn to_bitstring(self, width: usize) -> String {
        (0..width)
            .map(|q| if self.bit(q) { '1' } else { '0' })
            .collect()
    }

    pub fn from_bitstring(s: &str) -> Result<Self> {
        if s.len() > MAX_QUBITS {
            return Err(Error::SizeBound {
                what: "label width",
                value: s.len(),
                bound: MAX_QUBITS,
            });
        }
        s.chars()
            .enumerate()
            .try_fold(Self::ZERO, |acc, (q, ch)| match ch {
                '0' => Ok(acc),
                '1' => Ok(acc.flipped(q)),
                other => Err(Error::Encoding(format!("bad bit character {other:?}"))),
            })
    }
}

impl Ord for BasisLabel {
    fn cmp(&self, other: &Self) -> Ordering {
        self.0.reverse_bits().cmp(&other.0.reverse_bits())
    }
}

impl PartialOrd for BasisLabel {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// One measurement of all qubits.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Shot {
    pub label: BasisLabel,
}

#[derive(Debug, Clone)]
pub struct SparseState {
    layout: RegisterLayout,
    terms: HashMap<BasisLabel, Complex64>,
}

/// All-zeros state on `layout`.
pub fn init_state(layout: &RegisterLayout) -> Result<SparseState> {
    let total = layout.total_qubits();
    if total > MAX_QUBITS {
        return Err(Error::SizeBound {
            what: "qubit count",
            value: total,
            bound: MAX_QUBITS,
        });
    }
    let mut terms = HashMap::with_capacity(1);
    terms.insert(BasisLabel::ZERO, Complex64::new(1.0, 0.0));
    Ok(SparseState {
        layout: *layout,
        terms,
    })
}

/// Amplitude contributions of one term under a non-permutation gate.
/// Returns up to two `(label, amplitude)` pairs.
#[inline]
fn split_term(
    gate: &Gate,
    label: BasisLabel,
    amp: Complex64,
) -> [Option<(BasisLabel, Complex64)>; 2] {
    let (target, matrix) = match *gate {
        Gate::H { target } => (
            target,
            [
                [FRAC_1_SQRT_2, FRAC_1_SQRT_2],
                [FRAC_1_SQRT_2, -FRAC_1_SQRT_2],
            ],
        ),
        Gate::Ry { theta, target } => (target, ry_matrix(theta)),
        Gate::Cry {
            theta,
            control,
            target,
        } => {
            if !label.bit(control) {
                return [Some((label, amp)), None];
            }
            (target, ry_matrix(theta))
        }
        _ => unreachable!("split_term called with permutation gate {gate}"),
    };
    let b = label.bit(target) as usize;
    let to = |out: usize| {
        let m = matrix[out][b];
        (m != 0.0).then(|| (label.with_bit(target, out == 1), amp * m))
    };
    [to(0), to(1)]
}

fn ry_matrix(theta: f64) -> [[f64; 2]; 2] {
    let (s, c) = (theta / 2.0).sin_cos();
    [[c, -s], [s, c]]
}

fn is_splitting(gate: &Gate) -> bool {
    matches!(gate, Gate::H { .. } | Gate::Ry { .. } | Gate::Cry { .. })
}

/// Image of a label under a permutation gate.
#[inline]
fn permute(gate: &Gate, label: BasisLabel) -> BasisLabel {
    match *gate {
        Gate::X { target } => label.flipped(target),
        Gate::Cx { control, target } if label.bit(control) => label.flipped(target),
        Gate::Ccx {
            controls: [a, b],
            target,
        } if label.bit(a) && label.bit(b) => label.flipped(target),
        _ => label,
    }
}

impl SparseState {
    /// Builds a state from explicit terms; tiny amplitudes are pruned.
    pub fn from_terms<I>(layout: &RegisterLayout, terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (BasisLabel, Complex64)>,
    {
        let mut state = init_state(layout)?;
        state.terms.clear();
        let total = layout.total_qubits();
        for (label, amp) in terms {
            if total < 128 && label.bits() >> total != 0 {
                return Err(Error::Encoding(format!(
                    "label has bits beyond qubit {}",
                    total - 1
                )));
            }
            *state.terms.entry(label).or_default() += amp;
        }
        state.prune();
        Ok(state)
    }

    pub fn layout(&self) -> &RegisterLayout {
        &self.layout
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn amplitude(&self, label: BasisLabel) -> Complex64 {
        self.terms.get(&label).copied().unwrap_or_default()
    }

    pub fn norm_sqr(&self) -> f64 {
        self.terms.values().map(|a| a.norm_sqr()).sum()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&BasisLabel, &Complex64)> {
        self.terms.iter()
    }

    fn prune(&mut self) {
        self.terms.retain(|_, a| a.norm() >= PRUNE_THRESHOLD);
    }

    /// Applies `gate` in place.
    pub fn apply_gate(&mut self, gate: &Gate) -> Result<()> {
        gate.validate(self.layout.total_qubits())?;
        match *gate {
            Gate::Cz { control, target } => {
                for (label, amp) in self.terms.iter_mut() {
                    if label.bit(control) && label.bit(target) {
                        *amp = -*amp;
                    }
                }
            }
            Gate::X { .. } | Gate::Cx { .. } | Gate::Ccx { .. } => {
                let old = std::mem::take(&mut self.terms);
                self.terms = old
                    .into_iter()
                    .map(|(l, a)| (permute(gate, l), a))
                    .collect();
            }
            Gate::H { .. } | Gate::Ry { .. } | Gate::Cry { .. } => {
                let mut next = HashMap::with_capacity(self.terms.len() * 2);
                for (&label, &amp) in &self.terms {
                    for (l, a) in split_term(gate, label, amp).into_iter().flatten() {
                        *next.entry(l).or_insert(Complex64::new(0.0, 0.0)) += a;
                    }
                }
                self.terms = next;
                self.prune();
            }
        }
        Ok(())
    }

    /// Applies `gate` with the terms partitioned into `workers` chunks that are
    /// transformed concurrently and merged afterwards.
    ///
    /// Each output label receives at most two contributions, so the merged
    /// amplitudes are bit-identical to [`apply_gate`](Self::apply_gate).
    pub fn apply_gate_parallel(&mut self, gate: &Gate, workers: usize) -> Result<()> {
        gate.validate(self.layout.total_qubits())?;
        let workers = workers.max(1);
        if let Gate::Cz { control, target } = *gate {
            self.terms.par_iter_mut().for_each(|(label, amp)| {
                if label.bit(control) && label.bit(target) {
                    *amp = -*amp;
                }
            });
            return Ok(());
        }
        let terms: Vec<(BasisLabel, Complex64)> = self.terms.drain().collect();
        let chunk = terms.len().div_ceil(workers).max(1);
        let partials: Vec<Vec<(BasisLabel, Complex64)>> = terms
            .par_chunks(chunk)
            .map(|part| {
                if is_splitting(gate) {
                    part.iter()
                        .flat_map(|&(l, a)| split_term(gate, l, a).into_iter().flatten())
                        .collect()
                } else {
                    part.iter().map(|&(l, a)| (permute(gate, l), a)).collect()
                }
            })
            .collect();
        let mut next = HashMap::with_capacity(partials.iter().map(Vec::len).sum());
        for (l, a) in partials.into_iter().flatten() {
            *next.entry(l).or_insert(Complex64::new(0.0, 0.0)) += a;
        }
        self.terms = next;
        self.prune();
        Ok(())
    }

    /// All terms sorted by label.
    pub fn readout(&self) -> Vec<(BasisLabel, Complex64)> {
        let mut rows: Vec<(BasisLabel, Complex64)> = self
            .terms
            .iter()
            .filter(|(_, a)| a.norm() >= PRUNE_THRESHOLD)
            .map(|(&l, &a)| (l, a))
            .collect();
        rows.sort_unstable_by_key(|&(l, _)| l);
        rows
    }

    /// `<bitstring> <re> <im>` per line in readout order.
    pub fn dump(&self) -> String {
        let width = self.layout.total_qubits();
        let mut out = String::new();
        for (label, amp) in self.readout() {
            let _ = writeln!(
                out,
                "{} {} {}",
                label.to_bitstring(width),
                FmtAmp(amp.re),
                FmtAmp(amp.im)
            );
        }
        out
    }
}

/// Fixed-format real with negative zero folded to zero.
struct FmtAmp(f64);

impl fmt::Display for FmtAmp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let v = if self.0 == 0.0 { 0.0 } else { self.0 };
        write!(f, "{v:.15e}")
    }
}

/// Runs `circuit` from the all-zeros state.
pub fn run(circuit: &Circuit) -> Result<SparseState> {
    run_traced(circuit, |_, _, _| {})
}

/// Like [`run`], calling `observe(step, gate, state)` after every gate.
pub fn run_traced<F>(circuit: &Circuit, mut observe: F) -> Result<SparseState>
where
    F: FnMut(usize, &Gate, &SparseState),
{
    let mut state = init_state(circuit.layout())?;
    for (step, gate) in circuit.gates().iter().enumerate() {
        state.apply_gate(gate)?;
        observe(step, gate, &state);
    }
    Ok(state)
}

/// `shots` independent measurements of all qubits.
///
/// Inverse-CDF sampling over the readout order, driven by a ChaCha8 stream
/// seeded with `seed`.
pub fn sample(state: &SparseState, shots: usize, seed: u64) -> Result<Vec<Shot>> {
    if shots == 0 {
        return Err(Error::State("shot count must be at least 1".into()));
    }
    let norm = state.norm_sqr();
    if (norm - 1.0).abs() > 1e-6 {
        return Err(Error::State(format!(
            "state is not normalised (norm² = {norm})"
        )));
    }
    let rows = state.readout();
    let mut cdf = Vec::with_capacity(rows.len());
    let mut acc = 0.0;
    for (_, a) in &rows {
        acc += a.norm_sqr();
        cdf.push(acc);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    Ok((0..shots)
        .map(|_| {
            let u: f64 = rng.random::<f64>() * acc;
            let idx = cdf.partition_point(|&c| c <= u).min(rows.len() - 1);
            Shot { label: rows[idx].0 }
        })
        .collect())
}
