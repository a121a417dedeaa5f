//! Decoding, post-selection and oracle equivalence.

use std::collections::{BTreeMap, BTreeSet};

use num_complex::Complex64;
use serde::Serialize;
use statrs::distribution::{ChiSquared, ContinuousCDF};

use crate::board::{is_diagonal, solve_classical, BoardConfig, PermutationVector};
use crate::circuit::{
    ancilla_index, build_full_circuit, closed_form_census, gate_census, RegisterLayout,
};
use crate::sim::{self, BasisLabel, SparseState, RNG_ALGORITHM};
use crate::{Error, Result};

/// One basis term split into its registers.
#[derive(Debug, Clone, PartialEq)]
pub struct OutcomeRecord {
    pub board: BoardConfig,
    pub col_anc: Vec<bool>,
    pub diag_anc: Vec<bool>,
    pub amplitude: Complex64,
}

impl OutcomeRecord {
    pub fn all_ancillas_set(&self) -> bool {
        self.col_anc.iter().chain(&self.diag_anc).all(|&b| b)
    }
}

/// Splits `label` into board and ancilla bits.
///
/// Every label produced by the solver circuit has one queen per row; anything
/// else is reported as an encoding error.
pub fn decode(
    label: BasisLabel,
    amplitude: Complex64,
    layout: &RegisterLayout,
) -> Result<OutcomeRecord> {
    let n = layout.n();
    let total = layout.total_qubits();
    if total < 128 && label.bits() >> total != 0 {
        return Err(Error::Encoding(format!("label wider than {total} qubits")));
    }
    let cells = layout.system_range().map(|q| label.bit(q)).collect();
    let board = BoardConfig::from_cells(n, cells)?;
    if let Some(r) = (0..n).find(|&r| board.row_sum(r) != 1) {
        return Err(Error::Encoding(format!(
            "row {r} holds {} queens in {}",
            board.row_sum(r),
            label.to_bitstring(total)
        )));
    }
    Ok(OutcomeRecord {
        board,
        col_anc: layout.col_ancilla_range().map(|q| label.bit(q)).collect(),
        diag_anc: layout.diag_ancilla_range().map(|q| label.bit(q)).collect(),
        amplitude,
    })
}

/// Inverse of [`decode`] on the label part.
pub fn encode(record: &OutcomeRecord, layout: &RegisterLayout) -> BasisLabel {
    let mut label = BasisLabel::ZERO;
    let bits = record
        .board
        .cells()
        .iter()
        .chain(&record.col_anc)
        .chain(&record.diag_anc);
    for (q, &b) in bits.enumerate() {
        debug_assert!(q < layout.total_qubits());
        label = label.with_bit(q, b);
    }
    label
}

/// Classical prediction of the ancilla register for a board with one queen
/// per row: column parities for columns `0..n−1`, then one bit per row pair
/// that is 0 iff the two queens share a diagonal.
pub fn ancilla_truth(board: &BoardConfig) -> Result<(Vec<bool>, Vec<bool>)> {
    let n = board.n();
    let perm = board
        .to_permutation()
        .ok_or_else(|| Error::Encoding("board must hold exactly one queen per row".into()))?;
    let cols = perm.cols();
    let col_anc = (0..n - 1).map(|c| board.col_sum(c) % 2 == 1).collect();
    let mut diag_anc = vec![true; n * (n - 1) / 2];
    for i in 0..n {
        for j in i + 1..n {
            let k = ancilla_index(i + 1, j + 1, n)?;
            diag_anc[k - 1] = !is_diagonal(i, cols[i], j, cols[j])?;
        }
    }
    Ok((col_anc, diag_anc))
}

/// Boards of every term whose ancillas are all `|1>`, sorted.
pub fn postselect_solutions(state: &SparseState) -> Result<Vec<PermutationVector>> {
    let layout = state.layout();
    let mut out = BTreeSet::new();
    for (&label, &amp) in state.iter() {
        let rec = decode(label, amp, layout)?;
        if rec.all_ancillas_set() {
            out.insert(rec.board.to_permutation().expect("decode checked rows"));
        }
    }
    Ok(out.into_iter().collect())
}

/// Number of terms whose ancilla bits differ from [`ancilla_truth`].
pub fn count_ancilla_mismatches(state: &SparseState) -> Result<usize> {
    let layout = state.layout();
    let mut mismatches = 0;
    for (&label, &amp) in state.iter() {
        let rec = decode(label, amp, layout)?;
        let (col, diag) = ancilla_truth(&rec.board)?;
        if col != rec.col_anc || diag != rec.diag_anc {
            mismatches += 1;
        }
    }
    Ok(mismatches)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VerificationReport {
    pub n: usize,
    pub quantum_solutions: Vec<PermutationVector>,
    pub classical_solutions: Vec<PermutationVector>,
    pub equal: bool,
    pub success_probability: f64,
    pub census_ok: bool,
    pub ancilla_mismatches: usize,
    pub seed: Option<u64>,
    pub rng_algorithm: Option<String>,
}

impl VerificationReport {
    /// Oracle agreement, matching census and zero ancilla mismatches.
    pub fn passed(&self) -> bool {
        self.equal && self.census_ok && self.ancilla_mismatches == 0
    }
}

/// Builds and simulates the solver for `n`, then checks it against the
/// backtracking oracle, the ancilla truth table and the closed-form census.
pub fn verify_against_oracle(n: usize) -> Result<VerificationReport> {
    let circuit = build_full_circuit(n)?;
    let state = sim::run(&circuit)?;
    let census_ok = {
        let built = gate_census(&circuit);
        let expected = closed_form_census(n)?;
        built.column_checks == expected.column_checks
            && built.diagonal_toffolis == expected.diagonal_toffolis
            && circuit.layout().total_qubits() as u64
                == crate::circuit::qubit_total_closed_form(n as u64)
    };
    let quantum_solutions = postselect_solutions(&state)?;
    let classical_solutions = solve_classical(n);
    let equal = quantum_solutions == classical_solutions;
    Ok(VerificationReport {
        n,
        success_probability: quantum_solutions.len() as f64 / (n as f64).powi(n as i32),
        quantum_solutions,
        classical_solutions,
        equal,
        census_ok,
        ancilla_mismatches: count_ancilla_mismatches(&state)?,
        seed: None,
        rng_algorithm: None,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SamplingReport {
    pub shots: usize,
    pub seed: u64,
    pub rng_algorithm: String,
    pub distinct_outcomes: usize,
    /// Shots whose ancillas were all `|1>`.
    pub solution_hits: usize,
    pub distinct_solutions: Vec<PermutationVector>,
    /// Shots whose ancilla bits disagree with [`ancilla_truth`].
    pub ancilla_mismatches: usize,
    /// Pearson statistic against a uniform distribution over the state's
    /// support; `None` when the support has a single term.
    pub chi_square: Option<f64>,
    pub degrees_of_freedom: Option<usize>,
    pub p_value: Option<f64>,
}

impl SamplingReport {
    /// Uniformity gate for the statistical acceptance mode.
    pub fn uniformity_accepted(&self, alpha: f64) -> Option<bool> {
        self.p_value.map(|p| p > alpha)
    }
}

pub fn sampling_report(state: &SparseState, shots: usize, seed: u64) -> Result<SamplingReport> {
    let layout = state.layout();
    let samples = sim::sample(state, shots, seed)?;
    let mut freq: BTreeMap<BasisLabel, usize> = BTreeMap::new();
    for s in &samples {
        *freq.entry(s.label).or_default() += 1;
    }
    let mut solution_hits = 0;
    let mut ancilla_mismatches = 0;
    let mut distinct_solutions = BTreeSet::new();
    for (&label, &count) in &freq {
        let rec = decode(label, state.amplitude(label), layout)?;
        let (col, diag) = ancilla_truth(&rec.board)?;
        if col != rec.col_anc || diag != rec.diag_anc {
            ancilla_mismatches += count;
        }
        if rec.all_ancillas_set() {
            solution_hits += count;
            distinct_solutions.insert(rec.board.to_permutation().expect("decode checked rows"));
        }
    }

    let support = state.len();
    let (chi_square, degrees_of_freedom, p_value) = if support > 1 {
        let expected = shots as f64 / support as f64;
        let observed_sq: f64 = freq.values().map(|&o| (o as f64 - expected).powi(2)).sum();
        let unseen = (support - freq.len()) as f64;
        let stat = (observed_sq + unseen * expected * expected) / expected;
        let dof = support - 1;
        let p = ChiSquared::new(dof as f64)
            .map(|d| d.sf(stat))
            .map_err(|e| Error::State(e.to_string()))?;
        (Some(stat), Some(dof), Some(p))
    } else {
        (None, None, None)
    };

    Ok(SamplingReport {
        shots,
        seed,
        rng_algorithm: RNG_ALGORITHM.to_string(),
        distinct_outcomes: freq.len(),
        solution_hits,
        distinct_solutions: distinct_solutions.into_iter().collect(),
        ancilla_mismatches,
        chi_square,
        degrees_of_freedom,
        p_value,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit::layout;
    use crate::sim::{init_state, run};
    use proptest::prelude::*;

    fn perm(cols: &[usize]) -> PermutationVector {
        PermutationVector::new(cols.to_vec()).unwrap()
    }

    fn bits(s: &str) -> Vec<bool> {
        s.chars().map(|c| c == '1').collect()
    }

    fn one() -> Complex64 {
        Complex64::new(1.0, 0.0)
    }

    #[test]
    fn decode_single_qubit() {
        let l = layout(1).unwrap();
        let rec = decode(BasisLabel::from_bits(1), one(), &l).unwrap();
        assert_eq!(rec.board.cells(), &[true]);
        assert!(rec.col_anc.is_empty() && rec.diag_anc.is_empty());
        assert!(decode(BasisLabel::ZERO, one(), &l).is_err());
    }

    #[test]
    fn decode_identity_board_label() {
        let l = layout(4).unwrap();
        let board = BoardConfig::identity(4).unwrap();
        let (col, diag) = ancilla_truth(&board).unwrap();
        let rec = OutcomeRecord {
            board,
            col_anc: col,
            diag_anc: diag,
            amplitude: one(),
        };
        let label = encode(&rec, &l);
        let back = decode(label, one(), &l).unwrap();
        assert_eq!(back, rec);
        assert_eq!(back.col_anc, bits("111"));
        assert!(back.diag_anc.contains(&false));
    }

    #[test]
    fn truth_examples() {
        let sol = BoardConfig::from_permutation(&perm(&[1, 3, 0, 2]));
        assert_eq!(ancilla_truth(&sol).unwrap(), (bits("111"), bits("111111")));
        let id = BoardConfig::identity(4).unwrap();
        assert_eq!(ancilla_truth(&id).unwrap(), (bits("111"), bits("000000")));
        let stacked = BoardConfig::from_permutation(&perm(&[0, 0]));
        assert_eq!(ancilla_truth(&stacked).unwrap().0, bits("0"));
        assert!(ancilla_truth(&BoardConfig::empty(3).unwrap()).is_err());
    }

    #[test]
    fn truth_uses_ancilla_order() {
        // cols (0, 3, 2, 1): 1-based row pairs (1,3), (2,3), (2,4), (3,4)
        // conflict, i.e. k = 2, 4, 5, 6.
        let board = BoardConfig::from_permutation(&perm(&[0, 3, 2, 1]));
        let (_, diag) = ancilla_truth(&board).unwrap();
        let expect: Vec<bool> = (1..=6).map(|k| ![2, 4, 5, 6].contains(&k)).collect();
        assert_eq!(diag, expect);
    }

    #[test]
    fn postselect_examples() {
        let s4 = run(&build_full_circuit(4).unwrap()).unwrap();
        assert_eq!(
            postselect_solutions(&s4).unwrap(),
            vec![perm(&[1, 3, 0, 2]), perm(&[2, 0, 3, 1])]
        );
        let s2 = run(&build_full_circuit(2).unwrap()).unwrap();
        assert!(postselect_solutions(&s2).unwrap().is_empty());
        let s1 = run(&build_full_circuit(1).unwrap()).unwrap();
        assert_eq!(postselect_solutions(&s1).unwrap(), vec![perm(&[0])]);
    }

    #[test]
    fn postselect_reports_non_row_labels() {
        let s = init_state(&layout(2).unwrap()).unwrap();
        assert!(matches!(postselect_solutions(&s), Err(Error::Encoding(_))));
    }

    #[test]
    fn verify_examples() {
        let r4 = verify_against_oracle(4).unwrap();
        assert!(r4.passed());
        assert_eq!(r4.success_probability, 2.0 / 256.0);
        let r5 = verify_against_oracle(5).unwrap();
        assert!(r5.equal);
        assert_eq!(r5.quantum_solutions.len(), 10);
        assert_eq!(r5.success_probability, 10.0 / 3125.0);
        let r3 = verify_against_oracle(3).unwrap();
        assert!(r3.equal && r3.quantum_solutions.is_empty());
    }

    #[test]
    fn report_json_field_names() {
        let r = verify_against_oracle(1).unwrap();
        let v: serde_json::Value = serde_json::to_value(&r).unwrap();
        let keys: BTreeSet<&str> = v.as_object().unwrap().keys().map(String::as_str).collect();
        let expected: BTreeSet<&str> = [
            "n",
            "quantum_solutions",
            "classical_solutions",
            "equal",
            "success_probability",
            "census_ok",
            "ancilla_mismatches",
            "seed",
            "rng_algorithm",
        ]
        .into_iter()
        .collect();
        assert_eq!(keys, expected);
        assert_eq!(
            v["quantum_solutions"][0],
            serde_json::json!({"n": 1, "cols": [0]})
        );
    }

    #[test]
    fn sampling_report_examples() {
        let s4 = run(&build_full_circuit(4).unwrap()).unwrap();
        let r = sampling_report(&s4, 310, 1).unwrap();
        assert_eq!(r, sampling_report(&s4, 310, 1).unwrap());
        assert!(
            (150..=205).contains(&r.distinct_outcomes),
            "{}",
            r.distinct_outcomes
        );
        assert_eq!(r.ancilla_mismatches, 0);
        assert_eq!(r.degrees_of_freedom, Some(255));
        assert!(r.distinct_solutions.len() <= 2);

        let s1 = run(&build_full_circuit(1).unwrap()).unwrap();
        let r1 = sampling_report(&s1, 10, 3).unwrap();
        assert_eq!(r1.distinct_outcomes, 1);
        assert_eq!(r1.solution_hits, 10);
        assert_eq!(r1.chi_square, None);
        assert_eq!(r1.uniformity_accepted(0.001), None);

        assert!(sampling_report(&s4, 0, 1).is_err());
    }

    #[test]
    fn chi_square_matches_hand_computation() {
        let s2 = run(&build_full_circuit(2).unwrap()).unwrap();
        let r = sampling_report(&s2, 400, 11).unwrap();
        let expected = 100.0;
        let samples = sim::sample(&s2, 400, 11).unwrap();
        let mut counts: BTreeMap<BasisLabel, f64> = BTreeMap::new();
        for shot in samples {
            *counts.entry(shot.label).or_default() += 1.0;
        }
        let mut stat = 0.0;
        for (label, _) in s2.readout() {
            let o = counts.get(&label).copied().unwrap_or(0.0);
            stat += (o - expected) * (o - expected) / expected;
        }
        assert!((r.chi_square.unwrap() - stat).abs() < 1e-9);
        assert_eq!(r.degrees_of_freedom, Some(3));
        assert!(r.p_value.unwrap() > 0.0 && r.p_value.unwrap() <= 1.0);
    }

    proptest! {
        #[test]
        fn encode_decode_round_trip(
            cols in prop::collection::vec(0usize..4, 4),
            anc in prop::collection::vec(any::<bool>(), 9),
        ) {
            let l = layout(4).unwrap();
            let rec = OutcomeRecord {
                board: BoardConfig::from_permutation(&perm(&cols)),
                col_anc: anc[..3].to_vec(),
                diag_anc: anc[3..].to_vec(),
                amplitude: one(),
            };
            let label = encode(&rec, &l);
            prop_assert_eq!(decode(label, one(), &l).unwrap(), rec);
        }

        #[test]
        fn all_ones_columns_imply_permutation(cols in (2usize..8).prop_flat_map(|n| prop::collection::vec(0..n, n))) {
            let board = BoardConfig::from_permutation(&perm(&cols));
            let (col, _) = ancilla_truth(&board).unwrap();
            if col.iter().all(|&b| b) {
                prop_assert!(board.to_permutation().unwrap().is_permutation());
            }
        }
    }
}
