//! Gate IR, register layout and the three solver stages.
//!
//! Qubit map for board size `n`:
//!
//! | range                          | role                                    |
//! |--------------------------------|-----------------------------------------|
//! | `0 .. n²`                      | system qubit for cell `(r, c)` at `r·n + c` |
//! | `n² .. n² + n − 1`             | column-parity ancilla for columns `0..n−1` |
//! | `n² + n − 1 .. total`          | diagonal ancilla for row pair `k` at offset `k − 1` |
//!
//! The last column has no parity ancilla: once every row holds one queen and
//! the first `n − 1` column sums are odd, all column sums are 1.

use std::fmt::{self, Write as _};
use std::ops::Range;

use serde::Serialize;

use crate::board::diagonal_pairs_iter;
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct RegisterLayout {
    n: usize,
}

/// Builds the register layout for an `n x n` board.
pub fn layout(n: usize) -> Result<RegisterLayout> {
    if n == 0 {
        return Err(Error::ZeroSize);
    }
    Ok(RegisterLayout { n })
}

impl RegisterLayout {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn system_range(&self) -> Range<usize> {
        0..self.n * self.n
    }

    pub fn col_ancilla_range(&self) -> Range<usize> {
        let start = self.n * self.n;
        start..start + self.n - 1
    }

    pub fn diag_ancilla_range(&self) -> Range<usize> {
        let start = self.col_ancilla_range().end;
        start..start + self.n * (self.n - 1) / 2
    }

    /// `n² + (n − 1) + n(n − 1)/2`.
    pub fn total_qubits(&self) -> usize {
        self.diag_ancilla_range().end
    }

    pub fn system_qubit(&self, row: usize, col: usize) -> usize {
        debug_assert!(row < self.n && col < self.n);
        row * self.n + col
    }

    /// Parity ancilla for `col`, which must be below `n − 1`.
    pub fn col_ancilla(&self, col: usize) -> usize {
        debug_assert!(col + 1 < self.n);
        self.n * self.n + col
    }

    /// Diagonal ancilla for the 1-based pair index `k` from [`ancilla_index`].
    pub fn diag_ancilla(&self, k: usize) -> usize {
        debug_assert!(k >= 1 && k <= self.n * (self.n - 1) / 2);
        self.col_ancilla_range().end + k - 1
    }

    /// Smallest layout whose qubit total equals `total`, if any.
    pub fn from_total_qubits(total: usize) -> Option<Self> {
        (1..)
            .map(|n| RegisterLayout { n })
            .take_while(|l| l.n * l.n <= total)
            .find(|l| l.total_qubits() == total)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum GateKind {
    X,
    H,
    Ry,
    Cx,
    Cry,
    Cz,
    Ccx,
}

impl GateKind {
    pub const ALL: [GateKind; 7] = [
        GateKind::X,
        GateKind::H,
        GateKind::Ry,
        GateKind::Cx,
        GateKind::Cry,
        GateKind::Cz,
        GateKind::Ccx,
    ];

    pub fn name(self) -> &'static str {
        match self {
            GateKind::X => "X",
            GateKind::H => "H",
            GateKind::Ry => "RY",
            GateKind::Cx => "CX",
            GateKind::Cry => "CRY",
            GateKind::Cz => "CZ",
            GateKind::Ccx => "CCX",
        }
    }
}

/// A gate over absolute qubit indices. Controls come before the target.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Gate {
    X {
        target: usize,
    },
    H {
        target: usize,
    },
    Ry {
        theta: f64,
        target: usize,
    },
    Cx {
        control: usize,
        target: usize,
    },
    Cry {
        theta: f64,
        control: usize,
        target: usize,
    },
    Cz {
        control: usize,
        target: usize,
    },
    Ccx {
        controls: [usize; 2],
        target: usize,
    },
}

impl Gate {
    pub fn kind(&self) -> GateKind {
        match self {
            Gate::X { .. } => GateKind::X,
            Gate::H { .. } => GateKind::H,
            Gate::Ry { .. } => GateKind::Ry,
            Gate::Cx { .. } => GateKind::Cx,
            Gate::Cry { .. } => GateKind::Cry,
            Gate::Cz { .. } => GateKind::Cz,
            Gate::Ccx { .. } => GateKind::Ccx,
        }
    }

    pub fn qubits(&self) -> Vec<usize> {
        match *self {
            Gate::X { target } | Gate::H { target } | Gate::Ry { target, .. } => vec![target],
            Gate::Cx { control, target }
            | Gate::Cry {
                control, target, ..
            }
            | Gate::Cz { control, target } => vec![control, target],
            Gate::Ccx { controls, target } => vec![controls[0], controls[1], target],
        }
    }

    pub fn angle(&self) -> Option<f64> {
        match *self {
            Gate::Ry { theta, .. } | Gate::Cry { theta, .. } => Some(theta),
            _ => None,
        }
    }

    pub fn inverse(&self) -> Gate {
        match *self {
            Gate::Ry { theta, target } => Gate::Ry {
                theta: -theta,
                target,
            },
            Gate::Cry {
                theta,
                control,
                target,
            } => Gate::Cry {
                theta: -theta,
                control,
                target,
            },
            other => other,
        }
    }

    /// Checks distinct operands below `total_qubits` and a finite angle.
    pub fn validate(&self, total_qubits: usize) -> Result<()> {
        let qubits = self.qubits();
        if let Some(&q) = qubits.iter().find(|&&q| q >= total_qubits) {
            return Err(Error::QubitOutOfRange {
                qubit: q,
                total: total_qubits,
            });
        }
        for (a, &q) in qubits.iter().enumerate() {
            if qubits[a + 1..].contains(&q) {
                return Err(Error::InvalidGate(format!(
                    "{self}: repeated operand q[{q}]"
                )));
            }
        }
        if let Some(theta) = self.angle() {
            if !theta.is_finite() {
                return Err(Error::InvalidGate(format!("{self}: non-finite angle")));
            }
        }
        Ok(())
    }
}

/// `KIND q[a] q[b] (θ=…)`, the debug dump line for one gate.
impl fmt::Display for Gate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.kind().name())?;
        for q in self.qubits() {
            write!(f, " q[{q}]")?;
        }
        if let Some(theta) = self.angle() {
            write!(f, " (θ={theta})")?;
        }
        Ok(())
    }
}

/// Ordered gate list over a fixed layout. Immutable once built.
#[derive(Debug, Clone, PartialEq)]
pub struct Circuit {
    layout: RegisterLayout,
    gates: Vec<Gate>,
}

impl Circuit {
    pub fn new(layout: RegisterLayout, gates: Vec<Gate>) -> Result<Self> {
        let total = layout.total_qubits();
        for g in &gates {
            g.validate(total)?;
        }
        Ok(Self { layout, gates })
    }

    pub fn layout(&self) -> &RegisterLayout {
        &self.layout
    }

    pub fn gates(&self) -> &[Gate] {
        &self.gates
    }

    pub fn len(&self) -> usize {
        self.gates.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gates.is_empty()
    }

    /// One gate per line in circuit order.
    pub fn dump(&self) -> String {
        let mut out = String::new();
        for g in &self.gates {
            let _ = writeln!(out, "{g}");
        }
        out
    }
}

/// Rotation angle of the `i`-th cascade step (1-based) of an `n`-qubit W state.
fn w_cascade_angle(n: usize, i: usize) -> f64 {
    2.0 * (1.0 / (n - i + 1) as f64).sqrt().acos()
}

/// W-state preparation on the block of `row`:
/// `|0…0> -> (|10…0> + |010…0> + … + |0…01>) / √n`.
///
/// X on the first block qubit, then for each later qubit a CRY that splits off
/// the remaining amplitude followed by a CX that clears the previous qubit.
pub fn build_w_prep(n: usize, row: usize) -> Result<Vec<Gate>> {
    if n == 0 {
        return Err(Error::ZeroSize);
    }
    if row >= n {
        return Err(Error::Index(format!("row {row} out of range for n = {n}")));
    }
    let base = row * n;
    let mut gates = Vec::with_capacity(2 * n - 1);
    gates.push(Gate::X { target: base });
    for i in 1..n {
        gates.push(Gate::Cry {
            theta: w_cascade_angle(n, i),
            control: base + i - 1,
            target: base + i,
        });
        gates.push(Gate::Cx {
            control: base + i,
            target: base + i - 1,
        });
    }
    Ok(gates)
}

fn column_check_iter(n: usize) -> impl Iterator<Item = Gate> {
    let l = RegisterLayout { n };
    (0..n.saturating_sub(1)).flat_map(move |c| {
        let anc = l.col_ancilla(c);
        std::iter::once(Gate::H { target: anc })
            .chain((0..n).map(move |r| Gate::Cz {
                control: anc,
                target: l.system_qubit(r, c),
            }))
            .chain(std::iter::once(Gate::H { target: anc }))
    })
}

/// Parity kickback for columns `0..n−1`, one complete H–CZ…CZ–H sandwich
/// per ancilla. Ancilla `c` ends in `|1>` iff column `c` holds an odd number
/// of queens.
pub fn build_column_checks(n: usize) -> Vec<Gate> {
    column_check_iter(n).collect()
}

/// 1-based diagonal ancilla index for 1-based rows `i < j`:
/// `k = (i − 1)(2n − i)/2 + (j − i)`.
pub fn ancilla_index(i: usize, j: usize, n: usize) -> Result<usize> {
    if i == 0 || i >= j || j > n {
        return Err(Error::Index(format!(
            "ancilla_index needs 1 <= i < j <= n, got i = {i}, j = {j}, n = {n}"
        )));
    }
    Ok((i - 1) * (2 * n - i) / 2 + (j - i))
}

fn diagonal_check_iter(n: usize) -> impl Iterator<Item = Gate> {
    let l = RegisterLayout { n: n.max(1) };
    let init = l.diag_ancilla_range().map(|q| Gate::X { target: q });
    let toffolis = diagonal_pairs_iter(n).map(move |p| {
        let k =
            ancilla_index(p.first.row + 1, p.second.row + 1, n).expect("first row < second row");
        Gate::Ccx {
            controls: [
                l.system_qubit(p.first.row, p.first.col),
                l.system_qubit(p.second.row, p.second.col),
            ],
            target: l.diag_ancilla(k),
        }
    });
    init.chain(toffolis)
}

/// X on every diagonal ancilla (initialising it to `|1>`), then one CCX per
/// diagonal cell pair targeting that row pair's ancilla.
pub fn build_diagonal_checks(n: usize) -> Vec<Gate> {
    diagonal_check_iter(n).collect()
}

/// Streams the full solver circuit without materialising it.
pub fn full_circuit_gates(n: usize) -> Result<impl Iterator<Item = Gate>> {
    if n == 0 {
        return Err(Error::ZeroSize);
    }
    let w_prep = (0..n).flat_map(move |row| build_w_prep(n, row).expect("row < n"));
    Ok(w_prep
        .chain(column_check_iter(n))
        .chain(diagonal_check_iter(n)))
}

/// W preparation on every row, then the column checks, then the diagonal checks.
pub fn build_full_circuit(n: usize) -> Result<Circuit> {
    let layout = layout(n)?;
    Circuit::new(layout, full_circuit_gates(n)?.collect())
}

/// Per-kind gate counts with the two stage totals.
///
/// `column_checks` is `H + CZ` and `diagonal_toffolis` is `CCX`: in the solver
/// circuit those kinds occur only in their respective stage. X gates (W
/// preparation and ancilla initialisation) are not part of either total.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
pub struct GateCensus {
    pub x: u64,
    pub h: u64,
    pub ry: u64,
    pub cx: u64,
    pub cry: u64,
    pub cz: u64,
    pub ccx: u64,
    pub column_checks: u64,
    pub diagonal_toffolis: u64,
}

impl GateCensus {
    pub fn count(&self, kind: GateKind) -> u64 {
        match kind {
            GateKind::X => self.x,
            GateKind::H => self.h,
            GateKind::Ry => self.ry,
            GateKind::Cx => self.cx,
            GateKind::Cry => self.cry,
            GateKind::Cz => self.cz,
            GateKind::Ccx => self.ccx,
        }
    }

    pub fn total(&self) -> u64 {
        GateKind::ALL.iter().map(|&k| self.count(k)).sum()
    }

    /// Gates in the W-preparation stage (`X`, `CRY`, `CX` of the row cascades).
    pub fn w_prep(&self, n: usize) -> u64 {
        self.total() - self.column_checks - self.diagonal_toffolis - diagonal_ancillas(n as u64)
    }
}

fn diagonal_ancillas(n: u64) -> u64 {
    n * n.saturating_sub(1) / 2
}

/// Counts gates of any gate stream.
pub fn census_of<'a, I>(gates: I) -> GateCensus
where
    I: IntoIterator<Item = &'a Gate>,
{
    let mut c = GateCensus::default();
    for g in gates {
        match g.kind() {
            GateKind::X => c.x += 1,
            GateKind::H => c.h += 1,
            GateKind::Ry => c.ry += 1,
            GateKind::Cx => c.cx += 1,
            GateKind::Cry => c.cry += 1,
            GateKind::Cz => c.cz += 1,
            GateKind::Ccx => c.ccx += 1,
        }
    }
    c.column_checks = c.h + c.cz;
    c.diagonal_toffolis = c.ccx;
    c
}

pub fn gate_census(circuit: &Circuit) -> GateCensus {
    census_of(circuit.gates())
}

/// Census of the full solver circuit, counted by streaming the builders.
/// Usable for sizes whose gate list would not fit in memory.
pub fn streamed_census(n: usize) -> Result<GateCensus> {
    let mut c = GateCensus::default();
    for g in full_circuit_gates(n)? {
        let one = census_of(std::iter::once(&g));
        c.x += one.x;
        c.h += one.h;
        c.ry += one.ry;
        c.cx += one.cx;
        c.cry += one.cry;
        c.cz += one.cz;
        c.ccx += one.ccx;
    }
    c.column_checks = c.h + c.cz;
    c.diagonal_toffolis = c.ccx;
    Ok(c)
}

fn to_u64(v: u128) -> u64 {
    u64::try_from(v).expect("closed-form count exceeds u64")
}

/// `3n²/2 + n/2 − 1`.
pub fn qubit_total_closed_form(n: u64) -> u64 {
    let n = n as u128;
    to_u64((3 * n * n + n) / 2 - 1)
}

/// `(n − 1)(n + 2)`: two Hadamards and `n` controlled-Z per parity ancilla.
pub fn column_check_closed_form(n: u64) -> u64 {
    let n = n as u128;
    to_u64((n - 1) * (n + 2))
}

/// `n²(n − 1) − n(n − 1) − n(n − 1)(n − 2)/3`, the diagonal pair count.
pub fn diagonal_toffoli_closed_form(n: u64) -> u64 {
    let n = n as u128;
    if n < 2 {
        return 0;
    }
    to_u64(n * n * (n - 1) - n * (n - 1) - n * (n - 1) * (n - 2) / 3)
}

/// `n(n − 1)(2n − 1)/3`, algebraically equal to [`diagonal_toffoli_closed_form`].
pub fn diagonal_toffoli_simplified(n: u64) -> u64 {
    let n = n as u128;
    if n < 1 {
        return 0;
    }
    to_u64(n * (n - 1) * (2 * n - 1) / 3)
}

/// Expected census of [`build_full_circuit`] from closed forms only.
pub fn closed_form_census(n: usize) -> Result<GateCensus> {
    if n == 0 {
        return Err(Error::ZeroSize);
    }
    let n = n as u64;
    let col = column_check_closed_form(n);
    let diag = diagonal_toffoli_closed_form(n);
    Ok(GateCensus {
        x: n + diagonal_ancillas(n),
        h: 2 * (n - 1),
        ry: 0,
        cx: n * (n - 1),
        cry: n * (n - 1),
        cz: n * (n - 1),
        ccx: diag,
        column_checks: col,
        diagonal_toffolis: diag,
    })
}
