//! Classical N-Queens domain.
//!
//! Boards are `n x n` 0/1 matrices addressed with 0-based `(row, column)`
//! pairs. A board with exactly one queen per row converts losslessly to a
//! [`PermutationVector`] (`cols[r]` is the queen's column in row `r`); the
//! name reflects that the valid solutions are exactly those vectors which are
//! permutations, although a vector may repeat columns.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// Largest `n` accepted by [`verify_even_parity_proposition`] unless the caller
/// raises the bound. `C(19, 9) = 92378` compositions at `n = 10`.
pub const DEFAULT_PARITY_BOUND: usize = 10;

/// A board cell, 0-based.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Cell {
    pub row: usize,
    pub col: usize,
}

impl Cell {
    pub const fn new(row: usize, col: usize) -> Self {
        Self { row, col }
    }
}

/// Two cells in different rows that share a diagonal; `first.row < second.row`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct DiagonalPair {
    pub first: Cell,
    pub second: Cell,
}

/// `n x n` occupancy matrix stored row-major.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct BoardConfig {
    n: usize,
    cells: Vec<bool>,
}

impl BoardConfig {
    pub fn empty(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::ZeroSize);
        }
        Ok(Self {
            n,
            cells: vec![false; n * n],
        })
    }

    pub fn from_cells(n: usize, cells: Vec<bool>) -> Result<Self> {
        if n == 0 {
            return Err(Error::ZeroSize);
        }
        if cells.len() != n * n {
            return Err(Error::Board(format!(
                "expected {} cells for n = {n}, got {}",
                n * n,
                cells.len()
            )));
        }
        Ok(Self { n, cells })
    }

    pub fn from_permutation(perm: &PermutationVector) -> Self {
        let n = perm.n();
        let mut cells = vec![false; n * n];
        for (row, &col) in perm.cols().iter().enumerate() {
            cells[row * n + col] = true;
        }
        Self { n, cells }
    }

    /// The `n x n` identity board (all queens on the main diagonal).
    pub fn identity(n: usize) -> Result<Self> {
        PermutationVector::new((0..n).collect()).map(|p| Self::from_permutation(&p))
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn cells(&self) -> &[bool] {
        &self.cells
    }

    pub fn get(&self, row: usize, col: usize) -> bool {
        self.cells[row * self.n + col]
    }

    pub fn set(&mut self, row: usize, col: usize, queen: bool) {
        self.cells[row * self.n + col] = queen;
    }

    pub fn row_sum(&self, row: usize) -> usize {
        self.cells[row * self.n..(row + 1) * self.n]
            .iter()
            .filter(|&&q| q)
            .count()
    }

    pub fn col_sum(&self, col: usize) -> usize {
        (0..self.n).filter(|&r| self.get(r, col)).count()
    }

    pub fn queen_count(&self) -> usize {
        self.cells.iter().filter(|&&q| q).count()
    }

    pub fn has_one_queen_per_row(&self) -> bool {
        (0..self.n).all(|r| self.row_sum(r) == 1)
    }

    /// Column of the queen in each row, or `None` unless every row holds
    /// exactly one queen.
    pub fn to_permutation(&self) -> Option<PermutationVector> {
        let mut cols = Vec::with_capacity(self.n);
        for r in 0..self.n {
            if self.row_sum(r) != 1 {
                return None;
            }
            cols.push((0..self.n).position(|c| self.get(r, c))?);
        }
        Some(PermutationVector { n: self.n, cols })
    }

    /// Board rotated by 180 degrees.
    pub fn rotate_180(&self) -> Self {
        let mut cells = self.cells.clone();
        cells.reverse();
        Self { n: self.n, cells }
    }

    /// `n` lines of `n` characters `'0'`/`'1'`, each terminated by `\n`.
    pub fn to_text(&self) -> String {
        self.to_string()
    }
}

impl fmt::Display for BoardConfig {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for row in self.cells.chunks(self.n) {
            for &q in row {
                f.write_str(if q { "1" } else { "0" })?;
            }
            f.write_str("\n")?;
        }
        Ok(())
    }
}

impl FromStr for BoardConfig {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let rows: Vec<&str> = s.lines().map(str::trim).filter(|l| !l.is_empty()).collect();
        let n = rows.len();
        let mut cells = Vec::with_capacity(n * n);
        for (r, line) in rows.iter().enumerate() {
            if line.chars().count() != n {
                return Err(Error::Board(format!(
                    "row {r} has {} characters, expected {n}",
                    line.chars().count()
                )));
            }
            for ch in line.chars() {
                match ch {
                    '0' => cells.push(false),
                    '1' => cells.push(true),
                    other => {
                        return Err(Error::Board(format!(
                            "unexpected character {other:?} in row {r}"
                        )))
                    }
                }
            }
        }
        Self::from_cells(n, cells)
    }
}

/// Queen column per row. Ordering is lexicographic by `cols` within one `n`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct PermutationVector {
    n: usize,
    cols: Vec<usize>,
}

impl PermutationVector {
    pub fn new(cols: Vec<usize>) -> Result<Self> {
        let n = cols.len();
        if n == 0 {
            return Err(Error::ZeroSize);
        }
        if let Some((r, &c)) = cols.iter().enumerate().find(|(_, &c)| c >= n) {
            return Err(Error::Board(format!(
                "row {r}: column {c} out of range for n = {n}"
            )));
        }
        Ok(Self { n, cols })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn cols(&self) -> &[usize] {
        &self.cols
    }

    pub fn is_permutation(&self) -> bool {
        let mut seen = vec![false; self.n];
        self.cols
            .iter()
            .all(|&c| !std::mem::replace(&mut seen[c], true))
    }
}

/// True iff `(i, x)` and `(j, y)` lie on a common diagonal, i.e. `|x - y| = j - i`.
///
/// Only defined for `j > i`.
pub fn is_diagonal(i: usize, x: usize, j: usize, y: usize) -> Result<bool> {
    if j <= i {
        return Err(Error::Index(format!(
            "is_diagonal requires j > i, got i = {i}, j = {j}"
        )));
    }
    Ok(x.abs_diff(y) == j - i)
}

/// Row, column and diagonal criteria: one queen per row and per column, at
/// most one queen on every diagonal and anti-diagonal.
pub fn is_valid_solution(board: &BoardConfig) -> bool {
    let n = board.n();
    if !(0..n).all(|r| board.row_sum(r) == 1) || !(0..n).all(|c| board.col_sum(c) == 1) {
        return false;
    }
    let mut diag = vec![0usize; 2 * n - 1];
    let mut anti = vec![0usize; 2 * n - 1];
    for r in 0..n {
        for c in 0..n {
            if board.get(r, c) {
                diag[r + n - 1 - c] += 1;
                anti[r + c] += 1;
            }
        }
    }
    diag.iter().chain(&anti).all(|&count| count <= 1)
}

/// All N-Queens solutions, sorted lexicographically by column vector.
///
/// Row-by-row backtracking; columns are tried in ascending order so the
/// output is already sorted. `n = 0` yields no solutions.
pub fn solve_classical(n: usize) -> Vec<PermutationVector> {
    struct Search {
        n: usize,
        cols: Vec<usize>,
        used_col: Vec<bool>,
        used_diag: Vec<bool>,
        used_anti: Vec<bool>,
        out: Vec<PermutationVector>,
    }

    impl Search {
        fn place(&mut self, row: usize) {
            if row == self.n {
                self.out.push(PermutationVector {
                    n: self.n,
                    cols: self.cols.clone(),
                });
                return;
            }
            for col in 0..self.n {
                let d = row + self.n - 1 - col;
                let a = row + col;
                if self.used_col[col] || self.used_diag[d] || self.used_anti[a] {
                    continue;
                }
                self.used_col[col] = true;
                self.used_diag[d] = true;
                self.used_anti[a] = true;
                self.cols.push(col);
                self.place(row + 1);
                self.cols.pop();
                self.used_col[col] = false;
                self.used_diag[d] = false;
                self.used_anti[a] = false;
            }
        }
    }

    if n == 0 {
        return Vec::new();
    }
    let mut search = Search {
        n,
        cols: Vec::with_capacity(n),
        used_col: vec![false; n],
        used_diag: vec![false; 2 * n - 1],
        used_anti: vec![false; 2 * n - 1],
        out: Vec::new(),
    };
    search.place(0);
    search.out
}

/// Lazily enumerates diagonal cell pairs in canonical order: ascending first
/// row, then second row, then first column, then second column.
pub fn diagonal_pairs_iter(n: usize) -> impl Iterator<Item = DiagonalPair> {
    (0..n).flat_map(move |i| {
        (i + 1..n).flat_map(move |j| {
            let d = j - i;
            (0..n).flat_map(move |x| {
                let below = x.checked_sub(d);
                let above = Some(x + d).filter(|&y| y < n);
                below.into_iter().chain(above).map(move |y| DiagonalPair {
                    first: Cell::new(i, x),
                    second: Cell::new(j, y),
                })
            })
        })
    })
}

/// All cell pairs `((i, x), (j, y))` with `j > i` and `|x - y| = j - i`.
pub fn diagonal_pairs(n: usize) -> Vec<DiagonalPair> {
    diagonal_pairs_iter(n).collect()
}

/// Checks that every way of writing `n` as an ordered sum of `n` non-negative
/// integers has an even number of even parts (zero counts as even).
pub fn verify_even_parity_proposition(n: usize) -> Result<bool> {
    verify_even_parity_proposition_bounded(n, DEFAULT_PARITY_BOUND)
}

pub fn verify_even_parity_proposition_bounded(n: usize, max_n: usize) -> Result<bool> {
    if n == 0 {
        return Err(Error::ZeroSize);
    }
    if n > max_n {
        return Err(Error::SizeBound {
            what: "n",
            value: n,
            bound: max_n,
        });
    }
    let mut holds = true;
    for_each_composition(n, n, &mut |parts| {
        let evens = parts.iter().filter(|&&p| p % 2 == 0).count();
        holds &= evens % 2 == 0;
    });
    Ok(holds)
}

/// Calls `visit` once for every weak composition of `total` into `parts` parts.
pub fn for_each_composition(total: usize, parts: usize, visit: &mut dyn FnMut(&[usize])) {
    fn go(remaining: usize, slots: usize, buf: &mut Vec<usize>, visit: &mut dyn FnMut(&[usize])) {
        if slots == 1 {
            buf.push(remaining);
            visit(buf);
            buf.pop();
            return;
        }
        for first in 0..=remaining {
            buf.push(first);
            go(remaining - first, slots - 1, buf, visit);
            buf.pop();
        }
    }
    if parts == 0 {
        if total == 0 {
            visit(&[]);
        }
        return;
    }
    let mut buf = Vec::with_capacity(parts);
    go(total, parts, &mut buf, visit);
}
