//! Integer QUBO problems: storage, exact cost, local fields and flip deltas.
//!
//! Off-diagonal couplings are stored once per unordered pair and read for
//! both `(i, j)` and `(j, i)`. The cost of an assignment is
//!
//! ```text
//! C(x) = Σ_i x_i (q_ii + z_i),   z_i = Σ_{j≠i} q_ij x_j
//! ```
//!
//! and the change caused by flipping `x_i` is `±(q_ii + 2 z_i)`, positive for
//! a 0 → 1 flip. All arithmetic is exact; coefficients are 32-bit and every
//! accumulator is 64-bit.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Wide accumulator type for costs, fields and deltas.
pub type Cost = i64;

/// Largest off-diagonal magnitude allowed in hardware-faithful mode.
pub const MAX_SYNAPTIC_WEIGHT: i64 = 127;

/// Sparse symmetric integer QUBO matrix.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QuboMatrix {
    n: usize,
    diag: Vec<i32>,
    /// Upper-triangle couplings `(i, j, q_ij)` with `i < j`, sorted.
    offdiag: Vec<(usize, usize, i32)>,
    /// Compressed-row adjacency covering both directions of every pair.
    row_start: Vec<usize>,
    adjacency: Vec<(usize, i32)>,
    hardware_faithful: bool,
}

impl QuboMatrix {
    /// Canonicalizes raw `(i, j, coeff)` entries into symmetric storage.
    ///
    /// Entries on the same ordered position are summed. A pair given in only
    /// one orientation is taken as the symmetric coefficient; a pair given in
    /// both orientations is replaced by the integer mean of the two sides, and
    /// an odd sum is rejected. Zero coefficients are dropped.
    pub fn build(n: usize, entries: &[(usize, usize, i64)], hardware_faithful: bool) -> Result<Self> {
        let mut diag = vec![0i64; n];
        let mut upper: BTreeMap<(usize, usize), i64> = BTreeMap::new();
        let mut lower: BTreeMap<(usize, usize), i64> = BTreeMap::new();

        for &(i, j, c) in entries {
            for idx in [i, j] {
                if idx >= n {
                    return Err(Error::IndexOutOfRange { index: idx, n });
                }
            }
            if i == j {
                diag[i] += c;
            } else if i < j {
                *upper.entry((i, j)).or_insert(0) += c;
            } else {
                *lower.entry((j, i)).or_insert(0) += c;
            }
        }

        let mut merged = upper.clone();
        for (&key, &low) in &lower {
            match upper.get(&key) {
                None => {
                    merged.insert(key, low);
                }
                Some(&up) => {
                    let sum = up + low;
                    if sum % 2 != 0 {
                        return Err(Error::NonIntegerSymmetrization { i: key.0, j: key.1, sum });
                    }
                    merged.insert(key, sum / 2);
                }
            }
        }

        let diag = diag
            .into_iter()
            .map(|d| i32::try_from(d).map_err(|_| Error::CoefficientOverflow(d)))
            .collect::<Result<Vec<_>>>()?;

        let mut offdiag = Vec::with_capacity(merged.len());
        for ((i, j), c) in merged {
            if c == 0 {
                continue;
            }
            if hardware_faithful && c.abs() > MAX_SYNAPTIC_WEIGHT {
                return Err(Error::WeightOutOfRange { i, j, value: c });
            }
            let c = i32::try_from(c).map_err(|_| Error::CoefficientOverflow(c))?;
            offdiag.push((i, j, c));
        }

        Ok(Self::from_canonical(n, diag, offdiag, hardware_faithful))
    }

    /// Shorthand for [`QuboMatrix::build`] without the 8-bit weight check.
    pub fn from_entries(n: usize, entries: &[(usize, usize, i64)]) -> Result<Self> {
        Self::build(n, entries, false)
    }

    fn from_canonical(n: usize, diag: Vec<i32>, offdiag: Vec<(usize, usize, i32)>, hardware_faithful: bool) -> Self {
        let mut degree = vec![0usize; n];
        for &(i, j, _) in &offdiag {
            degree[i] += 1;
            degree[j] += 1;
        }
        let mut row_start = Vec::with_capacity(n + 1);
        row_start.push(0);
        for d in &degree {
            row_start.push(row_start.last().unwrap() + d);
        }
        let mut fill = row_start.clone();
        let mut adjacency = vec![(0usize, 0i32); offdiag.len() * 2];
        for &(i, j, c) in &offdiag {
            adjacency[fill[i]] = (j, c);
            fill[i] += 1;
            adjacency[fill[j]] = (i, c);
            fill[j] += 1;
        }
        Self { n, diag, offdiag, row_start, adjacency, hardware_faithful }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn diag(&self) -> &[i32] {
        &self.diag
    }

    /// Upper-triangle couplings, sorted by `(i, j)`.
    pub fn offdiag(&self) -> &[(usize, usize, i32)] {
        &self.offdiag
    }

    /// Neighbors of `i` with their coupling, `(j, q_ij)`.
    #[inline]
    pub fn neighbors(&self, i: usize) -> &[(usize, i32)] {
        &self.adjacency[self.row_start[i]..self.row_start[i + 1]]
    }

    pub fn degree(&self, i: usize) -> usize {
        self.row_start[i + 1] - self.row_start[i]
    }

    pub fn is_hardware_faithful(&self) -> bool {
        self.hardware_faithful
    }

    /// Number of stored nonzero coefficients (nonzero diagonal plus pairs).
    pub fn nnz(&self) -> usize {
        self.diag.iter().filter(|&&d| d != 0).count() + self.offdiag.len()
    }

    /// Canonical entry list: nonzero diagonal terms then upper couplings.
    pub fn entries(&self) -> Vec<(usize, usize, i64)> {
        let mut out: Vec<(usize, usize, i64)> = Vec::with_capacity(self.nnz());
        out.extend(self.diag.iter().enumerate().filter(|(_, &d)| d != 0).map(|(i, &d)| (i, i, d as i64)));
        out.extend(self.offdiag.iter().map(|&(i, j, c)| (i, j, c as i64)));
        out.sort_unstable_by_key(|&(i, j, _)| (i, j));
        out
    }

    fn check_len(&self, len: usize) -> Result<()> {
        if len != self.n {
            return Err(Error::LengthMismatch { expected: self.n, actual: len });
        }
        Ok(())
    }

    fn check_index(&self, i: usize) -> Result<()> {
        if i >= self.n {
            return Err(Error::IndexOutOfRange { index: i, n: self.n });
        }
        Ok(())
    }

    /// Exact `x^T Q x`.
    pub fn evaluate_cost(&self, x: &Assignment) -> Result<Cost> {
        self.check_len(x.len())?;
        Ok(self.cost_unchecked(x.as_slice()))
    }

    pub(crate) fn cost_unchecked(&self, x: &[bool]) -> Cost {
        let mut total: Cost = 0;
        for (i, &xi) in x.iter().enumerate() {
            if xi {
                total += self.local_cost(i, x);
            }
        }
        total
    }

    /// `q_ii + z_i` for set bit `i`, computed from the row.
    fn local_cost(&self, i: usize, x: &[bool]) -> Cost {
        let z: Cost = self.neighbors(i).iter().filter(|&&(j, _)| x[j]).map(|&(_, c)| c as Cost).sum();
        self.diag[i] as Cost + z
    }

    /// `z_i = Σ_{j≠i} q_ij x_j` for every `i`.
    pub fn local_fields(&self, x: &Assignment) -> Result<LocalFields> {
        self.check_len(x.len())?;
        let mut z = vec![0 as Cost; self.n];
        for (j, &xj) in x.as_slice().iter().enumerate() {
            if xj {
                for &(i, c) in self.neighbors(j) {
                    z[i] += c as Cost;
                }
            }
        }
        Ok(LocalFields(z))
    }

    /// Cost change from flipping `x_i`, given fields consistent with `x`.
    pub fn delta_cost(&self, x: &Assignment, z: &LocalFields, i: usize) -> Result<Cost> {
        self.check_len(x.len())?;
        self.check_len(z.len())?;
        self.check_index(i)?;
        Ok(flip_delta(self.diag[i], z.0[i], x.get(i)))
    }

    /// Toggles every index in `flipped` and propagates the field updates to
    /// the neighbors of each flipped variable only.
    pub fn apply_flips(&self, x: &mut Assignment, z: &mut LocalFields, flipped: &[usize]) -> Result<()> {
        self.check_len(x.len())?;
        self.check_len(z.len())?;
        for &i in flipped {
            self.check_index(i)?;
        }
        for &i in flipped {
            self.flip_unchecked(&mut x.0, &mut z.0, i);
        }
        Ok(())
    }

    #[inline]
    pub(crate) fn flip_unchecked(&self, x: &mut [bool], z: &mut [Cost], i: usize) {
        x[i] = !x[i];
        let sign: Cost = if x[i] { 1 } else { -1 };
        for &(j, c) in self.neighbors(i) {
            z[j] += sign * c as Cost;
        }
    }
}

/// `±(q_ii + 2 z_i)`: positive when `x_i` goes 0 → 1.
#[inline]
pub fn flip_delta(q_ii: i32, z_i: Cost, x_i: bool) -> Cost {
    let magnitude = q_ii as Cost + 2 * z_i;
    if x_i {
        -magnitude
    } else {
        magnitude
    }
}

/// Binary candidate solution.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Assignment(Vec<bool>);

impl Assignment {
    pub fn zeros(n: usize) -> Self {
        Self(vec![false; n])
    }

    pub fn ones(n: usize) -> Self {
        Self(vec![true; n])
    }

    /// Builds from 0/1 values, rejecting anything else.
    pub fn from_bits(bits: &[u8]) -> Result<Self> {
        bits.iter()
            .enumerate()
            .map(|(i, &b)| match b {
                0 => Ok(false),
                1 => Ok(true),
                _ => Err(Error::Parse { line: 0, msg: format!("bit {i} has value {b}") }),
            })
            .collect::<Result<Vec<_>>>()
            .map(Self)
    }

    /// Parses a string of `0`/`1` characters.
    pub fn parse(s: &str) -> Result<Self> {
        s.trim()
            .chars()
            .map(|ch| match ch {
                '0' => Ok(false),
                '1' => Ok(true),
                other => Err(Error::Parse { line: 0, msg: format!("unexpected character {other:?} in assignment") }),
            })
            .collect::<Result<Vec<_>>>()
            .map(Self)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    #[inline]
    pub fn get(&self, i: usize) -> bool {
        self.0[i]
    }

    pub fn flip(&mut self, i: usize) {
        self.0[i] = !self.0[i];
    }

    pub fn as_slice(&self) -> &[bool] {
        &self.0
    }

    pub(crate) fn as_mut_slice(&mut self) -> &mut [bool] {
        &mut self.0
    }

    pub fn count_ones(&self) -> usize {
        self.0.iter().filter(|&&b| b).count()
    }

    /// Indices of set bits.
    pub fn ones_indices(&self) -> impl Iterator<Item = usize> + '_ {
        self.0.iter().enumerate().filter(|(_, &b)| b).map(|(i, _)| i)
    }
}

impl From<Vec<bool>> for Assignment {
    fn from(bits: Vec<bool>) -> Self {
        Self(bits)
    }
}

impl std::fmt::Display for Assignment {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        for &b in &self.0 {
            f.write_str(if b { "1" } else { "0" })?;
        }
        Ok(())
    }
}

/// Per-variable field `z_i = Σ_{j≠i} q_ij x_j`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LocalFields(Vec<Cost>);

impl LocalFields {
    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    #[inline]
    pub fn get(&self, i: usize) -> Cost {
        self.0[i]
    }

    pub fn as_slice(&self) -> &[Cost] {
        &self.0
    }

    pub(crate) fn as_mut_slice(&mut self) -> &mut [Cost] {
        &mut self.0
    }
}
