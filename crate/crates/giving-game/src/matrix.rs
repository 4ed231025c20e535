//! Preference matrices and cell coloring.
//!
//! A matrix over n agents holds one u64 cell per ordered pair (x, y), x != y,
//! read as "how much submitter x has given receiver y so far". Cells are
//! addressed (submitter-column, receiver-row); serialization keeps the same
//! orientation, so `cells[row][col]` in the JSON form is the cell
//! (column, row). Diagonal cells do not exist.
//!
//! A cell is *blue* when its value ties the maximum of its column, *white*
//! otherwise. Every column has at least one blue cell, so the token-passing
//! game defined in [`crate::engine`] can never get stuck.

use crate::error::{GameError, Result};

/// Index of an agent inside one matrix. Plain position, not a name; labels
/// live on the matrix.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct AgentId(pub usize);

impl AgentId {
    pub fn index(self) -> usize {
        self.0
    }
}

/// Unordered agent pair, stored low index first.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Pair(AgentId, AgentId);

impl Pair {
    /// Panics on a == b: a pair of one agent is a programming error here;
    /// user-facing paths reject self-pairs before building one.
    pub fn new(a: AgentId, b: AgentId) -> Pair {
        assert!(a != b, "pair of one agent");
        if a <= b {
            Pair(a, b)
        } else {
            Pair(b, a)
        }
    }

    pub fn lo(self) -> AgentId {
        self.0
    }

    pub fn hi(self) -> AgentId {
        self.1
    }

    pub fn contains(self, x: AgentId) -> bool {
        self.0 == x || self.1 == x
    }

    pub fn other(self, x: AgentId) -> Option<AgentId> {
        if x == self.0 {
            Some(self.1)
        } else if x == self.1 {
            Some(self.0)
        } else {
            None
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CellColor {
    Blue,
    White,
}

/// Square preference matrix with labeled agents.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PreferenceMatrix {
    labels: Vec<String>,
    /// Row-major, `values[row * n + col]` = cell (col, row). Diagonal slots
    /// stay 0 and are never read.
    values: Vec<u64>,
}

/// Spreadsheet-style default labels: A..Z, AA, AB, ...
pub(crate) fn default_label(i: usize) -> String {
    let mut i = i + 1;
    let mut s = Vec::new();
    while i > 0 {
        i -= 1;
        s.push(b'A' + (i % 26) as u8);
        i /= 26;
    }
    s.reverse();
    String::from_utf8(s).unwrap()
}

impl PreferenceMatrix {
    /// All-zero matrix with default labels. In an all-zero matrix every cell
    /// is blue (ties the zero column max).
    pub fn zeros(n: usize) -> Result<PreferenceMatrix> {
        Self::zeros_labeled((0..n).map(default_label).collect())
    }

    pub fn zeros_labeled(labels: Vec<String>) -> Result<PreferenceMatrix> {
        let n = labels.len();
        if n < 2 {
            return Err(GameError::TooFewAgents(n));
        }
        for (i, l) in labels.iter().enumerate() {
            if l.is_empty() {
                return Err(GameError::InvalidMatrix(format!(
                    "agent {i} has an empty label"
                )));
            }
            if labels[..i].contains(l) {
                return Err(GameError::InvalidMatrix(format!(
                    "duplicate agent label {l:?}"
                )));
            }
        }
        Ok(PreferenceMatrix {
            values: vec![0; n * n],
            labels,
        })
    }

    /// Builds from row-major cells with `None` exactly on the diagonal,
    /// matching the serialized layout: `rows[r][c]` is the cell (c, r).
    pub fn from_rows(labels: Vec<String>, rows: &[Vec<Option<u64>>]) -> Result<PreferenceMatrix> {
        let mut m = Self::zeros_labeled(labels)?;
        let n = m.n();
        if rows.len() != n {
            return Err(GameError::InvalidMatrix(format!(
                "expected {n} rows, got {}",
                rows.len()
            )));
        }
        for (r, row) in rows.iter().enumerate() {
            if row.len() != n {
                return Err(GameError::InvalidMatrix(format!(
                    "row {r} has {} cells, expected {n}",
                    row.len()
                )));
            }
            for (c, cell) in row.iter().enumerate() {
                match (r == c, cell) {
                    (true, None) => {}
                    (true, Some(_)) => {
                        return Err(GameError::InvalidMatrix(format!(
                            "diagonal cell ({label},{label}) must be null",
                            label = m.labels[r]
                        )))
                    }
                    (false, Some(v)) => m.values[r * n + c] = *v,
                    (false, None) => {
                        return Err(GameError::InvalidMatrix(format!(
                            "off-diagonal cell ({},{}) must have a value",
                            m.labels[c], m.labels[r]
                        )))
                    }
                }
            }
        }
        Ok(m)
    }

    pub fn n(&self) -> usize {
        self.labels.len()
    }

    pub fn agents(&self) -> impl Iterator<Item = AgentId> {
        (0..self.n()).map(AgentId)
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn label(&self, a: AgentId) -> &str {
        &self.labels[a.index()]
    }

    pub fn agent_by_label(&self, label: &str) -> Result<AgentId> {
        self.labels
            .iter()
            .position(|l| l == label)
            .map(AgentId)
            .ok_or_else(|| GameError::UnknownAgent(label.to_string()))
    }

    fn check_agent(&self, a: AgentId) -> Result<()> {
        if a.index() >= self.n() {
            return Err(GameError::InvalidArgument(format!(
                "agent index {} out of range for {} agents",
                a.index(),
                self.n()
            )));
        }
        Ok(())
    }

    /// Raw cell read. Panics on the diagonal: callers that may hold a
    /// diagonal coordinate go through [`cell`](Self::cell) instead.
    pub fn value(&self, x: AgentId, y: AgentId) -> u64 {
        assert!(x != y, "diagonal cell read");
        self.values[y.index() * self.n() + x.index()]
    }

    /// Checked cell read: errors on the diagonal or out-of-range agents.
    pub fn cell(&self, x: AgentId, y: AgentId) -> Result<u64> {
        self.check_agent(x)?;
        self.check_agent(y)?;
        if x == y {
            return Err(GameError::DiagonalCell(self.label(x).to_string()));
        }
        Ok(self.value(x, y))
    }

    pub fn set(&mut self, x: AgentId, y: AgentId, v: u64) -> Result<()> {
        self.check_agent(x)?;
        self.check_agent(y)?;
        if x == y {
            return Err(GameError::DiagonalCell(self.label(x).to_string()));
        }
        let n = self.n();
        self.values[y.index() * n + x.index()] = v;
        Ok(())
    }

    /// Checked increment; the engine uses this for the twin bump.
    pub(crate) fn increment(&mut self, x: AgentId, y: AgentId) -> Result<()> {
        let n = self.n();
        let slot = &mut self.values[y.index() * n + x.index()];
        *slot = slot.checked_add(1).ok_or_else(|| {
            GameError::ValueOverflow(
                self.labels[x.index()].clone(),
                self.labels[y.index()].clone(),
            )
        })?;
        Ok(())
    }

    pub(crate) fn decrement(&mut self, x: AgentId, y: AgentId) {
        let n = self.n();
        self.values[y.index() * n + x.index()] -= 1;
    }

    /// Maximum over the n-1 defined cells of column x.
    pub fn column_max(&self, x: AgentId) -> u64 {
        let n = self.n();
        (0..n)
            .filter(|&r| r != x.index())
            .map(|r| self.values[r * n + x.index()])
            .max()
            .expect("n >= 2")
    }

    /// Blue iff the cell value ties its column maximum.
    pub fn cell_color(&self, x: AgentId, y: AgentId) -> Result<CellColor> {
        let v = self.cell(x, y)?;
        Ok(if v == self.column_max(x) {
            CellColor::Blue
        } else {
            CellColor::White
        })
    }

    /// Receivers y whose cell (x, y) is blue, in ascending index order. The
    /// ascending order is the tie-break used by `FirstByIndex` and by branch
    /// enumeration. Never empty: the column max is attained somewhere.
    pub fn blue_successors(&self, x: AgentId) -> Vec<AgentId> {
        let n = self.n();
        let max = self.column_max(x);
        (0..n)
            .filter(|&r| r != x.index() && self.values[r * n + x.index()] == max)
            .map(AgentId)
            .collect()
    }

    /// Distance of cell (x, y) below its column max; zero iff blue.
    pub fn gap(&self, x: AgentId, y: AgentId) -> Result<u64> {
        let v = self.cell(x, y)?;
        Ok(self.column_max(x) - v)
    }

    /// Largest cell value in the whole matrix.
    pub fn max_value(&self) -> u64 {
        let n = self.n();
        let mut max = 0;
        for r in 0..n {
            for c in 0..n {
                if r != c {
                    max = max.max(self.values[r * n + c]);
                }
            }
        }
        max
    }
}
