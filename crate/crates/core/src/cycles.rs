//! Row cycles between two rows of a Latin square, and switching them.
//!
//! For rows `x < y`, the map sending column `c` to the column of row `x`
//! that holds `l[y][c]` is a permutation of the columns; its cycles are the
//! row cycles. Exchanging the two rows on one cycle (switching) yields
//! another Latin square. Switching an odd cycle flips column and symbol
//! parity and leaves row parity alone; switching an even cycle changes no
//! parity.

use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::enumerate::{Class, Enumerator};
use crate::error::{Error, Result};
use crate::square::LatinSquare;

/// A row cycle: two rows and the columns it occupies, in traversal order
/// starting from its smallest column. Indices are 0-based.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct RowCycle {
    pub rows: (usize, usize),
    pub columns: Vec<usize>,
}

impl RowCycle {
    pub fn len(&self) -> usize {
        self.columns.len()
    }

    pub fn is_empty(&self) -> bool {
        self.columns.is_empty()
    }

    pub fn is_odd(&self) -> bool {
        self.len() % 2 == 1
    }

    pub fn contains_column(&self, c: usize) -> bool {
        self.columns.contains(&c)
    }

    pub fn smallest_column(&self) -> usize {
        self.columns[0]
    }

    /// Switchable: odd and avoiding the first column.
    pub fn is_switchable(&self) -> bool {
        self.is_odd() && !self.contains_column(0)
    }
}

/// `rows=(x,y) cols=[c1,...,cl]`, 1-based.
impl fmt::Display for RowCycle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "rows=({},{}) cols=[", self.rows.0 + 1, self.rows.1 + 1)?;
        for (i, c) in self.columns.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{}", c + 1)?;
        }
        f.write_str("]")
    }
}

/// Multiset of cycle lengths, sorted in decreasing order.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Default)]
pub struct CycleStructure {
    pub lengths: Vec<usize>,
}

impl CycleStructure {
    pub fn total(&self) -> usize {
        self.lengths.iter().sum()
    }

    pub fn part_count(&self) -> usize {
        self.lengths.len()
    }

    pub fn largest(&self) -> Option<usize> {
        self.lengths.first().copied()
    }

    pub fn has_odd_part(&self) -> bool {
        self.lengths.iter().any(|l| l % 2 == 1)
    }
}

fn check_rows(l: &LatinSquare, x: usize, y: usize) -> Result<()> {
    let n = l.order();
    if x >= n || y >= n {
        return Err(Error::IndexOutOfRange { index: x.max(y), n });
    }
    if x >= y {
        return Err(Error::Invalid(alloc::format!(
            "row pair must satisfy x < y, got ({}, {})",
            x + 1,
            y + 1
        )));
    }
    Ok(())
}

/// The row cycles of rows `x < y`, ordered by smallest column. Together they
/// partition the columns.
pub fn row_cycles(l: &LatinSquare, x: usize, y: usize) -> Result<Vec<RowCycle>> {
    check_rows(l, x, y)?;
    Ok(row_cycles_unchecked(l, x, y))
}

pub(crate) fn row_cycles_unchecked(l: &LatinSquare, x: usize, y: usize) -> Vec<RowCycle> {
    let n = l.order();
    let (rx, ry) = (l.row(x), l.row(y));
    let mut pos_in_x = vec![0usize; n];
    for (c, &s) in rx.iter().enumerate() {
        pos_in_x[s as usize] = c;
    }
    let mut seen = vec![false; n];
    let mut out = Vec::new();
    for start in 0..n {
        if seen[start] {
            continue;
        }
        let mut columns = Vec::new();
        let mut c = start;
        while !seen[c] {
            seen[c] = true;
            columns.push(c);
            c = pos_in_x[ry[c] as usize];
        }
        out.push(RowCycle {
            rows: (x, y),
            columns,
        });
    }
    out
}

/// Lengths of the cycles of rows `x < y` that avoid `excluded`. The excluded
/// columns must be a union of whole cycles.
pub fn cycle_structure(
    l: &LatinSquare,
    x: usize,
    y: usize,
    excluded: &[usize],
) -> Result<CycleStructure> {
    check_rows(l, x, y)?;
    let n = l.order();
    let mut is_excluded = vec![false; n];
    for &c in excluded {
        if c >= n {
            return Err(Error::IndexOutOfRange { index: c, n });
        }
        is_excluded[c] = true;
    }
    let mut lengths = Vec::new();
    for cycle in row_cycles_unchecked(l, x, y) {
        let hit = cycle.columns.iter().filter(|&&c| is_excluded[c]).count();
        if hit == 0 {
            lengths.push(cycle.len());
        } else if hit != cycle.len() {
            return Err(Error::Invalid(alloc::format!(
                "excluded columns split the cycle {cycle}"
            )));
        }
    }
    lengths.sort_unstable_by(|a, b| b.cmp(a));
    Ok(CycleStructure { lengths })
}

/// Exchanges the two rows of `cycle` on its columns.
pub fn switch(l: &LatinSquare, cycle: &RowCycle) -> Result<LatinSquare> {
    let (x, y) = cycle.rows;
    check_rows(l, x, y)?;
    let mut wanted = cycle.columns.clone();
    wanted.sort_unstable();
    let found = row_cycles_unchecked(l, x, y).into_iter().any(|c| {
        let mut cols = c.columns;
        cols.sort_unstable();
        cols == wanted
    });
    if !found {
        return Err(Error::Invalid(alloc::format!(
            "{cycle} is not a row cycle of the square"
        )));
    }
    Ok(switch_unchecked(l, cycle))
}

pub(crate) fn switch_unchecked(l: &LatinSquare, cycle: &RowCycle) -> LatinSquare {
    let mut out = l.clone();
    out.swap_rows_on(cycle.rows.0, cycle.rows.1, &cycle.columns);
    out
}

/// The switchable cycle of rows `x < y` with the smallest column, if any.
pub fn find_switchable_odd(l: &LatinSquare, x: usize, y: usize) -> Result<Option<RowCycle>> {
    check_rows(l, x, y)?;
    Ok(find_switchable_unchecked(l, x, y))
}

fn find_switchable_unchecked(l: &LatinSquare, x: usize, y: usize) -> Option<RowCycle> {
    row_cycles_unchecked(l, x, y)
        .into_iter()
        .find(RowCycle::is_switchable)
}

fn check_reduced_domain(l: &LatinSquare) -> Result<()> {
    if l.order() <= 2 {
        return Err(Error::Invalid(alloc::format!(
            "involution needs order > 2, got {}",
            l.order()
        )));
    }
    if !l.is_reduced() {
        return Err(Error::Invalid("square is not reduced".into()));
    }
    Ok(())
}

/// Switches the switchable cycle of the last two rows, if there is one.
///
/// On its domain this is an involution on reduced squares that keeps row
/// parity and flips column and symbol parity.
pub fn involution(l: &LatinSquare) -> Result<Option<LatinSquare>> {
    check_reduced_domain(l)?;
    let n = l.order();
    Ok(find_switchable_unchecked(l, n - 2, n - 1).map(|c| switch_unchecked(l, &c)))
}

/// Row pairs scanned by [`extended_involution`]: the last two rows, then the
/// two above them, and so on, never reaching row 0.
pub fn scanned_row_pairs(n: usize) -> Vec<(usize, usize)> {
    let mut pairs = Vec::new();
    let mut y = n;
    while y >= 3 {
        pairs.push((y - 2, y - 1));
        y -= 2;
    }
    pairs
}

/// The cycle [`extended_involution`] would switch.
pub fn extended_involution_cycle(l: &LatinSquare) -> Result<Option<RowCycle>> {
    check_reduced_domain(l)?;
    Ok(scanned_row_pairs(l.order())
        .into_iter()
        .find_map(|(x, y)| find_switchable_unchecked(l, x, y)))
}

/// Like [`involution`], but falls back to earlier disjoint row pairs when
/// the last two rows have no switchable cycle.
pub fn extended_involution(l: &LatinSquare) -> Result<Option<LatinSquare>> {
    Ok(extended_involution_cycle(l)?.map(|c| switch_unchecked(l, &c)))
}

/// Connected-component summary of the switching graph on reduced squares.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct SwitchingGraph {
    pub n: usize,
    pub vertices: usize,
    pub edges: usize,
    /// Ordered by the smallest (lexicographically first) member.
    pub components: Vec<Component>,
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct Component {
    pub size: usize,
    /// `None` if the component mixes row parities.
    pub row_parity: Option<u8>,
}

pub const SWITCHING_GRAPH_MAX_ORDER: usize = 6;

/// Builds the graph whose vertices are the reduced squares of order `n` and
/// whose edges switch any row cycle avoiding row 0 and column 0.
pub fn switching_graph(n: usize) -> Result<SwitchingGraph> {
    if n > SWITCHING_GRAPH_MAX_ORDER {
        return Err(Error::SizeGuard {
            n,
            limit: SWITCHING_GRAPH_MAX_ORDER,
            what: "the switching graph",
        });
    }
    if n == 0 {
        return Err(Error::Invalid("order must be positive".into()));
    }
    // The enumerator is lexicographic, so the vertex list is sorted.
    let vertices: Vec<LatinSquare> = Enumerator::new(n, Class::Reduced)?.collect();
    let index_of = |sq: &LatinSquare| {
        vertices
            .binary_search(sq)
            .expect("switching preserves reducedness")
    };
    let mut dsu = DisjointSets::new(vertices.len());
    let mut directed_edges = 0usize;
    for (v, sq) in vertices.iter().enumerate() {
        for x in 1..n {
            for y in x + 1..n {
                for cycle in row_cycles_unchecked(sq, x, y) {
                    if cycle.contains_column(0) {
                        continue;
                    }
                    let w = index_of(&switch_unchecked(sq, &cycle));
                    directed_edges += 1;
                    dsu.union(v, w);
                }
            }
        }
    }

    let mut slot = vec![usize::MAX; vertices.len()];
    let mut components: Vec<Component> = Vec::new();
    for (v, sq) in vertices.iter().enumerate() {
        let root = dsu.find(v);
        let parity = sq.parity_triple().row;
        if slot[root] == usize::MAX {
            slot[root] = components.len();
            components.push(Component {
                size: 0,
                row_parity: Some(parity),
            });
        }
        let comp = &mut components[slot[root]];
        comp.size += 1;
        if comp.row_parity != Some(parity) {
            comp.row_parity = None;
        }
    }
    Ok(SwitchingGraph {
        n,
        vertices: vertices.len(),
        edges: directed_edges / 2,
        components,
    })
}

struct DisjointSets {
    parent: Vec<usize>,
}

impl DisjointSets {
    fn new(n: usize) -> Self {
        Self {
            parent: (0..n).collect(),
        }
    }

    fn find(&mut self, mut v: usize) -> usize {
        while self.parent[v] != v {
            self.parent[v] = self.parent[self.parent[v]];
            v = self.parent[v];
        }
        v
    }

    fn union(&mut self, a: usize, b: usize) {
        let (a, b) = (self.find(a), self.find(b));
        if a != b {
            self.parent[a.max(b)] = a.min(b);
        }
    }
}
