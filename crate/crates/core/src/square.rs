use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use bitflags::bitflags;

use crate::error::{Error, Result};
use crate::perm::{self, Permutation};

/// Largest supported order; symbols are stored as `u8`.
pub const MAX_ORDER: usize = 255;

/// A Latin square of order `n` over the symbols `0..n`, stored row-major.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct LatinSquare {
    n: usize,
    cells: Vec<u8>,
}

impl LatinSquare {
    /// Validates a grid of 1-based symbols (`1..=n`).
    ///
    /// Violations are reported for the first offending cell in row-major
    /// order.
    pub fn validate(grid: &[Vec<usize>]) -> Result<Self> {
        let n = grid.len();
        check_shape(n, grid.iter().map(Vec::len))?;
        check_order(n)?;
        scan_latin(n, grid.iter().flatten().map(|&s| (s, s.wrapping_sub(1))))?;
        let cells = grid.iter().flatten().map(|&s| (s - 1) as u8).collect();
        Ok(Self { n, cells })
    }

    /// Builds a square from 0-based rows.
    pub fn from_rows(rows: &[Vec<u8>]) -> Result<Self> {
        let n = rows.len();
        check_shape(n, rows.iter().map(Vec::len))?;
        Self::from_cells(n, rows.concat())
    }

    /// Builds a square from 0-based symbols in row-major order.
    pub fn from_cells(n: usize, cells: Vec<u8>) -> Result<Self> {
        check_order(n)?;
        if cells.len() != n * n {
            return Err(Error::Invalid(alloc::format!(
                "expected {} cells, got {}",
                n * n,
                cells.len()
            )));
        }
        scan_latin(n, cells.iter().map(|&s| (s as usize + 1, s as usize)))?;
        Ok(Self { n, cells })
    }

    pub(crate) fn from_cells_unchecked(n: usize, cells: Vec<u8>) -> Self {
        debug_assert!(Self::from_cells(n, cells.clone()).is_ok());
        Self { n, cells }
    }

    /// The cyclic square `l[r][c] = (r + c) mod n`; reduced for every `n`.
    pub fn cyclic(n: usize) -> Self {
        assert!((1..=MAX_ORDER).contains(&n), "order out of range");
        let cells = (0..n)
            .flat_map(|r| (0..n).map(move |c| ((r + c) % n) as u8))
            .collect();
        Self { n, cells }
    }

    pub fn order(&self) -> usize {
        self.n
    }

    pub fn get(&self, r: usize, c: usize) -> u8 {
        self.cells[r * self.n + c]
    }

    pub fn cells(&self) -> &[u8] {
        &self.cells
    }

    pub fn into_cells(self) -> Vec<u8> {
        self.cells
    }

    pub fn row(&self, r: usize) -> &[u8] {
        &self.cells[r * self.n..(r + 1) * self.n]
    }

    pub fn rows(&self) -> impl Iterator<Item = &[u8]> {
        self.cells.chunks_exact(self.n)
    }

    /// Rows as 1-based symbols.
    pub fn to_one_based(&self) -> Vec<Vec<usize>> {
        self.rows()
            .map(|row| row.iter().map(|&s| s as usize + 1).collect())
            .collect()
    }

    fn check_index(&self, i: usize) -> Result<()> {
        if i < self.n {
            Ok(())
        } else {
            Err(Error::IndexOutOfRange {
                index: i,
                n: self.n,
            })
        }
    }

    /// `j ↦ l[i][j]`.
    pub fn row_perm(&self, i: usize) -> Result<Permutation> {
        self.check_index(i)?;
        Ok(Permutation::from_images_unchecked(self.row(i).to_vec()))
    }

    /// `i ↦ l[i][j]`.
    pub fn col_perm(&self, j: usize) -> Result<Permutation> {
        self.check_index(j)?;
        Ok(Permutation::from_images_unchecked(
            (0..self.n).map(|i| self.get(i, j)).collect(),
        ))
    }

    /// `i ↦` the column holding symbol `s` in row `i`.
    pub fn sym_perm(&self, s: usize) -> Result<Permutation> {
        self.check_index(s)?;
        let images = self
            .rows()
            .map(|row| row.iter().position(|&v| v as usize == s).unwrap() as u8)
            .collect();
        Ok(Permutation::from_images_unchecked(images))
    }

    pub fn parity_triple(&self) -> ParityTriple {
        parity_of_cells(self.n, &self.cells)
    }

    pub fn is_normalised(&self) -> bool {
        self.row(0)
            .iter()
            .enumerate()
            .all(|(j, &v)| v as usize == j)
    }

    pub fn is_reduced(&self) -> bool {
        self.is_normalised() && (0..self.n).all(|i| self.get(i, 0) as usize == i)
    }

    pub fn is_unipotent(&self) -> bool {
        let d = self.get(0, 0);
        (0..self.n).all(|i| self.get(i, i) == d)
    }

    pub fn is_normalised_unipotent(&self) -> bool {
        self.is_normalised() && self.is_unipotent()
    }

    pub fn classify(&self) -> Properties {
        let mut props = self.parity_triple().properties();
        props.set(Properties::REDUCED, self.is_reduced());
        props.set(Properties::NORMALISED, self.is_normalised());
        props.set(
            Properties::NORMALISED_UNIPOTENT,
            self.is_normalised_unipotent(),
        );
        props
    }

    /// Relabels symbols so the first column reads `0..n`, then permutes
    /// columns so the first row does too. Column 0 never moves.
    pub fn reduce(&self) -> LatinSquare {
        let n = self.n;
        let mut relabel = vec![0u8; n];
        for i in 0..n {
            relabel[self.get(i, 0) as usize] = i as u8;
        }
        // After relabelling, column j lands at the position named by its
        // first-row entry.
        let mut target = vec![0usize; n];
        for j in 0..n {
            target[j] = relabel[self.get(0, j) as usize] as usize;
        }
        let mut cells = vec![0u8; n * n];
        for i in 0..n {
            for j in 0..n {
                cells[i * n + target[j]] = relabel[self.get(i, j) as usize];
            }
        }
        Self::from_cells_unchecked(n, cells)
    }

    /// Replaces each row by its inverse permutation. Exchanges reduced and
    /// normalised unipotent squares, and swaps column and symbol parity.
    pub fn invert_rows(&self) -> LatinSquare {
        let n = self.n;
        let mut cells = Vec::with_capacity(n * n);
        for row in self.rows() {
            cells.extend(perm::inverse_of(row));
        }
        Self::from_cells_unchecked(n, cells)
    }

    /// Swaps the contents of rows `x` and `y` on the given columns. The caller
    /// guarantees the result is Latin.
    pub(crate) fn swap_rows_on(&mut self, x: usize, y: usize, columns: &[usize]) {
        for &c in columns {
            self.cells.swap(x * self.n + c, y * self.n + c);
        }
    }
}

impl fmt::Debug for LatinSquare {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(self.to_one_based()).finish()
    }
}

fn check_order(n: usize) -> Result<()> {
    if n == 0 || n > MAX_ORDER {
        return Err(Error::Invalid(alloc::format!(
            "order must be in 1..={MAX_ORDER}, got {n}"
        )));
    }
    Ok(())
}

/// Row-major scan over `(raw, zero_based)` symbols, reporting the first
/// violation.
fn scan_latin(n: usize, symbols: impl Iterator<Item = (usize, usize)>) -> Result<()> {
    let mut row_seen = vec![false; n * n];
    let mut col_seen = vec![false; n * n];
    for (k, (raw, s)) in symbols.enumerate() {
        let (r, c) = (k / n, k % n);
        if s >= n {
            return Err(Error::SymbolOutOfRange {
                row: r,
                col: c,
                symbol: raw,
                n,
            });
        }
        if row_seen[r * n + s] {
            return Err(Error::DuplicateInRow { row: r, symbol: s });
        }
        if col_seen[c * n + s] {
            return Err(Error::DuplicateInColumn { col: c, symbol: s });
        }
        row_seen[r * n + s] = true;
        col_seen[c * n + s] = true;
    }
    Ok(())
}

fn check_shape(n: usize, lens: impl Iterator<Item = usize>) -> Result<()> {
    if n == 0 {
        return Err(Error::Invalid("empty grid".into()));
    }
    for (row, len) in lens.enumerate() {
        if len != n {
            return Err(Error::NotSquare {
                row,
                len,
                expected: n,
            });
        }
    }
    Ok(())
}

/// Parity triple of a valid row-major grid with 0-based symbols.
pub fn parity_of_cells(n: usize, cells: &[u8]) -> ParityTriple {
    let mut row = 0u8;
    for r in 0..n {
        row ^= perm::sign_of(&cells[r * n..(r + 1) * n]);
    }
    let mut col = 0u8;
    let mut buf = [0u8; MAX_ORDER];
    for c in 0..n {
        for r in 0..n {
            buf[r] = cells[r * n + c];
        }
        col ^= perm::sign_of(&buf[..n]);
    }
    // sym[s][r] = column of symbol s in row r
    let mut sym_images = vec![0u8; n * n];
    for r in 0..n {
        for c in 0..n {
            sym_images[cells[r * n + c] as usize * n + r] = c as u8;
        }
    }
    let mut sym = 0u8;
    for s in 0..n {
        sym ^= perm::sign_of(&sym_images[s * n..(s + 1) * n]);
    }
    ParityTriple { row, col, sym }
}

/// `(π_row, π_col, π_sym)`, each a bit.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct ParityTriple {
    pub row: u8,
    pub col: u8,
    pub sym: u8,
}

impl ParityTriple {
    pub const fn new(row: u8, col: u8, sym: u8) -> Self {
        Self { row, col, sym }
    }

    /// All eight triples in order `000, 001, …, 111`.
    pub fn all() -> impl Iterator<Item = ParityTriple> {
        (0..8).map(Self::from_index)
    }

    /// Index `4·row + 2·col + sym`.
    pub const fn index(self) -> usize {
        (self.row as usize) << 2 | (self.col as usize) << 1 | self.sym as usize
    }

    pub const fn from_index(i: usize) -> Self {
        Self {
            row: ((i >> 2) & 1) as u8,
            col: ((i >> 1) & 1) as u8,
            sym: (i & 1) as u8,
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        let b = s.as_bytes();
        if b.len() != 3 || !b.iter().all(|c| matches!(c, b'0' | b'1')) {
            return None;
        }
        Some(Self::new(b[0] - b'0', b[1] - b'0', b[2] - b'0'))
    }

    /// Even square: `π_row + π_col ≡ 0`.
    pub const fn is_even(self) -> bool {
        self.row ^ self.col == 0
    }

    pub const fn sum(self) -> u8 {
        self.row ^ self.col ^ self.sym
    }

    /// Swaps column and symbol parity, the effect of [`LatinSquare::invert_rows`].
    pub const fn swap_col_sym(self) -> Self {
        Self::new(self.row, self.sym, self.col)
    }

    /// Flips column and symbol parity, the effect of switching an odd row cycle.
    pub const fn flip_col_sym(self) -> Self {
        Self::new(self.row, self.col ^ 1, self.sym ^ 1)
    }

    /// Whether this triple can occur for a reduced square of order `n`:
    /// the bits must sum to `n(n-1)/2` mod 2.
    pub const fn allowed_for_reduced(self, n: usize) -> bool {
        self.sum() as usize == total_parity(n)
    }

    pub fn properties(self) -> Properties {
        let mut p = Properties::empty();
        p.insert(if self.is_even() {
            Properties::ELS
        } else {
            Properties::OLS
        });
        p.insert(if self.row == 0 {
            Properties::RELS
        } else {
            Properties::ROLS
        });
        p.insert(if self.col == 0 {
            Properties::CELS
        } else {
            Properties::COLS
        });
        p.insert(if self.sym == 0 {
            Properties::SELS
        } else {
            Properties::SOLS
        });
        p
    }
}

impl fmt::Display for ParityTriple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}{}", self.row, self.col, self.sym)
    }
}

/// `n(n-1)/2 mod 2`: 0 for `n ≡ 0, 1 (mod 4)`, 1 for `n ≡ 2, 3`.
pub const fn total_parity(n: usize) -> usize {
    (n * n.saturating_sub(1) / 2) & 1
}

bitflags! {
    /// Parity properties and structural predicates of a square.
    #[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
    pub struct Properties: u16 {
        const ELS = 1 << 0;
        const OLS = 1 << 1;
        const RELS = 1 << 2;
        const ROLS = 1 << 3;
        const CELS = 1 << 4;
        const COLS = 1 << 5;
        const SELS = 1 << 6;
        const SOLS = 1 << 7;
        const REDUCED = 1 << 8;
        const NORMALISED = 1 << 9;
        const NORMALISED_UNIPOTENT = 1 << 10;
    }
}

impl Properties {
    /// The eight parity properties with their conventional names.
    pub const PARITY: [(&'static str, Properties); 8] = [
        ("ELS", Properties::ELS),
        ("OLS", Properties::OLS),
        ("RELS", Properties::RELS),
        ("ROLS", Properties::ROLS),
        ("CELS", Properties::CELS),
        ("COLS", Properties::COLS),
        ("SELS", Properties::SELS),
        ("SOLS", Properties::SOLS),
    ];
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::string::ToString;
    use alloc::vec;

    fn sq(rows: &[&[usize]]) -> LatinSquare {
        LatinSquare::validate(&rows.iter().map(|r| r.to_vec()).collect::<Vec<_>>()).unwrap()
    }

    #[test]
    fn perms_read_off_the_grid() {
        let l = sq(&[&[1, 2], &[2, 1]]);
        assert_eq!(l.row_perm(1).unwrap().images(), &[1, 0]);
        let c = LatinSquare::cyclic(3);
        assert_eq!(c.sym_perm(0).unwrap().to_string(), "(1,3,2)");
        assert!(c.col_perm(0).unwrap().is_identity());
        assert!(c.row_perm(3).is_err());
    }

    #[test]
    fn parity_examples() {
        assert_eq!(LatinSquare::cyclic(1).parity_triple().to_string(), "000");
        assert_eq!(sq(&[&[1, 2], &[2, 1]]).parity_triple().to_string(), "111");
        assert_eq!(LatinSquare::cyclic(3).parity_triple().to_string(), "001");
    }

    #[test]
    fn classify_examples() {
        let p = sq(&[&[1, 2], &[2, 1]]).classify();
        assert_eq!(
            p,
            Properties::ELS
                | Properties::ROLS
                | Properties::COLS
                | Properties::SOLS
                | Properties::REDUCED
                | Properties::NORMALISED
                | Properties::NORMALISED_UNIPOTENT
        );
        let p = LatinSquare::cyclic(1).classify();
        assert!(p.contains(
            Properties::ELS
                | Properties::RELS
                | Properties::CELS
                | Properties::SELS
                | Properties::REDUCED
                | Properties::NORMALISED_UNIPOTENT
        ));
        let p = LatinSquare::cyclic(3).classify();
        assert!(
            p.contains(Properties::ELS | Properties::RELS | Properties::CELS | Properties::SOLS)
        );
        assert!(p.contains(Properties::REDUCED));
        assert!(!p.contains(Properties::NORMALISED_UNIPOTENT));
    }

    #[test]
    fn validate_diagnostics() {
        assert!(LatinSquare::validate(&[vec![1, 2], vec![2, 1]]).is_ok());
        let e = LatinSquare::validate(&[vec![1, 2], vec![1, 2]]).unwrap_err();
        assert_eq!(e, Error::DuplicateInColumn { col: 0, symbol: 0 });
        assert!(e.to_string().starts_with("column 1 duplicate"));
        let e = LatinSquare::validate(&[vec![1, 3], vec![3, 1]]).unwrap_err();
        assert!(e.to_string().starts_with("symbol out of range"));
        let e = LatinSquare::validate(&[vec![1, 2], vec![2]]).unwrap_err();
        assert!(matches!(e, Error::NotSquare { row: 1, .. }));
        let e = LatinSquare::validate(&[vec![1, 1], vec![2, 2]]).unwrap_err();
        assert_eq!(e, Error::DuplicateInRow { row: 0, symbol: 0 });
        assert!(LatinSquare::validate(&[]).is_err());
    }

    #[test]
    fn reduce_examples() {
        let c = LatinSquare::cyclic(4);
        assert_eq!(c.reduce(), c);
        let l = sq(&[&[2, 1], &[1, 2]]);
        assert_eq!(l.reduce(), sq(&[&[1, 2], &[2, 1]]));
        let l = sq(&[&[3, 1, 2], &[1, 2, 3], &[2, 3, 1]]);
        let r = l.reduce();
        assert!(r.is_reduced());
        assert_eq!(r.reduce(), r);
    }

    #[test]
    fn invert_rows_examples() {
        let l = sq(&[&[1, 2], &[2, 1]]);
        assert_eq!(l.invert_rows(), l);
        let c = LatinSquare::cyclic(3);
        let inv = c.invert_rows();
        assert_eq!(inv, sq(&[&[1, 2, 3], &[3, 1, 2], &[2, 3, 1]]));
        assert!(inv.is_normalised_unipotent());
        assert_eq!(inv.invert_rows(), c);
        assert_eq!(inv.parity_triple(), c.parity_triple().swap_col_sym());
    }

    #[test]
    fn triple_indexing() {
        for t in ParityTriple::all() {
            assert_eq!(ParityTriple::from_index(t.index()), t);
            assert_eq!(ParityTriple::parse(&t.to_string()), Some(t));
        }
        assert_eq!(ParityTriple::parse("012"), None);
        let allowed: Vec<_> = ParityTriple::all()
            .filter(|t| t.allowed_for_reduced(4))
            .map(|t| t.to_string())
            .collect();
        assert_eq!(allowed, ["000", "011", "101", "110"]);
        let allowed: Vec<_> = ParityTriple::all()
            .filter(|t| t.allowed_for_reduced(6))
            .map(|t| t.to_string())
            .collect();
        assert_eq!(allowed, ["001", "010", "100", "111"]);
    }
}
