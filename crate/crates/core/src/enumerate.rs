//! Exhaustive enumeration of small Latin-square classes and parity censuses.
//!
//! [`Enumerator`] is a bitmask backtracker that yields squares in
//! lexicographic row-major order. [`reference::enumerate`] is a deliberately
//! naive backtracker over the same order; the two are compared in tests.

use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use crate::error::{Error, Result};
use crate::perm;
use crate::square::{parity_of_cells, total_parity, LatinSquare, ParityTriple, Properties};

/// A class of Latin squares.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub enum Class {
    All,
    /// First row and first column in natural order.
    Reduced,
    /// First row in natural order and constant diagonal.
    NormalisedUnipotent,
}

impl Class {
    pub const ALL: [Class; 3] = [Class::All, Class::Reduced, Class::NormalisedUnipotent];

    pub fn name(self) -> &'static str {
        match self {
            Class::All => "all",
            Class::Reduced => "reduced",
            Class::NormalisedUnipotent => "normalised_unipotent",
        }
    }

    /// Largest order enumerated for this class.
    pub fn max_order(self) -> usize {
        match self {
            Class::All => 5,
            Class::Reduced | Class::NormalisedUnipotent => 7,
        }
    }

    /// The forced symbol of cell `(r, c)`, if any.
    pub fn fixed(self, r: usize, c: usize) -> Option<u8> {
        match self {
            Class::All => None,
            Class::Reduced if r == 0 => Some(c as u8),
            Class::Reduced if c == 0 => Some(r as u8),
            Class::NormalisedUnipotent if r == 0 => Some(c as u8),
            Class::NormalisedUnipotent if r == c => Some(0),
            _ => None,
        }
    }

    pub fn contains(self, l: &LatinSquare) -> bool {
        match self {
            Class::All => true,
            Class::Reduced => l.is_reduced(),
            Class::NormalisedUnipotent => l.is_normalised_unipotent(),
        }
    }

    /// First row with free cells; enumeration shards on its contents.
    fn shard_row(self) -> usize {
        match self {
            Class::All => 0,
            Class::Reduced | Class::NormalisedUnipotent => 1,
        }
    }

    pub fn check_order(self, n: usize) -> Result<()> {
        if n == 0 {
            return Err(Error::Invalid("order must be positive".into()));
        }
        if n > self.max_order() {
            return Err(Error::SizeGuard {
                n,
                limit: self.max_order(),
                what: match self {
                    Class::All => "enumerating all Latin squares",
                    Class::Reduced => "enumerating reduced Latin squares",
                    Class::NormalisedUnipotent => "enumerating normalised unipotent Latin squares",
                },
            });
        }
        Ok(())
    }
}

impl fmt::Display for Class {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Class {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "all" | "L" => Ok(Class::All),
            "reduced" | "R" => Ok(Class::Reduced),
            "normalised_unipotent" | "normalized_unipotent" | "unipotent" | "U" => {
                Ok(Class::NormalisedUnipotent)
            }
            other => Err(Error::Invalid(format!("unknown class {other:?}"))),
        }
    }
}

/// Bitmask backtracking over the free cells of a class, in lexicographic
/// row-major order.
pub struct Enumerator {
    n: usize,
    grid: Vec<u8>,
    row_used: Vec<u32>,
    col_used: Vec<u32>,
    free: Vec<usize>,
    /// Per free cell: 1 + the symbol currently placed, 0 if none.
    tried: Vec<u8>,
    depth: usize,
    state: State,
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum State {
    Fresh,
    AtSolution,
    Done,
}

impl Enumerator {
    pub fn new(n: usize, class: Class) -> Result<Self> {
        class.check_order(n)?;
        Ok(Self::with_fixed(n, class, None).unwrap_or_else(|| Self::empty(n)))
    }

    /// Enumerates only the squares whose shard row equals `shard`. The
    /// streams of [`shards`] concatenated in order equal the full stream.
    pub fn with_shard(n: usize, class: Class, shard: &[u8]) -> Result<Self> {
        class.check_order(n)?;
        if shard.len() != n {
            return Err(Error::Invalid(format!(
                "shard row has {} entries, expected {n}",
                shard.len()
            )));
        }
        Ok(Self::with_fixed(n, class, Some(shard)).unwrap_or_else(|| Self::empty(n)))
    }

    fn empty(n: usize) -> Self {
        Self {
            n,
            grid: Vec::new(),
            row_used: Vec::new(),
            col_used: Vec::new(),
            free: Vec::new(),
            tried: Vec::new(),
            depth: 0,
            state: State::Done,
        }
    }

    /// `None` if the fixed cells already conflict.
    fn with_fixed(n: usize, class: Class, shard: Option<&[u8]>) -> Option<Self> {
        let mut grid = vec![0u8; n * n];
        let mut row_used = vec![0u32; n];
        let mut col_used = vec![0u32; n];
        let mut free = Vec::new();
        let shard_row = class.shard_row();
        for r in 0..n {
            for c in 0..n {
                let fixed = match (class.fixed(r, c), shard) {
                    (Some(s), Some(row)) if r == shard_row && row[c] != s => return None,
                    (Some(s), _) => Some(s),
                    (None, Some(row)) if r == shard_row => Some(row[c]),
                    (None, _) => None,
                };
                match fixed {
                    Some(s) => {
                        let bit = 1u32 << s;
                        if s as usize >= n || row_used[r] & bit != 0 || col_used[c] & bit != 0 {
                            return None;
                        }
                        grid[r * n + c] = s;
                        row_used[r] |= bit;
                        col_used[c] |= bit;
                    }
                    None => free.push(r * n + c),
                }
            }
        }
        let tried = vec![0u8; free.len()];
        Some(Self {
            n,
            grid,
            row_used,
            col_used,
            free,
            tried,
            depth: 0,
            state: State::Fresh,
        })
    }

    pub fn order(&self) -> usize {
        self.n
    }

    /// Moves to the next square; `false` once the class is exhausted.
    pub fn advance(&mut self) -> bool {
        match self.state {
            State::Done => return false,
            State::Fresh => {
                self.state = State::AtSolution;
                if self.free.is_empty() {
                    return true;
                }
            }
            State::AtSolution => {
                if self.free.is_empty() {
                    self.state = State::Done;
                    return false;
                }
                self.depth -= 1;
            }
        }
        let n = self.n as u8;
        loop {
            let cell = self.free[self.depth];
            let (r, c) = (cell / self.n, cell % self.n);
            let prev = self.tried[self.depth];
            if prev > 0 {
                let bit = 1u32 << (prev - 1);
                self.row_used[r] &= !bit;
                self.col_used[c] &= !bit;
            }
            let used = self.row_used[r] | self.col_used[c];
            let next = (prev..n).find(|&s| used & (1u32 << s) == 0);
            match next {
                Some(s) => {
                    let bit = 1u32 << s;
                    self.row_used[r] |= bit;
                    self.col_used[c] |= bit;
                    self.grid[cell] = s;
                    self.tried[self.depth] = s + 1;
                    self.depth += 1;
                    if self.depth == self.free.len() {
                        return true;
                    }
                }
                None => {
                    self.tried[self.depth] = 0;
                    if self.depth == 0 {
                        self.state = State::Done;
                        return false;
                    }
                    self.depth -= 1;
                }
            }
        }
    }

    /// The current square's cells; meaningful after `advance` returned `true`.
    pub fn grid(&self) -> &[u8] {
        &self.grid
    }
}

impl Iterator for Enumerator {
    type Item = LatinSquare;

    fn next(&mut self) -> Option<LatinSquare> {
        self.advance()
            .then(|| LatinSquare::from_cells_unchecked(self.n, self.grid.clone()))
    }
}

/// Candidate contents of the shard row, in lexicographic order. Some shards
/// may turn out empty.
pub fn shards(n: usize, class: Class) -> Result<Vec<Vec<u8>>> {
    class.check_order(n)?;
    let shard_row = class.shard_row();
    if shard_row >= n {
        return Ok(vec![(0..n as u8).collect()]);
    }
    let mut col_used = vec![0u32; n];
    for r in 0..n {
        if r == shard_row {
            continue;
        }
        for (c, used) in col_used.iter_mut().enumerate() {
            if let Some(s) = class.fixed(r, c) {
                *used |= 1 << s;
            }
        }
    }
    Ok(perm::all_permutations(n)
        .filter(|p| {
            p.iter().enumerate().all(|(c, &s)| {
                class.fixed(shard_row, c).is_none_or(|f| f == s) && col_used[c] & (1 << s) == 0
            })
        })
        .collect())
}

/// Plain backtracking with linear membership scans; the oracle for
/// [`Enumerator`].
pub mod reference {
    use super::*;

    pub fn enumerate(n: usize, class: Class) -> Result<Vec<LatinSquare>> {
        class.check_order(n)?;
        let mut grid: Vec<Vec<u8>> = Vec::new();
        let mut out = Vec::new();
        fill(n, class, 0, &mut grid, &mut out);
        Ok(out)
    }

    fn fill(n: usize, class: Class, k: usize, grid: &mut Vec<Vec<u8>>, out: &mut Vec<LatinSquare>) {
        if k == n * n {
            out.push(LatinSquare::from_rows(grid).expect("reference produced a non-Latin grid"));
            return;
        }
        let (r, c) = (k / n, k % n);
        if c == 0 {
            grid.push(Vec::new());
        }
        for s in 0..n as u8 {
            if class.fixed(r, c).is_some_and(|f| f != s) {
                continue;
            }
            if grid[r].contains(&s) {
                continue;
            }
            if grid[..r].iter().any(|row| row[c] == s) {
                continue;
            }
            grid[r].push(s);
            fill(n, class, k + 1, grid, out);
            grid[r].pop();
        }
        if c == 0 {
            grid.pop();
        }
    }
}

/// Counts of a class keyed by parity triple.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct ParityTally {
    pub n: usize,
    pub class: Class,
    /// Indexed by [`ParityTriple::index`].
    pub counts: [u64; 8],
}

impl ParityTally {
    pub fn new(n: usize, class: Class) -> Self {
        Self {
            n,
            class,
            counts: [0; 8],
        }
    }

    pub fn record(&mut self, t: ParityTriple) {
        self.counts[t.index()] += 1;
    }

    pub fn get(&self, t: ParityTriple) -> u64 {
        self.counts[t.index()]
    }

    pub fn total(&self) -> u64 {
        self.counts.iter().sum()
    }

    /// Number of squares with a parity property (`ELS`, `RELS`, …).
    pub fn property(&self, p: Properties) -> u64 {
        ParityTriple::all()
            .filter(|t| t.properties().contains(p))
            .map(|t| self.get(t))
            .sum()
    }

    /// `#even − #odd`.
    pub fn alon_tarsi(&self) -> i128 {
        self.property(Properties::ELS) as i128 - self.property(Properties::OLS) as i128
    }

    pub fn merge(&mut self, other: &ParityTally) {
        assert_eq!(
            (self.n, self.class),
            (other.n, other.class),
            "merging unrelated tallies"
        );
        for (a, b) in self.counts.iter_mut().zip(other.counts) {
            *a += b;
        }
    }
}

fn tally_enumerator(n: usize, class: Class, mut en: Enumerator) -> ParityTally {
    let mut tally = ParityTally::new(n, class);
    while en.advance() {
        tally.record(parity_of_cells(n, en.grid()));
    }
    tally
}

pub fn tally(n: usize, class: Class) -> Result<ParityTally> {
    Ok(tally_enumerator(n, class, Enumerator::new(n, class)?))
}

pub fn tally_shard(n: usize, class: Class, shard: &[u8]) -> Result<ParityTally> {
    Ok(tally_enumerator(
        n,
        class,
        Enumerator::with_shard(n, class, shard)?,
    ))
}

/// `#ELS − #OLS` over a class.
pub fn alon_tarsi(n: usize, class: Class) -> Result<i128> {
    Ok(tally(n, class)?.alon_tarsi())
}

/// One checked equality between two counting expressions.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Identity {
    pub lhs: String,
    pub rhs: String,
    pub lhs_value: u64,
    pub rhs_value: u64,
}

impl Identity {
    pub fn passes(&self) -> bool {
        self.lhs_value == self.rhs_value
    }
}

/// `IDENTITY <lhs> = <rhs> : <lhs-val> <rhs-val> PASS|FAIL`
impl fmt::Display for Identity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "IDENTITY {} = {} : {} {} {}",
            self.lhs,
            self.rhs,
            self.lhs_value,
            self.rhs_value,
            if self.passes() { "PASS" } else { "FAIL" }
        )
    }
}

/// A counting term: a tally restricted to a property or parity triple,
/// optionally scaled.
#[derive(Clone, Copy)]
enum Term {
    Prop(char, &'static str),
    Triple(char, &'static str),
}

struct Tallies<'a> {
    all: Option<&'a ParityTally>,
    reduced: &'a ParityTally,
    unipotent: &'a ParityTally,
}

impl Tallies<'_> {
    fn pick(&self, class: char) -> &ParityTally {
        match class {
            'L' => self.all.expect("L-tally required"),
            'R' => self.reduced,
            _ => self.unipotent,
        }
    }

    fn value(&self, term: Term) -> u64 {
        match term {
            Term::Prop(c, name) => {
                let (_, p) = Properties::PARITY
                    .iter()
                    .find(|(n, _)| *n == name)
                    .expect("known property");
                self.pick(c).property(*p)
            }
            Term::Triple(c, bits) => self.pick(c).get(ParityTriple::parse(bits).expect("triple")),
        }
    }

    fn sum(&self, terms: &[Term]) -> u64 {
        terms.iter().map(|&t| self.value(t)).sum()
    }
}

fn render(terms: &[Term], scale: Option<u64>) -> String {
    let body = terms
        .iter()
        .map(|t| match t {
            Term::Prop(c, p) => format!("{c}^{p}"),
            Term::Triple(c, b) => format!("{c}^{b}"),
        })
        .collect::<Vec<_>>()
        .join("+");
    match scale {
        Some(k) => format!("{k}*{body}"),
        None => body,
    }
}

fn ident(t: &Tallies, lhs: &[Term], rhs: &[Term]) -> Identity {
    Identity {
        lhs: render(lhs, None),
        rhs: render(rhs, None),
        lhs_value: t.sum(lhs),
        rhs_value: t.sum(rhs),
    }
}

use Term::{Prop as P, Triple as T};

/// The identity table relating reduced and normalised unipotent parity
/// counts, for the column matching `n mod 4`. Identities that only hold for
/// even `n` are omitted for odd `n`.
pub fn identities_from_tallies(
    n: usize,
    reduced: &ParityTally,
    unipotent: &ParityTally,
) -> Vec<Identity> {
    let t = Tallies {
        all: None,
        reduced,
        unipotent,
    };
    let z = |bits: &'static str| T('R', bits);
    let mut out = Vec::new();
    let mut push = |lhs: &[Term], rhs: &[Term]| out.push(ident(&t, lhs, rhs));
    if total_parity(n) == 0 {
        push(&[P('R', "ELS")], &[P('R', "SELS")]);
        push(&[P('R', "SELS")], &[z("000"), z("110")]);
        push(&[P('R', "OLS")], &[P('R', "SOLS")]);
        push(&[P('R', "SOLS")], &[z("011"), z("101")]);
        push(&[P('U', "ELS")], &[P('R', "CELS")]);
        push(&[P('R', "CELS")], &[z("000"), z("101")]);
        push(&[P('U', "OLS")], &[P('R', "COLS")]);
        push(&[P('R', "COLS")], &[z("011"), z("110")]);
        push(&[P('R', "RELS")], &[z("000"), z("011")]);
        push(&[z("000"), z("011")], &[P('U', "ELS")]);
        push(&[P('R', "ROLS")], &[z("101"), z("110")]);
        push(&[z("101"), z("110")], &[P('U', "OLS")]);
        for bits in ["111", "100", "010", "001"] {
            out.push(Identity {
                lhs: render(&[z(bits)], None),
                rhs: "0".into(),
                lhs_value: t.value(z(bits)),
                rhs_value: 0,
            });
        }
        out.push(ident(&t, &[z("011")], &[z("101")]));
        if n.is_multiple_of(2) {
            out.push(ident(&t, &[z("101")], &[z("110")]));
        }
    } else {
        push(&[P('R', "ELS")], &[P('R', "SOLS")]);
        push(&[P('R', "SOLS")], &[z("111"), z("001")]);
        push(&[P('R', "OLS")], &[P('R', "SELS")]);
        push(&[P('R', "SELS")], &[z("100"), z("010")]);
        push(&[P('U', "ELS")], &[P('R', "COLS")]);
        push(&[P('R', "COLS")], &[z("111"), z("010")]);
        push(&[P('U', "OLS")], &[P('R', "CELS")]);
        push(&[P('R', "CELS")], &[z("100"), z("001")]);
        push(&[P('R', "ROLS")], &[z("111"), z("100")]);
        push(&[z("111"), z("100")], &[P('U', "ELS")]);
        push(&[P('R', "RELS")], &[z("010"), z("001")]);
        push(&[z("010"), z("001")], &[P('U', "OLS")]);
        for bits in ["000", "011", "101", "110"] {
            out.push(Identity {
                lhs: render(&[z(bits)], None),
                rhs: "0".into(),
                lhs_value: t.value(z(bits)),
                rhs_value: 0,
            });
        }
        out.push(ident(&t, &[z("100")], &[z("010")]));
        if n.is_multiple_of(2) {
            out.push(ident(&t, &[z("010")], &[z("001")]));
        }
    }
    out
}

/// Largest order accepted by [`verify_identities`].
pub const VERIFY_MAX_ORDER: usize = 6;

/// Enumerates the reduced and normalised unipotent classes and checks the
/// identity table.
pub fn verify_identities(n: usize) -> Result<Vec<Identity>> {
    if n > VERIFY_MAX_ORDER {
        return Err(Error::SizeGuard {
            n,
            limit: VERIFY_MAX_ORDER,
            what: "identity verification",
        });
    }
    let r = tally(n, Class::Reduced)?;
    let u = tally(n, Class::NormalisedUnipotent)?;
    Ok(identities_from_tallies(n, &r, &u))
}

/// `n!·(n−1)!`, the number of squares reducing to each reduced square.
pub fn reduction_multiplier(n: usize) -> Result<u64> {
    let fact = |k: usize| (1..=k as u64).try_fold(1u64, |acc, i| acc.checked_mul(i));
    fact(n)
        .zip(fact(n.saturating_sub(1)))
        .and_then(|(a, b)| a.checked_mul(b))
        .ok_or(Error::Overflow("n!(n-1)!"))
}

/// Relations between the three classes:
///
/// - `R^abc = U^acb` for every triple;
/// - for even `n`, `L^P = n!(n−1)!·R^P = n!(n−1)!·U^P` for every parity
///   property and triple (the `L` side only when `all` is given);
/// - for odd `n ≥ 3`, equality within each of the two quadruples of
///   `L`-counts (when `all` is given).
pub fn relations_from_tallies(
    n: usize,
    all: Option<&ParityTally>,
    reduced: &ParityTally,
    unipotent: &ParityTally,
) -> Result<Vec<Identity>> {
    let t = Tallies {
        all,
        reduced,
        unipotent,
    };
    let mut out = Vec::new();
    for tr in ParityTriple::all() {
        let sw = tr.swap_col_sym();
        out.push(Identity {
            lhs: format!("R^{tr}"),
            rhs: format!("U^{sw}"),
            lhs_value: reduced.get(tr),
            rhs_value: unipotent.get(sw),
        });
    }
    if n.is_multiple_of(2) {
        let k = reduction_multiplier(n)?;
        let scaled = |v: u64| {
            v.checked_mul(k)
                .ok_or(Error::Overflow("scaled class count"))
        };
        let mut terms: Vec<(&'static str, bool)> = Properties::PARITY
            .iter()
            .map(|(name, _)| (*name, true))
            .collect();
        terms.extend(TRIPLE_NAMES.iter().map(|b| (*b, false)));
        for (name, is_prop) in terms {
            let term = |c| if is_prop { P(c, name) } else { T(c, name) };
            let rv = scaled(t.value(term('R')))?;
            let uv = scaled(t.value(term('U')))?;
            if all.is_some() {
                out.push(Identity {
                    lhs: render(&[term('L')], None),
                    rhs: render(&[term('R')], Some(k)),
                    lhs_value: t.value(term('L')),
                    rhs_value: rv,
                });
            }
            out.push(Identity {
                lhs: render(&[term('R')], Some(k)),
                rhs: render(&[term('U')], Some(k)),
                lhs_value: rv,
                rhs_value: uv,
            });
        }
    } else if n >= 3 && all.is_some() {
        for quad in [["000", "011", "101", "110"], ["111", "100", "010", "001"]] {
            for w in quad.windows(2) {
                out.push(ident(&t, &[T('L', w[0])], &[T('L', w[1])]));
            }
        }
    }
    Ok(out)
}

const TRIPLE_NAMES: [&str; 8] = ["000", "001", "010", "011", "100", "101", "110", "111"];

/// Enumerates what is needed and checks [`relations_from_tallies`]. The
/// `L`-relations are included when `n` is within the `all` size guard.
pub fn class_relations(n: usize) -> Result<Vec<Identity>> {
    let all = if n <= Class::All.max_order() {
        Some(tally(n, Class::All)?)
    } else {
        None
    };
    let r = tally(n, Class::Reduced)?;
    let u = tally(n, Class::NormalisedUnipotent)?;
    relations_from_tallies(n, all.as_ref(), &r, &u)
}
