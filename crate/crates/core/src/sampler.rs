//! Random Latin squares from a Jacobson–Matthews chain, and the events of
//! the last two rows that the switching argument relies on.
//!
//! The chain walks the incidence cube of a square. A proper state is a Latin
//! square; an improper state has exactly one cell of the cube equal to −1,
//! and the three lines through it each hold two +1 cells. Every move changes
//! eight cells of a 2×2×2 sub-cube by ±1 and keeps every line sum at 1.
//! Its stationary law restricted to proper states is uniform. Each step is
//! lazy with probability 1/2, which breaks the period-2 cycle at order 2.

use alloc::vec::Vec;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::cycles::{self, row_cycles_unchecked};
use crate::error::{Error, Result};
use crate::partitions::{long_cycle_threshold, LogBase};
use crate::square::LatinSquare;

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
struct Improper {
    r: u8,
    c: u8,
    /// Symbol of the −1 cell.
    s: u8,
    /// The two +1 cells on each line through the −1 cell.
    syms: [u8; 2],
    cols: [u8; 2],
    rows: [u8; 2],
}

/// State of the chain. Lookups are O(1) through three tables: the symbol
/// of each cell, the column of each (row, symbol) and the row of each
/// (column, symbol). The lines through the improper cell are kept aside.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct ChainState {
    n: usize,
    sym: Vec<u8>,
    col: Vec<u8>,
    row: Vec<u8>,
    improper: Option<Improper>,
}

impl ChainState {
    pub fn new(square: &LatinSquare) -> Self {
        let n = square.order();
        let sym = square.cells().to_vec();
        let mut col = alloc::vec![0u8; n * n];
        let mut row = alloc::vec![0u8; n * n];
        for r in 0..n {
            for c in 0..n {
                let s = sym[r * n + c] as usize;
                col[r * n + s] = c as u8;
                row[c * n + s] = r as u8;
            }
        }
        Self {
            n,
            sym,
            col,
            row,
            improper: None,
        }
    }

    pub fn order(&self) -> usize {
        self.n
    }

    pub fn is_proper(&self) -> bool {
        self.improper.is_none()
    }

    /// The square, when the state is proper.
    pub fn square(&self) -> Option<LatinSquare> {
        self.is_proper()
            .then(|| LatinSquare::from_cells_unchecked(self.n, self.sym.clone()))
    }

    /// One lazy step of the chain.
    pub fn step<R: Rng + ?Sized>(&mut self, rng: &mut R) {
        if rng.random_bool(0.5) {
            return;
        }
        match self.improper {
            None => self.proper_move(rng),
            Some(im) => self.improper_move(im, rng),
        }
    }

    fn proper_move<R: Rng + ?Sized>(&mut self, rng: &mut R) {
        let n = self.n;
        if n < 2 {
            return;
        }
        let r = rng.random_range(0..n);
        let c = rng.random_range(0..n);
        let cur = self.sym[r * n + c] as usize;
        let k = rng.random_range(0..n - 1);
        let s = if k >= cur { k + 1 } else { k };

        let s1 = cur;
        let c1 = self.col[r * n + s] as usize;
        let r1 = self.row[c * n + s] as usize;
        let t = self.sym[r1 * n + c1] as usize;
        let c2 = self.col[r1 * n + s1];
        let r2 = self.row[c1 * n + s1];

        self.sym[r * n + c] = s as u8;
        self.sym[r * n + c1] = s1 as u8;
        self.sym[r1 * n + c] = s1 as u8;
        self.col[r * n + s] = c as u8;
        self.col[r * n + s1] = c1 as u8;
        self.col[r1 * n + s] = c1 as u8;
        self.row[c * n + s] = r as u8;
        self.row[c * n + s1] = r1 as u8;
        self.row[c1 * n + s] = r1 as u8;
        if t == s1 {
            self.sym[r1 * n + c1] = s as u8;
            self.col[r1 * n + s1] = c as u8;
            self.row[c1 * n + s1] = r as u8;
        } else {
            self.improper = Some(Improper {
                r: r1 as u8,
                c: c1 as u8,
                s: s1 as u8,
                syms: [t as u8, s as u8],
                cols: [c2, c as u8],
                rows: [r2, r as u8],
            });
        }
    }

    fn improper_move<R: Rng + ?Sized>(&mut self, im: Improper, rng: &mut R) {
        let n = self.n;
        let pick = |rng: &mut R| rng.random_range(0..2usize);
        let (i, j, k) = (pick(rng), pick(rng), pick(rng));
        let (r0, c0, s0) = (im.r as usize, im.c as usize, im.s as usize);
        let (s1, s_other) = (im.syms[i] as usize, im.syms[1 - i]);
        let (c1, c_other) = (im.cols[j] as usize, im.cols[1 - j]);
        let (r1, r_other) = (im.rows[k] as usize, im.rows[1 - k]);
        let t = self.sym[r1 * n + c1] as usize;
        let c2 = self.col[r1 * n + s1];
        let r2 = self.row[c1 * n + s1];

        self.sym[r0 * n + c0] = s_other;
        self.sym[r0 * n + c1] = s1 as u8;
        self.sym[r1 * n + c0] = s1 as u8;
        self.col[r0 * n + s0] = c_other;
        self.col[r0 * n + s1] = c1 as u8;
        self.col[r1 * n + s0] = c1 as u8;
        self.row[c0 * n + s0] = r_other;
        self.row[c0 * n + s1] = r1 as u8;
        self.row[c1 * n + s0] = r1 as u8;
        if t == s1 {
            self.sym[r1 * n + c1] = s0 as u8;
            self.col[r1 * n + s1] = c0 as u8;
            self.row[c1 * n + s1] = r0 as u8;
            self.improper = None;
        } else {
            self.improper = Some(Improper {
                r: r1 as u8,
                c: c1 as u8,
                s: s1 as u8,
                syms: [t as u8, s0 as u8],
                cols: [c2, c0 as u8],
                rows: [r2, r0 as u8],
            });
        }
    }

    /// Rebuilds the incidence cube and checks that every line sums to 1,
    /// that at most one cell is −1, and that the lookup tables agree with
    /// the cube.
    pub fn check_invariants(&self) -> core::result::Result<(), &'static str> {
        let n = self.n;
        let idx = |r: usize, c: usize, s: usize| (r * n + c) * n + s;
        let mut cube = alloc::vec![0i8; n * n * n];
        for r in 0..n {
            for c in 0..n {
                if let Some(im) = self.improper {
                    if (r, c) == (im.r as usize, im.c as usize) {
                        cube[idx(r, c, im.syms[0] as usize)] += 1;
                        cube[idx(r, c, im.syms[1] as usize)] += 1;
                        cube[idx(r, c, im.s as usize)] -= 1;
                        continue;
                    }
                }
                cube[idx(r, c, self.sym[r * n + c] as usize)] += 1;
            }
        }
        if cube.iter().filter(|&&v| v < 0).count() > usize::from(self.improper.is_some()) {
            return Err("more than one negative cell");
        }
        if cube.iter().any(|&v| !(-1..=1).contains(&v)) {
            return Err("cell outside {-1, 0, 1}");
        }
        for a in 0..n {
            for b in 0..n {
                let line_rc: i32 = (0..n).map(|s| cube[idx(a, b, s)] as i32).sum();
                let line_rs: i32 = (0..n).map(|c| cube[idx(a, c, b)] as i32).sum();
                let line_cs: i32 = (0..n).map(|r| cube[idx(r, a, b)] as i32).sum();
                if line_rc != 1 || line_rs != 1 || line_cs != 1 {
                    return Err("line sum differs from 1");
                }
            }
        }
        let on_improper_line = |r: Option<usize>, c: Option<usize>, s: Option<usize>| {
            self.improper.is_some_and(|im| {
                r.is_none_or(|r| r == im.r as usize)
                    && c.is_none_or(|c| c == im.c as usize)
                    && s.is_none_or(|s| s == im.s as usize)
            })
        };
        for a in 0..n {
            for s in 0..n {
                if !on_improper_line(Some(a), None, Some(s)) {
                    let c = self.col[a * n + s] as usize;
                    if cube[idx(a, c, s)] != 1 {
                        return Err("column table disagrees with the cube");
                    }
                }
                if !on_improper_line(None, Some(a), Some(s)) {
                    let r = self.row[a * n + s] as usize;
                    if cube[idx(r, a, s)] != 1 {
                        return Err("row table disagrees with the cube");
                    }
                }
            }
        }
        Ok(())
    }
}

/// `⌈n³ ln n⌉` chain steps per sample.
pub fn default_steps(n: usize) -> u64 {
    let n = n as f64;
    libm::ceil(n * n * n * libm::log(n)).max(0.0) as u64
}

/// The generator for sample `index` of a run seeded with `seed`. Each sample
/// gets its own ChaCha stream, so results do not depend on scheduling.
pub fn sample_rng(seed: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

/// Runs a fresh chain from the cyclic square and returns the proper state
/// it occupies after `steps` visits to proper states.
///
/// Only proper visits are counted. The visits form a reversible chain on
/// Latin squares with uniform stationary law; stopping at the first proper
/// state after a fixed number of raw steps would instead favour squares
/// with fewer improper neighbours.
pub fn sample_with_rng<R: Rng + ?Sized>(n: usize, steps: u64, rng: &mut R) -> Result<LatinSquare> {
    if n < 2 {
        return Err(Error::Invalid(alloc::format!(
            "sampling needs n >= 2, got {n}"
        )));
    }
    if n > crate::square::MAX_ORDER {
        return Err(Error::Invalid(alloc::format!("order {n} is too large")));
    }
    let mut state = ChainState::new(&LatinSquare::cyclic(n));
    let mut visits = 0;
    while visits < steps {
        state.step(rng);
        visits += u64::from(state.is_proper());
    }
    Ok(state.square().expect("state is proper"))
}

/// Sample `index` of the run `seed`, with `steps` chain steps
/// ([`default_steps`] when `None`).
pub fn sample(n: usize, seed: u64, index: u64, steps: Option<u64>) -> Result<LatinSquare> {
    let steps = steps.unwrap_or_else(|| default_steps(n));
    sample_with_rng(n, steps, &mut sample_rng(seed, index))
}

/// Events of the last two rows.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Event {
    /// A cycle of length at least `n − log n`.
    LongCycle,
    /// Fewer than `9√n` cycles.
    FewCycles,
    /// Some cycle of odd length.
    OddCycle,
    /// Some odd cycle avoiding the first column.
    SwitchableOdd,
    /// After reduction, some scanned row pair has a switchable cycle.
    ExtendedDomain,
}

impl Event {
    pub const ALL: [Event; 5] = [
        Event::LongCycle,
        Event::FewCycles,
        Event::OddCycle,
        Event::SwitchableOdd,
        Event::ExtendedDomain,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Event::LongCycle => "long_cycle",
            Event::FewCycles => "few_cycles",
            Event::OddCycle => "odd_cycle",
            Event::SwitchableOdd => "switchable_odd",
            Event::ExtendedDomain => "extended_domain",
        }
    }

    pub fn index(self) -> usize {
        self as usize
    }
}

/// Which [`Event`]s hold for `l`; indexed by [`Event::index`].
pub fn last_two_rows_events(l: &LatinSquare, base: LogBase) -> Result<[bool; 5]> {
    let n = l.order();
    if n < 3 {
        return Err(Error::Invalid(alloc::format!(
            "last-two-rows statistics need n >= 3, got {n}"
        )));
    }
    let cyc = row_cycles_unchecked(l, n - 2, n - 1);
    let threshold = long_cycle_threshold(n, base);
    let mut out = [false; 5];
    out[Event::LongCycle.index()] = cyc.iter().any(|c| c.len() >= threshold);
    out[Event::FewCycles.index()] = (cyc.len() as f64) < 9.0 * libm::sqrt(n as f64);
    out[Event::OddCycle.index()] = cyc.iter().any(|c| c.is_odd());
    out[Event::SwitchableOdd.index()] = cyc.iter().any(|c| c.is_switchable());
    out[Event::ExtendedDomain.index()] = cycles::extended_involution_cycle(&l.reduce())?.is_some();
    Ok(out)
}

/// Occurrence counts of the last-two-rows events over a run.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct SampleStats {
    pub n: usize,
    pub samples: u64,
    pub seed: u64,
    pub steps: u64,
    /// Indexed by [`Event::index`].
    pub occurrences: [u64; 5],
}

impl SampleStats {
    pub fn new(n: usize, seed: u64, steps: u64) -> Self {
        Self {
            n,
            samples: 0,
            seed,
            steps,
            occurrences: [0; 5],
        }
    }

    pub fn record(&mut self, events: &[bool; 5]) {
        self.samples += 1;
        for (o, &e) in self.occurrences.iter_mut().zip(events) {
            *o += u64::from(e);
        }
    }

    pub fn merge(&mut self, other: &SampleStats) {
        self.samples += other.samples;
        for (a, b) in self.occurrences.iter_mut().zip(other.occurrences) {
            *a += b;
        }
    }

    pub fn estimate(&self, e: Event) -> f64 {
        proportion(self.occurrences[e.index()], self.samples)
    }

    /// Binomial standard error of [`estimate`](Self::estimate).
    pub fn stderr(&self, e: Event) -> f64 {
        binomial_stderr(self.occurrences[e.index()], self.samples)
    }
}

pub fn proportion(k: u64, total: u64) -> f64 {
    if total == 0 {
        0.0
    } else {
        k as f64 / total as f64
    }
}

pub fn binomial_stderr(k: u64, total: u64) -> f64 {
    if total == 0 {
        return 0.0;
    }
    let p = proportion(k, total);
    libm::sqrt(p * (1.0 - p) / total as f64)
}

/// Serial estimate of the last-two-rows events over samples `0..samples`.
pub fn last_two_rows_stats(
    n: usize,
    samples: u64,
    seed: u64,
    steps: Option<u64>,
    base: LogBase,
) -> Result<SampleStats> {
    let steps = steps.unwrap_or_else(|| default_steps(n));
    let mut stats = SampleStats::new(n, seed, steps);
    for i in 0..samples {
        let l = sample(n, seed, i, Some(steps))?;
        stats.record(&last_two_rows_events(&l, base)?);
    }
    Ok(stats)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn chain_keeps_line_sums() {
        for n in [2usize, 3, 4, 5, 7] {
            let mut rng = sample_rng(11, n as u64);
            let mut state = ChainState::new(&LatinSquare::cyclic(n));
            let mut improper_seen = false;
            for _ in 0..3000 {
                state.step(&mut rng);
                improper_seen |= !state.is_proper();
                state.check_invariants().unwrap();
                if let Some(sq) = state.square() {
                    assert!(LatinSquare::from_cells(n, sq.into_cells()).is_ok());
                }
            }
            assert!(
                improper_seen || n == 2,
                "n={n} never left the proper states"
            );
        }
    }

    #[test]
    fn sampling_is_deterministic() {
        let a = sample(6, 42, 3, None).unwrap();
        let b = sample(6, 42, 3, None).unwrap();
        assert_eq!(a, b);
        let c = sample(6, 42, 4, None).unwrap();
        assert_ne!(a, c);
    }

    #[test]
    fn default_step_counts() {
        assert_eq!(default_steps(2), 6);
        assert_eq!(default_steps(4), 89);
        assert_eq!(default_steps(5), 202);
    }

    #[test]
    fn order_two_is_balanced() {
        let first = LatinSquare::cyclic(2);
        let hits = (0..20_000)
            .filter(|&i| sample(2, 5, i, None).unwrap() == first)
            .count();
        let f = hits as f64 / 20_000.0;
        assert!((f - 0.5).abs() < 0.02, "frequency {f}");
    }

    #[test]
    fn order_three_always_has_an_odd_cycle() {
        let s = last_two_rows_stats(3, 200, 1, None, LogBase::E).unwrap();
        assert_eq!(s.estimate(Event::OddCycle), 1.0);
        assert_eq!(s.stderr(Event::OddCycle), 0.0);
        assert!(last_two_rows_events(&LatinSquare::cyclic(2), LogBase::E).is_err());
    }
}
