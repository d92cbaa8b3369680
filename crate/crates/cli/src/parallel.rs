//! Rayon-backed runners. Work is split by enumeration shard or by sample
//! index and merged associatively, so results never depend on the number
//! of workers.

use latin_parity_core::cycles;
use latin_parity_core::enumerate::{self, Class, ParityTally};
use latin_parity_core::partitions::LogBase;
use latin_parity_core::sampler::{self, SampleStats};
use latin_parity_core::LatinSquare;
use rayon::prelude::*;

/// Runs `f` on a pool of `workers` threads; 0 means rayon's default.
pub fn with_workers<T: Send>(workers: usize, f: impl FnOnce() -> T + Send) -> T {
    rayon::ThreadPoolBuilder::new()
        .num_threads(workers)
        .build()
        .expect("thread pool")
        .install(f)
}

pub fn tally(n: usize, class: Class) -> latin_parity_core::Result<ParityTally> {
    let shards = enumerate::shards(n, class)?;
    shards
        .par_iter()
        .map(|s| enumerate::tally_shard(n, class, s))
        .try_reduce(
            || ParityTally::new(n, class),
            |mut a, b| {
                a.merge(&b);
                Ok(a)
            },
        )
}

/// Applies `f` to samples `0..samples` of run `seed`, in index order.
pub fn map_samples<T: Send>(
    n: usize,
    samples: u64,
    seed: u64,
    steps: u64,
    f: impl Fn(&LatinSquare) -> T + Sync + Send,
) -> latin_parity_core::Result<Vec<T>> {
    (0..samples)
        .into_par_iter()
        .map(|i| sampler::sample(n, seed, i, Some(steps)).map(|l| f(&l)))
        .collect()
}

pub fn last_two_rows_stats(
    n: usize,
    samples: u64,
    seed: u64,
    steps: Option<u64>,
    base: LogBase,
) -> latin_parity_core::Result<SampleStats> {
    let steps = steps.unwrap_or_else(|| sampler::default_steps(n));
    (0..samples)
        .into_par_iter()
        .map(|i| {
            let l = sampler::sample(n, seed, i, Some(steps))?;
            let mut s = SampleStats::new(n, seed, steps);
            s.record(&sampler::last_two_rows_events(&l, base)?);
            Ok(s)
        })
        .try_reduce(
            || SampleStats::new(n, seed, steps),
            |mut a, b| {
                a.merge(&b);
                Ok(a)
            },
        )
}

/// Joint switchability of the last two row pairs, `(n−1, n)` and
/// `(n−3, n−2)` in 1-based terms, over sampled squares.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Default)]
pub struct PairCounts {
    pub samples: u64,
    pub last: u64,
    pub previous: u64,
    pub both: u64,
}

impl PairCounts {
    /// Phi coefficient of the two indicators; `None` when either is constant.
    pub fn correlation(&self) -> Option<f64> {
        let n = self.samples as f64;
        let (a, b, ab) = (
            self.last as f64 / n,
            self.previous as f64 / n,
            self.both as f64 / n,
        );
        let v = a * (1.0 - a) * b * (1.0 - b);
        (v > 0.0).then(|| (ab - a * b) / v.sqrt())
    }
}

pub fn pair_switchability(
    n: usize,
    samples: u64,
    seed: u64,
    steps: Option<u64>,
) -> latin_parity_core::Result<PairCounts> {
    if n < 4 {
        return Err(latin_parity_core::Error::Invalid(format!(
            "two disjoint row pairs need n >= 4, got {n}"
        )));
    }
    let steps = steps.unwrap_or_else(|| sampler::default_steps(n));
    let hits = map_samples(n, samples, seed, steps, |l| {
        let last = cycles::find_switchable_odd(l, n - 2, n - 1).map(|c| c.is_some());
        let prev = cycles::find_switchable_odd(l, n - 4, n - 3).map(|c| c.is_some());
        (last.unwrap_or(false), prev.unwrap_or(false))
    })?;
    let mut out = PairCounts {
        samples,
        ..PairCounts::default()
    };
    for (a, b) in hits {
        out.last += u64::from(a);
        out.previous += u64::from(b);
        out.both += u64::from(a && b);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parallel_tally_matches_serial() {
        for (n, class) in [
            (5, Class::Reduced),
            (4, Class::All),
            (5, Class::NormalisedUnipotent),
        ] {
            let serial = enumerate::tally(n, class).unwrap();
            for workers in [1, 3] {
                assert_eq!(with_workers(workers, || tally(n, class)).unwrap(), serial);
            }
        }
    }

    #[test]
    fn parallel_stats_match_serial() {
        let serial = sampler::last_two_rows_stats(6, 40, 9, None, LogBase::E).unwrap();
        let par = with_workers(3, || last_two_rows_stats(6, 40, 9, None, LogBase::E)).unwrap();
        assert_eq!(serial, par);
    }

    #[test]
    fn pair_counts_are_consistent() {
        let p = pair_switchability(6, 200, 2, None).unwrap();
        assert!(p.both <= p.last.min(p.previous));
        assert_eq!(
            with_workers(2, || pair_switchability(6, 200, 2, None)).unwrap(),
            p
        );
        assert!(pair_switchability(3, 10, 1, None).is_err());
    }
}
