//! Chi-square goodness of fit of sampler output against enumeration.

use latin_parity_core::enumerate::{self, Class, Enumerator};
use latin_parity_core::{Error, LatinSquare};
use statrs::distribution::{ChiSquared, ContinuousCDF};

use crate::parallel;

#[derive(Debug, Clone, PartialEq)]
pub struct ChiSquareReport {
    pub n: usize,
    pub samples: u64,
    pub seed: u64,
    pub steps: u64,
    /// Number of categories with positive expected mass.
    pub categories: usize,
    pub statistic: f64,
    pub df: usize,
    pub p_value: f64,
    /// Smallest category count; 0 means part of the support was never hit.
    pub min_observed: u64,
}

impl ChiSquareReport {
    pub fn rejects(&self, alpha: f64) -> bool {
        self.p_value < alpha
    }
}

/// Pearson statistic and upper-tail p-value. Categories with zero expected
/// probability must have zero observations and are dropped.
pub fn chi_square(observed: &[u64], probs: &[f64]) -> (f64, usize, f64) {
    assert_eq!(observed.len(), probs.len());
    let total: u64 = observed.iter().sum();
    let mut stat = 0.0;
    let mut k = 0usize;
    for (&o, &p) in observed.iter().zip(probs) {
        if p == 0.0 {
            assert_eq!(o, 0, "observation in a category of probability zero");
            continue;
        }
        k += 1;
        let e = p * total as f64;
        let d = o as f64 - e;
        stat += d * d / e;
    }
    let df = k.saturating_sub(1);
    let p = if df == 0 {
        1.0
    } else {
        ChiSquared::new(df as f64).expect("positive df").sf(stat)
    };
    (stat, df, p)
}

/// Index of `l` among all squares of order 4 in enumeration order.
fn index_of(all: &[Vec<u8>], l: &LatinSquare) -> usize {
    all.binary_search_by(|c| c.as_slice().cmp(l.cells()))
        .expect("sampled square is Latin")
}

/// n = 4: uniform over the 576 squares. n = 5: the 161280 squares pooled by
/// parity triple, with expected mass taken from the exhaustive tally.
pub fn uniformity_test(
    n: usize,
    samples: u64,
    seed: u64,
    steps: Option<u64>,
) -> latin_parity_core::Result<ChiSquareReport> {
    let steps = steps.unwrap_or_else(|| latin_parity_core::sampler::default_steps(n));
    let (observed, probs) = match n {
        4 => {
            let mut all = Vec::new();
            let mut e = Enumerator::new(4, Class::All)?;
            while e.advance() {
                all.push(e.grid().to_vec());
            }
            let idx = parallel::map_samples(n, samples, seed, steps, |l| index_of(&all, l))?;
            let mut counts = vec![0u64; all.len()];
            for i in idx {
                counts[i] += 1;
            }
            let p = 1.0 / all.len() as f64;
            (counts, vec![p; all.len()])
        }
        5 => {
            let reference = parallel::tally(5, Class::All)?;
            let idx =
                parallel::map_samples(n, samples, seed, steps, |l| l.parity_triple().index())?;
            let mut counts = vec![0u64; 8];
            for i in idx {
                counts[i] += 1;
            }
            let probs = reference
                .counts
                .iter()
                .map(|&c| c as f64 / reference.total() as f64)
                .collect();
            (counts, probs)
        }
        _ => {
            return Err(Error::SizeGuard {
                n,
                limit: 5,
                what: "uniformity test (orders 4 and 5 only)",
            })
        }
    };
    let (statistic, df, p_value) = chi_square(&observed, &probs);
    let min_observed = observed
        .iter()
        .zip(&probs)
        .filter(|(_, &p)| p > 0.0)
        .map(|(&o, _)| o)
        .min()
        .unwrap_or(0);
    Ok(ChiSquareReport {
        n,
        samples,
        seed,
        steps,
        categories: df + 1,
        statistic,
        df,
        p_value,
        min_observed,
    })
}

/// Exact proportion of order-5 squares with a switchable odd cycle in the
/// last two rows.
pub fn exact_switchable_fraction_5() -> latin_parity_core::Result<(u64, u64)> {
    use latin_parity_core::cycles::find_switchable_odd;
    use rayon::prelude::*;
    let shards = enumerate::shards(5, Class::All)?;
    let (hit, total) = shards
        .par_iter()
        .map(|s| -> latin_parity_core::Result<(u64, u64)> {
            let mut e = Enumerator::with_shard(5, Class::All, s)?;
            let (mut hit, mut total) = (0u64, 0u64);
            while e.advance() {
                let l = LatinSquare::from_cells(5, e.grid().to_vec())?;
                total += 1;
                hit += find_switchable_odd(&l, 3, 4)?.is_some() as u64;
            }
            Ok((hit, total))
        })
        .try_reduce(|| (0, 0), |a, b| Ok((a.0 + b.0, a.1 + b.1)))?;
    Ok((hit, total))
}
