//! Permutations of `0..n` in one-line notation.

use alloc::vec::Vec;
use core::fmt;

use crate::error::{Error, Result};

/// Largest order representable with `u8` images.
pub const MAX_ORDER: usize = 256;

/// A permutation of `0..n`; position `i` holds the image of `i`.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Permutation {
    images: Vec<u8>,
}

impl Permutation {
    /// Builds a permutation from its images, checking bijectivity.
    pub fn new(images: Vec<u8>) -> Result<Self> {
        let n = images.len();
        if n > MAX_ORDER {
            return Err(Error::SizeGuard {
                n,
                limit: MAX_ORDER,
                what: "permutations",
            });
        }
        let mut seen = [false; MAX_ORDER];
        for &v in &images {
            let v = v as usize;
            if v >= n || seen[v] {
                return Err(Error::NotAPermutation(alloc::format!(
                    "image {} repeated or out of range",
                    v + 1
                )));
            }
            seen[v] = true;
        }
        Ok(Self { images })
    }

    pub(crate) fn from_images_unchecked(images: Vec<u8>) -> Self {
        debug_assert!(Self::new(images.clone()).is_ok());
        Self { images }
    }

    pub fn identity(n: usize) -> Self {
        Self {
            images: (0..n).map(|i| i as u8).collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.images.len()
    }

    pub fn is_empty(&self) -> bool {
        self.images.is_empty()
    }

    pub fn images(&self) -> &[u8] {
        &self.images
    }

    pub fn apply(&self, i: usize) -> usize {
        self.images[i] as usize
    }

    pub fn is_identity(&self) -> bool {
        self.images
            .iter()
            .enumerate()
            .all(|(i, &v)| i == v as usize)
    }

    /// `self ∘ other`, i.e. `i ↦ self(other(i))`.
    pub fn compose(&self, other: &Self) -> Self {
        assert_eq!(
            self.len(),
            other.len(),
            "composing permutations of different order"
        );
        Self {
            images: other
                .images
                .iter()
                .map(|&j| self.images[j as usize])
                .collect(),
        }
    }

    pub fn inverse(&self) -> Self {
        Self {
            images: inverse_of(&self.images),
        }
    }

    /// 0 for even permutations, 1 for odd.
    pub fn sign(&self) -> u8 {
        sign_of(&self.images)
    }

    pub fn cycle_count(&self) -> usize {
        cycle_lengths(&self.images).len()
    }

    /// Cycle lengths (fixed points included), in order of smallest element.
    pub fn cycle_lengths(&self) -> Vec<usize> {
        cycle_lengths(&self.images)
    }

    pub fn is_derangement(&self) -> bool {
        self.images
            .iter()
            .enumerate()
            .all(|(i, &v)| i != v as usize)
    }
}

impl fmt::Debug for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Permutation{self}")
    }
}

/// One-line notation, 1-based: `(2,3,1)`.
impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("(")?;
        for (i, v) in self.images.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{}", *v as usize + 1)?;
        }
        f.write_str(")")
    }
}

/// Sign of a permutation given by its images: `(n - #cycles) mod 2`.
///
/// The slice must be a permutation of `0..len`; this is not rechecked.
pub fn sign_of(images: &[u8]) -> u8 {
    let n = images.len();
    let mut seen = [false; MAX_ORDER];
    let mut cycles = 0usize;
    for start in 0..n {
        if seen[start] {
            continue;
        }
        cycles += 1;
        let mut i = start;
        while !seen[i] {
            seen[i] = true;
            i = images[i] as usize;
        }
    }
    ((n - cycles) & 1) as u8
}

pub fn cycle_lengths(images: &[u8]) -> Vec<usize> {
    let n = images.len();
    let mut seen = [false; MAX_ORDER];
    let mut out = Vec::new();
    for start in 0..n {
        if seen[start] {
            continue;
        }
        let mut len = 0;
        let mut i = start;
        while !seen[i] {
            seen[i] = true;
            i = images[i] as usize;
            len += 1;
        }
        out.push(len);
    }
    out
}

pub fn inverse_of(images: &[u8]) -> Vec<u8> {
    let mut inv = alloc::vec![0u8; images.len()];
    for (i, &v) in images.iter().enumerate() {
        inv[v as usize] = i as u8;
    }
    inv
}

/// Rearranges `v` into the lexicographically next permutation; returns
/// `false` (leaving `v` sorted ascending) after the last one.
pub fn next_permutation(v: &mut [u8]) -> bool {
    if v.len() < 2 {
        return false;
    }
    let mut i = v.len() - 1;
    while i > 0 && v[i - 1] >= v[i] {
        i -= 1;
    }
    if i == 0 {
        v.reverse();
        return false;
    }
    let mut j = v.len() - 1;
    while v[j] <= v[i - 1] {
        j -= 1;
    }
    v.swap(i - 1, j);
    v[i..].reverse();
    true
}

/// All permutations of `0..n` in lexicographic order.
pub fn all_permutations(n: usize) -> Permutations {
    Permutations {
        current: (0..n).map(|i| i as u8).collect(),
        done: false,
    }
}

/// Lexicographic permutation iterator; yields the images as a fresh `Vec`.
pub struct Permutations {
    current: Vec<u8>,
    done: bool,
}

impl Permutations {
    /// Lending access for hot loops: visits every permutation without
    /// allocating.
    pub fn for_each_slice(mut self, mut f: impl FnMut(&[u8])) {
        if self.done {
            return;
        }
        loop {
            f(&self.current);
            if !next_permutation(&mut self.current) {
                break;
            }
        }
        self.done = true;
    }
}

impl Iterator for Permutations {
    type Item = Vec<u8>;

    fn next(&mut self) -> Option<Vec<u8>> {
        if self.done {
            return None;
        }
        let out = self.current.clone();
        if !next_permutation(&mut self.current) {
            self.done = true;
        }
        Some(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;
    use proptest::prelude::*;

    #[test]
    fn sign_examples() {
        assert_eq!(Permutation::identity(5).sign(), 0);
        assert_eq!(Permutation::new(vec![1, 0]).unwrap().sign(), 1);
        assert_eq!(Permutation::new(vec![1, 2, 0]).unwrap().sign(), 0);
        assert_eq!(Permutation::identity(0).sign(), 0);
    }

    #[test]
    fn rejects_non_bijections() {
        assert!(Permutation::new(vec![0, 0]).is_err());
        assert!(Permutation::new(vec![0, 2]).is_err());
    }

    #[test]
    fn lexicographic_enumeration() {
        let all: Vec<_> = all_permutations(3).collect();
        assert_eq!(
            all,
            vec![
                vec![0, 1, 2],
                vec![0, 2, 1],
                vec![1, 0, 2],
                vec![1, 2, 0],
                vec![2, 0, 1],
                vec![2, 1, 0]
            ]
        );
        assert_eq!(all_permutations(0).count(), 1);
        assert_eq!(all_permutations(6).count(), 720);
        let mut k = 0;
        all_permutations(5).for_each_slice(|_| k += 1);
        assert_eq!(k, 120);
    }

    fn perm_strategy(n: usize) -> impl Strategy<Value = Permutation> {
        Just((0..n as u8).collect::<Vec<_>>())
            .prop_shuffle()
            .prop_map(Permutation::from_images_unchecked)
    }

    fn pair_strategy() -> impl Strategy<Value = (Permutation, Permutation)> {
        (1usize..=10).prop_flat_map(|n| (perm_strategy(n), perm_strategy(n)))
    }

    proptest! {
        #[test]
        fn sign_is_a_homomorphism((p, q) in pair_strategy()) {
            prop_assert_eq!(p.compose(&q).sign(), p.sign() ^ q.sign());
        }

        #[test]
        fn inverse_composes_to_identity(p in (1usize..=12).prop_flat_map(perm_strategy)) {
            prop_assert!(p.compose(&p.inverse()).is_identity());
            prop_assert_eq!(p.inverse().sign(), p.sign());
        }
    }
}
