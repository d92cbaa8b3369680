//! Exhaustive checks over small orders.

use std::collections::HashMap;

use latin_parity_core::cycles::{
    self, extended_involution, find_switchable_odd, involution, row_cycles, scanned_row_pairs,
    switch, switching_graph,
};
use latin_parity_core::enumerate::{reference, Class, Enumerator};
use latin_parity_core::square::total_parity;
use latin_parity_core::{sampler, LatinSquare, ParityTriple};

fn squares(n: usize, class: Class) -> Vec<LatinSquare> {
    Enumerator::new(n, class).unwrap().collect()
}

#[test]
fn optimized_and_reference_enumerators_agree() {
    for class in Class::ALL {
        for n in 1..=5 {
            assert_eq!(
                squares(n, class),
                reference::enumerate(n, class).unwrap(),
                "{class} n={n}"
            );
        }
    }
    assert_eq!(
        squares(6, Class::Reduced),
        reference::enumerate(6, Class::Reduced).unwrap()
    );
}

#[test]
fn reduced_census() {
    let counts: Vec<usize> = (1..=6).map(|n| squares(n, Class::Reduced).len()).collect();
    assert_eq!(counts, [1, 1, 1, 4, 56, 9408]);
    assert_eq!(squares(5, Class::All).len(), 161_280);
}

fn diff(a: ParityTriple, b: ParityTriple) -> (u8, u8, u8) {
    (a.row ^ b.row, a.col ^ b.col, a.sym ^ b.sym)
}

fn check_flip_law(l: &LatinSquare) {
    let n = l.order();
    let before = l.parity_triple();
    for x in 0..n {
        for y in x + 1..n {
            let cs = row_cycles(l, x, y).unwrap();
            assert_eq!(cs.iter().map(|c| c.len()).sum::<usize>(), n);
            for c in cs {
                assert!(c.len() >= 2);
                let s = switch(l, &c).unwrap();
                let expect = if c.is_odd() { (0, 1, 1) } else { (0, 0, 0) };
                assert_eq!(diff(before, s.parity_triple()), expect, "{l:?} {c}");
                assert_eq!(&switch(&s, &c).unwrap(), l);
            }
        }
    }
}

#[test]
fn parity_flip_law_exhaustive() {
    for n in 1..=5 {
        for l in Enumerator::new(n, Class::All).unwrap() {
            check_flip_law(&l);
        }
    }
}

#[test]
fn parity_flip_law_sampled_order_8() {
    // 10^4 (square, row pair) draws, every cycle of the pair checked.
    let mut checked = 0u64;
    for i in 0..10_000u64 {
        let l = sampler::sample(8, 11, i, Some(200)).unwrap();
        let (x, y) = ((i % 7) as usize, 7 - (i % 3) as usize);
        let (x, y) = if x < y { (x, y) } else { (y, x) };
        if x == y {
            continue;
        }
        let before = l.parity_triple();
        for c in row_cycles(&l, x, y).unwrap() {
            let s = switch(&l, &c).unwrap();
            let expect = if c.is_odd() { (0, 1, 1) } else { (0, 0, 0) };
            assert_eq!(diff(before, s.parity_triple()), expect);
            checked += 1;
        }
    }
    assert!(checked >= 10_000);
}

#[test]
fn involutions_on_reduced_squares() {
    for n in 3..=6 {
        for l in squares(n, Class::Reduced) {
            let p = l.parity_triple();
            match involution(&l).unwrap() {
                Some(m) => {
                    assert!(m.is_reduced());
                    assert_eq!(m.parity_triple(), p.flip_col_sym());
                    assert_eq!(involution(&m).unwrap().as_ref(), Some(&l));
                    assert_eq!(extended_involution(&l).unwrap().as_ref(), Some(&m));
                }
                None => assert!(find_switchable_odd(&l, n - 2, n - 1).unwrap().is_none()),
            }
            if let Some(m) = extended_involution(&l).unwrap() {
                assert!(m.is_reduced());
                assert_eq!(m.parity_triple(), p.flip_col_sym());
                assert_eq!(extended_involution(&m).unwrap().as_ref(), Some(&l));
                assert_eq!(m.row(0), l.row(0));
                for r in 0..n {
                    assert_eq!(m.get(r, 0), l.get(r, 0));
                }
            }
        }
    }
}

#[test]
fn involution_domain_fractions_at_order_5() {
    let reduced = squares(5, Class::Reduced);
    let direct = reduced
        .iter()
        .filter(|l| {
            row_cycles(l, 3, 4)
                .unwrap()
                .iter()
                .any(|c| c.is_odd() && !c.contains_column(0))
        })
        .count();
    let domain = reduced
        .iter()
        .filter(|l| involution(l).unwrap().is_some())
        .count();
    assert_eq!(domain, direct);
    let pairs = scanned_row_pairs(5);
    assert_eq!(pairs, [(3, 4), (1, 2)]);
    let no_pair = reduced
        .iter()
        .filter(|l| {
            pairs
                .iter()
                .all(|&(x, y)| find_switchable_odd(l, x, y).unwrap().is_none())
        })
        .count();
    let outside = reduced
        .iter()
        .filter(|l| extended_involution(l).unwrap().is_none())
        .count();
    assert_eq!(outside, no_pair);
    assert!(domain > 0 && outside < reduced.len());
}

#[test]
fn reduction_fibers() {
    for (n, k) in [(4usize, 144usize), (5, 2880)] {
        let mut fibers: HashMap<LatinSquare, usize> = HashMap::new();
        for l in Enumerator::new(n, Class::All).unwrap() {
            let r = l.reduce();
            assert!(r.is_reduced());
            assert_eq!(r.reduce(), r);
            let a = find_switchable_odd(&l, n - 2, n - 1).unwrap().is_some();
            let b = find_switchable_odd(&r, n - 2, n - 1).unwrap().is_some();
            assert_eq!(a, b, "switchability changed by reduce: {l:?}");
            *fibers.entry(r).or_default() += 1;
        }
        assert_eq!(fibers.len(), squares(n, Class::Reduced).len());
        assert!(fibers.values().all(|&v| v == k), "n={n}");
    }
}

#[test]
fn invert_rows_exchanges_classes() {
    for n in 1..=6 {
        let reduced = squares(n, Class::Reduced);
        let mut image: Vec<LatinSquare> = reduced
            .iter()
            .map(|l| {
                let m = l.invert_rows();
                assert_eq!(&m.invert_rows(), l);
                assert_eq!(m.parity_triple(), l.parity_triple().swap_col_sym());
                m
            })
            .collect();
        image.sort_by(|a, b| a.cells().cmp(b.cells()));
        assert_eq!(image, squares(n, Class::NormalisedUnipotent), "n={n}");
    }
}

#[test]
fn total_parity_congruence() {
    for n in 1..=5 {
        for l in Enumerator::new(n, Class::All).unwrap() {
            assert_eq!(l.parity_triple().sum() as usize, total_parity(n), "{l:?}");
        }
    }
    for i in 0..10_000 {
        let l = sampler::sample(8, 5, i, Some(200)).unwrap();
        assert_eq!(l.parity_triple().sum() as usize, total_parity(8));
    }
}

#[test]
fn switching_graph_components() {
    let g4 = switching_graph(4).unwrap();
    assert_eq!(g4.vertices, 4);
    let g5 = switching_graph(5).unwrap();
    assert_eq!(g5.vertices, 56);
    assert_eq!(g5.components.iter().map(|c| c.size).sum::<usize>(), 56);
    for g in [&g4, &g5] {
        assert!(g.components.iter().all(|c| c.row_parity.is_some()));
    }
    assert!(switching_graph(7).is_err());
}

#[test]
fn cycle_structure_excluded_columns() {
    let l = LatinSquare::validate(&[
        vec![1, 2, 3, 4],
        vec![2, 1, 4, 3],
        vec![3, 4, 1, 2],
        vec![4, 3, 2, 1],
    ])
    .unwrap();
    assert_eq!(
        cycles::cycle_structure(&l, 2, 3, &[0, 1]).unwrap().lengths,
        [2]
    );
    assert!(cycles::cycle_structure(&l, 2, 3, &[0]).is_err());
    assert!(cycles::cycle_structure(&l, 2, 3, &[0, 1, 2, 3])
        .unwrap()
        .lengths
        .is_empty());
}

#[test]
#[ignore = "order-7 enumeration takes minutes"]
fn reduced_census_order_7() {
    assert_eq!(
        Enumerator::new(7, Class::Reduced).unwrap().count(),
        16_942_080
    );
}
