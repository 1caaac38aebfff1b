#![allow(dead_code)]

use std::collections::BTreeSet;

use etale::cntsets::Per;
use etale::ideals::TransitiveRelation;
use proptest::prelude::*;

/// Literal reading of the three ideal conditions, written independently of the library.
pub fn oracle_is_ideal(r: &TransitiveRelation, s: &BTreeSet<usize>) -> bool {
    if s.is_empty() {
        return false;
    }
    for &a in s {
        for b in 0..r.carrier() {
            if r.relates(b, a) && !s.contains(&b) {
                return false;
            }
        }
    }
    for &a in s {
        for &b in s {
            if !s.iter().any(|&c| r.relates(a, c) && r.relates(b, c)) {
                return false;
            }
        }
    }
    true
}

/// All subsets passing [`oracle_is_ideal`], sorted.
pub fn oracle_ideals(r: &TransitiveRelation) -> Vec<BTreeSet<usize>> {
    let n = r.carrier();
    let mut out: Vec<BTreeSet<usize>> = (0u32..1 << n)
        .map(|code| (0..n).filter(|&i| code >> i & 1 == 1).collect())
        .filter(|s| oracle_is_ideal(r, s))
        .collect();
    out.sort();
    out
}

/// Transitive closure by repeated squaring, independent of the library's closure.
pub fn oracle_closure(n: usize, pairs: &[(usize, usize)]) -> TransitiveRelation {
    let mut set: BTreeSet<(usize, usize)> = pairs.iter().copied().collect();
    loop {
        let extra: Vec<(usize, usize)> = set
            .iter()
            .flat_map(|&(a, b)| set.iter().filter(move |&&(c, _)| c == b).map(move |&(_, d)| (a, d)))
            .filter(|p| !set.contains(p))
            .collect();
        if extra.is_empty() {
            break;
        }
        set.extend(extra);
    }
    TransitiveRelation::new(n, set).unwrap()
}

pub fn relation_strategy(max_carrier: usize) -> impl Strategy<Value = TransitiveRelation> {
    (0..=max_carrier).prop_flat_map(|n| {
        proptest::collection::vec(any::<bool>(), n * n).prop_map(move |bits| {
            let pairs: Vec<(usize, usize)> = (0..n * n)
                .filter(|&i| bits[i])
                .map(|i| (i / n, i % n))
                .collect();
            oracle_closure(n, &pairs)
        })
    })
}

/// PERs given by a class label per element, `None` meaning undefined.
pub fn per_strategy(max_carrier: usize) -> impl Strategy<Value = Per> {
    (1..=max_carrier).prop_flat_map(|n| {
        proptest::collection::vec(proptest::option::of(0..n), n).prop_map(move |labels| {
            let pairs: Vec<(usize, usize)> = (0..n)
                .flat_map(|a| (0..n).map(move |b| (a, b)))
                .filter(|&(a, b)| labels[a].is_some() && labels[a] == labels[b])
                .collect();
            Per::new(n, pairs).unwrap()
        })
    })
}
