mod common;

use std::collections::BTreeSet;

use common::per_strategy;
use etale::cntsets::{
    check_cnt_morphism, check_per, check_spatialization, check_witness, compose_cnt, e_mor, e_obj,
    spatialize, CntMorphism, OvertDiscreteWitness, Per,
};
use etale::corpus::{random_composable_triple, random_witness, rng};
use etale::ideals::{apply_operator, compose_operators, ComputableSpace};
use proptest::prelude::*;

fn same(a: &CntMorphism, b: &CntMorphism) -> bool {
    a.graph() == b.graph() && a.src() == b.src() && a.tar() == b.tar()
}

/// The point function of `e_mor(m)`, evaluated on every point.
fn point_function(m: &CntMorphism) -> Vec<usize> {
    let from = ComputableSpace::full(e_obj(m.src()));
    let to = ComputableSpace::full(e_obj(m.tar()));
    let op = e_mor(m);
    from.points()
        .iter()
        .map(|p| to.index_of(&apply_operator(&op, p).unwrap()).unwrap())
        .collect()
}

proptest! {
    #[test]
    fn composition_is_associative_and_unital(seed in any::<u64>()) {
        let (m1, m2, m3) = random_composable_triple(&mut rng(seed), 5);
        for m in [&m1, &m2, &m3] {
            prop_assert!(check_cnt_morphism(m).is_ok());
        }
        let left = compose_cnt(&m3, &compose_cnt(&m2, &m1).unwrap()).unwrap();
        let right = compose_cnt(&compose_cnt(&m3, &m2).unwrap(), &m1).unwrap();
        prop_assert!(same(&left, &right));
        prop_assert!(check_cnt_morphism(&left).is_ok());
        let id_src = CntMorphism::identity(m1.src());
        let id_tar = CntMorphism::identity(m1.tar());
        prop_assert!(same(&compose_cnt(&m1, &id_src).unwrap(), &m1));
        prop_assert!(same(&compose_cnt(&id_tar, &m1).unwrap(), &m1));
    }

    #[test]
    fn e_obj_is_discrete(p in per_strategy(8)) {
        prop_assert!(check_per(&p).is_ok());
        let space = ComputableSpace::full(e_obj(&p));
        prop_assert_eq!(space.len(), p.classes().len());
        for (i, a) in space.points().iter().enumerate() {
            for b in &space.points()[i + 1..] {
                prop_assert!(a.elements().is_disjoint(b.elements()));
            }
        }
    }

    #[test]
    fn e_mor_is_functorial(seed in any::<u64>()) {
        let (m1, m2, _) = random_composable_triple(&mut rng(seed), 6);
        let n = ComputableSpace::full(e_obj(m1.src())).len();
        prop_assert_eq!(point_function(&CntMorphism::identity(m1.src())), (0..n).collect::<Vec<_>>());
        let f = point_function(&m1);
        let g = point_function(&m2);
        let gf: Vec<usize> = f.iter().map(|&i| g[i]).collect();
        prop_assert_eq!(point_function(&compose_cnt(&m2, &m1).unwrap()), gf.clone());
        // the syntactic operator composite agrees on points
        let op = compose_operators(&e_mor(&m2), &e_mor(&m1)).unwrap();
        let from = ComputableSpace::full(e_obj(m1.src()));
        let to = ComputableSpace::full(e_obj(m2.tar()));
        for (i, p) in from.points().iter().enumerate() {
            prop_assert_eq!(to.index_of(&apply_operator(&op, p).unwrap()), Some(gf[i]));
        }
    }

    #[test]
    fn spatialize_recovers_the_classes(p in per_strategy(6), seed in any::<u64>()) {
        for w in [OvertDiscreteWitness::canonical(&p), random_witness(&mut rng(seed), &p)] {
            prop_assert!(check_witness(&w).is_ok());
            let sp = spatialize(&w).unwrap();
            prop_assert!(check_spatialization(&sp).is_ok());
            prop_assert_eq!(sp.per.classes().len(), p.classes().len());
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    /// Valid graphs between two PERs correspond exactly to functions between
    /// their class spaces.
    #[test]
    fn e_is_full_and_faithful(src in per_strategy(5), tar in per_strategy(5)) {
        let ds: Vec<usize> = (0..src.carrier()).filter(|&a| src.is_defined(a)).collect();
        let dt: Vec<usize> = (0..tar.carrier()).filter(|&a| tar.is_defined(a)).collect();
        let universe: Vec<(usize, usize)> = ds.iter().flat_map(|&a| dt.iter().map(move |&b| (a, b))).collect();
        prop_assume!(universe.len() <= 14);
        let mut functions = BTreeSet::new();
        let mut valid = 0usize;
        for code in 0u32..1 << universe.len() {
            let graph = (0..universe.len()).filter(|&i| code >> i & 1 == 1).map(|i| universe[i]);
            let m = CntMorphism::new(graph, src.clone(), tar.clone()).unwrap();
            if check_cnt_morphism(&m).is_ok() {
                valid += 1;
                functions.insert(point_function(&m));
            }
        }
        let (ks, kt) = (src.classes().len() as u32, tar.classes().len());
        let expected = kt.pow(ks);
        prop_assert_eq!(valid, expected);
        prop_assert_eq!(functions.len(), expected);
    }
}

#[test]
fn empty_per_is_the_empty_space() {
    let p = Per::empty(3);
    assert!(check_per(&p).is_ok());
    assert!(ComputableSpace::full(e_obj(&p)).is_empty());
}
