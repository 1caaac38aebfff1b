mod common;

use std::collections::BTreeSet;

use common::{oracle_ideals, oracle_is_ideal, relation_strategy};
use etale::ideals::{
    apply_operator, apply_stream, enumerate_ideals, is_ideal, open_member, product_relation,
    CeOpen, ComputableSpace, EnumOperator,
};
use etale::kernel::{Fuel, Semi};
use proptest::prelude::*;

fn elements(r: &etale::ideals::TransitiveRelation) -> Vec<BTreeSet<usize>> {
    enumerate_ideals(r).unwrap().into_iter().map(|i| i.elements().clone()).collect()
}

proptest! {
    #[test]
    fn enumeration_matches_oracle(r in relation_strategy(6)) {
        let got = elements(&r);
        prop_assert_eq!(&got, &oracle_ideals(&r));
        let principal: Vec<BTreeSet<usize>> = r.ideals().into_iter().map(|i| i.elements().clone()).collect();
        prop_assert_eq!(&got, &principal);
        let unique: BTreeSet<_> = got.iter().collect();
        prop_assert_eq!(unique.len(), got.len());
    }

    #[test]
    fn is_ideal_matches_oracle(r in relation_strategy(5), code in 0u32..32) {
        let s: BTreeSet<usize> = (0..r.carrier()).filter(|&i| code >> i & 1 == 1).collect();
        prop_assert_eq!(is_ideal(&r, &s).unwrap(), oracle_is_ideal(&r, &s));
    }

    #[test]
    fn operators_are_monotone(r in relation_strategy(4), table_seed in proptest::collection::vec(0usize..16, 16)) {
        let space = ComputableSpace::full(r.clone());
        prop_assume!(!space.is_empty());
        // the constant table is monotone; keep the seed table only when it is
        let n = space.len();
        let table: Vec<usize> = (0..n).map(|i| table_seed[i] % n).collect();
        let table = if space.is_monotone_into(&space, &table) { table } else { vec![table[0]; n] };
        let op = EnumOperator::from_point_table(&space, &space, &table).unwrap();
        for i in 0..n {
            for j in 0..n {
                let (a, b) = (space.point(i), space.point(j));
                let (fa, fb) = (apply_operator(&op, a).unwrap(), apply_operator(&op, b).unwrap());
                if a.is_subset(b) {
                    prop_assert!(fa.is_subset(&fb));
                }
            }
            prop_assert_eq!(apply_operator(&op, space.point(i)).unwrap(), space.point(table[i]).clone());
            // the stream route converges to the same ideal
            let streamed: BTreeSet<usize> = apply_stream(&op, &space.point(i).to_stream())
                .elements()
                .prefix(2000)
                .into_iter()
                .collect();
            prop_assert_eq!(&streamed, space.point(table[i]).elements());
        }
    }

    #[test]
    fn basic_open_membership(r in relation_strategy(5)) {
        let space = ComputableSpace::full(r.clone());
        for p in space.points() {
            for a in 0..r.carrier() {
                let got = open_member(&p.to_stream(), &CeOpen::finite([a]), Fuel(1000));
                prop_assert_eq!(got == Semi::Yes, p.contains(a));
            }
        }
    }

    #[test]
    fn product_point_count(r1 in relation_strategy(6), r2 in relation_strategy(6)) {
        let prod = product_relation(&r1, &r2);
        let n1 = oracle_ideals(&r1).len();
        let n2 = oracle_ideals(&r2).len();
        prop_assert_eq!(prod.ideals().len(), n1 * n2);
        if prod.carrier() <= 16 {
            prop_assert_eq!(oracle_ideals(&prod).len(), n1 * n2);
        }
    }
}
