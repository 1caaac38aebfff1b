use etale::categories::{
    check_category, check_functor, check_nat_trans, discrete_category, CategoryInstance,
    FunctorInstance, NatTransInstance,
};
use etale::cntsets::CntMorphism;
use etale::corpus::{random_functor, random_morphism, rng};
use etale::ideals::TransitiveRelation;
use proptest::prelude::*;
use rand::Rng;

/// Independent evaluation of the category laws on flat tables.
fn lawful(no: usize, src: &[usize], tar: &[usize], id: &[usize], comp: &dyn Fn(usize, usize) -> Option<usize>) -> bool {
    let nm = src.len();
    for g in 0..nm {
        for f in 0..nm {
            if let Some(h) = comp(g, f) {
                if src[h] != src[f] || tar[h] != tar[g] {
                    return false;
                }
            }
        }
    }
    for c in 0..no {
        if src[id[c]] != c || tar[id[c]] != c {
            return false;
        }
    }
    for f in 0..nm {
        if comp(id[tar[f]], f) != Some(f) || comp(f, id[src[f]]) != Some(f) {
            return false;
        }
        for g in 0..nm {
            for h in 0..nm {
                let left = comp(h, g).and_then(|hg| comp(hg, f));
                let right = comp(g, f).and_then(|gf| comp(h, gf));
                if (src[h] == tar[g] && src[g] == tar[f]) && left != right {
                    return false;
                }
            }
        }
    }
    true
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(512))]

    #[test]
    fn checker_agrees_with_law_oracle(seed in any::<u64>()) {
        let mut r = rng(seed);
        let no = r.gen_range(1..=2);
        let nm = r.gen_range(no..=3);
        let src: Vec<usize> = (0..nm).map(|_| r.gen_range(0..no)).collect();
        let tar: Vec<usize> = (0..nm).map(|_| r.gen_range(0..no)).collect();
        let id: Vec<usize> = (0..no).map(|_| r.gen_range(0..nm)).collect();
        let mut comp = Vec::new();
        for g in 0..nm {
            for f in 0..nm {
                if src[g] == tar[f] {
                    // bias toward lawful values so both outcomes occur
                    let h = if r.gen_bool(0.5) {
                        let cands: Vec<usize> = (0..nm).filter(|&h| src[h] == src[f] && tar[h] == tar[g]).collect();
                        if cands.is_empty() { r.gen_range(0..nm) } else { cands[r.gen_range(0..cands.len())] }
                    } else {
                        r.gen_range(0..nm)
                    };
                    comp.push(((g, f), h));
                }
            }
        }
        let table: std::collections::BTreeMap<(usize, usize), usize> = comp.iter().copied().collect();
        let expect = lawful(no, &src, &tar, &id, &|g, f| table.get(&(g, f)).copied());
        let c = CategoryInstance::new(
            TransitiveRelation::flat(no),
            TransitiveRelation::flat(nm),
            src, tar, id, comp,
        ).unwrap();
        prop_assert_eq!(check_category(&c).is_ok(), expect);
    }

    #[test]
    fn identities_must_map_to_identities(seed in any::<u64>()) {
        let mut r = rng(seed);
        let bases = etale::fixtures::base_categories();
        let (name, cat) = &bases[r.gen_range(0..bases.len())];
        let f = random_functor(&mut r, name, cat, 4);
        prop_assert!(check_functor(&f).is_ok());
        let c = r.gen_range(0..cat.object_count());
        let i = cat.id(c);
        let p = f.obj(c).clone();
        let replacement = random_morphism(&mut r, &p, &p).unwrap();
        let mut mor = f.mor_table().to_vec();
        mor[i] = replacement.clone();
        let g = FunctorInstance::new(cat.clone(), f.obj_table().to_vec(), mor).unwrap();
        if check_functor(&g).is_ok() {
            prop_assert!(replacement.same_morphism(&CntMorphism::identity(&p)));
        } else {
            prop_assert!(!replacement.same_morphism(&CntMorphism::identity(&p)));
        }
    }

    #[test]
    fn naturality_is_free_over_discrete_bases(seed in any::<u64>()) {
        let mut r = rng(seed);
        let n = r.gen_range(1..=3);
        let cat = discrete_category(&TransitiveRelation::flat(n));
        let f = random_functor(&mut r, "flat", &cat, 4);
        let g = random_functor(&mut r, "flat", &cat, 4);
        let eta: Vec<CntMorphism> = (0..n)
            .map(|c| {
                // a component with the wrong source when no map exists
                random_morphism(&mut r, f.obj(c), g.obj(c))
                    .unwrap_or_else(|| CntMorphism::identity(g.obj(c)))
            })
            .collect();
        let compatible = eta.iter().enumerate().all(|(c, m)| m.src() == f.obj(c) && m.tar() == g.obj(c));
        let report = check_nat_trans(&NatTransInstance::new(f, g, eta).unwrap());
        prop_assert!(!report.has_rule("nat.naturality"));
        prop_assert_eq!(report.is_ok(), compatible);
    }
}
