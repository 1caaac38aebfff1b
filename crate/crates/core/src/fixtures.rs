//! Small named instances shared by tests, examples and the bundled corpus.

use crate::categories::{discrete_category, CategoryInstance, FunctorInstance};
use crate::cntsets::{CntMorphism, Per};
use crate::etale::{ActionInstance, Chart, EtaleInstance};
use crate::ideals::{ComputableSpace, TransitiveRelation};

/// Sierpiński space: `0 ≺ 0`, `0 ≺ 1`, `1 ≺ 1`.
pub fn rel_sierp() -> TransitiveRelation {
    TransitiveRelation::validated(2, [(0, 0), (0, 1), (1, 1)]).expect("transitive")
}

pub fn rel_flat2() -> TransitiveRelation {
    TransitiveRelation::flat(2)
}

pub fn rel_point() -> TransitiveRelation {
    TransitiveRelation::flat(1)
}

/// Inclusion order on the four subsets of `{0, 1}`, indexed by bit code.
pub fn rel_powerset4() -> TransitiveRelation {
    let pairs = (0..4usize).flat_map(|i| (0..4usize).filter(move |j| i & !j == 0).map(move |j| (i, j)));
    TransitiveRelation::validated(4, pairs).expect("transitive")
}

/// Classes `{0, 1}` and `{2}`.
pub fn per_2cls() -> Per {
    Per::from_classes(3, &[vec![0, 1], vec![2]]).expect("in range")
}

pub fn per_pt() -> Per {
    Per::from_classes(1, &[vec![0]]).expect("in range")
}

/// Swaps the two classes of [`per_2cls`].
pub fn swap_2cls() -> CntMorphism {
    CntMorphism::new([(0, 2), (1, 2), (2, 0), (2, 1)], per_2cls(), per_2cls()).expect("in range")
}

/// Builds a category on a flat object space from its non-identity arrows.
///
/// Morphism `c` is the identity of object `c`; `arrows` lists `(src, tar)`
/// of the remaining morphisms, numbered from `objects` on. `extra` gives
/// composites of non-identity pairs; composites with identities are filled in.
pub fn flat_category(
    objects: usize,
    arrows: &[(usize, usize)],
    extra: &[((usize, usize), usize)],
) -> CategoryInstance {
    let ids: Vec<usize> = (0..objects).collect();
    let mut src = ids.clone();
    let mut tar = ids.clone();
    for &(s, t) in arrows {
        src.push(s);
        tar.push(t);
    }
    let nm = src.len();
    let mut comp: Vec<((usize, usize), usize)> = extra.to_vec();
    for f in 0..nm {
        comp.push(((tar[f], f), f));
        comp.push(((f, src[f]), f));
    }
    comp.sort();
    comp.dedup();
    CategoryInstance::new(
        TransitiveRelation::flat(objects),
        TransitiveRelation::flat(nm),
        src,
        tar,
        ids,
        comp,
    )
    .expect("category tables are consistent")
}

/// A one-object category whose morphisms form the monoid given by `table`.
pub fn monoid_category(table: &[Vec<usize>]) -> CategoryInstance {
    let n = table.len();
    let comp = (0..n).flat_map(|g| (0..n).map(move |f| ((g, f), table[g][f])));
    CategoryInstance::new(
        TransitiveRelation::flat(1),
        TransitiveRelation::flat(n),
        vec![0; n],
        vec![0; n],
        vec![0],
        comp,
    )
    .expect("monoid tables are consistent")
}

/// The group `Z2 = {e, σ}` with `σ ∘ σ = e`.
pub fn cat_z2() -> CategoryInstance {
    monoid_category(&[vec![0, 1], vec![1, 0]])
}

/// `{e, σ}` with `σ ∘ σ = σ`.
pub fn cat_idempotent() -> CategoryInstance {
    monoid_category(&[vec![0, 1], vec![1, 1]])
}

pub fn cat_z3() -> CategoryInstance {
    monoid_category(&[vec![0, 1, 2], vec![1, 2, 0], vec![2, 0, 1]])
}

/// Two objects `a, b` and one arrow `a → b`.
pub fn cat_arrow() -> CategoryInstance {
    flat_category(2, &[(0, 1)], &[])
}

/// `a → b → c` with the composite `a → c`.
pub fn cat_chain3() -> CategoryInstance {
    flat_category(3, &[(0, 1), (1, 2), (0, 2)], &[((4, 3), 5)])
}

/// Two isomorphic objects: `u: a → b`, `v: b → a`, mutually inverse.
pub fn cat_iso() -> CategoryInstance {
    flat_category(2, &[(0, 1), (1, 0)], &[((3, 2), 0), ((2, 3), 1)])
}

/// The base categories used by the generated corpus, by name.
pub fn base_categories() -> Vec<(&'static str, CategoryInstance)> {
    vec![
        ("point", discrete_category(&rel_point())),
        ("flat2", discrete_category(&rel_flat2())),
        ("flat3", discrete_category(&TransitiveRelation::flat(3))),
        ("sierp", discrete_category(&rel_sierp())),
        ("z2", cat_z2()),
        ("z3", cat_z3()),
        ("idempotent", cat_idempotent()),
        ("arrow", cat_arrow()),
        ("chain3", cat_chain3()),
        ("iso", cat_iso()),
    ]
}

/// Discrete base on two points: `PER_2CLS` over the first, `PER_PT` over the second.
pub fn functor_f0() -> FunctorInstance {
    let c = discrete_category(&rel_flat2());
    FunctorInstance::new(
        c,
        vec![per_2cls(), per_pt()],
        vec![CntMorphism::identity(&per_2cls()), CntMorphism::identity(&per_pt())],
    )
    .expect("table sizes match")
}

/// `Z2` acting on the two classes of `PER_2CLS` by swapping them.
pub fn functor_f1() -> FunctorInstance {
    FunctorInstance::new(
        cat_z2(),
        vec![per_2cls()],
        vec![CntMorphism::identity(&per_2cls()), swap_2cls()],
    )
    .expect("table sizes match")
}

/// `p = id` with a single chart covering everything.
pub fn etale_identity(r: &TransitiveRelation) -> EtaleInstance {
    let space = ComputableSpace::full(r.clone());
    let gens: Vec<usize> = (0..r.carrier()).collect();
    let ids: Vec<usize> = (0..space.len()).collect();
    EtaleInstance::with_spaces(
        space.clone(),
        space,
        ids.clone(),
        vec![Chart::new(gens.clone(), gens, ids.iter().map(|&i| (i, i)))],
    )
    .expect("identity étale space")
}

/// Two points over the single object of `Z2`, swapped by `σ`.
pub fn cset_z2_swap() -> ActionInstance {
    let e = EtaleInstance::new(
        rel_flat2(),
        rel_point(),
        vec![0, 0],
        vec![Chart::new([0], [0], [(0, 0)]), Chart::new([1], [0], [(0, 1)])],
    )
    .expect("two-sheeted cover");
    ActionInstance::new(cat_z2(), e, [((0, 0), 0), ((0, 1), 1), ((1, 0), 1), ((1, 1), 0)])
        .expect("action on dom(α)")
}
