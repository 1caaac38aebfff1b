//! Finite computable categories, functors into `CntSets`, and natural
//! transformations between them.
//!
//! Objects and morphisms are the points of two finite spaces of ideals; the
//! structure maps are point tables. Every table must be monotone for the
//! specialization orders, which on finite spaces of ideals is exactly what it
//! takes to be realized by an enumeration operator.

use std::collections::BTreeMap;

use serde_json::json;

use crate::cntsets::{check_cnt_morphism, check_per, compose_cnt, CntMorphism, Per};
use crate::ideals::{
    check_relation, monotone_violations, ComputableSpace, EnumOperator, TransitiveRelation,
};
use crate::{Error, Report, Result};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CategoryInstance {
    obj: ComputableSpace,
    mor: ComputableSpace,
    src: Vec<usize>,
    tar: Vec<usize>,
    id: Vec<usize>,
    comp: BTreeMap<(usize, usize), usize>,
}

impl CategoryInstance {
    /// Builds the instance; `comp` is keyed by `(g, f)` meaning `g ∘ f` and
    /// must be defined on exactly the pairs with `src(g) = tar(f)`.
    pub fn new(
        obj: TransitiveRelation,
        mor: TransitiveRelation,
        src: Vec<usize>,
        tar: Vec<usize>,
        id: Vec<usize>,
        comp: impl IntoIterator<Item = ((usize, usize), usize)>,
    ) -> Result<Self> {
        let obj = ComputableSpace::full(obj);
        let mor = ComputableSpace::full(mor);
        let (no, nm) = (obj.len(), mor.len());
        if src.len() != nm || tar.len() != nm {
            return Err(Error::input(format!(
                "src/tar tables need {nm} entries, got {}/{}",
                src.len(),
                tar.len()
            )));
        }
        if id.len() != no {
            return Err(Error::input(format!(
                "id table needs {no} entries, got {}",
                id.len()
            )));
        }
        if src.iter().chain(&tar).any(|&c| c >= no) || id.iter().any(|&f| f >= nm) {
            return Err(Error::input("structure table refers to a missing point"));
        }
        let mut table = BTreeMap::new();
        for ((g, f), h) in comp {
            if g >= nm || f >= nm || h >= nm {
                return Err(Error::input(format!("composition entry ({g},{f})->{h} out of range")));
            }
            if src[g] != tar[f] {
                return Err(Error::input(format!(
                    "composition given on non-composable pair ({g},{f})"
                )));
            }
            if table.insert((g, f), h).is_some() {
                return Err(Error::input(format!("composition of ({g},{f}) given twice")));
            }
        }
        for g in 0..nm {
            for f in 0..nm {
                if src[g] == tar[f] && !table.contains_key(&(g, f)) {
                    return Err(Error::input(format!("composition of ({g},{f}) missing")));
                }
            }
        }
        Ok(Self {
            obj,
            mor,
            src,
            tar,
            id,
            comp: table,
        })
    }

    pub fn objects(&self) -> &ComputableSpace {
        &self.obj
    }

    pub fn morphisms(&self) -> &ComputableSpace {
        &self.mor
    }

    pub fn object_count(&self) -> usize {
        self.obj.len()
    }

    pub fn morphism_count(&self) -> usize {
        self.mor.len()
    }

    pub fn src(&self, f: usize) -> usize {
        self.src[f]
    }

    pub fn tar(&self, f: usize) -> usize {
        self.tar[f]
    }

    pub fn id(&self, c: usize) -> usize {
        self.id[c]
    }

    pub fn src_table(&self) -> &[usize] {
        &self.src
    }

    pub fn tar_table(&self) -> &[usize] {
        &self.tar
    }

    pub fn id_table(&self) -> &[usize] {
        &self.id
    }

    pub fn comp_table(&self) -> &BTreeMap<(usize, usize), usize> {
        &self.comp
    }

    /// `g ∘ f`, defined when `src(g) = tar(f)`.
    pub fn compose(&self, g: usize, f: usize) -> Option<usize> {
        self.comp.get(&(g, f)).copied()
    }

    /// Enumeration-operator realizers of `src`, `tar` and `id`.
    pub fn realizers(&self) -> Result<[EnumOperator; 3]> {
        Ok([
            EnumOperator::from_point_table(&self.mor, &self.obj, &self.src)?,
            EnumOperator::from_point_table(&self.mor, &self.obj, &self.tar)?,
            EnumOperator::from_point_table(&self.obj, &self.mor, &self.id)?,
        ])
    }
}

/// `C_X`: every point of `X` is an object carrying only its identity.
pub fn discrete_category(x: &TransitiveRelation) -> CategoryInstance {
    let n = ComputableSpace::full(x.clone()).len();
    let ids: Vec<usize> = (0..n).collect();
    CategoryInstance::new(
        x.clone(),
        x.clone(),
        ids.clone(),
        ids.clone(),
        ids,
        (0..n).map(|i| ((i, i), i)),
    )
    .expect("discrete category tables are consistent")
}

/// The category laws plus monotonicity of every structure table.
pub fn check_category(c: &CategoryInstance) -> Report {
    let mut report = Report::new();
    report.absorb("obj", check_relation(c.obj.relation()));
    report.absorb("mor", check_relation(c.mor.relation()));
    for (&(g, f), &h) in &c.comp {
        if c.src[h] != c.src[f] {
            report.push("category.comp-source", json!({ "g": g, "f": f, "composite": h }));
        }
        if c.tar[h] != c.tar[g] {
            report.push("category.comp-target", json!({ "g": g, "f": f, "composite": h }));
        }
    }
    for (obj, &i) in c.id.iter().enumerate() {
        if c.src[i] != obj {
            report.push("category.id-source", json!({ "object": obj, "id": i }));
        }
        if c.tar[i] != obj {
            report.push("category.id-target", json!({ "object": obj, "id": i }));
        }
    }
    for (&(h, g), &hg) in &c.comp {
        for f in (0..c.mor.len()).filter(|&f| c.src[g] == c.tar[f]) {
            let (Some(gf), Some(left)) = (c.compose(g, f), c.compose(hg, f)) else {
                continue;
            };
            // only compare when the other bracketing is defined as well
            if let Some(right) = c.compose(h, gf) {
                if left != right {
                    report.push(
                        "category.assoc",
                        json!({ "h": h, "g": g, "f": f, "left": left, "right": right }),
                    );
                }
            }
        }
    }
    for f in 0..c.mor.len() {
        let (s, t) = (c.src[f], c.tar[f]);
        if c.compose(f, c.id[s]).is_some_and(|x| x != f) {
            report.push("category.right-unit", json!({ "morphism": f, "object": s }));
        }
        if c.compose(c.id[t], f).is_some_and(|x| x != f) {
            report.push("category.left-unit", json!({ "morphism": f, "object": t }));
        }
    }
    for (name, table, dom, cod) in [
        ("src", &c.src, &c.mor, &c.obj),
        ("tar", &c.tar, &c.mor, &c.obj),
        ("id", &c.id, &c.obj, &c.mor),
    ] {
        if let Some((i, j)) =
            monotone_violations(dom.len(), |i, j| dom.leq(i, j), |i, j| cod.leq(table[i], table[j]))
        {
            report.push("category.continuity", json!({ "table": name, "points": [i, j] }));
        }
    }
    let entries: Vec<(&(usize, usize), &usize)> = c.comp.iter().collect();
    if let Some((a, b)) = monotone_violations(
        entries.len(),
        |a, b| {
            let ((g1, f1), _) = entries[a];
            let ((g2, f2), _) = entries[b];
            c.mor.leq(*g1, *g2) && c.mor.leq(*f1, *f2)
        },
        |a, b| c.mor.leq(*entries[a].1, *entries[b].1),
    ) {
        report.push(
            "category.continuity",
            json!({ "table": "comp", "pairs": [entries[a].0, entries[b].0] }),
        );
    }
    report
}

/// A functor `C → CntSets` given by object and morphism tables.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FunctorInstance {
    category: CategoryInstance,
    obj: Vec<Per>,
    mor: Vec<CntMorphism>,
}

impl FunctorInstance {
    pub fn new(category: CategoryInstance, obj: Vec<Per>, mor: Vec<CntMorphism>) -> Result<Self> {
        if obj.len() != category.object_count() || mor.len() != category.morphism_count() {
            return Err(Error::input(format!(
                "functor tables need {}/{} entries, got {}/{}",
                category.object_count(),
                category.morphism_count(),
                obj.len(),
                mor.len()
            )));
        }
        Ok(Self { category, obj, mor })
    }

    pub fn category(&self) -> &CategoryInstance {
        &self.category
    }

    pub fn obj(&self, c: usize) -> &Per {
        &self.obj[c]
    }

    pub fn mor(&self, f: usize) -> &CntMorphism {
        &self.mor[f]
    }

    pub fn obj_table(&self) -> &[Per] {
        &self.obj
    }

    pub fn mor_table(&self) -> &[CntMorphism] {
        &self.mor
    }

    /// Sends every object to the one-class PER and every morphism to its identity.
    pub fn constant_singleton(category: &CategoryInstance) -> Self {
        let pt = Per::new(1, [(0, 0)]).expect("in range");
        let id = CntMorphism::identity(&pt);
        Self {
            category: category.clone(),
            obj: vec![pt; category.object_count()],
            mor: vec![id; category.morphism_count()],
        }
    }
}

/// The four functor conditions, component validity and monotonicity.
pub fn check_functor(f: &FunctorInstance) -> Report {
    let mut report = Report::new();
    let c = &f.category;
    report.absorb("category", check_category(c));
    for (i, p) in f.obj.iter().enumerate() {
        report.absorb(&format!("obj[{i}]"), check_per(p));
    }
    for (i, m) in f.mor.iter().enumerate() {
        report.absorb(&format!("mor[{i}]"), check_cnt_morphism(m));
    }
    for (m, image) in f.mor.iter().enumerate() {
        if *image.src() != f.obj[c.src(m)] {
            report.push("functor.source", json!({ "morphism": m, "object": c.src(m) }));
        }
        if *image.tar() != f.obj[c.tar(m)] {
            report.push("functor.target", json!({ "morphism": m, "object": c.tar(m) }));
        }
    }
    for obj in 0..c.object_count() {
        let i = c.id(obj);
        if !f.mor[i].same_morphism(&CntMorphism::identity(&f.obj[obj])) {
            report.push("functor.identity", json!({ "object": obj, "id": i }));
        }
    }
    for (&(g, h), &gh) in c.comp_table() {
        // mismatched endpoints are already reported above
        if let Ok(composite) = compose_cnt(&f.mor[g], &f.mor[h]) {
            if !composite.same_morphism(&f.mor[gh]) {
                report.push(
                    "functor.composition",
                    json!({ "g": g, "f": h, "composite": gh }),
                );
            }
        }
    }
    let objs = c.objects();
    if let Some((i, j)) = monotone_violations(
        objs.len(),
        |i, j| objs.leq(i, j),
        |i, j| f.obj[i].is_subset(&f.obj[j]),
    ) {
        report.push("functor.continuity", json!({ "table": "obj", "points": [i, j] }));
    }
    let mors = c.morphisms();
    if let Some((i, j)) = monotone_violations(
        mors.len(),
        |i, j| mors.leq(i, j),
        |i, j| f.mor[i].saturated().is_below(&f.mor[j].saturated()),
    ) {
        report.push("functor.continuity", json!({ "table": "mor", "points": [i, j] }));
    }
    report
}

/// A natural transformation `η: F → G` with components `η(c)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NatTransInstance {
    from: FunctorInstance,
    to: FunctorInstance,
    eta: Vec<CntMorphism>,
}

impl NatTransInstance {
    pub fn new(from: FunctorInstance, to: FunctorInstance, eta: Vec<CntMorphism>) -> Result<Self> {
        if from.category != to.category {
            return Err(Error::input("natural transformation between functors on different categories"));
        }
        if eta.len() != from.category.object_count() {
            return Err(Error::input(format!(
                "component table needs {} entries, got {}",
                from.category.object_count(),
                eta.len()
            )));
        }
        Ok(Self { from, to, eta })
    }

    pub fn identity(f: &FunctorInstance) -> Self {
        Self {
            from: f.clone(),
            to: f.clone(),
            eta: f.obj.iter().map(CntMorphism::identity).collect(),
        }
    }

    pub fn from_functor(&self) -> &FunctorInstance {
        &self.from
    }

    pub fn to_functor(&self) -> &FunctorInstance {
        &self.to
    }

    pub fn component(&self, c: usize) -> &CntMorphism {
        &self.eta[c]
    }

    pub fn components(&self) -> &[CntMorphism] {
        &self.eta
    }
}

pub fn check_nat_trans(n: &NatTransInstance) -> Report {
    let mut report = Report::new();
    report.absorb("from", check_functor(&n.from));
    report.absorb("to", check_functor(&n.to));
    for (c, m) in n.eta.iter().enumerate() {
        report.absorb(&format!("eta[{c}]"), check_cnt_morphism(m));
        if *m.src() != n.from.obj[c] {
            report.push("nat.source", json!({ "object": c }));
        }
        if *m.tar() != n.to.obj[c] {
            report.push("nat.target", json!({ "object": c }));
        }
    }
    let cat = &n.from.category;
    for f in 0..cat.morphism_count() {
        let left = compose_cnt(&n.eta[cat.tar(f)], &n.from.mor[f]);
        let right = compose_cnt(&n.to.mor[f], &n.eta[cat.src(f)]);
        if let (Ok(l), Ok(r)) = (left, right) {
            if !l.same_morphism(&r) {
                report.push("nat.naturality", json!({ "morphism": f }));
            }
        }
    }
    let objs = cat.objects();
    if let Some((i, j)) = monotone_violations(
        objs.len(),
        |i, j| objs.leq(i, j),
        |i, j| n.eta[i].saturated().is_below(&n.eta[j].saturated()),
    ) {
        report.push("nat.continuity", json!({ "points": [i, j] }));
    }
    report
}

/// `(θ ∘ η)(c) = θ(c) ∘ η(c)`.
pub fn vertical_compose(n2: &NatTransInstance, n1: &NatTransInstance) -> Result<NatTransInstance> {
    if n1.to != n2.from {
        return Err(Error::input(
            "cannot compose: the transformations do not meet at a common functor",
        ));
    }
    let eta = n2
        .eta
        .iter()
        .zip(&n1.eta)
        .map(|(t, e)| compose_cnt(t, e))
        .collect::<Result<Vec<_>>>()?;
    NatTransInstance::new(n1.from.clone(), n2.to.clone(), eta)
}

/// True when two transformations agree componentwise as morphisms.
pub fn same_nat_trans(a: &NatTransInstance, b: &NatTransInstance) -> bool {
    a.from == b.from
        && a.to == b.to
        && a.eta.iter().zip(&b.eta).all(|(x, y)| x.same_morphism(y))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::{
        cat_z2, functor_f0, functor_f1, per_2cls, per_pt, rel_flat2, rel_point, rel_sierp,
        swap_2cls,
    };
    use crate::ideals::apply_operator;

    #[test]
    fn discrete_categories_are_valid() {
        let term = discrete_category(&rel_point());
        assert_eq!(term.object_count(), 1);
        assert!(check_category(&term).is_ok());
        let s = discrete_category(&rel_sierp());
        assert_eq!((s.object_count(), s.morphism_count()), (2, 2));
        assert!(check_category(&s).is_ok());
        assert!(check_category(&discrete_category(&rel_flat2())).is_ok());
    }

    #[test]
    fn z2_examples() {
        assert!(check_category(&cat_z2()).is_ok());
        // σ∘σ = σ with e as unit is the idempotent monoid, a lawful category
        let idem = CategoryInstance::new(
            rel_point(),
            rel_flat2(),
            vec![0, 0],
            vec![0, 0],
            vec![0],
            [((0, 0), 0), ((0, 1), 1), ((1, 0), 1), ((1, 1), 1)],
        )
        .unwrap();
        assert!(check_category(&idem).is_ok());
    }

    #[test]
    fn unit_law_violation_is_detected() {
        // identity of the single object chosen as σ
        let bad = CategoryInstance::new(
            rel_point(),
            rel_flat2(),
            vec![0, 0],
            vec![0, 0],
            vec![1],
            [((0, 0), 0), ((0, 1), 1), ((1, 0), 1), ((1, 1), 0)],
        )
        .unwrap();
        let rep = check_category(&bad);
        assert!(rep.has_rule("category.left-unit"));
        assert!(rep.has_rule("category.right-unit"));
    }

    #[test]
    fn structural_errors() {
        // composition on a non-composable pair
        let r = CategoryInstance::new(
            rel_flat2(),
            rel_flat2(),
            vec![0, 1],
            vec![0, 1],
            vec![0, 1],
            [((0, 0), 0), ((1, 1), 1), ((0, 1), 0)],
        );
        assert!(matches!(r, Err(Error::Input(_))));
        let r = CategoryInstance::new(
            rel_flat2(),
            rel_flat2(),
            vec![0, 1],
            vec![0, 1],
            vec![0, 1],
            [((0, 0), 0)],
        );
        assert!(matches!(r, Err(Error::Input(_))));
    }

    #[test]
    fn realizers_match_tables() {
        let c = discrete_category(&rel_sierp());
        let [src, _, id] = c.realizers().unwrap();
        for (i, p) in c.morphisms().points().iter().enumerate() {
            let img = apply_operator(&src, p).unwrap();
            assert_eq!(c.objects().index_of(&img), Some(c.src(i)));
        }
        for (i, p) in c.objects().points().iter().enumerate() {
            let img = apply_operator(&id, p).unwrap();
            assert_eq!(c.morphisms().index_of(&img), Some(c.id(i)));
        }
    }

    #[test]
    fn check_functor_examples() {
        assert!(check_functor(&functor_f0()).is_ok());
        assert!(check_functor(&functor_f1()).is_ok());
        let swap = swap_2cls();
        let sq = compose_cnt(&swap, &swap).unwrap();
        assert!(sq.same_morphism(&CntMorphism::identity(&per_2cls())));

        let trivial = FunctorInstance::new(
            cat_z2(),
            vec![per_2cls()],
            vec![CntMorphism::identity(&per_2cls()); 2],
        )
        .unwrap();
        assert!(check_functor(&trivial).is_ok());

        let constant = CntMorphism::from_class_map(&per_2cls(), &per_2cls(), &[1, 1]).unwrap();
        let bad = FunctorInstance::new(
            cat_z2(),
            vec![per_2cls()],
            vec![CntMorphism::identity(&per_2cls()), constant],
        )
        .unwrap();
        let rep = check_functor(&bad);
        assert!(rep.has_rule("functor.composition"));
        assert!(!rep.has_rule("functor.identity"));
    }

    #[test]
    fn identity_condition_forces_identity_morphisms() {
        let c = discrete_category(&rel_flat2());
        let swap = swap_2cls();
        let f = FunctorInstance::new(
            c,
            vec![per_2cls(), per_pt()],
            vec![swap, CntMorphism::identity(&per_pt())],
        )
        .unwrap();
        assert!(check_functor(&f).has_rule("functor.identity"));
    }

    #[test]
    fn functor_continuity_on_sierpinski_base() {
        let c = discrete_category(&rel_sierp());
        let big = per_2cls();
        let small = Per::new(3, [(0, 0)]).unwrap();
        let ok = FunctorInstance::new(
            c.clone(),
            vec![small.clone(), big.clone()],
            vec![CntMorphism::identity(&small), CntMorphism::identity(&big)],
        )
        .unwrap();
        assert!(check_functor(&ok).is_ok());
        let flipped = FunctorInstance::new(
            c,
            vec![big.clone(), small.clone()],
            vec![CntMorphism::identity(&big), CntMorphism::identity(&small)],
        )
        .unwrap();
        assert!(check_functor(&flipped).has_rule("functor.continuity"));
    }

    #[test]
    fn nat_trans_examples() {
        let f = functor_f0();
        let id = NatTransInstance::identity(&f);
        assert!(check_nat_trans(&id).is_ok());
        // discrete base: any family of valid morphisms is natural
        let twist = NatTransInstance::new(
            f.clone(),
            f.clone(),
            vec![swap_2cls(), CntMorphism::identity(&per_pt())],
        )
        .unwrap();
        assert!(check_nat_trans(&twist).is_ok());
        let composed = vertical_compose(&id, &twist).unwrap();
        assert!(same_nat_trans(&composed, &twist));
        let composed = vertical_compose(&twist, &id).unwrap();
        assert!(same_nat_trans(&composed, &twist));

        // over Z2 a constant map does not commute with the swap
        let g = functor_f1();
        let constant = CntMorphism::from_class_map(&per_2cls(), &per_2cls(), &[0, 0]).unwrap();
        let n = NatTransInstance::new(g.clone(), g, vec![constant]).unwrap();
        assert!(check_nat_trans(&n).has_rule("nat.naturality"));
    }

    #[test]
    fn nat_trans_requires_shared_base() {
        let f = functor_f0();
        let g = functor_f1();
        assert!(NatTransInstance::new(f, g, vec![]).is_err());
    }
}
