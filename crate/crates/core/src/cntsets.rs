//! The category `CntSets` of partial equivalence relations.
//!
//! Objects are PERs `≡` on an initial segment of ℕ; a morphism is a triple
//! `⟨G, ≡src, ≡tar⟩` whose graph respects both PERs, is single valued up to
//! `≡tar` and total on `{a | a ≡src a}`. Morphism graphs are compared after
//! saturation (closure under `≡src ; G ; ≡tar`), which makes graph equality
//! coincide with morphism equality.
//!
//! [`e_obj`] and [`e_mor`] send PERs to their discrete spaces of classes;
//! [`spatialize`] goes back from an overt discrete presentation to a PER.

use std::collections::BTreeSet;

use serde_json::json;

use crate::ideals::{ComputableSpace, EnumOperator, Ideal, TransitiveRelation};
use crate::{Error, Report, Result};

/// A symmetric transitive relation on `0..carrier`.
///
/// Two PERs are equal when they relate the same pairs; the carrier is only a
/// bound on the elements.
#[derive(Clone, Debug)]
pub struct Per {
    carrier: usize,
    pairs: BTreeSet<(usize, usize)>,
}

impl PartialEq for Per {
    fn eq(&self, other: &Self) -> bool {
        self.pairs == other.pairs
    }
}

impl Eq for Per {}

impl Per {
    pub fn new(carrier: usize, pairs: impl IntoIterator<Item = (usize, usize)>) -> Result<Self> {
        let pairs: BTreeSet<_> = pairs.into_iter().collect();
        if let Some((a, b)) = pairs.iter().find(|(a, b)| *a >= carrier || *b >= carrier) {
            return Err(Error::input(format!(
                "pair ({a},{b}) outside PER carrier {carrier}"
            )));
        }
        Ok(Self { carrier, pairs })
    }

    /// The PER whose classes are the given disjoint blocks.
    pub fn from_classes(carrier: usize, classes: &[Vec<usize>]) -> Result<Self> {
        let pairs = classes
            .iter()
            .flat_map(|c| c.iter().flat_map(move |&a| c.iter().map(move |&b| (a, b))));
        Self::new(carrier, pairs)
    }

    pub fn empty(carrier: usize) -> Self {
        Self {
            carrier,
            pairs: BTreeSet::new(),
        }
    }

    pub fn carrier(&self) -> usize {
        self.carrier
    }

    pub fn pairs(&self) -> &BTreeSet<(usize, usize)> {
        &self.pairs
    }

    pub fn relates(&self, a: usize, b: usize) -> bool {
        self.pairs.contains(&(a, b))
    }

    /// `a ≡ a`: `a` names some class.
    pub fn is_defined(&self, a: usize) -> bool {
        self.relates(a, a)
    }

    /// `[a] = {m | a ≡ m}`.
    pub fn class_of(&self, a: usize) -> BTreeSet<usize> {
        self.pairs
            .range((a, 0)..=(a, usize::MAX))
            .map(|&(_, m)| m)
            .collect()
    }

    /// The equivalence classes, ordered by least representative.
    pub fn classes(&self) -> Vec<BTreeSet<usize>> {
        let set: BTreeSet<BTreeSet<usize>> = (0..self.carrier)
            .filter(|&a| self.is_defined(a))
            .map(|a| self.class_of(a))
            .collect();
        let mut v: Vec<_> = set.into_iter().collect();
        v.sort_by_key(|c| c.first().copied());
        v
    }

    pub fn is_subset(&self, other: &Per) -> bool {
        self.pairs.is_subset(&other.pairs)
    }

    /// The pairs viewed as a (transitive) relation on the same carrier.
    pub fn as_relation(&self) -> TransitiveRelation {
        TransitiveRelation::new(self.carrier, self.pairs.iter().copied())
            .expect("pairs are within the carrier")
    }
}

/// Symmetry and transitivity violations.
pub fn check_per(p: &Per) -> Report {
    let mut report = Report::new();
    for &(a, b) in p.pairs() {
        if !p.relates(b, a) {
            report.push("per.symmetry", json!({ "pair": [a, b], "missing": [b, a] }));
        }
    }
    for &(a, b) in p.pairs() {
        for c in p.class_of(b) {
            if !p.relates(a, c) {
                report.push(
                    "per.transitivity",
                    json!({ "a": a, "b": b, "c": c, "missing": [a, c] }),
                );
            }
        }
    }
    report
}

/// A morphism `⟨G, ≡src, ≡tar⟩` of `CntSets`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CntMorphism {
    graph: BTreeSet<(usize, usize)>,
    src: Per,
    tar: Per,
}

impl CntMorphism {
    pub fn new(graph: impl IntoIterator<Item = (usize, usize)>, src: Per, tar: Per) -> Result<Self> {
        let graph: BTreeSet<_> = graph.into_iter().collect();
        if let Some((a, b)) = graph
            .iter()
            .find(|(a, b)| *a >= src.carrier() || *b >= tar.carrier())
        {
            return Err(Error::input(format!(
                "graph pair ({a},{b}) outside carriers {}/{}",
                src.carrier(),
                tar.carrier()
            )));
        }
        Ok(Self { graph, src, tar })
    }

    /// `id(≡) = ⟨≡, ≡, ≡⟩`.
    pub fn identity(per: &Per) -> Self {
        Self {
            graph: per.pairs.clone(),
            src: per.clone(),
            tar: per.clone(),
        }
    }

    /// The saturated graph of the class map sending the `i`-th class of `src`
    /// to the `map[i]`-th class of `tar` (classes by least representative).
    pub fn from_class_map(src: &Per, tar: &Per, map: &[usize]) -> Result<Self> {
        let sc = src.classes();
        let tc = tar.classes();
        if map.len() != sc.len() || map.iter().any(|&j| j >= tc.len()) {
            return Err(Error::input("class map does not fit the PERs"));
        }
        let graph = sc.iter().zip(map).flat_map(|(a_cls, &j)| {
            a_cls
                .iter()
                .flat_map(|&a| tc[j].iter().map(move |&b| (a, b)))
                .collect::<Vec<_>>()
        });
        Self::new(graph, src.clone(), tar.clone())
    }

    pub fn graph(&self) -> &BTreeSet<(usize, usize)> {
        &self.graph
    }

    pub fn src(&self) -> &Per {
        &self.src
    }

    pub fn tar(&self) -> &Per {
        &self.tar
    }

    pub fn relates(&self, a: usize, b: usize) -> bool {
        self.graph.contains(&(a, b))
    }

    /// `{m | G(n, m)}`.
    pub fn image(&self, n: usize) -> BTreeSet<usize> {
        self.graph
            .range((n, 0)..=(n, usize::MAX))
            .map(|&(_, m)| m)
            .collect()
    }

    /// Closes the graph under conditions 2 and 3; pairs already present are kept.
    pub fn saturated(&self) -> Self {
        let mut graph = self.graph.clone();
        for &(a, b) in &self.graph {
            for a2 in self.src.class_of(a) {
                for b2 in self.tar.class_of(b) {
                    graph.insert((a2, b2));
                }
            }
        }
        Self {
            graph,
            src: self.src.clone(),
            tar: self.tar.clone(),
        }
    }

    /// Equality as morphisms: same PERs and same saturated graph.
    pub fn same_morphism(&self, other: &Self) -> bool {
        self.src == other.src
            && self.tar == other.tar
            && self.saturated().graph == other.saturated().graph
    }

    /// Componentwise inclusion of the triples, the order of `CntSets_Mor`.
    pub fn is_below(&self, other: &Self) -> bool {
        self.graph.is_subset(&other.graph)
            && self.src.is_subset(&other.src)
            && self.tar.is_subset(&other.tar)
    }
}

/// The five morphism conditions, each violation with its witnesses.
/// The source and target PERs are checked too.
pub fn check_cnt_morphism(m: &CntMorphism) -> Report {
    let mut report = Report::new();
    report.absorb("src", check_per(&m.src));
    report.absorb("tar", check_per(&m.tar));
    let (src, tar) = (&m.src, &m.tar);
    for &(a, b) in &m.graph {
        if !(src.is_defined(a) && tar.is_defined(b)) {
            report.push("cnt.cond1", json!({ "pair": [a, b] }));
        }
        for a2 in src.class_of(a) {
            if !m.relates(a2, b) {
                report.push("cnt.cond2", json!({ "pair": [a, b], "equiv": a2, "missing": [a2, b] }));
            }
        }
        for b2 in tar.class_of(b) {
            if !m.relates(a, b2) {
                report.push("cnt.cond3", json!({ "pair": [a, b], "equiv": b2, "missing": [a, b2] }));
            }
        }
        for b2 in m.image(a) {
            if !tar.relates(b, b2) {
                report.push("cnt.cond4", json!({ "source": a, "images": [b, b2] }));
            }
        }
    }
    for a in 0..src.carrier() {
        if src.is_defined(a) && m.image(a).is_empty() {
            report.push("cnt.cond5", json!({ "element": a }));
        }
    }
    report
}

/// `m2 ∘ m1`: `{(a, c) | ∃b. G1(a, b) ∧ G2(b, c)}`.
pub fn compose_cnt(m2: &CntMorphism, m1: &CntMorphism) -> Result<CntMorphism> {
    if m1.tar != m2.src {
        return Err(Error::input(
            "cannot compose: target PER of the first morphism differs from source of the second",
        ));
    }
    let graph = m1
        .graph
        .iter()
        .flat_map(|&(a, b)| m2.image(b).into_iter().map(move |c| (a, c)));
    CntMorphism::new(graph, m1.src.clone(), m2.tar.clone())
}

/// The discrete space of classes: `≡` itself as a transitive relation.
pub fn e_obj(p: &Per) -> TransitiveRelation {
    p.as_relation()
}

/// `f_G(I) = {b | ∃a ∈ I. G(a, b)}` as an enumeration operator.
pub fn e_mor(m: &CntMorphism) -> EnumOperator {
    EnumOperator::new(
        e_obj(&m.src),
        e_obj(&m.tar),
        m.graph.iter().map(|&(a, b)| ([a].into_iter().collect(), b)),
    )
    .expect("graph pairs are within the carriers")
}

/// Overtness and discreteness witnesses for a space of ideals.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OvertDiscreteWitness {
    pub relation: TransitiveRelation,
    /// `E = {a | [a] ≠ ∅}`.
    pub overt: BTreeSet<usize>,
    /// `D` with `I = J` iff some `(a, b) ∈ D` has `a ∈ I` and `b ∈ J`.
    pub discrete: BTreeSet<(usize, usize)>,
}

impl OvertDiscreteWitness {
    /// `E = {a | a ≡ a}` and `D = ≡`, the witnesses of `e_obj(p)`.
    pub fn canonical(p: &Per) -> Self {
        Self {
            relation: e_obj(p),
            overt: (0..p.carrier()).filter(|&a| p.is_defined(a)).collect(),
            discrete: p.pairs.clone(),
        }
    }
}

/// Brute-force validation of a witness against the ideals of its relation.
pub fn check_witness(w: &OvertDiscreteWitness) -> Report {
    let mut report = Report::new();
    report.absorb("relation", crate::ideals::check_relation(&w.relation));
    let n = w.relation.carrier();
    if let Some(&a) = w.overt.iter().find(|&&a| a >= n) {
        report.push("witness.range", json!({ "element": a }));
        return report;
    }
    if let Some(&(a, b)) = w.discrete.iter().find(|(a, b)| *a >= n || *b >= n) {
        report.push("witness.range", json!({ "pair": [a, b] }));
        return report;
    }
    let ideals = w.relation.ideals();
    for a in 0..n {
        let inhabited = ideals.iter().any(|i| i.contains(a));
        if inhabited != w.overt.contains(&a) {
            report.push("witness.overt", json!({ "element": a, "inhabited": inhabited }));
        }
    }
    for (i, x) in ideals.iter().enumerate() {
        for (j, y) in ideals.iter().enumerate() {
            let linked = w
                .discrete
                .iter()
                .any(|&(a, b)| x.contains(a) && y.contains(b));
            if linked != (i == j) {
                report.push("witness.discrete", json!({ "points": [i, j], "linked": linked }));
            }
        }
    }
    for &(a, b) in &w.discrete {
        if !(w.overt.contains(&a) && w.overt.contains(&b)) {
            report.push("witness.d-in-e", json!({ "pair": [a, b] }));
        }
    }
    report
}

/// The PER recovered from an overt discrete space, with the point bijections.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Spatialization {
    pub per: Per,
    /// Points of the input relation → points of `e_obj(per)`.
    pub g_map: Vec<usize>,
    /// Points of `e_obj(per)` → points of the input relation.
    pub h_map: Vec<usize>,
}

/// Builds `S`, `≡`, `g` and `h` from a validated witness.
pub fn spatialize(w: &OvertDiscreteWitness) -> Result<Spatialization> {
    Error::require_valid("witness", check_witness(w))?;
    let r = &w.relation;
    let n = r.carrier();
    let s: BTreeSet<usize> = w
        .overt
        .iter()
        .copied()
        .filter(|&c| {
            w.discrete
                .iter()
                .any(|&(a, b)| r.relates(a, c) && r.relates(b, c))
        })
        .collect();
    let s = &s;
    let pairs = s.iter().flat_map(|&a| {
        s.iter()
            .filter(move |&&b| s.iter().any(|&c| r.relates(a, c) && r.relates(b, c)))
            .map(move |&b| (a, b))
    });
    let per = Per::new(n, pairs)?;

    let from = ComputableSpace::full(r.clone());
    let to = ComputableSpace::full(e_obj(&per));
    let locate = |space: &ComputableSpace, elems: BTreeSet<usize>, what: &str| {
        space
            .index_of(&Ideal::new(space.relation(), elems)?)
            .ok_or_else(|| Error::input(format!("{what} produced an unknown point")))
    };
    let g_map = from
        .points()
        .iter()
        .map(|i| {
            let elems = i.elements().iter().copied().filter(|&a| per.is_defined(a)).collect();
            locate(&to, elems, "g")
        })
        .collect::<Result<Vec<_>>>()?;
    let h_map = to
        .points()
        .iter()
        .map(|j| {
            let elems = s
                .iter()
                .copied()
                .filter(|&b| j.elements().iter().any(|&a| r.relates(b, a)))
                .collect();
            locate(&from, elems, "h")
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(Spatialization { per, g_map, h_map })
}

/// Checks that `g` and `h` are mutually inverse.
pub fn check_spatialization(sp: &Spatialization) -> Report {
    let mut report = Report::new();
    for (i, &j) in sp.g_map.iter().enumerate() {
        if sp.h_map.get(j) != Some(&i) {
            report.push("spatialize.hg", json!({ "point": i }));
        }
    }
    for (j, &i) in sp.h_map.iter().enumerate() {
        if sp.g_map.get(i) != Some(&j) {
            report.push("spatialize.gh", json!({ "point": j }));
        }
    }
    report
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::{per_2cls, per_pt, rel_flat2, rel_point};
    use crate::ideals::{apply_operator, check_relation, enumerate_ideals};

    fn set(xs: &[usize]) -> BTreeSet<usize> {
        xs.iter().copied().collect()
    }

    #[test]
    fn check_per_examples() {
        assert!(check_per(&per_2cls()).is_ok());
        let p = Per::new(2, [(0, 1)]).unwrap();
        assert!(check_per(&p).has_rule("per.symmetry"));
        assert!(check_per(&Per::empty(3)).is_ok());
        assert!(Per::new(2, [(0, 2)]).is_err());
    }

    #[test]
    fn check_cnt_morphism_examples() {
        assert!(check_cnt_morphism(&CntMorphism::identity(&per_2cls())).is_ok());

        let m = CntMorphism::new([(0, 0)], per_2cls(), per_pt()).unwrap();
        let rep = check_cnt_morphism(&m);
        assert!(rep.has_rule("cnt.cond2"));
        let fixed = CntMorphism::new([(0, 0), (1, 0)], per_2cls(), per_pt()).unwrap();
        let rep = check_cnt_morphism(&fixed);
        assert!(!rep.has_rule("cnt.cond2"));
        // 2 ≡ 2 still lacks an image
        assert!(rep.has_rule("cnt.cond5"));
        let total = CntMorphism::new([(0, 0), (1, 0), (2, 0)], per_2cls(), per_pt()).unwrap();
        assert!(check_cnt_morphism(&total).is_ok());

        let empty = CntMorphism::new([], per_pt(), per_pt()).unwrap();
        assert!(check_cnt_morphism(&empty).has_rule("cnt.cond5"));
    }

    #[test]
    fn compose_examples() {
        let m = CntMorphism::from_class_map(&per_2cls(), &per_pt(), &[0, 0]).unwrap();
        let left = compose_cnt(&CntMorphism::identity(&per_pt()), &m).unwrap();
        let right = compose_cnt(&m, &CntMorphism::identity(&per_2cls())).unwrap();
        assert!(left.same_morphism(&m));
        assert!(right.same_morphism(&m));

        let target = Per::new(2, [(1, 1)]).unwrap();
        let g1 = CntMorphism::new([(0, 0), (1, 0)], per_2cls(), per_pt()).unwrap();
        let g2 = CntMorphism::new([(0, 1)], per_pt(), target).unwrap();
        let c = compose_cnt(&g2, &g1).unwrap();
        assert_eq!(c.graph(), &[(0, 1), (1, 1)].into_iter().collect());

        assert!(compose_cnt(&g1, &g2).is_err());
    }

    #[test]
    fn saturation() {
        let m = CntMorphism::new([(0, 2)], per_2cls(), per_2cls()).unwrap();
        let s = m.saturated();
        assert_eq!(s.graph(), &[(0, 2), (1, 2)].into_iter().collect());
        // saturation keeps pairs it cannot justify, so checks still see them
        let bad = CntMorphism::new([(0, 0)], Per::empty(1), per_pt()).unwrap();
        assert!(bad.saturated().relates(0, 0));
    }

    #[test]
    fn e_obj_examples() {
        let pts = enumerate_ideals(&e_obj(&per_2cls())).unwrap();
        let sets: Vec<_> = pts.iter().map(|i| i.elements().clone()).collect();
        assert_eq!(sets, vec![set(&[0, 1]), set(&[2])]);
        assert_eq!(e_obj(&per_pt()).ideals().len(), 1);
        assert!(e_obj(&Per::empty(3)).ideals().is_empty());
        assert!(check_relation(&e_obj(&per_2cls())).is_ok());
    }

    #[test]
    fn e_mor_examples() {
        let pts = e_obj(&per_2cls()).ideals();
        let id = e_mor(&CntMorphism::identity(&per_2cls()));
        for p in &pts {
            assert_eq!(&apply_operator(&id, p).unwrap(), p);
        }
        let collapse = CntMorphism::new([(0, 0), (1, 0), (2, 0)], per_2cls(), per_pt()).unwrap();
        let op = e_mor(&collapse);
        for p in &pts {
            assert_eq!(apply_operator(&op, p).unwrap().elements(), &set(&[0]));
        }
    }

    #[test]
    fn spatialize_examples() {
        let w = OvertDiscreteWitness {
            relation: rel_flat2(),
            overt: set(&[0, 1]),
            discrete: [(0, 0), (1, 1)].into_iter().collect(),
        };
        let sp = spatialize(&w).unwrap();
        assert_eq!(sp.per, Per::new(2, [(0, 0), (1, 1)]).unwrap());
        assert_eq!(sp.g_map, vec![0, 1]);
        assert_eq!(sp.h_map, vec![0, 1]);
        assert!(check_spatialization(&sp).is_ok());

        let w = OvertDiscreteWitness {
            relation: rel_point(),
            overt: set(&[0]),
            discrete: [(0, 0)].into_iter().collect(),
        };
        assert_eq!(spatialize(&w).unwrap().per.classes().len(), 1);

        let w = OvertDiscreteWitness::canonical(&per_2cls());
        assert_eq!(w.overt, set(&[0, 1, 2]));
        let sp = spatialize(&w).unwrap();
        assert_eq!(sp.per.classes().len(), 2);
        assert!(check_spatialization(&sp).is_ok());
    }

    #[test]
    fn spatialize_rejects_bad_witnesses() {
        // missing the overt element 1
        let w = OvertDiscreteWitness {
            relation: rel_flat2(),
            overt: set(&[0]),
            discrete: [(0, 0), (1, 1)].into_iter().collect(),
        };
        match spatialize(&w) {
            Err(Error::Invalid { report, .. }) => {
                assert!(report.has_rule("witness.overt"));
                assert!(report.has_rule("witness.d-in-e"));
            }
            other => panic!("unexpected {other:?}"),
        }
        // D links the two distinct points
        let w = OvertDiscreteWitness {
            relation: rel_flat2(),
            overt: set(&[0, 1]),
            discrete: [(0, 0), (1, 1), (0, 1)].into_iter().collect(),
        };
        assert!(check_witness(&w).has_rule("witness.discrete"));
    }
}
