//! Spaces of ideals of transitive relations.
//!
//! A finite transitive relation `≺` on `0..carrier` presents the space `I(≺)`
//! of its ideals: nonempty, downward closed, directed subsets. On a finite
//! carrier every ideal is principal, `↓c = {a | a ≺ c}` for some `c ≺ c`, which
//! gives a fast route to the points next to the brute-force subset oracle
//! [`enumerate_ideals`].
//!
//! Points of a space are always referred to by their index in the canonical
//! order (lexicographic on sorted element lists).

use std::collections::BTreeSet;
use std::fmt;

use serde_json::json;

use crate::kernel::{pair, unpair, CeSet, Enumeration, Fuel, Semi, Step};
use crate::{Error, Report, Result};

/// Largest carrier [`enumerate_ideals`] will brute-force.
pub const DEFAULT_CARRIER_BOUND: usize = 16;

/// A binary relation on `0..carrier`, expected to be transitive.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct TransitiveRelation {
    carrier: usize,
    matrix: Vec<bool>,
}

impl fmt::Debug for TransitiveRelation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("TransitiveRelation")
            .field("carrier", &self.carrier)
            .field("pairs", &self.pairs())
            .finish()
    }
}

impl TransitiveRelation {
    /// Builds the relation, rejecting pairs outside the carrier. Transitivity
    /// is not enforced here; see [`check_relation`] and [`Self::validated`].
    pub fn new(carrier: usize, pairs: impl IntoIterator<Item = (usize, usize)>) -> Result<Self> {
        let mut matrix = vec![false; carrier * carrier];
        for (a, b) in pairs {
            if a >= carrier || b >= carrier {
                return Err(Error::input(format!(
                    "pair ({a},{b}) outside carrier {carrier}"
                )));
            }
            matrix[a * carrier + b] = true;
        }
        Ok(Self { carrier, matrix })
    }

    /// Like [`Self::new`] but also rejects non-transitive input.
    pub fn validated(
        carrier: usize,
        pairs: impl IntoIterator<Item = (usize, usize)>,
    ) -> Result<Self> {
        let r = Self::new(carrier, pairs)?;
        Error::require_valid("relation", check_relation(&r))?;
        Ok(r)
    }

    /// The diagonal relation: every element is its own isolated point.
    pub fn flat(carrier: usize) -> Self {
        Self::new(carrier, (0..carrier).map(|i| (i, i))).expect("diagonal is in range")
    }

    pub fn carrier(&self) -> usize {
        self.carrier
    }

    pub fn relates(&self, a: usize, b: usize) -> bool {
        a < self.carrier && b < self.carrier && self.matrix[a * self.carrier + b]
    }

    pub fn pairs(&self) -> Vec<(usize, usize)> {
        let n = self.carrier;
        (0..n * n)
            .filter(|&k| self.matrix[k])
            .map(|k| (k / n, k % n))
            .collect()
    }

    pub fn transitive_closure(&self) -> Self {
        let n = self.carrier;
        let mut m = self.matrix.clone();
        for k in 0..n {
            for i in 0..n {
                if m[i * n + k] {
                    for j in 0..n {
                        if m[k * n + j] {
                            m[i * n + j] = true;
                        }
                    }
                }
            }
        }
        Self {
            carrier: n,
            matrix: m,
        }
    }

    /// `{a | a ≺ c}`.
    pub fn down_set(&self, c: usize) -> BTreeSet<usize> {
        (0..self.carrier).filter(|&a| self.relates(a, c)).collect()
    }

    /// The points of `I(≺)` via principal ideals, in canonical order.
    ///
    /// Only meaningful for transitive relations.
    pub fn ideals(&self) -> Vec<Ideal> {
        let set: BTreeSet<Ideal> = (0..self.carrier)
            .filter(|&c| self.relates(c, c))
            .map(|c| Ideal(self.down_set(c)))
            .collect();
        set.into_iter().collect()
    }
}

/// Lists every transitivity violation `a≺b, b≺c` without `a≺c`.
pub fn check_relation(r: &TransitiveRelation) -> Report {
    let mut report = Report::new();
    let n = r.carrier();
    for a in 0..n {
        for b in 0..n {
            if !r.relates(a, b) {
                continue;
            }
            for c in 0..n {
                if r.relates(b, c) && !r.relates(a, c) {
                    report.push(
                        "relation.transitivity",
                        json!({ "a": a, "b": b, "c": c, "missing": [a, c] }),
                    );
                }
            }
        }
    }
    report
}

fn check_in_carrier(r: &TransitiveRelation, s: &BTreeSet<usize>) -> Result<()> {
    match s.iter().find(|&&a| a >= r.carrier()) {
        Some(a) => Err(Error::input(format!(
            "element {a} outside carrier {}",
            r.carrier()
        ))),
        None => Ok(()),
    }
}

/// The three ideal conditions, checked literally.
pub fn is_ideal(r: &TransitiveRelation, s: &BTreeSet<usize>) -> Result<bool> {
    check_in_carrier(r, s)?;
    Ok(ideal_conditions(r, s))
}

fn ideal_conditions(r: &TransitiveRelation, s: &BTreeSet<usize>) -> bool {
    let nonempty = !s.is_empty();
    let lower = s
        .iter()
        .all(|&a| (0..r.carrier()).all(|b| !r.relates(b, a) || s.contains(&b)));
    let directed = s.iter().all(|&a| {
        s.iter()
            .all(|&b| s.iter().any(|&c| r.relates(a, c) && r.relates(b, c)))
    });
    nonempty && lower && directed
}

/// Brute-force ideal oracle: every subset of the carrier is tested with
/// [`is_ideal`]. Results come out in canonical order.
pub fn enumerate_ideals(r: &TransitiveRelation) -> Result<Vec<Ideal>> {
    enumerate_ideals_bounded(r, DEFAULT_CARRIER_BOUND)
}

pub fn enumerate_ideals_bounded(r: &TransitiveRelation, bound: usize) -> Result<Vec<Ideal>> {
    let n = r.carrier();
    if n > bound || n >= usize::BITS as usize {
        return Err(Error::Capacity { carrier: n, bound });
    }
    let mut out: Vec<Ideal> = (1usize..(1 << n))
        .map(|code| (0..n).filter(|i| code >> i & 1 == 1).collect::<BTreeSet<_>>())
        .filter(|s| ideal_conditions(r, s))
        .map(Ideal)
        .collect();
    out.sort();
    Ok(out)
}

/// A point of `I(≺)` given by its (finite) element set.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Ideal(BTreeSet<usize>);

impl Ideal {
    /// Checks the ideal conditions before wrapping.
    pub fn new(r: &TransitiveRelation, elements: BTreeSet<usize>) -> Result<Self> {
        if is_ideal(r, &elements)? {
            Ok(Ideal(elements))
        } else {
            Err(Error::input(format!(
                "{elements:?} is not an ideal of the relation"
            )))
        }
    }

    pub fn elements(&self) -> &BTreeSet<usize> {
        &self.0
    }

    pub fn contains(&self, a: usize) -> bool {
        self.0.contains(&a)
    }

    pub fn is_subset(&self, other: &Ideal) -> bool {
        self.0.is_subset(&other.0)
    }

    pub fn to_stream(&self) -> IdealStream {
        IdealStream::new(Enumeration::finite(self.0.iter().copied().collect()))
    }
}

/// An ideal known only through an enumeration of its elements.
#[derive(Clone, Debug)]
pub struct IdealStream {
    elements: Enumeration<usize>,
}

impl IdealStream {
    pub fn new(elements: Enumeration<usize>) -> Self {
        Self { elements }
    }

    pub fn elements(&self) -> &Enumeration<usize> {
        &self.elements
    }
}

/// A relation together with an explicit list of its ideals.
///
/// [`ComputableSpace::full`] takes every ideal; that is what all desk-scale
/// instances use, and what point indices refer to.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ComputableSpace {
    relation: TransitiveRelation,
    points: Vec<Ideal>,
}

impl ComputableSpace {
    pub fn full(relation: TransitiveRelation) -> Self {
        let points = relation.ideals();
        Self { relation, points }
    }

    pub fn subspace(relation: TransitiveRelation, points: Vec<BTreeSet<usize>>) -> Result<Self> {
        let mut pts = points
            .into_iter()
            .map(|s| Ideal::new(&relation, s))
            .collect::<Result<Vec<_>>>()?;
        pts.sort();
        pts.dedup();
        Ok(Self {
            relation,
            points: pts,
        })
    }

    pub fn relation(&self) -> &TransitiveRelation {
        &self.relation
    }

    pub fn points(&self) -> &[Ideal] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn point(&self, i: usize) -> &Ideal {
        &self.points[i]
    }

    pub fn index_of(&self, ideal: &Ideal) -> Option<usize> {
        self.points.binary_search(ideal).ok()
    }

    /// Index of the principal ideal `↓c`, if `c ≺ c`.
    pub fn principal_index(&self, c: usize) -> Option<usize> {
        if !self.relation.relates(c, c) {
            return None;
        }
        self.index_of(&Ideal(self.relation.down_set(c)))
    }

    /// Specialization order: point `i` lies below point `j`.
    pub fn leq(&self, i: usize, j: usize) -> bool {
        self.points[i].is_subset(&self.points[j])
    }

    /// Points of the open set `⋃_{a ∈ gens} [a]`.
    pub fn open_points(&self, gens: &BTreeSet<usize>) -> BTreeSet<usize> {
        (0..self.points.len())
            .filter(|&i| gens.iter().any(|&a| self.points[i].contains(a)))
            .collect()
    }

    /// Generators for a set of points, or `None` when the set is not open.
    pub fn generators_for(&self, pts: &BTreeSet<usize>) -> Option<BTreeSet<usize>> {
        let gens: BTreeSet<usize> = (0..self.relation.carrier())
            .filter(|&a| {
                let mut holders = (0..self.points.len()).filter(|&i| self.points[i].contains(a));
                let mut any = false;
                let inside = holders.all(|i| {
                    any = true;
                    pts.contains(&i)
                });
                any && inside
            })
            .collect();
        (self.open_points(&gens) == *pts).then_some(gens)
    }

    /// True when the point table `f` (from this space into `target`) is
    /// monotone for the specialization orders.
    pub fn is_monotone_into(&self, target: &ComputableSpace, f: &[usize]) -> bool {
        monotone_violations(self.len(), |i, j| self.leq(i, j), |i, j| {
            target.leq(f[i], f[j])
        })
        .is_none()
    }
}

/// First pair `i ≤ j` whose images are not ordered, if any.
pub(crate) fn monotone_violations(
    n: usize,
    dom_leq: impl Fn(usize, usize) -> bool,
    img_leq: impl Fn(usize, usize) -> bool,
) -> Option<(usize, usize)> {
    for i in 0..n {
        for j in 0..n {
            if i != j && dom_leq(i, j) && !img_leq(i, j) {
                return Some((i, j));
            }
        }
    }
    None
}

/// A c.e. open subset `⋃_{a ∈ S} [a]`.
#[derive(Clone, Debug)]
pub struct CeOpen {
    generators: CeSet<usize>,
}

impl CeOpen {
    pub fn new(generators: CeSet<usize>) -> Self {
        Self { generators }
    }

    pub fn finite(gens: impl IntoIterator<Item = usize>) -> Self {
        Self::new(CeSet::finite(gens))
    }

    pub fn generators(&self) -> &CeSet<usize> {
        &self.generators
    }

    /// Exact membership of a finite ideal in a finitely generated open.
    pub fn contains(&self, ideal: &Ideal) -> Option<bool> {
        self.generators
            .elements()
            .map(|g| g.iter().any(|&a| ideal.contains(a)))
    }

    /// Point set inside a space; requires finitely many generators.
    pub fn points_in(&self, space: &ComputableSpace) -> Result<BTreeSet<usize>> {
        let gens = self
            .generators
            .elements()
            .ok_or_else(|| Error::input("open set has no finite generator list"))?;
        check_in_carrier(space.relation(), gens)?;
        Ok(space.open_points(gens))
    }
}

/// Dovetails the generator enumeration with the ideal enumeration and answers
/// `Yes` once a common element shows up.
pub fn open_member(ideal: &IdealStream, open: &CeOpen, fuel: Fuel) -> Semi {
    let sched = crate::kernel::dovetail(vec![
        open.generators().enumeration().clone(),
        ideal.elements().clone(),
    ]);
    let mut seen = [BTreeSet::new(), BTreeSet::new()];
    for t in 0..fuel.0 {
        if sched.is_exhausted_at(t) {
            break;
        }
        if let Step::Item((src, a)) = sched.query(t) {
            if seen[1 - src].contains(&a) {
                return Semi::Yes;
            }
            seen[src].insert(a);
        }
    }
    Semi::Unknown
}

/// A computable map `I(≺₁) → I(≺₂)` as an enumeration operator:
/// `f(I) = {b | ∃(F, b) in the graph with F ⊆ I}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EnumOperator {
    source: TransitiveRelation,
    target: TransitiveRelation,
    graph: Vec<(BTreeSet<usize>, usize)>,
}

impl EnumOperator {
    pub fn new(
        source: TransitiveRelation,
        target: TransitiveRelation,
        graph: impl IntoIterator<Item = (BTreeSet<usize>, usize)>,
    ) -> Result<Self> {
        let graph: BTreeSet<_> = graph.into_iter().collect();
        for (f, b) in &graph {
            check_in_carrier(&source, f)?;
            if *b >= target.carrier() {
                return Err(Error::input(format!("output {b} outside target carrier")));
            }
        }
        Ok(Self {
            source,
            target,
            graph: graph.into_iter().collect(),
        })
    }

    pub fn identity(r: &TransitiveRelation) -> Self {
        Self::new(
            r.clone(),
            r.clone(),
            (0..r.carrier()).map(|a| ([a].into_iter().collect(), a)),
        )
        .expect("identity graph is in range")
    }

    /// Realizes a monotone point table `src points → tgt points`.
    pub fn from_point_table(
        src: &ComputableSpace,
        tgt: &ComputableSpace,
        table: &[usize],
    ) -> Result<Self> {
        if table.len() != src.len() || table.iter().any(|&j| j >= tgt.len()) {
            return Err(Error::input("point table does not match the spaces"));
        }
        if !src.is_monotone_into(tgt, table) {
            return Err(Error::Precondition(
                "point table is not monotone, so it has no realizer".into(),
            ));
        }
        let r = src.relation();
        let graph = (0..r.carrier())
            .filter_map(|c| src.principal_index(c).map(|i| (c, i)))
            .flat_map(|(c, i)| {
                tgt.point(table[i])
                    .elements()
                    .iter()
                    .map(move |&b| ([c].into_iter().collect(), b))
                    .collect::<Vec<_>>()
            });
        Self::new(r.clone(), tgt.relation().clone(), graph)
    }

    pub fn source(&self) -> &TransitiveRelation {
        &self.source
    }

    pub fn target(&self) -> &TransitiveRelation {
        &self.target
    }

    pub fn graph(&self) -> &[(BTreeSet<usize>, usize)] {
        &self.graph
    }

    fn image_set(&self, elements: &BTreeSet<usize>) -> BTreeSet<usize> {
        self.graph
            .iter()
            .filter(|(f, _)| f.is_subset(elements))
            .map(|(_, b)| *b)
            .collect()
    }
}

/// Exact evaluation on a finite ideal; the result must be a target ideal.
pub fn apply_operator(op: &EnumOperator, ideal: &Ideal) -> Result<Ideal> {
    check_in_carrier(&op.source, ideal.elements())?;
    let out = op.image_set(ideal.elements());
    if ideal_conditions(&op.target, &out) {
        Ok(Ideal(out))
    } else {
        Err(Error::OperatorInvalid(out.into_iter().collect()))
    }
}

/// Stream evaluation: step `t = pair(i, j)` emits the output of graph entry
/// `j` if its finite premise appeared among the first `i + 1` input steps.
pub fn apply_stream(op: &EnumOperator, ideal: &IdealStream) -> IdealStream {
    let graph = op.graph.clone();
    let input = ideal.elements().clone();
    IdealStream::new(Enumeration::from_fn(move |t| {
        let (i, j) = unpair(t);
        let Some((premise, b)) = graph.get(j) else {
            return Step::Pass;
        };
        let seen: BTreeSet<usize> = input.prefix(i + 1).into_iter().collect();
        if premise.is_subset(&seen) {
            Step::Item(*b)
        } else {
            Step::Pass
        }
    }))
}

/// Syntactic composite `g ∘ f`.
pub fn compose_operators(g: &EnumOperator, f: &EnumOperator) -> Result<EnumOperator> {
    if f.target != g.source {
        return Err(Error::input(
            "cannot compose: target of the first operator differs from source of the second",
        ));
    }
    let mut graph: BTreeSet<(BTreeSet<usize>, usize)> = BTreeSet::new();
    for (premise, c) in &g.graph {
        // every element of the premise needs some f-entry producing it
        let mut unions: Vec<BTreeSet<usize>> = vec![BTreeSet::new()];
        for &h in premise {
            let producers: Vec<&BTreeSet<usize>> = f
                .graph
                .iter()
                .filter(|(_, b)| *b == h)
                .map(|(fs, _)| fs)
                .collect();
            unions = unions
                .iter()
                .flat_map(|u| producers.iter().map(move |p| u | p))
                .collect();
            minimize(&mut unions);
        }
        for u in unions {
            graph.insert((u, *c));
        }
    }
    EnumOperator::new(f.source.clone(), g.target.clone(), graph)
}

fn minimize(sets: &mut Vec<BTreeSet<usize>>) {
    sets.sort_by_key(|s| s.len());
    sets.dedup();
    let mut kept: Vec<BTreeSet<usize>> = Vec::new();
    for s in sets.drain(..) {
        if !kept.iter().any(|k| k.is_subset(&s)) {
            kept.push(s);
        }
    }
    *sets = kept;
}

/// Product relation on Cantor pair codes:
/// `⟨a,a'⟩ ≺ ⟨b,b'⟩` iff `a ≺₁ b` and `a' ≺₂ b'`.
pub fn product_relation(r1: &TransitiveRelation, r2: &TransitiveRelation) -> TransitiveRelation {
    let (n1, n2) = (r1.carrier(), r2.carrier());
    let carrier = if n1 == 0 || n2 == 0 {
        0
    } else {
        pair(n1 - 1, n2 - 1) + 1
    };
    let r1p = r1.pairs();
    let r2p = r2.pairs();
    let pairs = r1p.iter().flat_map(|&(a, b)| {
        r2p.iter()
            .map(move |&(a2, b2)| (pair(a, a2), pair(b, b2)))
    });
    TransitiveRelation::new(carrier, pairs).expect("pair codes stay below the product carrier")
}

/// The two projections out of [`product_relation`].
pub fn projections(
    r1: &TransitiveRelation,
    r2: &TransitiveRelation,
) -> (EnumOperator, EnumOperator) {
    let prod = product_relation(r1, r2);
    let codes: Vec<(usize, usize, usize)> = (0..r1.carrier())
        .flat_map(|a| (0..r2.carrier()).map(move |b| (pair(a, b), a, b)))
        .collect();
    let first = EnumOperator::new(
        prod.clone(),
        r1.clone(),
        codes.iter().map(|&(c, a, _)| ([c].into_iter().collect(), a)),
    )
    .expect("codes in range");
    let second = EnumOperator::new(
        prod,
        r2.clone(),
        codes.iter().map(|&(c, _, b)| ([c].into_iter().collect(), b)),
    )
    .expect("codes in range");
    (first, second)
}
