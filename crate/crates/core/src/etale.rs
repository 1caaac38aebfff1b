//! Étale spaces presented by charts, category actions on them, and
//! equivariant maps.
//!
//! A chart `n` is a triple `(U_n, V_n, s_n)` with `U_n` open in the total
//! space, `V_n` open in the base and `s_n: V_n → U_n` inverse to `p` on `U_n`.
//! Charts are finite lists here; a chart with empty `V_n` has an empty
//! section table.

use std::collections::{BTreeMap, BTreeSet};

use serde_json::json;

use crate::categories::{check_category, CategoryInstance};
use crate::ideals::{check_relation, monotone_violations, CeOpen, ComputableSpace, TransitiveRelation};
use crate::{Error, Report, Result};

#[derive(Clone, Debug)]
pub struct Chart {
    u: CeOpen,
    v: CeOpen,
    section: BTreeMap<usize, usize>,
}

impl Chart {
    /// `u` and `v` are generator lists of the two open sets; `section` maps
    /// base points to total-space points.
    pub fn new(
        u: impl IntoIterator<Item = usize>,
        v: impl IntoIterator<Item = usize>,
        section: impl IntoIterator<Item = (usize, usize)>,
    ) -> Self {
        Self {
            u: CeOpen::finite(u),
            v: CeOpen::finite(v),
            section: section.into_iter().collect(),
        }
    }

    pub fn u(&self) -> &CeOpen {
        &self.u
    }

    pub fn v(&self) -> &CeOpen {
        &self.v
    }

    pub fn u_generators(&self) -> &BTreeSet<usize> {
        self.u.generators().elements().expect("charts are finite")
    }

    pub fn v_generators(&self) -> &BTreeSet<usize> {
        self.v.generators().elements().expect("charts are finite")
    }

    pub fn section(&self) -> &BTreeMap<usize, usize> {
        &self.section
    }
}

/// A local homeomorphism `p: X → Y` with its charts.
#[derive(Clone, Debug)]
pub struct EtaleInstance {
    total: ComputableSpace,
    base: ComputableSpace,
    projection: Vec<usize>,
    charts: Vec<Chart>,
    u_points: Vec<BTreeSet<usize>>,
    v_points: Vec<BTreeSet<usize>>,
}

impl EtaleInstance {
    pub fn new(
        total: TransitiveRelation,
        base: TransitiveRelation,
        projection: Vec<usize>,
        charts: Vec<Chart>,
    ) -> Result<Self> {
        Self::with_spaces(
            ComputableSpace::full(total),
            ComputableSpace::full(base),
            projection,
            charts,
        )
    }

    pub fn with_spaces(
        total: ComputableSpace,
        base: ComputableSpace,
        projection: Vec<usize>,
        charts: Vec<Chart>,
    ) -> Result<Self> {
        if projection.len() != total.len() {
            return Err(Error::input(format!(
                "projection needs {} entries, got {}",
                total.len(),
                projection.len()
            )));
        }
        if projection.iter().any(|&y| y >= base.len()) {
            return Err(Error::input("projection refers to a missing base point"));
        }
        let mut u_points = Vec::with_capacity(charts.len());
        let mut v_points = Vec::with_capacity(charts.len());
        for (n, chart) in charts.iter().enumerate() {
            u_points.push(chart.u.points_in(&total)?);
            v_points.push(chart.v.points_in(&base)?);
            if chart
                .section
                .iter()
                .any(|(&y, &x)| y >= base.len() || x >= total.len())
            {
                return Err(Error::input(format!("section {n} refers to a missing point")));
            }
        }
        Ok(Self {
            total,
            base,
            projection,
            charts,
            u_points,
            v_points,
        })
    }

    pub fn total(&self) -> &ComputableSpace {
        &self.total
    }

    pub fn base(&self) -> &ComputableSpace {
        &self.base
    }

    pub fn p(&self, x: usize) -> usize {
        self.projection[x]
    }

    pub fn projection(&self) -> &[usize] {
        &self.projection
    }

    pub fn charts(&self) -> &[Chart] {
        &self.charts
    }

    pub fn chart_count(&self) -> usize {
        self.charts.len()
    }

    pub fn u_points(&self, n: usize) -> &BTreeSet<usize> {
        &self.u_points[n]
    }

    pub fn v_points(&self, n: usize) -> &BTreeSet<usize> {
        &self.v_points[n]
    }

    pub fn in_u(&self, x: usize, n: usize) -> bool {
        self.u_points[n].contains(&x)
    }

    pub fn in_v(&self, y: usize, n: usize) -> bool {
        self.v_points[n].contains(&y)
    }

    /// `s_n(y)`, if tabulated.
    pub fn section(&self, n: usize, y: usize) -> Option<usize> {
        self.charts[n].section.get(&y).copied()
    }

    /// Points of the fiber over `y`.
    pub fn fiber(&self, y: usize) -> impl Iterator<Item = usize> + '_ {
        (0..self.total.len()).filter(move |&x| self.projection[x] == y)
    }
}

/// Coverage, the two section identities, section domains and continuity.
pub fn check_etale(e: &EtaleInstance) -> Report {
    let mut report = Report::new();
    report.absorb("total", check_relation(e.total.relation()));
    report.absorb("base", check_relation(e.base.relation()));
    if let Some((i, j)) = monotone_violations(
        e.total.len(),
        |i, j| e.total.leq(i, j),
        |i, j| e.base.leq(e.p(i), e.p(j)),
    ) {
        report.push("etale.continuity", json!({ "map": "p", "points": [i, j] }));
    }
    for x in 0..e.total.len() {
        if !e.u_points.iter().any(|u| u.contains(&x)) {
            report.push("etale.cover", json!({ "point": x }));
        }
    }
    for (n, chart) in e.charts.iter().enumerate() {
        let keys: BTreeSet<usize> = chart.section.keys().copied().collect();
        let v = &e.v_points[n];
        if keys != *v {
            report.push(
                "etale.section-domain",
                json!({
                    "chart": n,
                    "missing": v.difference(&keys).collect::<Vec<_>>(),
                    "extra": keys.difference(v).collect::<Vec<_>>(),
                }),
            );
        }
        for (&y, &x) in chart.section.iter().filter(|(y, _)| v.contains(y)) {
            if !e.in_u(x, n) {
                report.push("etale.section-range", json!({ "chart": n, "base": y, "image": x }));
            }
            if e.p(x) != y {
                report.push("etale.section-right", json!({ "chart": n, "base": y, "image": x }));
            }
        }
        for &x in &e.u_points[n] {
            let back = e.section(n, e.p(x));
            if back != Some(x) {
                report.push(
                    "etale.section-left",
                    json!({ "chart": n, "point": x, "section": back }),
                );
            }
        }
        let dom: Vec<(usize, usize)> = chart
            .section
            .iter()
            .filter(|(y, _)| v.contains(y))
            .map(|(&y, &x)| (y, x))
            .collect();
        if let Some((a, b)) = monotone_violations(
            dom.len(),
            |a, b| e.base.leq(dom[a].0, dom[b].0),
            |a, b| e.total.leq(dom[a].1, dom[b].1),
        ) {
            report.push(
                "etale.section-continuity",
                json!({ "chart": n, "base": [dom[a].0, dom[b].0] }),
            );
        }
    }
    report
}

/// Least chart index whose `U_n` contains `x`.
pub fn locate_chart(e: &EtaleInstance, x: usize) -> Option<usize> {
    (0..e.charts.len()).find(|&n| e.in_u(x, n))
}

/// `s_n(y) = s_m(y)`, decided as `s_n(y) ∈ U_m` and cross-checked against
/// direct comparison of the two section values.
pub fn section_equality(e: &EtaleInstance, y: usize, n: usize, m: usize) -> Result<bool> {
    let lookup = |k: usize| {
        if k >= e.charts.len() || !e.in_v(y, k) {
            return Err(Error::Precondition(format!("base point {y} is not in V_{k}")));
        }
        e.section(k, y)
            .ok_or_else(|| Error::Precondition(format!("section {k} undefined at {y}")))
    };
    let (sn, sm) = (lookup(n)?, lookup(m)?);
    let via_membership = e.in_u(sn, m);
    if via_membership != (sn == sm) {
        let mut report = Report::new();
        report.push("etale.section-membership", json!({ "base": y, "charts": [n, m] }));
        return Err(Error::Invalid {
            what: "etale",
            report,
        });
    }
    Ok(via_membership)
}

/// Exhaustive check of: for `p(x) = y ∈ V_n`, `x = s_n(y)` iff `x ∈ U_n`.
pub fn check_section_membership(e: &EtaleInstance) -> Report {
    let mut report = Report::new();
    for x in 0..e.total.len() {
        let y = e.p(x);
        for n in (0..e.charts.len()).filter(|&n| e.in_v(y, n)) {
            if (e.section(n, y) == Some(x)) != e.in_u(x, n) {
                report.push("etale.section-membership", json!({ "point": x, "chart": n }));
            }
        }
    }
    report
}

/// An étale space over the objects of a category with an action `f·x`.
#[derive(Clone, Debug)]
pub struct ActionInstance {
    category: CategoryInstance,
    etale: EtaleInstance,
    act: BTreeMap<(usize, usize), usize>,
}

impl ActionInstance {
    /// The action table must be defined on exactly the pairs `(f, x)` with
    /// `src(f) = p(x)`.
    pub fn new(
        category: CategoryInstance,
        etale: EtaleInstance,
        act: impl IntoIterator<Item = ((usize, usize), usize)>,
    ) -> Result<Self> {
        if etale.base != *category.objects() {
            return Err(Error::input(
                "the étale space is not over the object space of the category",
            ));
        }
        let (nm, nx) = (category.morphism_count(), etale.total.len());
        let mut table = BTreeMap::new();
        for ((f, x), y) in act {
            if f >= nm || x >= nx || y >= nx {
                return Err(Error::input(format!("action entry ({f},{x})->{y} out of range")));
            }
            if category.src(f) != etale.p(x) {
                return Err(Error::Domain(format!(
                    "action defined at ({f},{x}) although src(f) != p(x)"
                )));
            }
            if table.insert((f, x), y).is_some() {
                return Err(Error::Domain(format!("action at ({f},{x}) given twice")));
            }
        }
        for f in 0..nm {
            for x in 0..nx {
                if category.src(f) == etale.p(x) && !table.contains_key(&(f, x)) {
                    return Err(Error::Domain(format!("action undefined at ({f},{x})")));
                }
            }
        }
        Ok(Self {
            category,
            etale,
            act: table,
        })
    }

    pub fn category(&self) -> &CategoryInstance {
        &self.category
    }

    pub fn etale(&self) -> &EtaleInstance {
        &self.etale
    }

    pub fn act(&self, f: usize, x: usize) -> Option<usize> {
        self.act.get(&(f, x)).copied()
    }

    pub fn act_table(&self) -> &BTreeMap<(usize, usize), usize> {
        &self.act
    }

    /// The action in which every morphism of a discrete category acts trivially.
    pub fn trivial(category: CategoryInstance, etale: EtaleInstance) -> Result<Self> {
        let act: Vec<_> = (0..category.morphism_count())
            .flat_map(|f| {
                let s = category.src(f);
                etale.fiber(s).map(move |x| ((f, x), x)).collect::<Vec<_>>()
            })
            .collect();
        Self::new(category, etale, act)
    }
}

pub fn check_action(a: &ActionInstance) -> Report {
    let mut report = Report::new();
    let c = &a.category;
    let e = &a.etale;
    report.absorb("category", check_category(c));
    report.absorb("etale", check_etale(e));
    for (&(f, x), &fx) in &a.act {
        if c.tar(f) != e.p(fx) {
            report.push("action.cond1", json!({ "morphism": f, "point": x, "image": fx }));
        }
    }
    for x in 0..e.total.len() {
        let i = c.id(e.p(x));
        if a.act(i, x) != Some(x) {
            report.push("action.cond2", json!({ "point": x, "id": i }));
        }
    }
    for (&(g, f), &gf) in c.comp_table() {
        for x in e.fiber(c.src(f)) {
            let Some(fx) = a.act(f, x) else { continue };
            // undefined when cond1 fails for f; reported above
            let Some(right) = a.act(g, fx) else { continue };
            if a.act(gf, x) != Some(right) {
                report.push(
                    "action.cond3",
                    json!({ "g": g, "f": f, "point": x, "left": a.act(gf, x), "right": right }),
                );
            }
        }
    }
    let entries: Vec<(&(usize, usize), &usize)> = a.act.iter().collect();
    if let Some((i, j)) = monotone_violations(
        entries.len(),
        |i, j| {
            let ((f1, x1), _) = entries[i];
            let ((f2, x2), _) = entries[j];
            c.morphisms().leq(*f1, *f2) && e.total.leq(*x1, *x2)
        },
        |i, j| e.total.leq(*entries[i].1, *entries[j].1),
    ) {
        report.push(
            "action.continuity",
            json!({ "pairs": [entries[i].0, entries[j].0] }),
        );
    }
    report
}

/// A fiber-preserving map between two `C`-sets over the same category.
#[derive(Clone, Debug)]
pub struct EquivariantMapInstance {
    from: ActionInstance,
    to: ActionInstance,
    map: Vec<usize>,
}

impl EquivariantMapInstance {
    pub fn new(from: ActionInstance, to: ActionInstance, map: Vec<usize>) -> Result<Self> {
        if from.category != to.category {
            return Err(Error::input("equivariant map between C-sets of different categories"));
        }
        if map.len() != from.etale.total.len() {
            return Err(Error::input(format!(
                "map needs {} entries, got {}",
                from.etale.total.len(),
                map.len()
            )));
        }
        if map.iter().any(|&y| y >= to.etale.total.len()) {
            return Err(Error::input("map refers to a missing point"));
        }
        Ok(Self { from, to, map })
    }

    pub fn identity(a: &ActionInstance) -> Self {
        Self {
            from: a.clone(),
            to: a.clone(),
            map: (0..a.etale.total.len()).collect(),
        }
    }

    pub fn from_cset(&self) -> &ActionInstance {
        &self.from
    }

    pub fn to_cset(&self) -> &ActionInstance {
        &self.to
    }

    pub fn apply(&self, x: usize) -> usize {
        self.map[x]
    }

    pub fn table(&self) -> &[usize] {
        &self.map
    }
}

/// `k ∘ h`.
pub fn compose_equivariant(
    k: &EquivariantMapInstance,
    h: &EquivariantMapInstance,
) -> Result<EquivariantMapInstance> {
    if h.to.etale.total != k.from.etale.total || h.to.act != k.from.act {
        return Err(Error::input("cannot compose: the maps do not meet at a common C-set"));
    }
    EquivariantMapInstance::new(
        h.from.clone(),
        k.to.clone(),
        h.map.iter().map(|&y| k.map[y]).collect(),
    )
}

pub fn check_equivariant(m: &EquivariantMapInstance) -> Report {
    let mut report = Report::new();
    report.absorb("from", check_action(&m.from));
    report.absorb("to", check_action(&m.to));
    let (p, q) = (&m.from.etale, &m.to.etale);
    for x in 0..p.total.len() {
        if p.p(x) != q.p(m.map[x]) {
            report.push("equivariant.fiber", json!({ "point": x, "image": m.map[x] }));
        }
    }
    for (&(g, x), &gx) in &m.from.act {
        let hx = m.map[x];
        match m.to.act(g, hx) {
            Some(ghx) if ghx == m.map[gx] => {}
            other => report.push(
                "equivariant.action",
                json!({ "morphism": g, "point": x, "left": m.map[gx], "right": other }),
            ),
        }
    }
    if let Some((i, j)) = monotone_violations(
        p.total.len(),
        |i, j| p.total.leq(i, j),
        |i, j| q.total.leq(m.map[i], m.map[j]),
    ) {
        report.push("equivariant.continuity", json!({ "points": [i, j] }));
    }
    report
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::categories::discrete_category;
    use crate::fixtures::{cset_z2_swap, etale_identity, rel_flat2, rel_point, rel_sierp};

    #[test]
    fn identity_etale_is_valid() {
        for r in [rel_point(), rel_flat2(), rel_sierp()] {
            let e = etale_identity(&r);
            assert!(check_etale(&e).is_ok());
            assert!(check_section_membership(&e).is_ok());
            for x in 0..e.total().len() {
                assert_eq!(locate_chart(&e, x), Some(0));
            }
        }
    }

    #[test]
    fn folding_two_points_onto_one_breaks_the_section() {
        let e = EtaleInstance::new(
            rel_flat2(),
            rel_point(),
            vec![0, 0],
            vec![Chart::new([0, 1], [0], [(0, 0)])],
        )
        .unwrap();
        let rep = check_etale(&e);
        assert!(rep.has_rule("etale.section-left"));
        assert_eq!(rep.len(), 1);
    }

    #[test]
    fn missing_section_entries_are_reported() {
        let e = EtaleInstance::new(
            rel_flat2(),
            rel_flat2(),
            vec![0, 1],
            vec![Chart::new([0, 1], [0, 1], [(0, 0)])],
        )
        .unwrap();
        assert!(check_etale(&e).has_rule("etale.section-domain"));
    }

    #[test]
    fn overlapping_charts_use_least_index() {
        let e = EtaleInstance::new(
            rel_flat2(),
            rel_flat2(),
            vec![0, 1],
            vec![
                Chart::new([0, 1], [0, 1], [(0, 0), (1, 1)]),
                Chart::new([1], [1], [(1, 1)]),
            ],
        )
        .unwrap();
        assert!(check_etale(&e).is_ok());
        assert_eq!(locate_chart(&e, 1), Some(0));
        assert!(section_equality(&e, 1, 0, 1).unwrap());
        assert!(section_equality(&e, 0, 0, 0).unwrap());
        assert!(matches!(
            section_equality(&e, 0, 0, 1),
            Err(Error::Precondition(_))
        ));
    }

    #[test]
    fn duplicated_chart_sections_agree() {
        let mut e = etale_identity(&rel_sierp());
        let c = e.charts()[0].clone();
        e = EtaleInstance::new(
            e.total().relation().clone(),
            e.base().relation().clone(),
            e.projection().to_vec(),
            vec![c.clone(), c],
        )
        .unwrap();
        for y in 0..e.base().len() {
            assert!(section_equality(&e, y, 0, 1).unwrap());
        }
    }

    #[test]
    fn non_open_chart_generators_are_rejected() {
        let e = EtaleInstance::new(
            rel_sierp(),
            rel_sierp(),
            vec![0, 1],
            vec![Chart::new([7], [0], [])],
        );
        assert!(matches!(e, Err(Error::Input(_))));
    }

    #[test]
    fn trivial_and_swap_actions() {
        let r = rel_flat2();
        let a = ActionInstance::trivial(discrete_category(&r), etale_identity(&r)).unwrap();
        assert!(check_action(&a).is_ok());
        assert!(check_equivariant(&EquivariantMapInstance::identity(&a)).is_ok());

        let z = cset_z2_swap();
        assert!(check_action(&z).is_ok());
        for x in 0..2 {
            let sx = z.act(1, x).unwrap();
            assert_ne!(sx, x);
            assert_eq!(z.act(1, sx), Some(x));
        }
    }

    #[test]
    fn action_domain_errors() {
        let r = rel_flat2();
        let cat = discrete_category(&r);
        let e = etale_identity(&r);
        // missing (1,1)
        let missing = ActionInstance::new(cat.clone(), e.clone(), [((0, 0), 0)]);
        assert!(matches!(missing, Err(Error::Domain(_))));
        // (0,1) is outside dom(α)
        let extra = ActionInstance::new(cat, e, [((0, 0), 0), ((1, 1), 1), ((0, 1), 1)]);
        assert!(matches!(extra, Err(Error::Domain(_))));
    }

    #[test]
    fn broken_actions_are_reported() {
        let z = cset_z2_swap();
        // σ acting as identity still satisfies the laws
        let fixed = ActionInstance::new(
            z.category().clone(),
            z.etale().clone(),
            [((0, 0), 0), ((0, 1), 1), ((1, 0), 0), ((1, 1), 1)],
        )
        .unwrap();
        assert!(check_action(&fixed).is_ok());
        // σ collapsing both points breaks (σ∘σ)·x = σ·(σ·x)
        let collapse = ActionInstance::new(
            z.category().clone(),
            z.etale().clone(),
            [((0, 0), 0), ((0, 1), 1), ((1, 0), 0), ((1, 1), 0)],
        )
        .unwrap();
        assert!(check_action(&collapse).has_rule("action.cond3"));
        // e not acting as identity
        let bad_id = ActionInstance::new(
            z.category().clone(),
            z.etale().clone(),
            [((0, 0), 1), ((0, 1), 0), ((1, 0), 1), ((1, 1), 0)],
        )
        .unwrap();
        assert!(check_action(&bad_id).has_rule("action.cond2"));
    }

    #[test]
    fn equivariance_checks() {
        let z = cset_z2_swap();
        let swap = EquivariantMapInstance::new(z.clone(), z.clone(), vec![1, 0]).unwrap();
        assert!(check_equivariant(&swap).is_ok());
        let constant = EquivariantMapInstance::new(z.clone(), z.clone(), vec![0, 0]).unwrap();
        assert!(check_equivariant(&constant).has_rule("equivariant.action"));
        let twice = compose_equivariant(&swap, &swap).unwrap();
        assert_eq!(twice.table(), &[0, 1]);
    }
}
