//! Translations between functors into CntSets and `C`-sets, and the checks
//! that they are mutually inverse.
//!
//! `to_cset` indexes its charts by PER carrier elements, so chart `n` is the
//! section `c ↦ ⟨c, [n]_c⟩`. `to_functor` reads the PER back off the charts
//! with chart indices as carrier elements.

use std::collections::{BTreeMap, BTreeSet};

use serde::Serialize;
use serde_json::json;

use crate::categories::{check_functor, check_nat_trans, FunctorInstance, NatTransInstance};
use crate::cntsets::{CntMorphism, Per};
use crate::etale::{
    check_action, check_equivariant, locate_chart, section_equality, ActionInstance, Chart,
    EquivariantMapInstance, EtaleInstance,
};
use crate::ideals::{ComputableSpace, TransitiveRelation};
use crate::{Error, Report, Result};

/// A point `⟨c, [n]_c⟩` of the total space built from a functor.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct FiberPoint {
    pub base: usize,
    pub class: BTreeSet<usize>,
}

/// `θ: X → X_F` and `θ′: X_F → X` as point tables.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct IsoWitness {
    pub theta: Vec<usize>,
    pub theta_inv: Vec<usize>,
}

/// The `C`-set of a functor together with the fiber point behind each total-space point.
#[derive(Clone, Debug)]
pub struct FunctorCset {
    pub action: ActionInstance,
    pub points: Vec<FiberPoint>,
}

impl FunctorCset {
    fn index_of(&self, base: usize, member: usize) -> Option<usize> {
        self.points
            .iter()
            .position(|p| p.base == base && p.class.contains(&member))
    }
}

/// Fiber points of `f`, ordered by base point and then least representative.
fn fiber_elements(f: &FunctorInstance) -> Vec<FiberPoint> {
    (0..f.category().object_count())
        .flat_map(|c| {
            f.obj(c)
                .classes()
                .into_iter()
                .map(move |class| FiberPoint { base: c, class })
        })
        .collect()
}

/// Builds `(X_F, p_F, charts, α_F)` and labels each total-space point.
pub fn functor_cset(f: &FunctorInstance) -> Result<FunctorCset> {
    Error::require_valid("functor", check_functor(f))?;
    let cat = f.category();
    let base = cat.objects();
    let elems = fiber_elements(f);
    let k = elems.len();
    let pairs = (0..k).flat_map(|i| {
        let elems = &elems;
        (0..k).filter_map(move |j| {
            (base.leq(elems[i].base, elems[j].base) && elems[i].class.is_subset(&elems[j].class))
                .then_some((i, j))
        })
    });
    let total = ComputableSpace::full(TransitiveRelation::validated(k, pairs)?);
    let point_of: Vec<usize> = (0..k)
        .map(|e| total.principal_index(e).expect("reflexive element"))
        .collect();
    let mut points = vec![None; k];
    for (e, &pt) in point_of.iter().enumerate() {
        points[pt] = Some(elems[e].clone());
    }
    let points: Vec<FiberPoint> = points
        .into_iter()
        .map(|p| p.expect("one point per element"))
        .collect();
    let element_at = |c: usize, n: usize| {
        elems
            .iter()
            .position(|p| p.base == c && p.class.contains(&n))
    };

    let width = f.obj_table().iter().map(Per::carrier).max().unwrap_or(0);
    let mut charts = Vec::with_capacity(width);
    for n in 0..width {
        let u = (0..k).filter(|&e| elems[e].class.contains(&n));
        let v_pts: BTreeSet<usize> = (0..cat.object_count())
            .filter(|&c| f.obj(c).is_defined(n))
            .collect();
        let v = base.generators_for(&v_pts).ok_or_else(|| {
            Error::Precondition(format!("objects where {n} is defined do not form an open set"))
        })?;
        let section = v_pts
            .iter()
            .map(|&c| (c, point_of[element_at(c, n).expect("n is defined at c")]));
        charts.push(Chart::new(u, v, section));
    }
    let projection = points.iter().map(|p| p.base).collect();
    let etale = EtaleInstance::with_spaces(total, base.clone(), projection, charts)?;

    let mut act = BTreeMap::new();
    for m in 0..cat.morphism_count() {
        let (s, t) = (cat.src(m), cat.tar(m));
        for (x, p) in points.iter().enumerate().filter(|(_, p)| p.base == s) {
            let n = *p.class.first().expect("classes are nonempty");
            let image = f.mor(m).image(n);
            let y = image
                .first()
                .and_then(|&b| element_at(t, b))
                .ok_or_else(|| {
                    Error::Precondition(format!("morphism {m} sends {n} to no class"))
                })?;
            act.insert((m, x), point_of[y]);
        }
    }
    let action = ActionInstance::new(cat.clone(), etale, act)?;
    Ok(FunctorCset { action, points })
}

/// `𝓕(F)`: the `C`-set of a valid functor.
pub fn to_cset(f: &FunctorInstance) -> Result<ActionInstance> {
    functor_cset(f).map(|fc| fc.action)
}

/// `𝓖(X)`: the functor of a valid `C`-set, with chart indices as PER elements.
pub fn to_functor(a: &ActionInstance) -> Result<FunctorInstance> {
    Error::require_valid("cset", check_action(a))?;
    let e = a.etale();
    let cat = a.category();
    let width = e.chart_count();
    let mut obj = Vec::with_capacity(cat.object_count());
    for c in 0..cat.object_count() {
        let charts: Vec<usize> = (0..width).filter(|&n| e.in_v(c, n)).collect();
        let mut pairs = Vec::new();
        for &n in &charts {
            for &m in &charts {
                if section_equality(e, c, n, m)? {
                    pairs.push((n, m));
                }
            }
        }
        obj.push(Per::new(width, pairs)?);
    }
    let mut mor = Vec::with_capacity(cat.morphism_count());
    for f in 0..cat.morphism_count() {
        let (s, t) = (cat.src(f), cat.tar(f));
        let mut graph = Vec::new();
        for n in (0..width).filter(|&n| e.in_v(s, n)) {
            let sn = e.section(n, s).expect("valid section");
            let moved = a.act(f, sn).expect("valid action");
            graph.extend(
                (0..width)
                    .filter(|&m| e.in_v(t, m) && e.in_u(moved, m))
                    .map(|m| (n, m)),
            );
        }
        mor.push(CntMorphism::new(graph, obj[s].clone(), obj[t].clone())?);
    }
    FunctorInstance::new(cat.clone(), obj, mor)
}

/// `h(⟨c, [n]_c⟩) = ⟨c, η(c)(n)⟩`.
pub fn nat_to_equivariant(eta: &NatTransInstance) -> Result<EquivariantMapInstance> {
    Error::require_valid("nat-trans", check_nat_trans(eta))?;
    let from = functor_cset(eta.from_functor())?;
    let to = functor_cset(eta.to_functor())?;
    let map = from
        .points
        .iter()
        .map(|p| {
            let n = *p.class.first().expect("classes are nonempty");
            eta.component(p.base)
                .image(n)
                .first()
                .and_then(|&m| to.index_of(p.base, m))
                .ok_or_else(|| Error::Precondition(format!("component {} is not total", p.base)))
        })
        .collect::<Result<Vec<_>>>()?;
    EquivariantMapInstance::new(from.action, to.action, map)
}

/// `η_h(c) = {(n, m) | h(s_n(c)) = s′_m(c)}`, decided as `h(s_n(c)) ∈ U′_m`.
pub fn equivariant_to_nat(h: &EquivariantMapInstance) -> Result<NatTransInstance> {
    Error::require_valid("equivariant", check_equivariant(h))?;
    let (a, b) = (h.from_cset(), h.to_cset());
    let f = to_functor(a)?;
    let g = to_functor(b)?;
    let (ea, eb) = (a.etale(), b.etale());
    let eta = (0..a.category().object_count())
        .map(|c| {
            let mut graph = Vec::new();
            for n in (0..ea.chart_count()).filter(|&n| ea.in_v(c, n)) {
                let moved = h.apply(ea.section(n, c).expect("valid section"));
                graph.extend(
                    (0..eb.chart_count())
                        .filter(|&m| eb.in_v(c, m) && eb.in_u(moved, m))
                        .map(|m| (n, m)),
                );
            }
            CntMorphism::new(graph, f.obj(c).clone(), g.obj(c).clone())
        })
        .collect::<Result<Vec<_>>>()?;
    NatTransInstance::new(f, g, eta)
}

/// Compares `𝓖(𝓕(F))` with `F` componentwise.
pub fn roundtrip_functor(f: &FunctorInstance) -> Result<Report> {
    let back = to_functor(&to_cset(f)?)?;
    let mut report = Report::new();
    for c in 0..f.category().object_count() {
        if back.obj(c) != f.obj(c) {
            report.push(
                "roundtrip.obj",
                json!({ "object": c, "expected": f.obj(c).pairs(), "found": back.obj(c).pairs() }),
            );
        }
    }
    for m in 0..f.category().morphism_count() {
        if !back.mor(m).same_morphism(f.mor(m)) {
            report.push(
                "roundtrip.mor",
                json!({
                    "morphism": m,
                    "expected": f.mor(m).saturated().graph(),
                    "found": back.mor(m).saturated().graph(),
                }),
            );
        }
    }
    Ok(report)
}

/// `θ_X` and `θ′_X` between `X` and `𝓕(𝓖(X))`.
pub fn roundtrip_cset(a: &ActionInstance) -> Result<(IsoWitness, Report)> {
    let f = to_functor(a)?;
    let fc = functor_cset(&f)?;
    let e = a.etale();
    let theta = (0..e.total().len())
        .map(|x| {
            locate_chart(e, x)
                .and_then(|n| fc.index_of(e.p(x), n))
                .ok_or_else(|| Error::Precondition(format!("no fiber point for {x}")))
        })
        .collect::<Result<Vec<_>>>()?;
    let theta_inv = fc
        .points
        .iter()
        .map(|p| {
            let n = *p.class.first().expect("classes are nonempty");
            e.section(n, p.base)
                .ok_or_else(|| Error::Precondition(format!("section {n} undefined at {}", p.base)))
        })
        .collect::<Result<Vec<_>>>()?;

    let mut report = Report::new();
    for (x, &k) in theta.iter().enumerate() {
        if theta_inv[k] != x {
            report.push(
                "roundtrip.theta-inverse",
                json!({ "direction": "x", "point": x, "back": theta_inv[k] }),
            );
        }
    }
    for (k, &x) in theta_inv.iter().enumerate() {
        if theta[x] != k {
            report.push(
                "roundtrip.theta-inverse",
                json!({ "direction": "x_f", "point": k, "back": theta[x] }),
            );
        }
    }
    let forward = EquivariantMapInstance::new(a.clone(), fc.action.clone(), theta.clone())?;
    let backward = EquivariantMapInstance::new(fc.action, a.clone(), theta_inv.clone())?;
    report.absorb("theta", check_equivariant(&forward));
    report.absorb("theta_inv", check_equivariant(&backward));
    Ok((IsoWitness { theta, theta_inv }, report))
}

/// `θ_Y ∘ h = h′ ∘ θ_X` with `h′ = 𝓕(𝓖(h))`.
pub fn naturality_square(h: &EquivariantMapInstance) -> Result<Report> {
    let (wx, _) = roundtrip_cset(h.from_cset())?;
    let (wy, _) = roundtrip_cset(h.to_cset())?;
    let h2 = nat_to_equivariant(&equivariant_to_nat(h)?)?;
    let mut report = Report::new();
    for x in 0..h.table().len() {
        let left = wy.theta[h.apply(x)];
        let right = h2.apply(wx.theta[x]);
        if left != right {
            report.push(
                "roundtrip.naturality",
                json!({ "point": x, "left": left, "right": right }),
            );
        }
    }
    Ok(report)
}

/// Compares `𝓖(𝓕(η))` with `η` componentwise.
pub fn roundtrip_nat(eta: &NatTransInstance) -> Result<Report> {
    let back = equivariant_to_nat(&nat_to_equivariant(eta)?)?;
    let mut report = Report::new();
    for c in 0..eta.from_functor().category().object_count() {
        if !back.component(c).same_morphism(eta.component(c)) {
            report.push("roundtrip.nat", json!({ "object": c }));
        }
    }
    Ok(report)
}
