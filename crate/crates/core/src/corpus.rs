//! Seeded generators for random instances.
//!
//! Every generator takes an explicit RNG, so a seed reproduces the corpus.

use std::collections::BTreeSet;

use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::categories::{check_nat_trans, CategoryInstance, FunctorInstance, NatTransInstance};
use crate::cntsets::{CntMorphism, OvertDiscreteWitness, Per};
use crate::equivalence::{nat_to_equivariant, to_cset};
use crate::etale::{ActionInstance, Chart, EquivariantMapInstance, EtaleInstance};
use crate::fixtures::{base_categories, cset_z2_swap, etale_identity};
use crate::ideals::{ComputableSpace, TransitiveRelation};
use crate::categories::discrete_category;
use crate::Result;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Transitive closure of a random relation with the given pair density.
pub fn random_relation(rng: &mut impl Rng, carrier: usize, density: f64) -> TransitiveRelation {
    let pairs: Vec<(usize, usize)> = (0..carrier)
        .flat_map(|a| (0..carrier).map(move |b| (a, b)))
        .filter(|_| rng.gen_bool(density))
        .collect();
    TransitiveRelation::new(carrier, pairs)
        .expect("pairs in range")
        .transitive_closure()
}

/// `count` relations on carriers `0..=max_carrier`, with varied densities.
pub fn relation_corpus(seed: u64, count: usize, max_carrier: usize) -> Vec<TransitiveRelation> {
    let mut rng = rng(seed);
    (0..count)
        .map(|_| {
            let n = rng.gen_range(0..=max_carrier);
            let density = rng.gen_range(0.05..0.6);
            random_relation(&mut rng, n, density)
        })
        .collect()
}

/// A PER on `carrier` elements: each element is left out with probability
/// 1/4, otherwise put in one of up to `carrier` classes.
pub fn random_per(rng: &mut impl Rng, carrier: usize) -> Per {
    let buckets = rng.gen_range(1..=carrier.max(1));
    let mut classes = vec![Vec::new(); buckets];
    for a in 0..carrier {
        if rng.gen_ratio(3, 4) {
            classes[rng.gen_range(0..buckets)].push(a);
        }
    }
    Per::from_classes(carrier, &classes).expect("elements in range")
}

/// A PER on `carrier` elements with exactly `k` classes, `k <= carrier`.
pub fn random_per_with_classes(rng: &mut impl Rng, carrier: usize, k: usize) -> Per {
    let mut elems: Vec<usize> = (0..carrier).collect();
    elems.shuffle(rng);
    let mut classes: Vec<Vec<usize>> = elems[..k].iter().map(|&a| vec![a]).collect();
    for &a in &elems[k..] {
        if k > 0 && rng.gen_ratio(3, 4) {
            classes[rng.gen_range(0..k)].push(a);
        }
    }
    Per::from_classes(carrier, &classes).expect("elements in range")
}

/// A sub-PER of `p`: a subset of each class, possibly split further.
pub fn random_sub_per(rng: &mut impl Rng, p: &Per) -> Per {
    let mut classes = Vec::new();
    for class in p.classes() {
        let mut kept: Vec<usize> = class.into_iter().filter(|_| rng.gen_ratio(3, 4)).collect();
        kept.shuffle(rng);
        if kept.len() > 1 && rng.gen_bool(0.3) {
            let cut = rng.gen_range(1..kept.len());
            let rest = kept.split_off(cut);
            classes.push(rest);
        }
        classes.push(kept);
    }
    Per::from_classes(p.carrier(), &classes).expect("elements in range")
}

/// A random class map `src → tar`, or `None` if `src` has classes and `tar` has none.
pub fn random_class_map(rng: &mut impl Rng, src: &Per, tar: &Per) -> Option<Vec<usize>> {
    let (ks, kt) = (src.classes().len(), tar.classes().len());
    if ks > 0 && kt == 0 {
        return None;
    }
    Some((0..ks).map(|_| rng.gen_range(0..kt)).collect())
}

pub fn random_morphism(rng: &mut impl Rng, src: &Per, tar: &Per) -> Option<CntMorphism> {
    let map = random_class_map(rng, src, tar)?;
    Some(CntMorphism::from_class_map(src, tar, &map).expect("map fits"))
}

/// Random composable triple `(m1, m2, m3)` with `m1: A → B`, `m2: B → C`, `m3: C → D`.
pub fn random_composable_triple(
    rng: &mut impl Rng,
    max_carrier: usize,
) -> (CntMorphism, CntMorphism, CntMorphism) {
    loop {
        let pers: Vec<Per> = (0..4)
            .map(|_| {
                let n = rng.gen_range(1..=max_carrier);
                random_per(rng, n)
            })
            .collect();
        let m1 = random_morphism(rng, &pers[0], &pers[1]);
        let m2 = random_morphism(rng, &pers[1], &pers[2]);
        let m3 = random_morphism(rng, &pers[2], &pers[3]);
        if let (Some(a), Some(b), Some(c)) = (m1, m2, m3) {
            return (a, b, c);
        }
    }
}

/// A witness for `e_obj(p)` with a random extra overt set and extra pairs
/// inside `≡` dropped, as long as it still witnesses discreteness.
pub fn random_witness(rng: &mut impl Rng, p: &Per) -> OvertDiscreteWitness {
    let mut w = OvertDiscreteWitness::canonical(p);
    // keeping one pair per class is enough for D
    let mut reduced = BTreeSet::new();
    for class in p.classes() {
        let v: Vec<usize> = class.into_iter().collect();
        let a = *v.choose(rng).expect("classes are nonempty");
        let b = *v.choose(rng).expect("classes are nonempty");
        reduced.insert((a, b));
    }
    for &pair in p.pairs() {
        if rng.gen_bool(0.5) {
            reduced.insert(pair);
        }
    }
    w.discrete = reduced;
    w
}

fn composite_map(g: &[usize], f: &[usize]) -> Vec<usize> {
    f.iter().map(|&i| g[i]).collect()
}

fn involution(rng: &mut impl Rng, k: usize) -> Vec<usize> {
    let mut perm: Vec<usize> = (0..k).collect();
    let mut order: Vec<usize> = (0..k).collect();
    order.shuffle(rng);
    for pair in order.chunks(2) {
        if let [a, b] = *pair {
            if rng.gen_bool(0.6) {
                perm.swap(a, b);
            }
        }
    }
    perm
}

fn order_three(rng: &mut impl Rng, k: usize) -> Vec<usize> {
    let mut perm: Vec<usize> = (0..k).collect();
    let mut order: Vec<usize> = (0..k).collect();
    order.shuffle(rng);
    for triple in order.chunks(3) {
        if let [a, b, c] = *triple {
            if rng.gen_bool(0.6) {
                perm[a] = b;
                perm[b] = c;
                perm[c] = a;
            }
        }
    }
    perm
}

fn idempotent(rng: &mut impl Rng, k: usize) -> Vec<usize> {
    let fixed: Vec<usize> = (0..k).filter(|_| rng.gen_bool(0.5)).collect();
    if fixed.is_empty() {
        return (0..k).collect();
    }
    (0..k)
        .map(|i| {
            if fixed.contains(&i) {
                i
            } else {
                *fixed.choose(rng).expect("nonempty")
            }
        })
        .collect()
}

fn class_morphism(src: &Per, tar: &Per, map: &[usize]) -> CntMorphism {
    CntMorphism::from_class_map(src, tar, map).expect("map fits")
}

/// A random valid functor on one of the named base categories.
///
/// PER carriers stay within `1..=max_carrier`.
pub fn random_functor(
    rng: &mut impl Rng,
    name: &str,
    cat: &CategoryInstance,
    max_carrier: usize,
) -> FunctorInstance {
    let mut carrier = || rng.gen_range(1..=max_carrier);
    let sizes: Vec<usize> = (0..cat.object_count()).map(|_| carrier()).collect();
    let (obj, maps): (Vec<Per>, Vec<Vec<usize>>) = match name {
        "z2" | "z3" | "idempotent" => {
            let p = random_per(rng, sizes[0]);
            let k = p.classes().len();
            let id: Vec<usize> = (0..k).collect();
            let maps = match name {
                "z2" => vec![id, involution(rng, k)],
                "z3" => {
                    let s = order_three(rng, k);
                    let s2 = composite_map(&s, &s);
                    vec![id, s, s2]
                }
                _ => vec![id, idempotent(rng, k)],
            };
            (vec![p], maps)
        }
        "sierp" => {
            let top = random_per(rng, sizes[0]);
            let bottom = random_sub_per(rng, &top);
            let ids = [&bottom, &top]
                .iter()
                .map(|p| (0..p.classes().len()).collect())
                .collect();
            (vec![bottom, top], ids)
        }
        "arrow" | "chain3" | "iso" => {
            let mut obj: Vec<Per> = sizes.iter().map(|&n| random_per(rng, n)).collect();
            if name == "iso" {
                let k = obj[0].classes().len();
                let n = sizes[1].max(k);
                obj[1] = random_per_with_classes(rng, n, k);
            }
            // a nonempty source needs a nonempty target
            for c in 1..obj.len() {
                if obj[c].classes().is_empty() && !obj[c - 1].classes().is_empty() {
                    obj[c] = random_per_with_classes(rng, sizes[c], 1);
                }
            }
            let ids: Vec<Vec<usize>> = obj.iter().map(|p| (0..p.classes().len()).collect()).collect();
            let mut maps = ids;
            match name {
                "arrow" => {
                    maps.push(random_class_map(rng, &obj[0], &obj[1]).expect("target nonempty"));
                }
                "chain3" => {
                    let f = random_class_map(rng, &obj[0], &obj[1]).expect("target nonempty");
                    let g = random_class_map(rng, &obj[1], &obj[2]).expect("target nonempty");
                    let gf = composite_map(&g, &f);
                    maps.extend([f, g, gf]);
                }
                _ => {
                    let k = obj[0].classes().len();
                    let mut u: Vec<usize> = (0..k).collect();
                    u.shuffle(rng);
                    let mut v = vec![0; k];
                    for (i, &j) in u.iter().enumerate() {
                        v[j] = i;
                    }
                    maps.extend([u, v]);
                }
            }
            (obj, maps)
        }
        _ => {
            // discrete categories on flat spaces
            let obj: Vec<Per> = sizes.iter().map(|&n| random_per(rng, n)).collect();
            let ids = obj.iter().map(|p| (0..p.classes().len()).collect()).collect();
            (obj, ids)
        }
    };
    let mor = (0..cat.morphism_count())
        .map(|m| class_morphism(&obj[cat.src(m)], &obj[cat.tar(m)], &maps[m]))
        .collect();
    FunctorInstance::new(cat.clone(), obj, mor).expect("table sizes match")
}

/// `count` functors cycling through every base category.
pub fn functor_corpus(seed: u64, count: usize, max_carrier: usize) -> Vec<FunctorInstance> {
    let mut rng = rng(seed);
    let bases = base_categories();
    (0..count)
        .map(|i| {
            let (name, cat) = &bases[i % bases.len()];
            random_functor(&mut rng, name, cat, max_carrier)
        })
        .collect()
}

/// Every natural transformation `from → to`, by enumerating class-map
/// families; `None` when there are more than `limit` families.
pub fn natural_transformations(
    from: &FunctorInstance,
    to: &FunctorInstance,
    limit: usize,
) -> Option<Vec<NatTransInstance>> {
    let objs = from.category().object_count();
    let dims: Vec<(usize, usize)> = (0..objs)
        .map(|c| (from.obj(c).classes().len(), to.obj(c).classes().len()))
        .collect();
    let mut total: usize = 1;
    for &(ks, kt) in &dims {
        let choices = if ks == 0 { 1 } else { kt.checked_pow(ks as u32)? };
        total = total.checked_mul(choices)?;
    }
    if total > limit {
        return None;
    }
    let mut out = Vec::new();
    for mut code in 0..total {
        let mut eta = Vec::with_capacity(objs);
        for (c, &(ks, kt)) in dims.iter().enumerate() {
            let map: Vec<usize> = (0..ks)
                .map(|_| {
                    let d = code % kt;
                    code /= kt;
                    d
                })
                .collect();
            eta.push(class_morphism(from.obj(c), to.obj(c), &map));
        }
        let n = NatTransInstance::new(from.clone(), to.clone(), eta).expect("sizes match");
        if check_nat_trans(&n).is_ok() {
            out.push(n);
        }
    }
    Some(out)
}

/// Renames the total-space elements by `perm` (element `i` becomes `perm[i]`).
pub fn relabel_total(a: &ActionInstance, perm: &[usize]) -> Result<ActionInstance> {
    let e = a.etale();
    let old = e.total();
    let rel = old.relation();
    let pairs = rel.pairs().into_iter().map(|(i, j)| (perm[i], perm[j]));
    let new_space = ComputableSpace::full(TransitiveRelation::new(rel.carrier(), pairs)?);
    let point_map: Vec<usize> = old
        .points()
        .iter()
        .map(|p| {
            let image = crate::ideals::Ideal::new(
                new_space.relation(),
                p.elements().iter().map(|&i| perm[i]).collect(),
            )
            .expect("relabelled ideal");
            new_space.index_of(&image).expect("relabelled point")
        })
        .collect();
    let mut projection = vec![0; old.len()];
    for (x, &y) in point_map.iter().enumerate() {
        projection[y] = e.p(x);
    }
    let charts = e
        .charts()
        .iter()
        .map(|c| {
            Chart::new(
                c.u_generators().iter().map(|&g| perm[g]),
                c.v_generators().iter().copied(),
                c.section().iter().map(|(&y, &x)| (y, point_map[x])),
            )
        })
        .collect();
    let etale = EtaleInstance::with_spaces(new_space, e.base().clone(), projection, charts)?;
    let act = a
        .act_table()
        .iter()
        .map(|(&(f, x), &y)| ((f, point_map[x]), point_map[y]));
    ActionInstance::new(a.category().clone(), etale, act)
}

/// The same `C`-set with extra charts: duplicates, restrictions of existing
/// charts to smaller opens, an empty chart, in shuffled order.
pub fn redundant_presentation(rng: &mut impl Rng, a: &ActionInstance) -> Result<ActionInstance> {
    let e = a.etale();
    let mut charts = e.charts().to_vec();
    for _ in 0..rng.gen_range(1..=2) {
        if let Some(c) = e.charts().choose(rng) {
            charts.push(c.clone());
        }
    }
    for n in 0..e.chart_count() {
        if rng.gen_bool(0.5) {
            continue;
        }
        let v_sub: BTreeSet<usize> = e.v_points(n).iter().copied().filter(|_| rng.gen_bool(0.6)).collect();
        let u_sub: BTreeSet<usize> = v_sub
            .iter()
            .map(|&y| e.section(n, y).expect("valid section"))
            .collect();
        let v_gens = e.base().generators_for(&v_sub);
        let u_gens = e.total().generators_for(&u_sub);
        if let (Some(v), Some(u)) = (v_gens, u_gens) {
            let section: Vec<(usize, usize)> = v_sub
                .iter()
                .map(|&y| (y, e.section(n, y).expect("valid section")))
                .collect();
            charts.push(Chart::new(u, v, section));
        }
    }
    if rng.gen_bool(0.5) {
        charts.push(Chart::new([], [], []));
    }
    charts.shuffle(rng);
    let etale = EtaleInstance::with_spaces(
        e.total().clone(),
        e.base().clone(),
        e.projection().to_vec(),
        charts,
    )?;
    ActionInstance::new(a.category().clone(), etale, a.act_table().clone())
}

/// `C`-sets: translated functors, their redundant and relabelled
/// presentations, and a few hand-made ones.
pub fn cset_corpus(seed: u64, count: usize, max_carrier: usize) -> Vec<ActionInstance> {
    let mut rng = rng(seed);
    let mut out = vec![cset_z2_swap()];
    for r in [crate::fixtures::rel_sierp(), crate::fixtures::rel_flat2()] {
        out.push(ActionInstance::trivial(discrete_category(&r), etale_identity(&r)).expect("trivial action"));
    }
    let functors = functor_corpus(rng.gen(), count, max_carrier);
    for (i, f) in functors.iter().enumerate() {
        if out.len() >= count {
            break;
        }
        let a = to_cset(f).expect("valid functor");
        let variant = match i % 3 {
            0 => a,
            1 => redundant_presentation(&mut rng, &a).expect("valid presentation"),
            _ => {
                let n = a.etale().total().relation().carrier();
                let mut perm: Vec<usize> = (0..n).collect();
                perm.shuffle(&mut rng);
                relabel_total(&a, &perm).expect("valid relabelling")
            }
        };
        out.push(variant);
    }
    out
}

/// Equivariant maps: images of every natural transformation between pairs of
/// small functors on the same base, plus identities.
pub fn equivariant_corpus(seed: u64, count: usize, max_carrier: usize) -> Vec<EquivariantMapInstance> {
    let functors = functor_corpus(seed, count, max_carrier);
    let mut out = Vec::new();
    for (i, f) in functors.iter().enumerate() {
        out.push(EquivariantMapInstance::identity(&to_cset(f).expect("valid functor")));
        for g in functors.iter().skip(i + 1).filter(|g| g.category() == f.category()).take(2) {
            for n in natural_transformations(f, g, 64).unwrap_or_default().into_iter().take(3) {
                out.push(nat_to_equivariant(&n).expect("valid transformation"));
            }
        }
    }
    out
}
