//! The JSON instance format.
//!
//! Every document carries a `kind`. Fields that refer to another instance
//! (a functor's category, an étale space's base, ...) hold either a path to
//! a sibling file, resolved against the referring file's directory, or the
//! referenced document inline. Inline documents may omit `kind`.

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use serde_json::Value;

use etale::categories::{CategoryInstance, FunctorInstance, NatTransInstance};
use etale::cntsets::{CntMorphism, OvertDiscreteWitness, Per};
use etale::etale::{ActionInstance, Chart, EquivariantMapInstance, EtaleInstance};
use etale::ideals::TransitiveRelation;
use etale::{Error, Result};

type Pairs = Vec<(usize, usize)>;

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RelationDoc {
    pub carrier: usize,
    pub pairs: Pairs,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PerDoc {
    pub carrier: usize,
    pub pairs: Pairs,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CntMorphismDoc {
    pub graph: Pairs,
    pub src: Value,
    pub tar: Value,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WitnessDoc {
    pub relation: Value,
    pub e: Vec<usize>,
    pub d: Pairs,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CategoryDoc {
    pub obj: Value,
    pub mor: Value,
    pub src: Vec<usize>,
    pub tar: Vec<usize>,
    pub id: Vec<usize>,
    /// Entries `[g, f, g∘f]`.
    pub comp: Vec<(usize, usize, usize)>,
}

/// Morphism images are bare graphs; their PERs come from the object table.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FunctorDoc {
    pub category: Value,
    pub obj: Vec<Value>,
    pub mor: Vec<Pairs>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NatTransDoc {
    pub from: Value,
    pub to: Value,
    pub eta: Vec<Pairs>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ChartDoc {
    pub u: Vec<usize>,
    pub v: Vec<usize>,
    pub s: Pairs,
}

/// Element sets of the points, written for readers and ignored on input.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct PointsEcho {
    pub total: Vec<Vec<usize>>,
    pub base: Vec<Vec<usize>>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EtaleDoc {
    pub total: Value,
    pub base: Value,
    pub p: Vec<usize>,
    pub charts: Vec<ChartDoc>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub points: Option<PointsEcho>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CsetDoc {
    pub category: Value,
    pub etale: Value,
    /// Entries `[f, x, f·x]`.
    pub action: Vec<(usize, usize, usize)>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EquivariantDoc {
    pub from: Value,
    pub to: Value,
    pub h: Vec<usize>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Doc {
    Relation(RelationDoc),
    Per(PerDoc),
    CntMorphism(CntMorphismDoc),
    Witness(WitnessDoc),
    Category(CategoryDoc),
    Functor(FunctorDoc),
    NatTrans(NatTransDoc),
    Etale(EtaleDoc),
    Cset(CsetDoc),
    Equivariant(EquivariantDoc),
}

impl Doc {
    pub fn kind(&self) -> &'static str {
        match self {
            Doc::Relation(_) => "relation",
            Doc::Per(_) => "per",
            Doc::CntMorphism(_) => "cnt-morphism",
            Doc::Witness(_) => "witness",
            Doc::Category(_) => "category",
            Doc::Functor(_) => "functor",
            Doc::NatTrans(_) => "nat-trans",
            Doc::Etale(_) => "etale",
            Doc::Cset(_) => "cset",
            Doc::Equivariant(_) => "equivariant",
        }
    }

    pub fn to_value(&self) -> Value {
        serde_json::to_value(self).expect("documents serialize")
    }

    pub fn to_pretty(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("documents serialize");
        s.push('\n');
        s
    }
}

/// A loaded instance.
#[derive(Clone, Debug)]
pub enum Instance {
    Relation(TransitiveRelation),
    Per(Per),
    CntMorphism(CntMorphism),
    Witness(OvertDiscreteWitness),
    Category(CategoryInstance),
    Functor(FunctorInstance),
    NatTrans(NatTransInstance),
    Etale(EtaleInstance),
    Cset(ActionInstance),
    Equivariant(EquivariantMapInstance),
}

impl Instance {
    pub fn kind(&self) -> &'static str {
        match self {
            Instance::Relation(_) => "relation",
            Instance::Per(_) => "per",
            Instance::CntMorphism(_) => "cnt-morphism",
            Instance::Witness(_) => "witness",
            Instance::Category(_) => "category",
            Instance::Functor(_) => "functor",
            Instance::NatTrans(_) => "nat-trans",
            Instance::Etale(_) => "etale",
            Instance::Cset(_) => "cset",
            Instance::Equivariant(_) => "equivariant",
        }
    }
}

const MAX_DEPTH: usize = 32;

fn input(msg: impl Into<String>) -> Error {
    Error::Input(msg.into())
}

/// Resolves documents and references into instances.
#[derive(Clone, Copy, Debug, Default)]
pub struct Loader {
    /// Replace every relation by its transitive closure.
    pub closure: bool,
}

impl Loader {
    pub fn load_path(&self, path: &Path) -> Result<Instance> {
        let (doc, dir) = read_doc(path)?;
        self.build(doc, &dir, 0)
    }

    pub fn load_value(&self, value: &Value, dir: &Path) -> Result<Instance> {
        let doc: Doc = serde_json::from_value(value.clone()).map_err(|e| input(e.to_string()))?;
        self.build(doc, dir, 0)
    }

    fn resolve(&self, value: &Value, dir: &Path, kind: &str, depth: usize) -> Result<Instance> {
        if depth > MAX_DEPTH {
            return Err(input("references nest too deeply"));
        }
        let (doc, dir) = match value {
            Value::String(rel) => read_doc(&dir.join(rel))?,
            Value::Object(map) => {
                let mut map = map.clone();
                map.entry("kind").or_insert_with(|| Value::String(kind.to_string()));
                let doc: Doc =
                    serde_json::from_value(Value::Object(map)).map_err(|e| input(e.to_string()))?;
                (doc, dir.to_path_buf())
            }
            _ => return Err(input(format!("expected a path or an inline {kind}"))),
        };
        if doc.kind() != kind {
            return Err(input(format!("expected a {kind}, found a {}", doc.kind())));
        }
        self.build(doc, &dir, depth + 1)
    }

    fn build(&self, doc: Doc, dir: &Path, depth: usize) -> Result<Instance> {
        let d = depth;
        Ok(match doc {
            Doc::Relation(r) => {
                let rel = TransitiveRelation::new(r.carrier, r.pairs)?;
                Instance::Relation(if self.closure { rel.transitive_closure() } else { rel })
            }
            Doc::Per(p) => Instance::Per(Per::new(p.carrier, p.pairs)?),
            Doc::CntMorphism(m) => {
                let src = self.per(&m.src, dir, d)?;
                let tar = self.per(&m.tar, dir, d)?;
                Instance::CntMorphism(CntMorphism::new(m.graph, src, tar)?)
            }
            Doc::Witness(w) => Instance::Witness(OvertDiscreteWitness {
                relation: self.relation(&w.relation, dir, d)?,
                overt: w.e.into_iter().collect(),
                discrete: w.d.into_iter().collect(),
            }),
            Doc::Category(c) => {
                let obj = self.relation(&c.obj, dir, d)?;
                let mor = self.relation(&c.mor, dir, d)?;
                let comp = c.comp.into_iter().map(|(g, f, h)| ((g, f), h));
                Instance::Category(CategoryInstance::new(obj, mor, c.src, c.tar, c.id, comp)?)
            }
            Doc::Functor(f) => Instance::Functor(self.functor_from(f, dir, d)?),
            Doc::NatTrans(n) => {
                let from = self.functor(&n.from, dir, d)?;
                let to = self.functor(&n.to, dir, d)?;
                let objs = from.category().object_count();
                if n.eta.len() != objs {
                    return Err(input(format!(
                        "eta needs {objs} components, got {}",
                        n.eta.len()
                    )));
                }
                let eta = n
                    .eta
                    .into_iter()
                    .enumerate()
                    .map(|(c, g)| CntMorphism::new(g, from.obj(c).clone(), to.obj(c).clone()))
                    .collect::<Result<Vec<_>>>()?;
                Instance::NatTrans(NatTransInstance::new(from, to, eta)?)
            }
            Doc::Etale(e) => Instance::Etale(self.etale_from(e, dir, d)?),
            Doc::Cset(c) => Instance::Cset(self.cset_from(c, dir, d)?),
            Doc::Equivariant(m) => {
                let from = self.cset(&m.from, dir, d)?;
                let to = self.cset(&m.to, dir, d)?;
                Instance::Equivariant(EquivariantMapInstance::new(from, to, m.h)?)
            }
        })
    }

    fn functor_from(&self, f: FunctorDoc, dir: &Path, d: usize) -> Result<FunctorInstance> {
        let cat = self.category(&f.category, dir, d)?;
        let obj = f
            .obj
            .iter()
            .map(|p| self.per(p, dir, d))
            .collect::<Result<Vec<_>>>()?;
        if obj.len() != cat.object_count() || f.mor.len() != cat.morphism_count() {
            return Err(input(format!(
                "functor needs {} object and {} morphism entries, got {} and {}",
                cat.object_count(),
                cat.morphism_count(),
                obj.len(),
                f.mor.len()
            )));
        }
        let mor = f
            .mor
            .into_iter()
            .enumerate()
            .map(|(m, g)| CntMorphism::new(g, obj[cat.src(m)].clone(), obj[cat.tar(m)].clone()))
            .collect::<Result<Vec<_>>>()?;
        FunctorInstance::new(cat, obj, mor)
    }

    fn etale_from(&self, e: EtaleDoc, dir: &Path, d: usize) -> Result<EtaleInstance> {
        let total = self.relation(&e.total, dir, d)?;
        let base = self.relation(&e.base, dir, d)?;
        let charts = e
            .charts
            .into_iter()
            .map(|c| Chart::new(c.u, c.v, c.s))
            .collect();
        EtaleInstance::new(total, base, e.p, charts)
    }

    fn cset_from(&self, c: CsetDoc, dir: &Path, d: usize) -> Result<ActionInstance> {
        let cat = self.category(&c.category, dir, d)?;
        let etale = match self.resolve(&c.etale, dir, "etale", d)? {
            Instance::Etale(e) => e,
            _ => unreachable!("kind checked"),
        };
        ActionInstance::new(cat, etale, c.action.into_iter().map(|(f, x, y)| ((f, x), y)))
    }

    fn relation(&self, v: &Value, dir: &Path, d: usize) -> Result<TransitiveRelation> {
        match self.resolve(v, dir, "relation", d)? {
            Instance::Relation(r) => Ok(r),
            _ => unreachable!("kind checked"),
        }
    }

    fn per(&self, v: &Value, dir: &Path, d: usize) -> Result<Per> {
        match self.resolve(v, dir, "per", d)? {
            Instance::Per(p) => Ok(p),
            _ => unreachable!("kind checked"),
        }
    }

    fn category(&self, v: &Value, dir: &Path, d: usize) -> Result<CategoryInstance> {
        match self.resolve(v, dir, "category", d)? {
            Instance::Category(c) => Ok(c),
            _ => unreachable!("kind checked"),
        }
    }

    fn functor(&self, v: &Value, dir: &Path, d: usize) -> Result<FunctorInstance> {
        match self.resolve(v, dir, "functor", d)? {
            Instance::Functor(f) => Ok(f),
            _ => unreachable!("kind checked"),
        }
    }

    fn cset(&self, v: &Value, dir: &Path, d: usize) -> Result<ActionInstance> {
        match self.resolve(v, dir, "cset", d)? {
            Instance::Cset(a) => Ok(a),
            _ => unreachable!("kind checked"),
        }
    }
}

fn read_doc(path: &Path) -> Result<(Doc, PathBuf)> {
    let text = fs::read_to_string(path)
        .map_err(|e| input(format!("cannot read {}: {e}", path.display())))?;
    let doc: Doc = serde_json::from_str(&text)
        .map_err(|e| input(format!("{}: {e}", path.display())))?;
    let dir = path.parent().map(Path::to_path_buf).unwrap_or_default();
    Ok((doc, dir))
}

/// Documents with every reference inlined.
pub fn relation_doc(r: &TransitiveRelation) -> Doc {
    Doc::Relation(RelationDoc {
        carrier: r.carrier(),
        pairs: r.pairs(),
    })
}

pub fn per_doc(p: &Per) -> Doc {
    Doc::Per(PerDoc {
        carrier: p.carrier(),
        pairs: p.pairs().iter().copied().collect(),
    })
}

pub fn cnt_morphism_doc(m: &CntMorphism) -> Doc {
    Doc::CntMorphism(CntMorphismDoc {
        graph: m.graph().iter().copied().collect(),
        src: per_doc(m.src()).to_value(),
        tar: per_doc(m.tar()).to_value(),
    })
}

pub fn witness_doc(w: &OvertDiscreteWitness) -> Doc {
    Doc::Witness(WitnessDoc {
        relation: relation_doc(&w.relation).to_value(),
        e: w.overt.iter().copied().collect(),
        d: w.discrete.iter().copied().collect(),
    })
}

pub fn category_doc(c: &CategoryInstance) -> Doc {
    Doc::Category(CategoryDoc {
        obj: relation_doc(c.objects().relation()).to_value(),
        mor: relation_doc(c.morphisms().relation()).to_value(),
        src: c.src_table().to_vec(),
        tar: c.tar_table().to_vec(),
        id: c.id_table().to_vec(),
        comp: c.comp_table().iter().map(|(&(g, f), &h)| (g, f, h)).collect(),
    })
}

/// A functor document; `category` is used as given (inline or a path).
pub fn functor_doc_with(f: &FunctorInstance, category: Value) -> Doc {
    Doc::Functor(FunctorDoc {
        category,
        obj: f.obj_table().iter().map(|p| per_doc(p).to_value()).collect(),
        mor: f
            .mor_table()
            .iter()
            .map(|m| m.graph().iter().copied().collect())
            .collect(),
    })
}

pub fn functor_doc(f: &FunctorInstance) -> Doc {
    functor_doc_with(f, category_doc(f.category()).to_value())
}

pub fn nat_trans_doc_with(n: &NatTransInstance, from: Value, to: Value) -> Doc {
    Doc::NatTrans(NatTransDoc {
        from,
        to,
        eta: n
            .components()
            .iter()
            .map(|m| m.graph().iter().copied().collect())
            .collect(),
    })
}

fn point_sets(space: &etale::ideals::ComputableSpace) -> Vec<Vec<usize>> {
    space
        .points()
        .iter()
        .map(|p| p.elements().iter().copied().collect())
        .collect()
}

pub fn etale_doc(e: &EtaleInstance) -> Doc {
    Doc::Etale(EtaleDoc {
        total: relation_doc(e.total().relation()).to_value(),
        base: relation_doc(e.base().relation()).to_value(),
        p: e.projection().to_vec(),
        charts: e
            .charts()
            .iter()
            .map(|c| ChartDoc {
                u: c.u_generators().iter().copied().collect(),
                v: c.v_generators().iter().copied().collect(),
                s: c.section().iter().map(|(&y, &x)| (y, x)).collect(),
            })
            .collect(),
        points: Some(PointsEcho {
            total: point_sets(e.total()),
            base: point_sets(e.base()),
        }),
    })
}

pub fn cset_doc_with(a: &ActionInstance, category: Value) -> Doc {
    Doc::Cset(CsetDoc {
        category,
        etale: etale_doc(a.etale()).to_value(),
        action: a
            .act_table()
            .iter()
            .map(|(&(f, x), &y)| (f, x, y))
            .collect(),
    })
}

pub fn cset_doc(a: &ActionInstance) -> Doc {
    cset_doc_with(a, category_doc(a.category()).to_value())
}

pub fn equivariant_doc_with(m: &EquivariantMapInstance, from: Value, to: Value) -> Doc {
    Doc::Equivariant(EquivariantDoc {
        from,
        to,
        h: m.table().to_vec(),
    })
}

/// Inline document for any instance.
pub fn instance_doc(i: &Instance) -> Doc {
    match i {
        Instance::Relation(r) => relation_doc(r),
        Instance::Per(p) => per_doc(p),
        Instance::CntMorphism(m) => cnt_morphism_doc(m),
        Instance::Witness(w) => witness_doc(w),
        Instance::Category(c) => category_doc(c),
        Instance::Functor(f) => functor_doc(f),
        Instance::NatTrans(n) => nat_trans_doc_with(
            n,
            functor_doc(n.from_functor()).to_value(),
            functor_doc(n.to_functor()).to_value(),
        ),
        Instance::Etale(e) => etale_doc(e),
        Instance::Cset(a) => cset_doc(a),
        Instance::Equivariant(m) => equivariant_doc_with(
            m,
            cset_doc(m.from_cset()).to_value(),
            cset_doc(m.to_cset()).to_value(),
        ),
    }
}

/// Ordered map from file names to documents, for writing a directory.
pub type DocSet = BTreeMap<String, Doc>;

pub fn write_docs(dir: &Path, docs: &DocSet) -> std::io::Result<()> {
    fs::create_dir_all(dir)?;
    for (name, doc) in docs {
        fs::write(dir.join(name), doc.to_pretty())?;
    }
    Ok(())
}
