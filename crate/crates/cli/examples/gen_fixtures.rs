//! Regenerates `fixtures/corpus` and `fixtures/mutants`.
//!
//! ```text
//! cargo run -p etale-cli --example gen_fixtures -- fixtures
//! ```

use std::collections::BTreeMap;
use std::fs;
use std::path::PathBuf;

use serde_json::{json, Value};

use etale::categories::{discrete_category, FunctorInstance, NatTransInstance};
use etale::cntsets::{CntMorphism, OvertDiscreteWitness};
use etale::corpus::{cset_corpus, functor_corpus, natural_transformations};
use etale::equivalence::{nat_to_equivariant, to_cset};
use etale::etale::EquivariantMapInstance;
use etale::fixtures::{
    cat_arrow, cat_chain3, cat_idempotent, cat_iso, cat_z2, cat_z3, cset_z2_swap, etale_identity,
    functor_f0, functor_f1, per_2cls, per_pt, rel_flat2, rel_point, rel_powerset4, rel_sierp,
    swap_2cls,
};
use etale_cli::format::{
    category_doc, cset_doc, cset_doc_with, equivariant_doc_with, etale_doc, functor_doc,
    functor_doc_with, nat_trans_doc_with, per_doc, relation_doc, witness_doc, CntMorphismDoc, Doc,
};

fn path(name: &str) -> Value {
    Value::String(name.to_string())
}

fn corpus() -> BTreeMap<String, Value> {
    let mut docs: BTreeMap<String, Doc> = BTreeMap::new();
    let mut put = |name: &str, doc: Doc| {
        docs.insert(format!("{name}.json"), doc);
    };

    put("rel_sierp", relation_doc(&rel_sierp()));
    put("rel_flat2", relation_doc(&rel_flat2()));
    put("rel_point", relation_doc(&rel_point()));
    put("rel_powerset4", relation_doc(&rel_powerset4()));
    put("per_2cls", per_doc(&per_2cls()));
    put("per_pt", per_doc(&per_pt()));
    put(
        "swap_2cls",
        Doc::CntMorphism(CntMorphismDoc {
            graph: swap_2cls().graph().iter().copied().collect(),
            src: path("per_2cls.json"),
            tar: path("per_2cls.json"),
        }),
    );
    put("witness_2cls", witness_doc(&OvertDiscreteWitness::canonical(&per_2cls())));

    put("cat_z2", category_doc(&cat_z2()));
    put("cat_z3", category_doc(&cat_z3()));
    put("cat_idempotent", category_doc(&cat_idempotent()));
    put("cat_arrow", category_doc(&cat_arrow()));
    put("cat_chain3", category_doc(&cat_chain3()));
    put("cat_iso", category_doc(&cat_iso()));
    put("cat_flat2", category_doc(&discrete_category(&rel_flat2())));
    put("cat_sierp", category_doc(&discrete_category(&rel_sierp())));

    let f0 = functor_f0();
    let f1 = functor_f1();
    put("functor_f0", functor_doc_with(&f0, path("cat_flat2.json")));
    put("functor_f1", functor_doc_with(&f1, path("cat_z2.json")));
    let sierp = discrete_category(&rel_sierp());
    // a monotone functor on the Sierpiński base: the fiber over the bottom point is smaller
    let small = etale::cntsets::Per::from_classes(3, &[vec![0]]).expect("in range");
    let f_sierp = FunctorInstance::new(
        sierp.clone(),
        vec![small.clone(), per_2cls()],
        vec![CntMorphism::identity(&small), CntMorphism::identity(&per_2cls())],
    )
    .expect("sizes match");
    put("functor_sierp", functor_doc_with(&f_sierp, path("cat_sierp.json")));
    let arrow = cat_arrow();
    let f_arrow = FunctorInstance::new(
        arrow.clone(),
        vec![per_pt(), per_pt()],
        vec![
            CntMorphism::identity(&per_pt()),
            CntMorphism::identity(&per_pt()),
            CntMorphism::identity(&per_pt()),
        ],
    )
    .expect("sizes match");
    put("functor_arrow", functor_doc_with(&f_arrow, path("cat_arrow.json")));

    let collapse = NatTransInstance::new(
        f0.clone(),
        FunctorInstance::constant_singleton(f0.category()),
        vec![
            CntMorphism::from_class_map(&per_2cls(), &per_pt(), &[0, 0]).expect("fits"),
            CntMorphism::identity(&per_pt()),
        ],
    )
    .expect("sizes match");
    put(
        "nat_collapse_f0",
        nat_trans_doc_with(
            &collapse,
            path("functor_f0.json"),
            functor_doc(collapse.to_functor()).to_value(),
        ),
    );
    let swap_nat = NatTransInstance::new(f1.clone(), f1.clone(), vec![swap_2cls()]).expect("sizes match");
    put(
        "nat_swap_f1",
        nat_trans_doc_with(&swap_nat, path("functor_f1.json"), path("functor_f1.json")),
    );

    put("etale_identity_sierp", etale_doc(&etale_identity(&rel_sierp())));
    let z2 = cset_z2_swap();
    put("cset_z2_swap", cset_doc_with(&z2, path("cat_z2.json")));
    put("cset_f0", cset_doc_with(&to_cset(&f0).expect("valid"), path("cat_flat2.json")));
    put("cset_arrow", cset_doc_with(&to_cset(&f_arrow).expect("valid"), path("cat_arrow.json")));
    let swap_map = EquivariantMapInstance::new(z2.clone(), z2, vec![1, 0]).expect("sizes match");
    put(
        "equivariant_swap",
        equivariant_doc_with(&swap_map, path("cset_z2_swap.json"), path("cset_z2_swap.json")),
    );

    for (i, f) in functor_corpus(7, 20, 4).iter().enumerate() {
        put(&format!("gen_functor_{i:02}"), functor_doc(f));
    }
    for (i, a) in cset_corpus(8, 12, 3).iter().enumerate() {
        put(&format!("gen_cset_{i:02}"), cset_doc(a));
    }
    let small_functors = functor_corpus(9, 20, 3);
    let mut k = 0;
    for (i, f) in small_functors.iter().enumerate() {
        for g in small_functors[i + 1..].iter().filter(|g| g.category() == f.category()) {
            if k >= 6 {
                break;
            }
            if let Some(n) = natural_transformations(f, g, 64).and_then(|v| v.into_iter().next()) {
                let from = functor_doc(f).to_value();
                let to = functor_doc(g).to_value();
                put(&format!("gen_nat_{k:02}"), nat_trans_doc_with(&n, from, to));
                let h = nat_to_equivariant(&n).expect("valid");
                put(
                    &format!("gen_equivariant_{k:02}"),
                    equivariant_doc_with(
                        &h,
                        cset_doc(h.from_cset()).to_value(),
                        cset_doc(h.to_cset()).to_value(),
                    ),
                );
                k += 1;
            }
        }
    }
    docs.into_iter().map(|(k, v)| (k, v.to_value())).collect()
}

struct Mutant {
    name: &'static str,
    replaces: &'static str,
    rule: &'static str,
    edit: fn(&mut Value),
}

fn pairs(v: &Value) -> Vec<Value> {
    v.as_array().expect("pair list").clone()
}

fn without(list: &Value, drop: &[(u64, u64)]) -> Value {
    Value::Array(
        pairs(list)
            .into_iter()
            .filter(|p| !drop.iter().any(|&(a, b)| *p == json!([a, b])))
            .collect(),
    )
}

fn with(list: &Value, add: &[(u64, u64)]) -> Value {
    let mut v = pairs(list);
    v.extend(add.iter().map(|&(a, b)| json!([a, b])));
    Value::Array(v)
}

fn set_comp(doc: &mut Value, g: u64, f: u64, h: u64) {
    for entry in doc["comp"].as_array_mut().expect("comp list") {
        if entry[0] == json!(g) && entry[1] == json!(f) {
            entry[2] = json!(h);
        }
    }
}

fn set_action(doc: &mut Value, f: u64, x: u64, y: u64) {
    for entry in doc["action"].as_array_mut().expect("action list") {
        if entry[0] == json!(f) && entry[1] == json!(x) {
            entry[2] = json!(y);
        }
    }
}

fn mutants() -> Vec<Mutant> {
    vec![
        Mutant {
            name: "m01_relation_not_transitive",
            replaces: "rel_powerset4.json",
            rule: "relation.transitivity",
            edit: |d| d["pairs"] = without(&d["pairs"], &[(0, 3)]),
        },
        Mutant {
            name: "m02_per_not_symmetric",
            replaces: "per_2cls.json",
            rule: "per.symmetry",
            edit: |d| d["pairs"] = without(&d["pairs"], &[(1, 0)]),
        },
        Mutant {
            name: "m03_per_not_transitive",
            replaces: "per_2cls.json",
            rule: "per.transitivity",
            edit: |d| d["pairs"] = with(&d["pairs"], &[(1, 2), (2, 1)]),
        },
        Mutant {
            name: "m04_graph_not_saturated_source",
            replaces: "swap_2cls.json",
            rule: "cnt.cond2",
            edit: |d| d["graph"] = without(&d["graph"], &[(1, 2)]),
        },
        Mutant {
            name: "m05_graph_not_single_valued",
            replaces: "swap_2cls.json",
            rule: "cnt.cond4",
            edit: |d| d["graph"] = with(&d["graph"], &[(0, 0), (1, 0)]),
        },
        Mutant {
            name: "m06_graph_not_total",
            replaces: "swap_2cls.json",
            rule: "cnt.cond5",
            edit: |d| d["graph"] = without(&d["graph"], &[(2, 0), (2, 1)]),
        },
        Mutant {
            name: "m07_witness_overt_incomplete",
            replaces: "witness_2cls.json",
            rule: "witness.overt",
            edit: |d| d["e"] = json!([0, 1]),
        },
        Mutant {
            name: "m08_witness_misses_a_point",
            replaces: "witness_2cls.json",
            rule: "witness.discrete",
            edit: |d| d["d"] = without(&d["d"], &[(2, 2)]),
        },
        Mutant {
            name: "m09_identity_is_not_neutral",
            replaces: "cat_z2.json",
            rule: "category.left-unit",
            edit: |d| d["id"] = json!([1]),
        },
        Mutant {
            name: "m10_composition_not_associative",
            replaces: "cat_z3.json",
            rule: "category.assoc",
            edit: |d| set_comp(d, 1, 1, 0),
        },
        Mutant {
            name: "m11_composite_wrong_target",
            replaces: "cat_iso.json",
            rule: "category.comp-target",
            edit: |d| set_comp(d, 3, 2, 2),
        },
        Mutant {
            name: "m12_identity_wrong_source",
            replaces: "cat_chain3.json",
            rule: "category.id-source",
            edit: |d| d["id"] = json!([0, 1, 3]),
        },
        Mutant {
            name: "m13_functor_breaks_composition",
            replaces: "functor_f1.json",
            rule: "functor.composition",
            edit: |d| d["mor"][1] = json!([[0, 0], [0, 1], [1, 0], [1, 1], [2, 0], [2, 1]]),
        },
        Mutant {
            name: "m14_functor_moves_identity",
            replaces: "functor_f0.json",
            rule: "functor.identity",
            edit: |d| d["mor"][0] = json!([[0, 2], [1, 2], [2, 0], [2, 1]]),
        },
        Mutant {
            name: "m15_functor_not_monotone",
            replaces: "functor_sierp.json",
            rule: "functor.continuity",
            edit: |d| {
                let (a, b) = (d["obj"][0].clone(), d["obj"][1].clone());
                d["obj"][0] = b;
                d["obj"][1] = a;
                let (ga, gb) = (d["mor"][0].clone(), d["mor"][1].clone());
                d["mor"][0] = gb;
                d["mor"][1] = ga;
            },
        },
        Mutant {
            name: "m16_transformation_not_natural",
            replaces: "nat_swap_f1.json",
            rule: "nat.naturality",
            edit: |d| d["eta"][0] = json!([[0, 0], [0, 1], [1, 0], [1, 1], [2, 0], [2, 1]]),
        },
        Mutant {
            name: "m17_component_not_saturated",
            replaces: "nat_collapse_f0.json",
            rule: "cnt.cond2",
            edit: |d| d["eta"][0] = without(&d["eta"][0], &[(1, 0)]),
        },
        Mutant {
            name: "m18_section_not_right_inverse",
            replaces: "etale_identity_sierp.json",
            rule: "etale.section-right",
            edit: |d| d["charts"][0]["s"] = json!([[0, 0], [1, 0]]),
        },
        Mutant {
            name: "m19_charts_do_not_cover",
            replaces: "etale_identity_sierp.json",
            rule: "etale.cover",
            edit: |d| d["charts"][0]["u"] = json!([]),
        },
        Mutant {
            name: "m20_projection_not_continuous",
            replaces: "etale_identity_sierp.json",
            rule: "etale.continuity",
            edit: |d| d["p"] = json!([1, 0]),
        },
        Mutant {
            name: "m21_action_not_compatible",
            replaces: "cset_z2_swap.json",
            rule: "action.cond3",
            edit: |d| set_action(d, 1, 1, 1),
        },
        Mutant {
            name: "m22_identity_acts_nontrivially",
            replaces: "cset_z2_swap.json",
            rule: "action.cond2",
            edit: |d| {
                set_action(d, 0, 0, 1);
                set_action(d, 0, 1, 0);
            },
        },
        Mutant {
            name: "m23_action_leaves_the_fiber",
            replaces: "cset_arrow.json",
            rule: "action.cond1",
            edit: |d| {
                let entry = d["action"]
                    .as_array()
                    .expect("action list")
                    .iter()
                    .find(|e| e[0] == json!(2))
                    .expect("the arrow acts")
                    .clone();
                set_action(d, 2, entry[1].as_u64().unwrap(), entry[1].as_u64().unwrap());
            },
        },
        Mutant {
            name: "m24_map_not_equivariant",
            replaces: "equivariant_swap.json",
            rule: "equivariant.action",
            edit: |d| d["h"] = json!([0, 0]),
        },
    ]
}

fn write_json(path: PathBuf, v: &Value) {
    let mut s = serde_json::to_string_pretty(v).expect("serializes");
    s.push('\n');
    fs::write(&path, s).unwrap_or_else(|e| panic!("cannot write {}: {e}", path.display()));
}

fn main() {
    let root = PathBuf::from(std::env::args().nth(1).unwrap_or_else(|| "fixtures".into()));
    let corpus_dir = root.join("corpus");
    let mutant_dir = root.join("mutants");
    for d in [&corpus_dir, &mutant_dir] {
        if d.exists() {
            fs::remove_dir_all(d).expect("clear old fixtures");
        }
        fs::create_dir_all(d).expect("create fixture directory");
    }
    let docs = corpus();
    for (name, v) in &docs {
        write_json(corpus_dir.join(name), v);
    }
    let mut manifest = Vec::new();
    for m in mutants() {
        let mut v = docs[m.replaces].clone();
        (m.edit)(&mut v);
        let file = format!("{}.json", m.name);
        write_json(mutant_dir.join(&file), &v);
        manifest.push(json!({ "file": file, "replaces": m.replaces, "rule": m.rule }));
    }
    write_json(root.join("mutants.json"), &Value::Array(manifest));
    println!("{} corpus files, {} mutants", docs.len(), mutants().len());
}
