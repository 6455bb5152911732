use std::path::{Path, PathBuf};
use std::process::{Command, Output};
use std::sync::Arc;

use serde::Serialize;
use serde_json::Value;
use tempfile::TempDir;

use gpd_core::bibundle::bibundle_of_functor;
use gpd_core::extension::GroupoidExtension;
use gpd_core::interchange::{BibundleDoc, DescentDoc, ExtensionDoc, FunctorDoc, GroupoidDoc, PresheafKind, SesDoc};
use gpd_core::linrep::{BundleSES, GroupoidVectorBundle};
use gpd_core::{FiniteGroup, FiniteGroupoid, GroupoidFunctor};

fn z(n: usize) -> Arc<FiniteGroupoid> {
    Arc::new(FiniteGroupoid::group(&FiniteGroup::cyclic(n)))
}

fn z4_onto_z2() -> GroupoidFunctor {
    GroupoidFunctor::new(z(4), z(2), vec![0], (0..4).map(|k| k % 2).collect()).unwrap()
}

fn write<T: Serialize>(dir: &TempDir, name: &str, value: &T) -> PathBuf {
    let path = dir.path().join(name);
    std::fs::write(&path, serde_json::to_string_pretty(value).unwrap()).unwrap();
    path
}

fn gpd(args: &[&str], files: &[&Path]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_gpd"))
        .args(args)
        .args(files)
        .output()
        .unwrap()
}

fn status(out: &Output) -> i32 {
    out.status.code().unwrap()
}

fn structured(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap()
}

#[test]
fn validate_reports_groupoids_and_table_errors_separately_from_input_errors() {
    let dir = TempDir::new().unwrap();
    let good = write(&dir, "z2.json", &GroupoidDoc::from_groupoid(&z(2)));
    let out = gpd(&["validate"], &[&good]);
    assert_eq!(status(&out), 0);
    assert!(String::from_utf8_lossy(&out.stdout).starts_with("valid groupoid"));

    let mut doc = GroupoidDoc::from_groupoid(&z(2));
    doc.compose.pop();
    let broken = write(&dir, "broken.json", &doc);
    let out = gpd(&["validate", "--format", "structured"], &[&broken]);
    assert_eq!(status(&out), 1);
    let v = structured(&out);
    assert_eq!(v["valid"], false);
    assert!(v["violations"][0].as_str().unwrap().contains("no composite"));

    let mut raw: Value = serde_json::to_value(GroupoidDoc::from_groupoid(&z(2))).unwrap();
    raw["colour"] = Value::from("red");
    let unknown = write(&dir, "unknown.json", &raw);
    assert_eq!(status(&gpd(&["validate"], &[&unknown])), 2);
    assert_eq!(status(&gpd(&["validate"], &[&dir.path().join("missing.json")])), 2);
}

#[test]
fn mutation_reports_are_stable_for_a_seed() {
    let dir = TempDir::new().unwrap();
    let g = FiniteGroupoid::product(&FiniteGroupoid::pair(2), &z(2));
    let file = write(&dir, "g.json", &GroupoidDoc::from_groupoid(&g));
    let args = ["validate", "--mutations", "25", "--seed", "7", "--format", "structured"];
    let (a, b) = (gpd(&args, &[&file]), gpd(&args, &[&file]));
    assert_eq!(status(&a), 0);
    assert_eq!(a.stdout, b.stdout);
    let v = structured(&a);
    assert_eq!(v["mutations"].as_array().unwrap().len(), 25);
}

#[test]
fn morita_separates_component_counts() {
    let dir = TempDir::new().unwrap();
    let three = write(&dir, "d3.json", &GroupoidDoc::from_groupoid(&FiniteGroupoid::discrete(3)));
    let point = write(&dir, "pt.json", &GroupoidDoc::from_groupoid(&z(1)));
    let pair = write(&dir, "pair.json", &GroupoidDoc::from_groupoid(&FiniteGroupoid::pair(2)));
    let out = gpd(&["morita"], &[&three, &point]);
    assert_eq!(status(&out), 1);
    assert!(String::from_utf8_lossy(&out.stdout).contains("component count 3 ≠ 1"));
    let out = gpd(&["morita", "--format", "structured"], &[&pair, &point]);
    assert_eq!(status(&out), 0);
    assert_eq!(structured(&out)["equivalent"], true);
}

#[test]
fn gerbe_check_accepts_a_quotient_and_rejects_a_non_full_functor() {
    let dir = TempDir::new().unwrap();
    let ext = GroupoidExtension::from_functor(z4_onto_z2()).unwrap();
    let file = write(&dir, "ext.json", &ExtensionDoc::from_extension(&ext));
    let out = gpd(&["gerbe-check", "--format", "structured"], &[&file]);
    assert_eq!(status(&out), 0);
    let v = structured(&out);
    assert_eq!((v["objects_lift"].clone(), v["arrows_lift"].clone(), v["gerbe"].clone()), (true.into(), true.into(), true.into()));

    let pair = FiniteGroupoid::pair(2);
    let discrete = FiniteGroupoid::discrete_labeled(pair.object_labels().to_vec());
    let mut doc = ExtensionDoc {
        extended: GroupoidDoc::from_groupoid(&discrete),
        quotient: GroupoidDoc::from_groupoid(&pair),
        arrow_map: Default::default(),
    };
    for x in 0..2 {
        doc.arrow_map.insert(
            discrete.morphism_label(discrete.ident(x)).to_string(),
            pair.morphism_label(pair.ident(x)).to_string(),
        );
    }
    let file = write(&dir, "thin.json", &doc);
    let out = gpd(&["gerbe-check", "--format", "structured"], &[&file]);
    assert_eq!(status(&out), 1);
    let v = structured(&out);
    assert_eq!(v["arrows_lift"], false);
    assert!(v["unlifted_arrow"].is_array());
}

#[test]
fn bibundles_compose_over_a_shared_middle() {
    let dir = TempDir::new().unwrap();
    let pair = Arc::new(FiniteGroupoid::pair(2));
    let p = bibundle_of_functor(&GroupoidFunctor::identity(pair.clone()));
    let q = bibundle_of_functor(&GroupoidFunctor::identity(z(2)));
    let pf = write(&dir, "p.json", &BibundleDoc::from_bibundle(&p));
    let qf = write(&dir, "q.json", &BibundleDoc::from_bibundle(&q));
    let out = gpd(&["compose", "--format", "structured"], &[&pf, &pf]);
    assert_eq!(status(&out), 0);
    let doc: BibundleDoc = serde_json::from_value(structured(&out)).unwrap();
    assert_eq!(doc.load().unwrap().len(), p.len());
    assert_eq!(status(&gpd(&["compose"], &[&pf, &qf])), 2);
}

#[test]
fn induce_and_pull_back_extensions() {
    let dir = TempDir::new().unwrap();
    let f = write(&dir, "f.json", &FunctorDoc::from_functor(&z4_onto_z2()));
    let out = gpd(&["extension-induce", "--format", "structured"], &[&f]);
    assert_eq!(status(&out), 0);
    let doc: ExtensionDoc = serde_json::from_value(structured(&out)).unwrap();
    assert_eq!(doc.load().unwrap().extended().num_morphisms(), 4);

    let not_onto = GroupoidFunctor::new(z(1), Arc::new(FiniteGroupoid::discrete(2)), vec![0], vec![0]).unwrap();
    let f = write(&dir, "g.json", &FunctorDoc::from_functor(&not_onto));
    assert_eq!(status(&gpd(&["extension-induce"], &[&f])), 1);

    let ext = GroupoidExtension::from_functor(z4_onto_z2()).unwrap();
    let e = write(&dir, "ext.json", &ExtensionDoc::from_extension(&ext));
    let star = ext.extended().object_label(0).to_string();
    let map = serde_json::json!({ "points": ["p", "q"], "map": { "p": star, "q": star } });
    let m = write(&dir, "map.json", &map);
    let out = gpd(&["pullback", "--format", "structured"], &[&e, &m]);
    assert_eq!(status(&out), 0);
    let doc: ExtensionDoc = serde_json::from_value(structured(&out)).unwrap();
    assert_eq!(doc.load().unwrap().extended().num_morphisms(), 16);

    let pair = Arc::new(FiniteGroupoid::pair(2));
    let ext = GroupoidExtension::from_functor(GroupoidFunctor::identity(pair.clone())).unwrap();
    let e = write(&dir, "pair.json", &ExtensionDoc::from_extension(&ext));
    let map = serde_json::json!({ "points": ["p"], "map": { "p": pair.object_label(0) } });
    let m = write(&dir, "short.json", &map);
    assert_eq!(status(&gpd(&["pullback"], &[&e, &m])), 1);
}

#[test]
fn descent_check_reports_each_property() {
    let dir = TempDir::new().unwrap();
    let doc = DescentDoc {
        groupoid: GroupoidDoc::from_groupoid(&z(2)),
        presheaf: PresheafKind::Bg,
        base: 2,
        cover: vec![vec![0], vec![1]],
    };
    let file = write(&dir, "bg.json", &doc);
    let out = gpd(&["descent-check"], &[&file]);
    assert_eq!(status(&out), 0);
    let text = String::from_utf8_lossy(&out.stdout);
    for line in ["full: true", "faithful: true", "essentially surjective: true"] {
        assert!(text.contains(line), "{text}");
    }

    let doc = DescentDoc {
        groupoid: GroupoidDoc::from_groupoid(&FiniteGroupoid::discrete(2)),
        presheaf: PresheafKind::Constant,
        ..doc
    };
    let file = write(&dir, "const.json", &doc);
    let out = gpd(&["descent-check", "--format", "structured"], &[&file]);
    assert_eq!(status(&out), 1);
    let v = structured(&out);
    assert_eq!(v["ess_surjective"], false);
    assert!(v["unglued"].is_object());
    assert_eq!(status(&gpd(&["descent-check", "--cap", "1"], &[&file])), 2);
}

#[test]
fn split_writes_matrices_to_the_output_file() {
    let dir = TempDir::new().unwrap();
    let line = GroupoidVectorBundle::trivial(z(2), 1);
    let ses = BundleSES::direct_sum(line.clone(), line);
    let file = write(&dir, "ses.json", &SesDoc::from_ses(&ses));
    let report = dir.path().join("r.json");
    let out = gpd(&["split", "--format", "structured", "--output", report.to_str().unwrap()], &[&file]);
    assert_eq!(status(&out), 0);
    assert!(out.stdout.is_empty());
    let v: Value = serde_json::from_str(&std::fs::read_to_string(report).unwrap()).unwrap();
    assert_eq!(v["splitting"].as_object().unwrap().len(), 1);
}
