//! Regenerates the workspace files under `fixtures/`.
//!
//! `cargo run -p panache-core --example make_fixtures -- fixtures`

use std::collections::BTreeMap;
use std::path::Path;
use std::sync::Arc;

use panache::group::{free_graded_lie, GroupPresentation, Letter};
use panache::io::corpus::{corpus_instance, CorpusConfig};
use panache::io::{save_workspace, BetweenJson, ExtJson, PairJson, WorkspaceDoc};
use panache::linalg::{Mat, Rat};
use panache::rep::{simple_character, unit_object, BasisVector, RepObject};

/// Sparse integer matrix entries `(row, column, value)`.
type Entries = Vec<(usize, usize, i64)>;

fn object(p: &Arc<GroupPresentation>, chars: &[i64], actions: &[(usize, Entries)]) -> RepObject {
    let n = chars.len();
    let basis = chars.iter().enumerate().map(|(i, &c)| BasisVector::new(format!("b{i}"), vec![c])).collect();
    let acts: BTreeMap<usize, Mat> = actions
        .iter()
        .map(|(g, es)| {
            let mut m = Mat::zeros(n, n);
            for &(r, c, v) in es {
                m.set(r, c, Rat::from_int(v));
            }
            (*g, m)
        })
        .collect();
    RepObject::new(p.clone(), basis, acts).expect("fixture object is valid")
}

/// Kummer-type object over one degree-one generator, its unit and Tate pieces,
/// and the Kummer class as an extension of `1` by `Q(1)`.
fn kummer(dir: &Path) {
    let p = Arc::new(GroupPresentation::abelian(vec![-2], &[vec![1]]).unwrap());
    let mut doc = WorkspaceDoc::new(p.clone());
    doc.insert_object("kummer", object(&p, &[1, 0], &[(0, vec![(0, 1, 1)])])).unwrap();
    doc.insert_object("unit", unit_object(&p)).unwrap();
    doc.insert_object("q1", simple_character(&p, &[1])).unwrap();
    let spec = ExtJson { target: "q1".into(), cocycle: [("x0".to_string(), vec![Rat::one()])].into_iter().collect() };
    doc.insert_ext("kummer_class", spec).unwrap();
    save_workspace(&doc, &dir.join("kummer.json")).unwrap();
}

/// Weights `0, -1, -3` over the truncated free algebra on letters of degree 1
/// and 2, where the bracket of the two letters acts by the commutator.
fn three_weights(dir: &Path) {
    let letters = [Letter::new("x1", vec![1]), Letter::new("x2", vec![2])];
    let p = Arc::new(free_graded_lie(&[-1], &letters, -3).unwrap());
    let g1 = p.index_of("x1").unwrap();
    let g2 = p.index_of("x2").unwrap();
    let g3 = (0..p.n_generators()).find(|&g| g != g1 && g != g2).unwrap();
    let a1 = object(&p, &[0, 1, 3], &[(g1, vec![(1, 0, 1)])]).action_or_zero(g1).into_owned();
    let mut a2 = Mat::zeros(3, 3);
    a2.set(2, 1, Rat::one());
    let acts: BTreeMap<usize, Mat> = [(g1, a1.clone()), (g2, a2.clone()), (g3, a1.commutator(&a2))].into_iter().collect();
    let basis = [0, 1, 3].iter().enumerate().map(|(i, &c)| BasisVector::new(format!("b{i}"), vec![c])).collect();
    let m = RepObject::new(p.clone(), basis, acts).unwrap();
    let mut doc = WorkspaceDoc::new(p);
    doc.insert_object("m", m).unwrap();
    save_workspace(&doc, &dir.join("three_weights.json")).unwrap();
}

/// `B = Q(2)`, `A = Q(1)`, `C = 1` over two commuting degree-one generators,
/// with an obstructed pair, a compatible pair and a rescaling of the latter.
fn rank_two_pairs(dir: &Path) {
    let p = Arc::new(GroupPresentation::abelian(vec![-2], &[vec![1], vec![1]]).unwrap());
    let mut doc = WorkspaceDoc::new(p.clone());
    doc.insert_object("b", simple_character(&p, &[2])).unwrap();
    doc.insert_object("a", simple_character(&p, &[1])).unwrap();
    doc.insert_object("c", unit_object(&p)).unwrap();
    let side = |from: &str, to: &str, v: (i64, i64)| {
        let blocks: BTreeMap<usize, Mat> = [(0, Mat::from_i64(&[&[v.0]])), (1, Mat::from_i64(&[&[v.1]]))].into_iter().collect();
        BetweenJson::from_blocks(from, to, &p, &blocks)
    };
    let pair = |l, n| PairJson { l: side("a", "b", l), n: side("c", "a", n) };
    doc.insert_pair("obstructed", pair((1, 0), (0, 1))).unwrap();
    doc.insert_pair("compatible", pair((1, 0), (2, 0))).unwrap();
    doc.insert_pair("compatible_rescaled", pair((2, 0), (1, 0))).unwrap();
    doc.insert_pair("independent", pair((1, 0), (1, 1))).unwrap();
    save_workspace(&doc, &dir.join("rank_two_pairs.json")).unwrap();
}

fn corpus_files(dir: &Path) {
    let sub = dir.join("corpus");
    std::fs::create_dir_all(&sub).unwrap();
    let cfg = CorpusConfig::default();
    let mut written = 0;
    let mut seed = 0;
    while written < 8 {
        if let Ok(m) = corpus_instance(seed, &cfg) {
            let mut doc = WorkspaceDoc::new(m.pres_arc().clone());
            doc.insert_object("m", m).unwrap();
            save_workspace(&doc, &sub.join(format!("seed_{seed}.json"))).unwrap();
            written += 1;
        }
        seed += 1;
    }
}

fn main() {
    let dir = std::env::args().nth(1).unwrap_or_else(|| "fixtures".into());
    let dir = Path::new(&dir);
    std::fs::create_dir_all(dir).unwrap();
    kummer(dir);
    three_weights(dir);
    rank_two_pairs(dir);
    corpus_files(dir);
    println!("fixtures written to {}", dir.display());
}
