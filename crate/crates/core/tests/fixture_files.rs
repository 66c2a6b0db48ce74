use std::fs;
use std::path::PathBuf;

use fasolve::fixtures;
use fasolve::io::parse_fas;
use fasolve::oracle::fasp_optimum;
use fasolve::{cut_resolve, resolve, WeightedMultiDigraph};

fn load(name: &str) -> WeightedMultiDigraph {
    let path = PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../../fixtures")
        .join(name);
    let text = fs::read_to_string(&path).unwrap_or_else(|e| panic!("{}: {e}", path.display()));
    parse_fas(&text).unwrap()
}

#[test]
fn files_match_the_builtin_fixtures() {
    assert_eq!(load("parallel_example.fas"), fixtures::parallel_example().graph);
    assert_eq!(load("cactus.fas"), fixtures::cactus().graph);
    assert_eq!(
        load("relative_weight_example.fas"),
        fixtures::relative_weight_example().graph
    );
    assert_eq!(load("d3.fas"), fixtures::d3());
    for d in 1..=8 {
        assert_eq!(
            load(&format!("diamond_{d}.fas")),
            fixtures::diamond_chain(d),
            "diamond {d}"
        );
    }
}

#[test]
fn worked_examples() {
    // best solutions with e3 and with d3 weigh 8 and 7
    let relative_weight_example = load("relative_weight_example.fas");
    assert_eq!(fasp_optimum(&relative_weight_example).unwrap(), 7);
    assert_eq!(cut_resolve(&relative_weight_example).unwrap().weight, 7);
    let d3 = load("d3.fas");
    assert_eq!(cut_resolve(&d3).unwrap().weight, 3);
    let cactus = load("cactus.fas");
    assert!(resolve(&cactus).unwrap().resolvable);
    assert_eq!(cut_resolve(&cactus).unwrap().weight, fasp_optimum(&cactus).unwrap());
}

#[test]
fn random_suite_is_solved_exactly() {
    let dir = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fixtures/random");
    let mut files: Vec<_> = fs::read_dir(&dir).unwrap().map(|e| e.unwrap().path()).collect();
    files.sort();
    assert_eq!(files.len(), 20);
    for path in files {
        let g = parse_fas(&fs::read_to_string(&path).unwrap()).unwrap();
        let r = cut_resolve(&g).unwrap();
        assert_eq!(r.weight, fasp_optimum(&g).unwrap(), "{}", path.display());
    }
}
