use std::path::PathBuf;

use sill_core::reduction::{explore, reduce, Status};
use sill_core::surface::{parse_session, DeclBody, SessionFile};
use sill_core::typecheck::{check_cp, check_hcp, TypeErrorKind};
use sill_core::{cp_to_hcp, HyperEnv};

fn load(name: &str) -> SessionFile {
    let path = PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../../fixtures")
        .join(name);
    parse_session(&std::fs::read_to_string(path).unwrap()).unwrap()
}

fn rejection(file: &str, proc: &str) -> Option<TypeErrorKind> {
    let f = load(file);
    let d = f.get(proc).unwrap();
    let result = match &d.body {
        DeclBody::Cp(t) => check_cp(t, &d.env).map(|_| ()),
        DeclBody::Hcp(t) => check_hcp(t, &d.env).map(|_| ()),
    };
    result.err().map(|e| e.kind)
}

#[test]
fn accepted_fixtures_typecheck() {
    for file in [
        "unit_cut.sill",
        "tensor_unit.sill",
        "reductions.sill",
        "hypersequents.sill",
        "internalize.sill",
    ] {
        for d in &load(file).decls {
            assert_eq!(rejection(file, &d.name), None, "{file} {}", d.name);
        }
    }
}

#[test]
fn rejected_fixtures_name_their_error() {
    assert_eq!(
        rejection("selflock.sill", "Main"),
        Some(TypeErrorKind::SelfLock)
    );
    assert_eq!(
        rejection("selflock.sill", "Open"),
        Some(TypeErrorKind::SelfLock)
    );
    assert_eq!(
        rejection("with_counterexample.sill", "Main"),
        Some(TypeErrorKind::HyperContextForbidden)
    );
    assert_eq!(
        rejection("deadlock.sill", "Main"),
        Some(TypeErrorKind::SplitConflict)
    );
}

#[test]
fn reduction_fixtures_take_their_rule() {
    let f = load("reductions.sill");
    let expect = [
        ("Tensor", "β⊗⅋"),
        ("Unit", "β1⊥"),
        ("Left", "β⊕&₁"),
        ("Right", "β⊕&₂"),
        ("Link", "κ↔"),
    ];
    for (name, rule) in expect {
        let DeclBody::Cp(t) = &f.get(name).unwrap().body else {
            panic!("{name} is a proc")
        };
        let trace = reduce(t);
        assert_eq!(trace.status, Status::Canonical, "{name}");
        assert_eq!(trace.steps[0].redex.rule.symbol(), rule, "{name}");
    }
}

#[test]
fn images_are_the_translations() {
    let f = load("reductions.sill");
    for (src, image) in [("Tensor", "TensorImage"), ("Unit", "UnitImage")] {
        let (DeclBody::Cp(t), DeclBody::Hcp(h)) =
            (&f.get(src).unwrap().body, &f.get(image).unwrap().body)
        else {
            panic!("{src} and {image} have the wrong dialects")
        };
        assert_eq!(&cp_to_hcp(t), h);
    }
}

#[test]
fn hypersequent_fixtures_infer_their_partitions() {
    let f = load("hypersequents.sill");
    let hyper = |name: &str| match &f.get(name).unwrap().body {
        DeclBody::Hcp(t) => check_hcp(t, &f.get(name).unwrap().env).unwrap().hyper,
        DeclBody::Cp(_) => panic!("{name} is an hproc"),
    };
    assert_eq!(hyper("Mix").envs().len(), 2);
    assert_eq!(hyper("Extruded").envs().len(), 2);
    assert_eq!(hyper("Split").envs().len(), 1);
    assert_eq!(hyper("Waiting").envs().len(), 2);
    assert_eq!(hyper("Inert"), HyperEnv::empty());
}

#[test]
fn tensor_unit_graph_is_a_three_step_path() {
    let f = load("tensor_unit.sill");
    let DeclBody::Cp(t) = &f.get("Main").unwrap().body else {
        panic!("Main is a proc")
    };
    let g = explore(t, 100);
    assert!(g.complete && g.is_path());
    assert_eq!((g.nodes.len(), g.edges.len()), (4, 3));
    assert_eq!(reduce(t).steps.len(), 3);
}
