mod common;

use std::sync::Arc;

use common::fixture;
use torsionlab::job::report::{functions_from_json, render_json, render_text};
use torsionlab::job::{parse_job, run_job, RunOptions, TaskStatus, TaskValue};
use torsionlab::ring::FieldTower;

fn run(name: &str, opts: &RunOptions) -> torsionlab::job::JobReport {
    run_job(&fixture(name), opts).unwrap()
}

#[test]
fn shipped_fixtures_succeed() {
    let opts = RunOptions { check_invariants: true, ..Default::default() };
    for name in [
        "fig8.tors",
        "fig8_fibered.tors",
        "whitehead_point.tors",
        "whitehead_point2.tors",
        "trefoil.tors",
        "torus.tors",
    ] {
        let report = run(name, &opts);
        assert!(report.success(), "{name}:\n{}", render_text(&report));
        assert!(report.invariants.iter().all(|c| c.passed), "{name}");
    }
}

#[test]
fn symbolic_whitehead_runs() {
    let report = run("whitehead_param.tors", &RunOptions { select: vec!["wada".into()], ..Default::default() });
    let TaskValue::Function { value, .. } = &report.tasks[0].value else { panic!("no torsion") };
    assert_eq!(value.vars().len(), 2);
    assert_eq!(report.tasks[0].status, TaskStatus::Ok);
}

#[test]
fn text_report_lines() {
    let text = render_text(&run(
        "fig8.tors",
        &RunOptions { select: vec!["wada".into(), "derivative".into()], ..Default::default() },
    ));
    assert!(text.contains("Δ = -(t - 1)·(t^2 - 5t + 1)   [up to ± t^m]"), "{text}");
    assert!(text.contains("T_lambda = 3  [up to sign]"), "{text}");
    let text = render_text(&run(
        "whitehead_point.tors",
        &RunOptions { select: vec!["derivative".into()], ..Default::default() },
    ));
    assert!(text.contains("T_lambda = 8 - 8i  [up to sign]"), "{text}");
}

#[test]
fn json_round_trip() {
    let job = fixture("whitehead_point.tors");
    let report = run_job(&job, &RunOptions::default()).unwrap();
    let doc = render_json(&report);
    let back = functions_from_json(&doc, &job.tower).unwrap();
    let mut originals = report.tasks.iter().filter_map(|t| match &t.value {
        TaskValue::Function { value, .. } => Some((t.name.clone(), value.clone())),
        _ => None,
    });
    for (name, value) in back {
        let (orig_name, orig) = originals.next().unwrap();
        assert_eq!(name, orig_name);
        assert_eq!(value, orig, "{name}");
    }
    assert!(originals.next().is_none());
    assert_eq!(render_json(&run_job(&job, &RunOptions::default()).unwrap()), doc);
}

#[test]
fn seeded_tasks() {
    let src = "vars t ; extend w : x^2 + x + 1 ;
        gens x y ; let W = x^-1 y x y^-1 ; rel W x W^-1 y^-1 ;
        phi x = t ; phi y = t ;
        rho x = [[1, 1], [0, 1]] ; rho y = [[1, 0], [-w, 1]] ;
        task conjugation { count = 5 ; }
        task multiplicativity { count = 10 ; max_dim = 3 ; }
        task naturality { exponents = 2 ; var = u ; }";
    let job = parse_job(src).unwrap();
    let report = run_job(&job, &RunOptions { seed: 11, ..Default::default() }).unwrap();
    assert!(report.success(), "{}", render_text(&report));
    let counts: Vec<_> = report
        .tasks
        .iter()
        .filter_map(|t| match t.value {
            TaskValue::Count { passed, total } => Some((passed, total)),
            _ => None,
        })
        .collect();
    assert_eq!(counts, vec![(5, 5), (10, 10)]);
}

#[test]
fn selection_errors() {
    let job = fixture("torus.tors");
    assert!(run_job(&job, &RunOptions { select: vec!["nonsense".into()], ..Default::default() }).is_err());
    let report = run_job(&job, &RunOptions { select: vec!["alexander".into()], ..Default::default() }).unwrap();
    assert_eq!(report.tasks.len(), 1);
}

#[test]
fn malformed_reports_are_rejected() {
    let q = Arc::new(FieldTower::rationals());
    assert!(functions_from_json("{", &q).is_err());
    assert!(functions_from_json(r#"{"tasks": 3}"#, &q).is_err());
    let bad = r#"{"tasks": [{"task": "w", "value": {"kind": "function", "vars": ["t"], "terms": [[[1, 2], "1"]]}}]}"#;
    assert!(functions_from_json(bad, &q).is_err());
}
