use chordtest::coloring::Verdict;
use chordtest::experiment::{
    manifest_path, read_csv, run_experiment, Expectation, ExperimentConfig, ExperimentKind, GeneratorSpec,
};
use chordtest::Guards;

fn config(kind: ExperimentKind, generator: &str, out: Option<std::path::PathBuf>) -> ExperimentConfig {
    ExperimentConfig {
        kind,
        eps: 0.1,
        trials: 20,
        sample_size: Some(12),
        seed: 7,
        generator: generator.parse::<GeneratorSpec>().unwrap(),
        expect: Expectation::Any,
        out,
    }
}

#[test]
fn reruns_write_identical_csv() {
    let dir = tempfile::tempdir().unwrap();
    let guards = Guards::default();
    let mut bytes = Vec::new();
    for name in ["a.csv", "b.csv"] {
        let out = dir.path().join(name);
        run_experiment(&config(ExperimentKind::Chordal, "random-gnp:n=40,p=0.3", Some(out.clone())), &guards).unwrap();
        bytes.push(std::fs::read(&out).unwrap());
        let manifest: serde_json::Value =
            serde_json::from_str(&std::fs::read_to_string(manifest_path(&out)).unwrap()).unwrap();
        assert_eq!(manifest["trials"], 20);
        assert!(manifest["elapsed_ms"].is_number());
    }
    assert_eq!(bytes[0], bytes[1]);
    let rows = read_csv(&dir.path().join("a.csv")).unwrap();
    assert_eq!(rows.len(), 20);
    for (i, r) in rows.iter().enumerate() {
        assert_eq!(r.trial, i);
        assert_eq!(r.seed, 8 + i as u64);
    }
}

#[test]
fn blowup_is_rejected_and_certified() {
    let mut c = config(ExperimentKind::Chordal, "c4-blowup:part=10", None);
    c.expect = Expectation::Far;
    let r = run_experiment(&c, &Guards::default()).unwrap();
    assert!(r.certificate.value > 0);
    assert!(r.rejections >= 18);
    assert!(r.ci_low <= r.frequency && r.frequency <= r.ci_high);
}

#[test]
fn far_expectation_needs_a_certificate() {
    let mut c = config(ExperimentKind::Chordal, "random-chordal:n=30", None);
    c.expect = Expectation::Far;
    assert!(run_experiment(&c, &Guards::default()).is_err());
}

#[test]
fn chordal_inputs_are_accepted() {
    let r = run_experiment(&config(ExperimentKind::Chordal, "random-chordal:n=60,p=0.4", None), &Guards::default())
        .unwrap();
    assert_eq!(r.rejections, 0);
    assert!(r.rows.iter().all(|row| row.verdict == Verdict::Accept));
}

#[test]
fn m2_and_coloring_experiments_run() {
    let guards = Guards::default();
    let mut m2 = config(ExperimentKind::M2, "m2-planted:left=20,right=20,p=0.3", None);
    m2.sample_size = Some(40);
    let r = run_experiment(&m2, &guards).unwrap();
    assert_eq!(r.rejections, 20);

    let mut col = config(ExperimentKind::Coloring, "kcolor-encoding:n=12,k=2,base=complete", None);
    col.sample_size = Some(6);
    let r = run_experiment(&col, &guards).unwrap();
    assert_eq!(r.rejections, 20);
}

#[test]
fn mismatched_generator_is_an_error() {
    let c = config(ExperimentKind::M2, "random-gnp:n=10", None);
    assert!(run_experiment(&c, &Guards::default()).is_err());
}
