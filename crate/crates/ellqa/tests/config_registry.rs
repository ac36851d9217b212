use ellqa::config::{parse_suites, RawConfig, Suite};
use ellqa::registry::{registry, run_suites, select};
use ellqa::report::RunParams;
use ellqa::{Ctx, Error};
use std::collections::HashSet;

#[test]
fn flags_only_defaults() {
    let mut raw = RawConfig::new();
    raw.set_flag("q", "0.5").unwrap();
    raw.set_flag("r", "4").unwrap();
    raw.set_flag("c", "1").unwrap();
    let cfg = raw.validate().unwrap();
    assert_eq!((cfg.q, cfg.r, cfg.c), (0.5, 4.0, 1.0));
    assert_eq!((cfg.n_samples, cfg.series_order, cfg.seed, cfg.tol), (100, 30, 0, None));
    assert_eq!(cfg.suites, Suite::ALL.to_vec());
}

#[test]
fn q_out_of_range_names_the_flag() {
    let mut raw = RawConfig::new();
    raw.set_flag("q", "1.2").unwrap();
    match raw.validate() {
        Err(Error::Param { name, msg }) => {
            assert_eq!(name, "--q");
            assert!(msg.contains("0 < q < 1"), "{msg}");
        }
        other => panic!("{other:?}"),
    }
}

#[test]
fn file_errors_carry_line_numbers() {
    let text = "# header\nq = 0.5\nr = 2\nc = 3\n";
    match RawConfig::parse(text).unwrap().validate() {
        Err(Error::Config { line, msg }) => {
            assert_eq!(line, 3);
            assert!(msg.contains("r > c"), "{msg}");
        }
        other => panic!("{other:?}"),
    }
    assert!(matches!(RawConfig::parse("q = 0.5\nbogus\n"), Err(Error::Config { line: 2, .. })));
    assert!(matches!(RawConfig::parse("q = 0.5\nwidth = 3\n"), Err(Error::Config { line: 2, .. })));
    assert!(matches!(RawConfig::parse("q = 0.5\nq = 0.6\n"), Err(Error::Config { line: 2, .. })));
    assert!(matches!(RawConfig::parse("seed = x\n").unwrap().validate(), Err(Error::Config { line: 1, .. })));
}

#[test]
fn flag_overrides_file() {
    let file = RawConfig::parse("q = 0.3  # comment\ntol = 1e-6\nsuite = qseries\n").unwrap();
    let mut flags = RawConfig::new();
    flags.set_flag("tol", "1e-8").unwrap();
    let cfg = file.overlay(flags).validate().unwrap();
    assert_eq!(cfg.tol, Some(1e-8));
    assert_eq!(cfg.q, 0.3);
    assert_eq!(cfg.suites, vec![Suite::Qseries]);
    assert_eq!(cfg.run_params().tol, Some(1e-8));
}

#[test]
fn suite_parsing() {
    assert_eq!(parse_suites("all").unwrap(), Suite::ALL.to_vec());
    assert_eq!(parse_suites("rmatrix, qseries").unwrap(), vec![Suite::Qseries, Suite::Rmatrix]);
    assert!(parse_suites("nope").is_err());
}

#[test]
fn registry_names_are_unique_and_anchored() {
    let reg = registry();
    let names: HashSet<_> = reg.iter().map(|e| e.name.clone()).collect();
    assert_eq!(names.len(), reg.len());
    assert!(reg.iter().all(|e| !e.paper_ref.is_empty()));
    for s in Suite::ALL {
        assert!(reg.iter().any(|e| e.suite == s), "{s} has no checks");
    }
}

#[test]
fn reports_match_registry_entries() {
    let ctx = Ctx::new(0.5, 4.0, 1.0).unwrap();
    let rp = RunParams { n_samples: 3, ..Default::default() };
    let entries = select(&Suite::ALL);
    let reports = run_suites(&Suite::ALL, &ctx, &rp);
    assert_eq!(entries.len(), reports.len());
    for (e, r) in entries.iter().zip(&reports) {
        assert_eq!(e.name, r.name);
        assert_eq!(e.paper_ref, r.paper_ref, "{}", e.name);
        assert_eq!(r.pass, r.max_residual < r.tolerance, "{}", r.name);
    }
}

#[test]
fn subsetting_does_not_change_samples() {
    let ctx = Ctx::new(0.5, 4.0, 1.0).unwrap();
    let rp = RunParams { seed: 11, n_samples: 5, ..Default::default() };
    let all = run_suites(&Suite::ALL, &ctx, &rp);
    let only = run_suites(&[Suite::Structfuncs], &ctx, &rp);
    for r in &only {
        let twin = all.iter().find(|x| x.name == r.name).unwrap();
        assert_eq!(r, twin);
    }
}

#[test]
fn seed_changes_residuals_not_verdicts() {
    let ctx = Ctx::new(0.5, 4.0, 1.0).unwrap();
    let a = run_suites(&[Suite::Qseries, Suite::Structfuncs], &ctx, &RunParams { seed: 1, n_samples: 20, ..Default::default() });
    let b = run_suites(&[Suite::Qseries, Suite::Structfuncs], &ctx, &RunParams { seed: 2, n_samples: 20, ..Default::default() });
    assert!(a.iter().zip(&b).any(|(x, y)| x.max_residual != y.max_residual));
    for (x, y) in a.iter().zip(&b) {
        assert_eq!(x.pass, y.pass, "{}", x.name);
    }
}

#[test]
fn report_json_round_trip() {
    let ctx = Ctx::new(0.5, 4.0, 1.0).unwrap();
    let reports = run_suites(&[Suite::Qseries], &ctx, &RunParams { n_samples: 4, ..Default::default() });
    let s = serde_json::to_string(&reports).unwrap();
    let back: Vec<ellqa::CheckReport> = serde_json::from_str(&s).unwrap();
    assert_eq!(back, reports);
    let empty: Vec<ellqa::CheckReport> = vec![];
    assert_eq!(serde_json::to_string(&empty).unwrap(), "[]");
}
