// One PASS/FAIL line per acceptance criterion. The verdicts are printed, not
// asserted: a criterion that does not hold is reported as FAIL and the
// reason is in the line.

use ellqa::bosonope::catalog;
use ellqa::config::Suite;
use ellqa::registry::{registry, Entry, Shared};
use ellqa::report::RunParams;
use ellqa::{CheckReport, Ctx};
use std::process::Command;
use std::time::{Duration, Instant};

struct Timed {
    reports: Vec<CheckReport>,
    elapsed: Duration,
}

fn run_where(ctx: &Ctx, rp: &RunParams, pick: impl Fn(&Entry) -> bool) -> Timed {
    let entries: Vec<Entry> = registry().into_iter().filter(|e| pick(e)).collect();
    let t = Instant::now();
    let shared = Shared::new(ctx.clone());
    let reports = entries.iter().map(|e| e.run(&shared, rp)).collect();
    Timed { reports, elapsed: t.elapsed() }
}

fn by_name(ctx: &Ctx, rp: &RunParams, names: &[&str]) -> Timed {
    run_where(ctx, rp, |e| names.contains(&e.name.as_str()))
}

/// Every report passes, at a tolerance no looser than `tol`, with at least `min_n` samples.
fn judge(t: &Timed, tol: f64, min_n: usize, budget: Option<f64>) -> (bool, String) {
    let mut ok = !t.reports.is_empty();
    let mut why = Vec::new();
    for r in &t.reports {
        if !r.pass {
            ok = false;
            why.push(format!("{} residual {:.2e}", r.name, r.max_residual));
        }
        if r.tolerance > tol {
            ok = false;
            why.push(format!("{} tolerance {:.0e} looser than {:.0e}", r.name, r.tolerance, tol));
        }
        if r.n_samples < min_n {
            ok = false;
            why.push(format!("{} only {} samples", r.name, r.n_samples));
        }
    }
    if let Some(b) = budget {
        if t.elapsed.as_secs_f64() >= b {
            ok = false;
            why.push(format!("took {:.2}s, budget {b}s", t.elapsed.as_secs_f64()));
        }
    }
    let worst = t.reports.iter().map(|r| r.max_residual).fold(0.0, f64::max);
    let mut s = format!("{} checks, worst {:.2e}, {:.2}s", t.reports.len(), worst, t.elapsed.as_secs_f64());
    if !why.is_empty() {
        s += &format!(" [{}]", why.join("; "));
    }
    (ok, s)
}

fn line(n: usize, title: &str, (ok, s): (bool, String)) {
    println!("{} criterion {n:>2} {title}: {s}", if ok { "PASS" } else { "FAIL" });
}

#[test]
fn acceptance() {
    let ctx = Ctx::new(0.5, 4.0, 1.0).unwrap();
    let rp = RunParams { seed: 0, n_samples: 100, ..Default::default() };

    let t = by_name(&ctx, &rp, &["qseries.bracket_quasi_periodicity"]);
    line(1, "bracket quasi-periodicity over the q x r grid", judge(&t, 1e-10, 100, Some(5.0)));

    let t = by_name(&ctx, &rp, &["rmatrix.rbar_at_zero"]);
    line(2, "Rbar(0,s) is the permutation", judge(&t, 1e-12, 20, Some(1.0)));

    let t = by_name(&ctx, &rp, &["rmatrix.dybe"]);
    let mut v = judge(&t, 1e-9, 100, Some(60.0));
    let n_pass = t.reports.first().and_then(|r| r.details["n_passing"].as_u64());
    if n_pass != Some(1) {
        v.0 = false;
    }
    v.1 += &format!(", conventions passing: {n_pass:?}");
    line(3, "dynamical YBE, unique convention", v);

    let t = by_name(&ctx, &rp, &["rmatrix.appb_blocks"]);
    line(4, "2x2 elliptic blocks vs Rbar up to gauge", judge(&t, 1e-10, 50, None));

    let t = by_name(&ctx, &rp, &["structfuncs.rho_mu_chi"]);
    line(5, "rho+/mu/chi compatibility at c=1", judge(&t, 1e-10, 50, None));

    let ids: Vec<String> = catalog(&ctx).unwrap().iter().map(|r| r.id.to_string()).collect();
    let t = run_where(&ctx, &rp, |e| {
        let id = e.name.strip_prefix("bosonope.series.").or_else(|| e.name.strip_prefix("bosonope."));
        e.suite == Suite::Bosonope && id.is_some_and(|id| ids.iter().any(|x| x == id))
    });
    let series = Timed {
        reports: t.reports.iter().filter(|r| r.name.starts_with("bosonope.series.")).cloned().collect(),
        elapsed: Duration::ZERO,
    };
    let pointwise = Timed {
        reports: t.reports.iter().filter(|r| !r.name.starts_with("bosonope.series.")).cloned().collect(),
        elapsed: t.elapsed,
    };
    let (ok_s, s_s) = judge(&series, 1e-12, 30, None);
    let (ok_p, s_p) = judge(&pointwise, 1e-10, 50, Some(120.0));
    line(6, "exchange catalog", (ok_s && ok_p, format!("series: {s_s}; pointwise: {s_p}")));

    let t = by_name(&ctx, &rp, &["bosonope.kappa", "bosonope.kappa_prime"]);
    line(7, "normal-ordering constants kappa, kappa'", judge(&t, 1e-10, 2, None));

    let t = by_name(&ctx, &rp, &["bosonope.ef_poles"]);
    line(8, "E-F poles and residue modes", judge(&t, 1e-10, 1, None));

    let t = by_name(&ctx, &rp, &["bosonope.serre_ea8", "bosonope.serre_ea9"]);
    line(9, "level-one Serre sums", judge(&t, 1e-10, 1, Some(60.0)));

    let t = run_where(&ctx, &rp, |e| {
        e.name == "evalrep.psi_factorization" || e.name.starts_with("evalrep.exchange.") || e.name == "evalrep.diag_commute"
    });
    line(10, "evaluation representation", judge(&t, 1e-10, 50, None));

    let t = by_name(&ctx, &rp, &["identities.hc6", "identities.riemann", "identities.weak_zero", "identities.g_residues"]);
    line(11, "HC6, Riemann, weak zero, G residues", judge(&t, 1e-9, 50, None));

    let bin = env!("CARGO_BIN_EXE_ellqa");
    let run = || {
        let t = Instant::now();
        let out = Command::new(bin).args(["run", "--suite", "all", "--format", "json"]).output().expect("run binary");
        (out, t.elapsed())
    };
    let (a, ta) = run();
    let (b, _) = run();
    let parsed: Option<serde_json::Value> = serde_json::from_slice(&a.stdout).ok();
    let n = parsed.as_ref().and_then(|v| v["reports"].as_array().map(|x| x.len())).unwrap_or(0);
    let same = a.stdout == b.stdout && !a.stdout.is_empty();
    let fast = ta.as_secs_f64() < 300.0;
    let code_ok = a.status.success() == parsed
        .as_ref()
        .and_then(|v| v["reports"].as_array().map(|x| x.iter().all(|r| r["pass"] == true)))
        .unwrap_or(false);
    line(
        12,
        "determinism and full-run budget",
        (
            same && fast && code_ok && n > 0,
            format!(
                "{n} reports, byte-identical: {same}, exit status consistent: {code_ok}, {:.2}s",
                ta.as_secs_f64()
            ),
        ),
    );
}
