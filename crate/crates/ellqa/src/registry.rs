//! Every check, in a fixed order, grouped by suite.

use crate::bosonope::catalog::{catalog, Relation};
use crate::bosonope::checks as ope;
use crate::config::Suite;
use crate::context::Ctx;
use crate::report::{CheckReport, Params, RunParams};
use crate::{evalrep, identities, qseries, rmatrix, structfuncs};
use rayon::prelude::*;
use std::sync::Arc;

/// What a check sees: the run context plus the exchange catalog built once at it.
pub struct Shared {
    pub ctx: Ctx,
    pub catalog: crate::Result<Vec<Relation>>,
}

impl Shared {
    pub fn new(ctx: Ctx) -> Shared {
        let catalog = catalog(&ctx);
        Shared { ctx, catalog }
    }
}

type RunFn = Arc<dyn Fn(&Shared, &RunParams) -> CheckReport + Send + Sync>;

#[derive(Clone)]
pub struct Entry {
    pub name: String,
    pub suite: Suite,
    pub paper_ref: String,
    run: RunFn,
}

impl Entry {
    pub fn run(&self, shared: &Shared, rp: &RunParams) -> CheckReport {
        (self.run)(shared, rp)
    }
}

fn plain(suite: Suite, name: &str, paper_ref: &str, f: fn(&Ctx, &RunParams) -> CheckReport) -> Entry {
    Entry { name: name.into(), suite, paper_ref: paper_ref.into(), run: Arc::new(move |s, rp| f(&s.ctx, rp)) }
}

fn with_relation(
    name: String,
    id: &'static str,
    paper_ref: &str,
    f: fn(&Relation, &Ctx, &RunParams) -> CheckReport,
) -> Entry {
    let label = name.clone();
    let run = move |s: &Shared, rp: &RunParams| {
        let found = s.catalog.as_ref().map_err(Clone::clone).and_then(|cat| ope_lookup(cat, id));
        match found {
            Ok(rel) => f(rel, &s.ctx, rp),
            Err(e) => CheckReport::errored(&label, id, Params::ctx(&s.ctx), e),
        }
    };
    Entry { name, suite: Suite::Bosonope, paper_ref: paper_ref.into(), run: Arc::new(run) }
}

fn ope_lookup<'a>(cat: &'a [Relation], id: &str) -> crate::Result<&'a Relation> {
    crate::bosonope::catalog::lookup(cat, id)
}

/// Catalog identity is independent of (q, r, c); list it at a reference point.
fn reference_catalog() -> Vec<Relation> {
    Ctx::new(0.5, 4.0, 1.0).and_then(|c| catalog(&c)).expect("reference catalog")
}

/// The full registry in run order.
pub fn registry() -> Vec<Entry> {
    use Suite::*;
    let mut v = vec![
        plain(Qseries, "qseries.bracket_quasi_periodicity", qseries::PAPER_QP, qseries::check_bracket_quasi_periodicity),
        plain(Qseries, "qseries.bracket_plus_tau_derived", qseries::PAPER_PLUS_TAU, qseries::check_plus_tau_derived),
        plain(Qseries, "qseries.bracket_parity", qseries::PAPER_PARITY, qseries::check_antisymmetry),
        plain(Qseries, "qseries.theta_inversion", qseries::PAPER_THETA, qseries::check_theta_inversion),
        plain(Qseries, "qseries.cutoff_doubling", qseries::PAPER_TRUNC, qseries::check_cutoff_doubling),
        plain(Structfuncs, "structfuncs.rho_mu_chi", structfuncs::PAPER_RHO_MU_CHI, structfuncs::check_rho_mu_chi),
        plain(Structfuncs, "structfuncs.rho_plus_mu_over_chi", structfuncs::PAPER_RHO_PLUS_MU_CHI, structfuncs::check_rho_plus_mu_chi),
        plain(Structfuncs, "structfuncs.rho_trig_limit", structfuncs::PAPER_TRIG, structfuncs::check_rho_trig_limit),
        plain(Structfuncs, "structfuncs.rho_swap", structfuncs::PAPER_SWAP, structfuncs::check_rho_swap),
        plain(Rmatrix, "rmatrix.rbar_at_zero", rmatrix::PAPER_RBAR0, rmatrix::check_rbar_at_zero),
        plain(Rmatrix, "rmatrix.dybe", rmatrix::PAPER_DYBE, rmatrix::check_dybe),
        plain(Rmatrix, "rmatrix.appb_blocks", rmatrix::PAPER_BLOCKS, rmatrix::check_2x2_blocks),
        plain(Rmatrix, "rmatrix.quasi_periodicity", rmatrix::PAPER_RQP, rmatrix::check_r_quasi_periodicity),
        plain(Rmatrix, "rmatrix.starred_at_level0", rmatrix::PAPER_STAR0, rmatrix::check_starred_level0),
    ];
    for rel in reference_catalog() {
        if rel.is_product() {
            v.push(with_relation(format!("bosonope.series.{}", rel.id), rel.id, rel.paper_ref, |r, _, rp| {
                ope::check_relation_series(r, rp)
            }));
        }
        v.push(with_relation(format!("bosonope.{}", rel.id), rel.id, rel.paper_ref, ope::check_relation));
    }
    v.extend([
        plain(Bosonope, "bosonope.double_swap", ope::PAPER_SWAP, ope::check_double_swap),
        plain(Bosonope, "bosonope.kappa", ope::PAPER_KAPPA, ope::check_kappa),
        plain(Bosonope, "bosonope.kappa_reversed_order", ope::PAPER_KAPPA, ope::check_kappa_psi_order),
        plain(Bosonope, "bosonope.kappa_prime", ope::PAPER_KAPPA_PRIME, ope::check_kappa_prime),
        plain(Bosonope, "bosonope.ef_poles", ope::PAPER_EF, ope::check_ef_poles),
        plain(Bosonope, "bosonope.serre_ea8", ope::PAPER_EA8, ope::check_serre_ea8),
        plain(Bosonope, "bosonope.serre_ea9", ope::PAPER_EA9, ope::check_serre_ea9),
        plain(Evalrep, "evalrep.psi_factorization", evalrep::PAPER_PSI_FACT, evalrep::check_psi_factorization),
        plain(Evalrep, "evalrep.psi_factorization_modes", evalrep::PAPER_PSI_FACT, evalrep::check_psi_factorization_modes),
        plain(Evalrep, "evalrep.display_vs_modes", evalrep::PAPER_MODES, evalrep::check_display_vs_modes),
        plain(Evalrep, "evalrep.e_f_display", evalrep::PAPER_EF_DISPLAY, evalrep::check_e_f_display),
    ]);
    let ref_cat = reference_catalog();
    for id in evalrep::REP_EXCHANGE_IDS {
        let pr = ope_lookup(&ref_cat, id).map(|r| r.paper_ref).unwrap_or(id);
        let run = move |s: &Shared, rp: &RunParams| evalrep::check_rep_exchange(id, &s.ctx, rp);
        v.push(Entry { name: format!("evalrep.exchange.{id}"), suite: Evalrep, paper_ref: pr.into(), run: Arc::new(run) });
    }
    v.extend([
        plain(Evalrep, "evalrep.diag_commute", evalrep::PAPER_DIAG, evalrep::check_diag_commute),
        plain(Identities, "identities.hc6", identities::PAPER_HC6, identities::check_hc6_identity),
        plain(Identities, "identities.riemann", identities::PAPER_RIEMANN, identities::check_riemann_identity),
        plain(Identities, "identities.weak_zero", identities::PAPER_WEAK, identities::check_appc_weak_zero),
        plain(Identities, "identities.weak_zero_as_printed", identities::PAPER_WEAK, identities::check_appc_weak_zero_as_printed),
        plain(Identities, "identities.g_residues", identities::PAPER_G, identities::check_g_residues),
        plain(Identities, "identities.displayed_residue_sum", identities::PAPER_RES, identities::check_displayed_residue_sum),
        plain(Identities, "identities.displayed_residue_terms", identities::PAPER_NORM, identities::check_displayed_residue_terms),
        plain(Identities, "identities.displayed_residue_terms_starred", identities::PAPER_RES, identities::check_displayed_residue_terms_starred),
        plain(Identities, "identities.quasi_periodicity", identities::PAPER_QP, identities::check_quasi_periodicity),
        plain(Identities, "identities.quasi_periodicity_star", identities::PAPER_QP, identities::check_quasi_periodicity_star),
        plain(Identities, "identities.contour_calibration", identities::PAPER_NORM, identities::check_contour_calibration),
    ]);
    v
}

pub fn select(suites: &[Suite]) -> Vec<Entry> {
    registry().into_iter().filter(|e| suites.contains(&e.suite)).collect()
}

/// Runs the entries concurrently; the result is in registry order.
pub fn run_entries(entries: &[Entry], ctx: &Ctx, rp: &RunParams) -> Vec<CheckReport> {
    let shared = Shared::new(ctx.clone());
    entries.par_iter().map(|e| e.run(&shared, rp)).collect()
}

pub fn run_suites(suites: &[Suite], ctx: &Ctx, rp: &RunParams) -> Vec<CheckReport> {
    run_entries(&select(suites), ctx, rp)
}
