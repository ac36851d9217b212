//! The 3-dimensional evaluation module at c = 0 (a = b = 1), basis order (+, 0, -).

use crate::bosonope::catalog::{catalog, lookup, Relation};
use crate::bosonope::{Algebra, Lambert};
use crate::context::Ctx;
use crate::error::{param, Error, Result};
use crate::qseries::{poch1, theta_p};
use crate::report::{sample_worst, CheckReport, Params, RunParams, Worst};
use crate::structfuncs::rho_plus;
use crate::C64;
use serde_json::json;

pub type Diag = [C64; 3];
pub type Mat3 = [[C64; 3]; 3];

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RepName {
    UPlus,
    UMinus,
    E,
    F,
    K,
    Psi,
    XPlus,
    XMinus,
}

impl RepName {
    pub const ALL: [RepName; 8] =
        [RepName::UPlus, RepName::UMinus, RepName::E, RepName::F, RepName::K, RepName::Psi, RepName::XPlus, RepName::XMinus];

    pub fn name(self) -> &'static str {
        match self {
            RepName::UPlus => "u_plus",
            RepName::UMinus => "u_minus",
            RepName::E => "e",
            RepName::F => "f",
            RepName::K => "k",
            RepName::Psi => "psi",
            RepName::XPlus => "x_plus",
            RepName::XMinus => "x_minus",
        }
    }

    pub fn parse(s: &str) -> Result<RepName> {
        RepName::ALL
            .into_iter()
            .find(|n| n.name() == s)
            .ok_or_else(|| param("name", format!("unknown representation current `{s}`")))
    }
}

/// Matrix unit E_{ij} with indices 0 = +, 1 = 0, 2 = -.
pub fn unit(i: usize, j: usize) -> Mat3 {
    let mut m = [[C64::new(0.0, 0.0); 3]; 3];
    m[i][j] = C64::new(1.0, 0.0);
    m
}

/// A delta-function term: `matrix` * delta(support / z), support = w q^{qexp}.
#[derive(Debug, Clone, PartialEq)]
pub struct DeltaTerm {
    pub qexp: f64,
    pub matrix: Mat3,
}

impl DeltaTerm {
    pub fn support(&self, w: C64, q: f64) -> C64 {
        w * q.powf(self.qexp)
    }

    /// The single nonzero position (i, j).
    pub fn position(&self) -> Option<(usize, usize)> {
        (0..9).map(|k| (k / 3, k % 3)).find(|&(i, j)| self.matrix[i][j] != C64::new(0.0, 0.0))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct DeltaSupportedCurrent {
    pub terms: Vec<DeltaTerm>,
    pub smooth_part: Option<Diag>,
}

impl DeltaSupportedCurrent {
    fn diag(d: Diag) -> Self {
        DeltaSupportedCurrent { terms: vec![], smooth_part: Some(d) }
    }

    fn delta(terms: Vec<(f64, usize, usize, C64)>) -> Self {
        let terms = terms
            .into_iter()
            .map(|(qexp, i, j, v)| {
                let mut matrix = unit(i, j);
                matrix[i][j] = v;
                DeltaTerm { qexp, matrix }
            })
            .collect();
        DeltaSupportedCurrent { terms, smooth_part: None }
    }
}

fn need_level_zero(ctx: &Ctx) -> Result<()> {
    if ctx.c != 0.0 {
        return Err(param("c", "the evaluation module has c = 0"));
    }
    Ok(())
}

fn pp(x: C64, ctx: &Ctx) -> C64 {
    poch1(x, ctx.p)
}

fn th(x: C64, ctx: &Ctx) -> Result<C64> {
    theta_p(x, ctx.p)
}

fn u_plus_diag(y: C64, ctx: &Ctx) -> Diag {
    let (p, q) = (ctx.p, ctx.q);
    let f = |e: f64| pp(p * q.powf(e) * y, ctx);
    [f(3.0) / f(1.0), f(2.0) * f(-1.0) / (f(1.0) * f(0.0)), f(-2.0) / f(0.0)]
}

fn u_minus_diag(y: C64, ctx: &Ctx) -> Diag {
    let (p, q) = (ctx.p, ctx.q);
    let f = |e: f64| pp(p * q.powf(e) / y, ctx);
    [f(-3.0) / f(-1.0), f(1.0) * f(-2.0) / (f(0.0) * f(-1.0)), f(2.0) / f(0.0)]
}

fn psi_diag(y: C64, ctx: &Ctx) -> Result<Diag> {
    let (q, r) = (ctx.q, ctx.r);
    let t = |e: f64| th(q.powf(r + e) * y, ctx);
    Ok([t(3.0)? / t(1.0)?, t(2.0)? * t(-1.0)? / (t(1.0)? * t(0.0)?), t(-2.0)? / t(0.0)?])
}

/// Theta part of k; the prefactor rho+ is applied separately.
fn k_theta_diag(y: C64, ctx: &Ctx) -> Result<Diag> {
    let (q, r) = (ctx.q, ctx.r);
    let t = |e: f64| th(q.powf(r + e) * y, ctx);
    let one = C64::new(1.0, 0.0);
    Ok([one, t(0.0)? / t(2.0)?, t(0.0)? * t(-1.0)? / (t(2.0)? * t(1.0)?)])
}

/// pi_w(name) at z = q^{2u}; `uw` is w = q^{2 uw}. Using u rather than z fixes
/// the branch of the z^{2/r}-type factor inside rho+.
pub fn rep_current_u(name: RepName, u: C64, uw: C64, ctx: &Ctx) -> Result<DeltaSupportedCurrent> {
    need_level_zero(ctx)?;
    let y = ctx.z_of(u - uw);
    let one = C64::new(1.0, 0.0);
    Ok(match name {
        RepName::UPlus => DeltaSupportedCurrent::diag(u_plus_diag(y, ctx)),
        RepName::UMinus => DeltaSupportedCurrent::diag(u_minus_diag(y, ctx)),
        RepName::Psi => DeltaSupportedCurrent::diag(psi_diag(y, ctx)?),
        RepName::K => {
            let pre = rho_plus(u - uw - (ctx.r - 2.0) / 2.0, ctx, false)?;
            DeltaSupportedCurrent::diag(k_theta_diag(y, ctx)?.map(|v| v * pre))
        }
        RepName::XPlus => DeltaSupportedCurrent::delta(vec![(-1.0, 0, 1, one), (0.0, 1, 2, one)]),
        RepName::XMinus => DeltaSupportedCurrent::delta(vec![(0.0, 2, 1, one), (-1.0, 1, 0, one)]),
        RepName::E => {
            let g = |e: f64| pp(ctx.p * ctx.q.powf(e) * y, ctx);
            DeltaSupportedCurrent::delta(vec![
                (-1.0, 0, 1, g(3.0) / g(1.0)),
                (0.0, 1, 2, g(2.0) * g(-1.0) / (g(1.0) * g(0.0))),
            ])
        }
        RepName::F => {
            let g = |e: f64| pp(ctx.p * ctx.q.powf(e) / y, ctx);
            DeltaSupportedCurrent::delta(vec![
                (0.0, 2, 1, g(1.0) * g(-2.0) / (g(0.0) * g(-1.0))),
                (-1.0, 1, 0, g(-3.0) / g(-1.0)),
            ])
        }
    })
}

/// pi_w(name) at z, with u = log_q(z)/2 on the principal branch.
pub fn rep_current(name: &str, z: C64, w: C64, ctx: &Ctx) -> Result<DeltaSupportedCurrent> {
    let n = RepName::parse(name)?;
    let u = z.ln() / (2.0 * ctx.lq);
    let uw = w.ln() / (2.0 * ctx.lq);
    rep_current_u(n, u, uw, ctx)
}

fn smooth(name: RepName, u: C64, ctx: &Ctx) -> Result<Diag> {
    rep_current_u(name, u, C64::new(0.0, 0.0), ctx)?
        .smooth_part
        .ok_or_else(|| Error::Unsupported(format!("{} is delta-supported", name.name())))
}

// ---- currents rebuilt from the boson modes ----

/// pi_w(a_m) = [m]/m (w/q)^m diag(q^{-m}, 1-q^m, -q^{2m}),
/// pi_w(a_{-m}) = [m]/m (q/w)^m diag(q^m, 1-q^{-m}, -q^{-2m}).
fn mode_weights(ctx: &Ctx, annihilation: bool) -> [Lambert; 3] {
    let s = if annihilation { 1.0 } else { -1.0 };
    let qi = Lambert::qint(1.0, ctx.q);
    [
        &qi * &Lambert::mono(-s),
        &qi * &(&Lambert::one() - &Lambert::mono(s)),
        &qi * &Lambert::mono(2.0 * s).scale(-1.0),
    ]
}

/// pi_w of :exp(sum pos(m) a_m z^{-m} + neg(m) a_{-m} z^m): at z = q^{2u}, w = 1,
/// resummed into products.
pub fn from_modes(pos: &Lambert, neg: &Lambert, u: C64, ctx: &Ctx) -> Result<Diag> {
    let z = ctx.z_of(u);
    let q = ctx.q;
    let wp = mode_weights(ctx, true);
    let wn = mode_weights(ctx, false);
    let mut out = [C64::new(0.0, 0.0); 3];
    for i in 0..3 {
        let a = (pos * &wp[i]).expval(1.0 / (q * z), q)?;
        let b = (neg * &wn[i]).expval(q * z, q)?;
        out[i] = a * b;
    }
    Ok(out)
}

fn modes_of(alg: &Algebra, name: RepName) -> Result<(Lambert, Lambert)> {
    let cur = match name {
        RepName::UPlus => alg.u_plus(),
        RepName::UMinus => alg.u_minus(),
        RepName::K => alg.k(),
        RepName::Psi => alg.psi(),
        _ => return Err(Error::Unsupported(format!("{} has no pure boson form", name.name()))),
    };
    match &cur.pieces[..] {
        [(crate::bosonope::current::Piece::Exp { pos, neg }, _)] => Ok((pos.clone(), neg.clone())),
        _ => Err(Error::Unsupported(format!("{} is not a single exponential", name.name()))),
    }
}

fn diag_rel(a: &Diag, b: &Diag) -> f64 {
    (0..3).map(|i| (a[i] - b[i]).norm() / a[i].norm().max(b[i].norm())).fold(0.0, f64::max)
}

fn guard(d: Diag) -> Result<Diag> {
    for v in d {
        let n = v.norm();
        if !n.is_finite() || !(1e-8..=1e8).contains(&n) {
            return Err(Error::Pole("representation entry".into()));
        }
    }
    Ok(d)
}

fn triple(f: impl Fn(C64) -> Result<Diag>, u: C64) -> Result<Diag> {
    let a = guard(f(u - 0.5)?)?;
    let b = guard(f(u)?)?;
    let c = guard(f(u + 0.5)?)?;
    Ok([0, 1, 2].map(|i| a[i] / b[i] * c[i]))
}

/// k(q^{-1}z) k(z)^{-1} k(qz) against psi(z), entrywise, with the displayed k.
/// `with_prefactor = false` drops rho+ (negative control).
pub fn psi_factorization_residual(u: C64, ctx: &Ctx, with_prefactor: bool) -> Result<f64> {
    let lhs = triple(
        |v| {
            if with_prefactor {
                smooth(RepName::K, v, ctx)
            } else {
                k_theta_diag(ctx.z_of(v), ctx)
            }
        },
        u,
    )?;
    Ok(diag_rel(&lhs, &guard(smooth(RepName::Psi, u, ctx)?)?))
}

/// Same factorization with k built from its boson modes.
pub fn psi_factorization_modes_residual(u: C64, ctx: &Ctx, alg: &Algebra) -> Result<f64> {
    let (kp, kn) = modes_of(alg, RepName::K)?;
    let lhs = triple(|v| from_modes(&kp, &kn, v, ctx), u)?;
    Ok(diag_rel(&lhs, &guard(smooth(RepName::Psi, u, ctx)?)?))
}

/// Displayed u^±, psi against the mode construction; k only up to its scalar
/// prefactor (entry ratios).
pub fn display_vs_modes_residual(u: C64, ctx: &Ctx, alg: &Algebra) -> Result<f64> {
    let mut w = 0.0f64;
    for n in [RepName::UPlus, RepName::UMinus, RepName::Psi, RepName::K] {
        let (p, m) = modes_of(alg, n)?;
        let a = guard(from_modes(&p, &m, u, ctx)?)?;
        let b = guard(smooth(n, u, ctx)?)?;
        let r = if n == RepName::K {
            let ra = [a[1] / a[0], a[2] / a[0], C64::new(1.0, 0.0)];
            let rb = [b[1] / b[0], b[2] / b[0], C64::new(1.0, 0.0)];
            diag_rel(&ra, &rb)
        } else {
            diag_rel(&a, &b)
        };
        w = w.max(r);
    }
    Ok(w)
}

pub const PAPER_PSI_FACT: &str =
    "\"$\\psi(z,p)=:k(q^{-1}z,p)k(z,p)^{-1}k(qz,p):$\" with App. Evaluation \"$\\pi_w(k(z,p))&=&\\rho^+(q^{-r+2}z/w)$\", \"$\\pi_w(\\psi(z,p))$\"";
pub const PAPER_MODES: &str = "App. Evaluation \"$\\pi_w(a_m)=\\frac{[m]_q}{m}(w/q)^m(\\cdots)$\" against the displayed \"$\\pi_w(u^\\pm(z,p))$\", \"$\\pi_w(k(z,p))$\", \"$\\pi_w(\\psi(z,p))$\"";
pub const PAPER_EF_DISPLAY: &str = "App. Evaluation \"$\\pi_w(e(z,p))$\", \"$\\pi_w(f(z,p))$\" as u^+ x^+ and x^- u^-";
pub const PAPER_DIAG: &str = "def:EA1 \"$\\rho(z_1/z_2)K(z_2)K(z_1)$\" at c=0: diagonal images commute, so every diagonal-diagonal factor is 1";

fn level_zero(ctx: &Ctx) -> Result<Ctx> {
    ctx.at_level(0.0)
}

fn sampled(
    name: &str,
    paper_ref: &str,
    ctx: &Ctx,
    rp: &RunParams,
    f: impl Fn(C64, &Ctx, &Algebra) -> Result<f64>,
) -> CheckReport {
    let c0 = match level_zero(ctx) {
        Ok(c) => c,
        Err(e) => return CheckReport::errored(name, paper_ref, Params::ctx(ctx), e),
    };
    let alg = Algebra::new(&c0);
    let mut rng = rp.sampler(name);
    let (worst, skipped) = sample_worst(
        rp.n_samples,
        || rng.complex(1.0, 0.3),
        |u| f(*u, &c0, &alg),
        |u| json!({"u": [u.re, u.im]}),
    );
    CheckReport::from_worst(
        name,
        paper_ref,
        Params::ctx(&c0).with("w", json!(1.0)),
        rp.n_samples,
        worst,
        rp.tol(1e-10),
        json!({"pole_resamples": skipped}),
    )
}

pub fn check_psi_factorization(ctx: &Ctx, rp: &RunParams) -> CheckReport {
    sampled("evalrep.psi_factorization", PAPER_PSI_FACT, ctx, rp, |u, c, _| psi_factorization_residual(u, c, true))
}

pub fn check_psi_factorization_modes(ctx: &Ctx, rp: &RunParams) -> CheckReport {
    sampled("evalrep.psi_factorization_modes", PAPER_PSI_FACT, ctx, rp, psi_factorization_modes_residual)
}

pub fn check_display_vs_modes(ctx: &Ctx, rp: &RunParams) -> CheckReport {
    sampled("evalrep.display_vs_modes", PAPER_MODES, ctx, rp, display_vs_modes_residual)
}

/// e = u^+ x^+ and f = x^- u^- term by term.
pub fn check_e_f_display(ctx: &Ctx, rp: &RunParams) -> CheckReport {
    sampled("evalrep.e_f_display", PAPER_EF_DISPLAY, ctx, rp, |u, c, _| {
        let zero = C64::new(0.0, 0.0);
        let mut w = 0.0f64;
        for (comp, diag_of, x) in [
            (RepName::E, RepName::UPlus, RepName::XPlus),
            (RepName::F, RepName::UMinus, RepName::XMinus),
        ] {
            let e = rep_current_u(comp, u, zero, c)?;
            let d = guard(smooth(diag_of, u, c)?)?;
            let xs = rep_current_u(x, u, zero, c)?;
            for (t, tx) in e.terms.iter().zip(&xs.terms) {
                let (i, j) = tx.position().ok_or_else(|| Error::Unsupported("empty term".into()))?;
                // u^+ x^+ picks the row entry, x^- u^- the column entry
                let want = if comp == RepName::E { d[i] } else { d[j] };
                let got = t.matrix[i][j];
                w = w.max((got - want).norm() / want.norm()).max((t.qexp - tx.qexp).abs());
            }
        }
        Ok(w)
    })
}

/// Smooth-left relations S(z1) X(z2) = phi X(z2) S(z1) with X = x^±.
pub const REP_EXCHANGE_IDS: [&str; 8] = [
    "u_plus.x_plus",
    "u_plus.x_minus",
    "u_minus.x_plus",
    "u_minus.x_minus",
    "psi.x_plus",
    "psi.x_minus",
    "k.x_plus",
    "k.x_minus",
];

/// Diagonal-diagonal relations whose factor must be 1 at c = 0.
pub const DIAG_IDS: [&str; 8] =
    ["u_plus.u_minus", "psi.u_plus", "psi.u_minus", "k.u_plus", "k.u_minus", "psi.psi", "k.k", "def:EA1"];

fn rep_name(s: &str) -> Result<RepName> {
    RepName::parse(s)
}

/// At z2 on a support of X, S(z1) E_ij = (S_ii(z1)/S_jj(z1)) E_ij S(z1).
pub fn rep_exchange_residual(rel: &Relation, u1: C64, ctx: &Ctx) -> Result<f64> {
    let (sl, xr) = rel.id.split_once('.').ok_or_else(|| Error::Unsupported(rel.id.into()))?;
    let s = rep_name(sl)?;
    let x = rep_name(xr)?;
    if !matches!(x, RepName::XPlus | RepName::XMinus) {
        return Err(Error::Unsupported(format!("relation shape {}", rel.id)));
    }
    let zero = C64::new(0.0, 0.0);
    let d = guard(smooth(s, u1, ctx)?)?;
    let mut w = 0.0f64;
    for t in rep_current_u(x, zero, zero, ctx)?.terms {
        let (i, j) = t.position().ok_or_else(|| Error::Unsupported("empty term".into()))?;
        // support w q^{qexp} = q^{2 u2}
        let u2 = C64::new(t.qexp / 2.0, 0.0);
        let got = d[i] / d[j];
        let claimed = rel.claimed(u1, u2)?;
        if !claimed.norm().is_finite() || claimed.norm() > 1e8 || claimed.norm() < 1e-8 {
            return Err(Error::Pole("claimed factor".into()));
        }
        w = w.max((got - claimed).norm() / got.norm().max(claimed.norm()));
    }
    Ok(w)
}

pub fn check_rep_exchange(id: &str, ctx: &Ctx, rp: &RunParams) -> CheckReport {
    let name = format!("evalrep.exchange.{id}");
    let run = || -> Result<(Vec<Relation>, Ctx)> {
        let c0 = level_zero(ctx)?;
        Ok((catalog(&c0)?, c0))
    };
    let (cat, c0) = match run() {
        Ok(x) => x,
        Err(e) => return CheckReport::errored(&name, id, Params::ctx(ctx), e),
    };
    let rel = match lookup(&cat, id) {
        Ok(r) => r,
        Err(e) => return CheckReport::errored(&name, id, Params::ctx(ctx), e),
    };
    let mut rng = rp.sampler(&name);
    let (worst, skipped) = sample_worst(
        rp.n_samples,
        || rng.complex(1.0, 0.3),
        |u| rep_exchange_residual(rel, *u, &c0),
        |u| json!({"u1": [u.re, u.im]}),
    );
    CheckReport::from_worst(
        &name,
        rel.paper_ref,
        Params::ctx(&c0).with("w", json!(1.0)),
        rp.n_samples,
        worst,
        rp.tol(1e-10),
        json!({"pole_resamples": skipped, "supports": ["w/q", "w"]}),
    )
}

pub fn check_diag_commute(ctx: &Ctx, rp: &RunParams) -> CheckReport {
    let name = "evalrep.diag_commute";
    let setup = || -> Result<(Vec<Relation>, Ctx)> {
        let c0 = level_zero(ctx)?;
        Ok((catalog(&c0)?, c0))
    };
    let (cat, c0) = match setup() {
        Ok(x) => x,
        Err(e) => return CheckReport::errored(name, PAPER_DIAG, Params::ctx(ctx), e),
    };
    let mut rng = rp.sampler(name);
    let mut worst = Worst::default();
    let mut skipped = 0;
    for id in DIAG_IDS {
        let rel = match lookup(&cat, id) {
            Ok(r) => r,
            Err(e) => return CheckReport::errored(name, PAPER_DIAG, Params::ctx(&c0), e),
        };
        let (w, s) = sample_worst(
            rp.n_samples.div_ceil(DIAG_IDS.len()).max(2),
            || (rng.complex(1.0, 0.3), rng.complex(1.0, 0.3)),
            |&(u1, u2)| {
                let v = rel.claimed(u1, u2)?;
                if !v.norm().is_finite() || v.norm() > 1e8 {
                    return Err(Error::Pole("claimed factor".into()));
                }
                Ok((v - 1.0).norm())
            },
            |p| json!({"id": id, "u1": [p.0.re, p.0.im], "u2": [p.1.re, p.1.im]}),
        );
        worst.merge(w);
        skipped += s;
    }
    CheckReport::from_worst(
        name,
        PAPER_DIAG,
        Params::ctx(&c0),
        rp.n_samples,
        worst,
        rp.tol(1e-10),
        json!({"relations": DIAG_IDS, "pole_resamples": skipped}),
    )
}
