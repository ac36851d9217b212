use super::catalog::{catalog, Claim, Relation, Var};
use super::current::{Algebra, Current};
use super::lambert::Lambert;
use crate::context::Ctx;
use crate::error::{Error, Result};
use crate::qseries::poch1;
use crate::report::{sample_worst, CheckReport, Params, RunParams, Worst};
use crate::series::PowerSeries;
use crate::structfuncs::{kappa, kappa_prime};
use crate::C64;
use serde_json::json;

/// Values outside this band are treated as sitting on a pole or zero.
const GUARD: (f64, f64) = (1e-8, 1e8);

fn guarded(v: C64, what: &str) -> Result<C64> {
    let n = v.norm();
    if !n.is_finite() || n < GUARD.0 || n > GUARD.1 {
        return Err(Error::Pole(what.into()));
    }
    Ok(v)
}

fn rel(a: C64, b: C64) -> f64 {
    (a - b).norm() / a.norm().max(b.norm())
}

pub fn relation_residual(rel_: &Relation, u1: C64, u2: C64) -> Result<f64> {
    let a = guarded(rel_.computed(u1, u2)?, "computed exchange")?;
    let b = guarded(rel_.claimed(u1, u2)?, "claimed exchange")?;
    Ok(rel(a, b))
}

fn pair_at(p: &(C64, C64)) -> serde_json::Value {
    json!({"u1": [p.0.re, p.0.im], "u2": [p.1.re, p.1.im]})
}

/// Pointwise check on |Re u| <= 1, |Im u| <= 0.3.
pub fn check_relation(rel_: &Relation, ctx: &Ctx, rp: &RunParams) -> CheckReport {
    let name = format!("bosonope.{}", rel_.id);
    let mut rng = rp.sampler(&name);
    let (worst, skipped) = sample_worst(
        rp.n_samples,
        || (rng.complex(1.0, 0.3), rng.complex(1.0, 0.3)),
        |&(u1, u2)| relation_residual(rel_, u1, u2),
        pair_at,
    );
    CheckReport::from_worst(
        &name,
        rel_.paper_ref,
        Params::ctx(&rel_.alg.ctx),
        rp.n_samples,
        worst,
        rp.tol(1e-10),
        json!({"pole_resamples": skipped, "left": rel_.left.name, "right": rel_.right.name, "run_c": ctx.c}),
    )
}

/// log of the claimed product, split into a series in x = z2/z1 and one in 1/x.
/// Formal: no convergence condition on the factor coefficients.
pub fn claimed_log_series(rel_: &Relation, order: usize) -> Result<(PowerSeries, PowerSeries)> {
    let Claim::Product(fs) = &rel_.claim else {
        return Err(Error::Unsupported(format!("{} has no product form", rel_.id)));
    };
    let ctx = &rel_.alg.ctx;
    let mut sx = PowerSeries::zero(order);
    let mut sinv = PowerSeries::zero(order);
    for f in fs {
        let pf = f.poch_factor(ctx);
        let target = match f.var {
            Var::Z2Z1 => &mut sx,
            Var::Z1Z2 => &mut sinv,
        };
        for m in 1..=order {
            let den: C64 = pf.bases.iter().map(|t| 1.0 - t.powu(m as u32)).product();
            target.coeffs[m] -= pf.a.powu(m as u32) / den * (pf.power as f64 / m as f64);
        }
    }
    Ok((sx, sinv))
}

/// Coefficientwise comparison of log(exchange) with log(claimed product),
/// each coefficient relative to max(1, |coefficient|).
pub fn series_residual(rel_: &Relation, order: usize) -> Result<(f64, usize)> {
    let (cx, cinv) = rel_.alg.contraction_series(&rel_.left, &rel_.right, order)?;
    let (px, pinv) = claimed_log_series(rel_, order)?;
    let mut worst = (0.0f64, 0usize);
    for (a, b) in [(&cx, &px), (&cinv, &pinv)] {
        for m in 1..=order {
            let (x, y) = (a.coeff(m), b.coeff(m));
            let d = (x - y).norm() / x.norm().max(y.norm()).max(1.0);
            if d > worst.0 || d.is_nan() {
                worst = (if d.is_nan() { f64::INFINITY } else { d }, m);
            }
        }
    }
    Ok(worst)
}

pub fn check_relation_series(rel_: &Relation, rp: &RunParams) -> CheckReport {
    let name = format!("bosonope.series.{}", rel_.id);
    let params = Params::ctx(&rel_.alg.ctx).with("order", json!(rp.order));
    match series_residual(rel_, rp.order) {
        Ok((res, m)) => CheckReport::from_worst(
            &name,
            rel_.paper_ref,
            params,
            rp.order,
            Worst { max: res, at: Some(json!({"m": m})) },
            rp.tol(1e-12),
            json!({}),
        ),
        Err(e) => CheckReport::errored(&name, rel_.paper_ref, params, e),
    }
}

pub const PAPER_SWAP: &str = "exchange consistency: \"$A(z_1)B(z_2)=\\phi\\,B(z_2)A(z_1)$\" implies phi_AB(u1,u2) phi_BA(u2,u1) = 1";

/// Every catalog exchange composed with its reverse must be the identity.
pub fn check_double_swap(ctx: &Ctx, rp: &RunParams) -> CheckReport {
    let name = "bosonope.double_swap";
    let cat = match catalog(ctx) {
        Ok(c) => c,
        Err(e) => return CheckReport::errored(name, PAPER_SWAP, Params::ctx(ctx), e),
    };
    let mut rng = rp.sampler(name);
    let mut worst = Worst::default();
    let mut skipped = 0;
    for r in &cat {
        let (w, s) = sample_worst(
            rp.n_samples.div_ceil(cat.len()).max(2),
            || (rng.complex(1.0, 0.3), rng.complex(1.0, 0.3)),
            |&(u1, u2)| {
                let a = guarded(r.alg.exchange(&r.left, &r.right, u1, u2)?, "exchange")?;
                let b = guarded(r.alg.exchange(&r.right, &r.left, u2, u1)?, "exchange")?;
                Ok((a * b - 1.0).norm())
            },
            |p| json!({"id": r.id, "at": pair_at(p)}),
        );
        worst.merge(w);
        skipped += s;
    }
    CheckReport::from_worst(
        name,
        PAPER_SWAP,
        Params::ctx(ctx),
        rp.n_samples,
        worst,
        rp.tol(1e-10),
        json!({"relations": cat.len(), "pole_resamples": skipped}),
    )
}

// ---- kappa ----

/// The constant c in :F_1 ... F_n: = c F_1 ... F_n, where each factor is K
/// shifted by s or its inverse. Inverses contribute their self-contraction;
/// zero-mode reordering into normal form is folded in as well.
pub fn ordering_constant(alg: &Algebra, base: &Current, factors: &[(f64, bool)]) -> Result<C64> {
    let cur: Vec<Current> = factors
        .iter()
        .map(|&(s, inv)| if inv { base.shifted(s).inv() } else { base.shifted(s) })
        .collect();
    let zero = C64::new(0.0, 0.0);
    let mut v = C64::new(1.0, 0.0);
    for i in 0..cur.len() {
        for j in i + 1..cur.len() {
            v *= alg.contraction(&cur[i], &cur[j], zero, zero)?;
        }
        if factors[i].1 {
            v *= alg.contraction(base, base, zero, zero)?;
        }
    }
    let word = cur.iter().skip(1).fold(cur[0].zero.clone(), |w, c| w.concat(&c.zero));
    let norm = word.normalize(zero, alg.ctx.lq);
    Ok(v * norm.log_scalar.exp())
}

/// kappa read off H(z) = kappa * (product): the ordering constant inverted.
pub fn kappa_from_ordering(ctx: &Ctx, shifts: [f64; 3]) -> Result<C64> {
    let alg = Algebra::new(ctx);
    let k = alg.big_k();
    let c = ordering_constant(&alg, &k, &[(shifts[0], false), (shifts[1], true), (shifts[2], false)])?;
    Ok(1.0 / c)
}

pub const PAPER_KAPPA: &str = "def:kappa \"$H(z)=\\kappa K(qz)K(z)^{-1}K(q^{-1}z)$\", \"$\\kappa=\\frac{\\{pq^8\\}\\cdots$\"";
pub const PAPER_KAPPA_PRIME: &str =
    "rel:EA7 \"$\\kappa' K_+(qz)K_0(qz)^{-1}$\" with def:kappa' \"$\\kappa'=\\frac{\\{pq^{10}\\}\\cdots$\"";

fn kappa_check(name: &str, paper_ref: &str, ctx: &Ctx, rp: &RunParams, shifts: [f64; 3], prime: bool) -> CheckReport {
    let mut worst = Worst::default();
    let mut det = serde_json::Map::new();
    for c in [1.0, 0.0] {
        let run = || -> Result<(C64, C64)> {
            let cc = ctx.at_level(c)?;
            let computed = kappa_from_ordering(&cc, shifts)?;
            let claimed = if prime { kappa_prime(&cc)? } else { kappa(&cc)? };
            Ok((computed, claimed))
        };
        match run() {
            Ok((a, b)) => {
                let mut r = rel(a, b);
                if c == 0.0 {
                    r = r.max((a - 1.0).norm()).max((b - 1.0).norm());
                }
                worst.push(r, || json!({"c": c}));
                det.insert(format!("c={c}"), json!({"computed": [a.re, a.im], "claimed": [b.re, b.im]}));
            }
            Err(e) => {
                worst.push(f64::INFINITY, || json!({"c": c, "error": e.to_string()}));
            }
        }
    }
    let params = Params::new().with("q", json!(ctx.q)).with("r", json!(ctx.r)).with("shifts", json!(shifts));
    CheckReport::from_worst(name, paper_ref, params, 2, worst, rp.tol(1e-10), serde_json::Value::Object(det))
}

/// K(qz) K(z)^{-1} K(q^{-1}z) as written.
pub fn check_kappa(ctx: &Ctx, rp: &RunParams) -> CheckReport {
    kappa_check("bosonope.kappa", PAPER_KAPPA, ctx, rp, [0.5, 0.0, -0.5], false)
}

/// Same product in the order K(q^{-1}z) K(z)^{-1} K(qz).
pub fn check_kappa_psi_order(ctx: &Ctx, rp: &RunParams) -> CheckReport {
    kappa_check("bosonope.kappa_reversed_order", PAPER_KAPPA, ctx, rp, [-0.5, 0.0, 0.5], false)
}

/// kappa' multiplies K_+(qz) K_0(qz)^{-1} = K(q^{r-1}w) K(q^r w)^{-1} K(q^{r+1}w),
/// i.e. the reversed order up to a common shift.
pub fn check_kappa_prime(ctx: &Ctx, rp: &RunParams) -> CheckReport {
    kappa_check("bosonope.kappa_prime", PAPER_KAPPA_PRIME, ctx, rp, [-0.5, 0.0, 0.5], true)
}

// ---- E-F poles at level one ----

pub const PAPER_EF: &str = "def:EA6 \"$[E(z_1),F(z_2)]$\" at \"$\\delta(q^{\\mp c}z_1/z_2)$\" with \"$H^\\pm(q^{\\pm c/2}z_2)$\", c=1";

/// Zero of 1/<E(0) F(u)> near u0 by secant iteration.
pub fn locate_pole(alg: &Algebra, e: &Current, f: &Current, u0: C64) -> Result<C64> {
    let zero = C64::new(0.0, 0.0);
    let g = |u: C64| -> Result<C64> { Ok(1.0 / alg.contraction(e, f, zero, u)?) };
    let mut a = u0 + C64::new(0.01, 0.005);
    let mut b = u0 - C64::new(0.007, 0.003);
    let (mut ga, mut gb) = (g(a)?, g(b)?);
    for _ in 0..100 {
        if gb == ga {
            break;
        }
        let c = b - gb * (b - a) / (gb - ga);
        a = b;
        ga = gb;
        b = c;
        gb = g(b)?;
        if (b - a).norm() < 1e-15 {
            break;
        }
    }
    if !b.re.is_finite() || !b.im.is_finite() {
        return Err(Error::NonFinite("pole search".into()));
    }
    Ok(b)
}

/// Relative mismatch of the first `order` Lambert coefficients.
fn lambert_mismatch(a: &Lambert, b: &Lambert, q: f64, order: usize) -> f64 {
    let mut w = 0.0f64;
    for m in 1..=order {
        let (x, y) = (a.coef(m, q), b.coef(m, q));
        let s = x.abs().max(y.abs());
        if s > 0.0 {
            w = w.max((x - y).abs() / s);
        }
    }
    w
}

/// Both poles of <E(z1) F(z2)> sit at z1 = q^{±c} z2 and the merged
/// oscillators of :E F: there are those of psi(q^{±r} z2).
pub fn check_ef_poles(ctx: &Ctx, rp: &RunParams) -> CheckReport {
    let name = "bosonope.ef_poles";
    let run = || -> Result<(Worst, serde_json::Value)> {
        let c1 = ctx.at_level(1.0)?;
        let alg = Algebra::new(&c1);
        let (e, f) = (alg.e_level1(), alg.f_level1());
        let empty = Current::exp("1", Lambert::zero(), Lambert::zero());
        let mut worst = Worst::default();
        let mut det = serde_json::Map::new();
        for sgn in [1.0, -1.0] {
            // z1 = q^{sgn c} z2 with u1 = 0: u2 = -sgn c / 2
            let target = C64::new(-sgn * c1.c / 2.0, 0.0);
            let found = locate_pole(&alg, &e, &f, target)?;
            let pole_err = 2.0 * c1.lq.abs() * (found - target).norm();
            let (mp, mn) = alg.merged_modes(&e, &f, sgn * c1.c / 2.0)?;
            let (tp, tn) = alg.merged_modes(&alg.psi().shifted(sgn * c1.r / 2.0), &empty, 0.0)?;
            let mode_err = lambert_mismatch(&mp, &tp, c1.q, rp.order).max(lambert_mismatch(&mn, &tn, c1.q, rp.order));
            let key = if sgn > 0.0 { "plus" } else { "minus" };
            worst.push(pole_err, || json!({"side": key, "what": "pole location"}));
            worst.push(mode_err, || json!({"side": key, "what": "residue modes"}));
            det.insert(key.into(), json!({"pole_u2": [found.re, found.im], "pole_err": pole_err, "mode_err": mode_err}));
        }
        Ok((worst, serde_json::Value::Object(det)))
    };
    let params = Params::new().with("q", json!(ctx.q)).with("r", json!(ctx.r)).with("c", json!(1.0));
    match run() {
        Ok((w, det)) => CheckReport::from_worst(name, PAPER_EF, params, 2, w, rp.tol(1e-10), det),
        Err(e) => CheckReport::errored(name, PAPER_EF, params, e),
    }
}

// ---- Serre relations at level one ----

pub const PAPER_EA8: &str = "def:EA8 Serre relation for E(z_1)E(z_2)E(z_3), symmetrized over z_1,z_2,z_3";
pub const PAPER_EA9: &str = "def:EA9 Serre relation for F(z_1)F(z_2)F(z_3), symmetrized over z_1,z_2,z_3";

type Coef = fn(&Ctx, &[C64; 3]) -> C64;

fn zexp(ctx: &Ctx, u: C64, a: f64) -> C64 {
    ctx.qpow(2.0 * u * a)
}

fn coef_e(ctx: &Ctx, uu: &[C64; 3]) -> C64 {
    let (q, ps) = (ctx.q, ctx.p_star);
    let z = uu.map(|u| ctx.z_of(u));
    let p = |x: C64| poch1(x, ps);
    let a = p(ps * q * q * z[2] / z[0]) * p(ps / q * z[2] / z[0]) * p(ps / q * z[2] / z[1]) * p(ps / q * z[1] / z[0])
        / (p(ps / (q * q) * z[2] / z[0]) * p(ps * q * z[2] / z[0]) * p(ps * q * z[2] / z[1]) * p(ps * q * z[1] / z[0]))
        * zexp(ctx, uu[0], -1.0 / (2.0 * ctx.r_star))
        * zexp(ctx, uu[1], -1.0 / ctx.r_star);
    let den = p(ps / (q * q) * z[1] / z[0]) * p(ps / (q * q) * z[2] / z[1]);
    let b = (z[0] * p(q * q * z[1] / z[0]) * p(ps * q * q * z[2] / z[1])
        - q * z[1] * p(ps * q * q * z[1] / z[0]) * p(ps * q * q * z[2] / z[1]))
        / den;
    a * b
}

fn coef_f(ctx: &Ctx, uu: &[C64; 3]) -> C64 {
    let (q, pp) = (ctx.q, ctx.p);
    let z = uu.map(|u| ctx.z_of(u));
    let p = |x: C64| poch1(x, pp);
    let a = p(pp * q * z[1] / z[0]) * p(pp / (q * q) * z[2] / z[0]) * p(pp * q * z[2] / z[1]).powi(2)
        / (p(pp / q * z[1] / z[0]) * p(pp * q * q * z[2] / z[0]) * p(pp / q * z[2] / z[0]) * p(pp / q * z[2] / z[1]))
        * zexp(ctx, uu[0], 2.0 / ctx.r)
        * zexp(ctx, uu[1], 1.0 / ctx.r);
    let den = p(pp * q * q * z[1] / z[0]) * p(pp * q * q * z[2] / z[1]);
    let b = (z[0] * p(z[1] / (z[0] * q * q)) * p(pp / (q * q) * z[2] / z[1])
        - z[1] / q * p(pp / (q * q) * z[1] / z[0]) * p(z[2] / (z[1] * q * q)))
        / den;
    a * b
}

const PERMS: [[usize; 3]; 6] = [[0, 1, 2], [0, 2, 1], [1, 0, 2], [1, 2, 0], [2, 0, 1], [2, 1, 0]];

/// |sum over orderings| / max |term|, each term written as coefficient times
/// the fully contracted product X(u_{s1}) X(u_{s2}) X(u_{s3}) brought back to
/// the reference order of its zero modes.
pub fn serre_residual(alg: &Algebra, x: &Current, coef: Coef, us: &[C64; 3]) -> Result<f64> {
    let ctx = &alg.ctx;
    let mut tot = C64::new(0.0, 0.0);
    let mut big = 0.0f64;
    for sg in PERMS {
        let uu = sg.map(|i| us[i]);
        let mut v = coef(ctx, &uu);
        for i in 0..3 {
            for j in i + 1..3 {
                v *= alg.contraction(x, x, uu[i], uu[j])?;
                if sg[i] > sg[j] {
                    v *= x.zero.exchange_log(&x.zero, uu[i], uu[j], ctx.lq).exp();
                }
            }
        }
        guarded(v, "Serre term")?;
        tot += v;
        big = big.max(v.norm());
    }
    Ok(tot.norm() / big)
}

fn serre_check(name: &str, paper_ref: &str, ctx: &Ctx, rp: &RunParams, e: bool) -> CheckReport {
    let params = Params::new().with("q", json!(ctx.q)).with("r", json!(ctx.r)).with("c", json!(1.0));
    let c1 = match ctx.at_level(1.0) {
        Ok(c) => c,
        Err(err) => return CheckReport::errored(name, paper_ref, params, err),
    };
    let alg = Algebra::new(&c1);
    let (x, coef): (Current, Coef) = if e { (alg.e_level1(), coef_e) } else { (alg.f_level1(), coef_f) };
    let mut rng = rp.sampler(name);
    let (worst, skipped) = sample_worst(
        rp.n_samples,
        || [rng.complex(1.0, 0.3), rng.complex(1.0, 0.3), rng.complex(1.0, 0.3)],
        |us| serre_residual(&alg, &x, coef, us),
        |us| json!(us.iter().map(|u| [u.re, u.im]).collect::<Vec<_>>()),
    );
    CheckReport::from_worst(
        name,
        paper_ref,
        params,
        rp.n_samples,
        worst,
        rp.tol(1e-10),
        json!({"pole_resamples": skipped, "form": "pointwise, normalized by the largest ordering"}),
    )
}

pub fn check_serre_ea8(ctx: &Ctx, rp: &RunParams) -> CheckReport {
    serre_check("bosonope.serre_ea8", PAPER_EA8, ctx, rp, true)
}

pub fn check_serre_ea9(ctx: &Ctx, rp: &RunParams) -> CheckReport {
    serre_check("bosonope.serre_ea9", PAPER_EA9, ctx, rp, false)
}

/// Every catalog relation, pointwise and (for product claims) as series.
pub fn check_catalog(ctx: &Ctx, rp: &RunParams) -> Vec<CheckReport> {
    match catalog(ctx) {
        Ok(cat) => {
            let mut out = Vec::new();
            for r in &cat {
                if r.is_product() {
                    out.push(check_relation_series(r, rp));
                }
                out.push(check_relation(r, ctx, rp));
            }
            out
        }
        Err(e) => vec![CheckReport::errored("bosonope.catalog", "catalog construction", Params::ctx(ctx), e)],
    }
}
