//! Multi-base q-Pochhammer products, Theta_p and the four bracket functions.

use crate::context::{Ctx, MAX_CUTOFF};
use crate::error::{Error, Result};
use crate::report::{CheckReport, Params, RunParams, Worst};
use crate::series::PowerSeries;
use crate::C64;
use serde_json::json;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BracketKind {
    Plain,
    Plus,
    StarPlain,
    StarPlus,
}

impl BracketKind {
    pub fn is_star(self) -> bool {
        matches!(self, BracketKind::StarPlain | BracketKind::StarPlus)
    }
    pub fn is_plus(self) -> bool {
        matches!(self, BracketKind::Plus | BracketKind::StarPlus)
    }
    pub fn new(star: bool, plus: bool) -> Self {
        match (star, plus) {
            (false, false) => BracketKind::Plain,
            (false, true) => BracketKind::Plus,
            (true, false) => BracketKind::StarPlain,
            (true, true) => BracketKind::StarPlus,
        }
    }
}

// Factors below this (relative to 1 - |base|) are 1 in double precision.
const NEGLIGIBLE: f64 = 1e-17;

fn prod_rec(z: C64, bases: &[C64], floor: usize) -> C64 {
    match bases.split_first() {
        None => 1.0 - z,
        Some((t, rest)) => {
            let tn = t.norm();
            let mut acc = C64::new(1.0, 0.0);
            let mut w = z;
            for n in 0..MAX_CUTOFF {
                if n >= floor && w.norm() < NEGLIGIBLE * (1.0 - tn) {
                    break;
                }
                acc *= prod_rec(w, rest, floor);
                w *= t;
            }
            acc
        }
    }
}

fn check_bases(bases: &[C64]) -> Result<()> {
    for b in bases {
        if b.norm() >= 1.0 {
            return Err(Error::Divergent(b.norm()));
        }
    }
    Ok(())
}

/// (z; t_1, ..., t_k)_inf. Every index runs at least up to `ctx.product_cutoff`;
/// factors past that are kept until they no longer change a double.
pub fn qpoch_multi(z: C64, bases: &[C64], ctx: &Ctx) -> Result<C64> {
    check_bases(bases)?;
    Ok(prod_rec(z, bases, ctx.product_cutoff))
}

/// Same product with exactly `cutoff` factors per base (no adaptive tail).
pub fn qpoch_truncated(z: C64, bases: &[C64], cutoff: usize) -> Result<C64> {
    check_bases(bases)?;
    fn rec(z: C64, bases: &[C64], cutoff: usize) -> C64 {
        match bases.split_first() {
            None => 1.0 - z,
            Some((t, rest)) => {
                let mut acc = C64::new(1.0, 0.0);
                let mut w = z;
                for _ in 0..cutoff {
                    acc *= rec(w, rest, cutoff);
                    w *= t;
                }
                acc
            }
        }
    }
    Ok(rec(z, bases, cutoff))
}

/// Product over real bases in (0,1), truncated where factors reach 1 in double precision.
pub fn poch(z: C64, bases: &[f64]) -> C64 {
    let b: Vec<C64> = bases.iter().map(|&t| C64::new(t, 0.0)).collect();
    debug_assert!(bases.iter().all(|t| t.abs() < 1.0));
    prod_rec(z, &b, 0)
}

/// Single-base (z; t)_inf.
pub fn poch1(z: C64, t: f64) -> C64 {
    let mut acc = C64::new(1.0, 0.0);
    let mut w = z;
    for _ in 0..MAX_CUTOFF {
        if w.norm() < NEGLIGIBLE * (1.0 - t.abs()) {
            break;
        }
        acc *= 1.0 - w;
        w *= t;
    }
    acc
}

fn theta_raw(z: C64, p: f64) -> C64 {
    poch1(z, p) * poch1(p / z, p) * poch1(C64::new(p, 0.0), p)
}

/// Theta_p(z) = (z;p)(p/z;p)(p;p).
pub fn theta_p(z: C64, p: f64) -> Result<C64> {
    if z.norm() == 0.0 {
        return Err(Error::Pole("Theta_p at z = 0".into()));
    }
    if !(0.0..1.0).contains(&p) {
        return Err(Error::Divergent(p));
    }
    Ok(theta_raw(z, p))
}

/// [u] = q^{u^2/r - u} Theta_p(q^{2u}); the plus kind uses Theta_p(-q^{2u});
/// star kinds use (r*, p*).
pub fn bracket(u: C64, kind: BracketKind, ctx: &Ctx) -> C64 {
    let (r, p) = ctx.pair(kind.is_star());
    let z = ctx.z_of(u);
    let arg = if kind.is_plus() { -z } else { z };
    ctx.qpow(u * u / r - u) * theta_raw(arg, p)
}

/// Shorthand closures used all over the crate.
pub struct Brackets<'a> {
    pub ctx: &'a Ctx,
}

impl<'a> Brackets<'a> {
    pub fn new(ctx: &'a Ctx) -> Self {
        Brackets { ctx }
    }
    pub fn b(&self, u: C64) -> C64 {
        bracket(u, BracketKind::Plain, self.ctx)
    }
    pub fn bp(&self, u: C64) -> C64 {
        bracket(u, BracketKind::Plus, self.ctx)
    }
    pub fn bs(&self, u: C64) -> C64 {
        bracket(u, BracketKind::StarPlain, self.ctx)
    }
    pub fn bsp(&self, u: C64) -> C64 {
        bracket(u, BracketKind::StarPlus, self.ctx)
    }
    pub fn re(&self, x: f64, kind: BracketKind) -> C64 {
        bracket(C64::new(x, 0.0), kind, self.ctx)
    }
}

/// {z} = (z; p, q^6) or, starred, (z; p*, q^6).
pub fn curly(z: C64, ctx: &Ctx, star: bool) -> C64 {
    let p = if star { ctx.p_star } else { ctx.p };
    curly_with(z, p, ctx.q)
}

pub fn curly_with(z: C64, p: f64, q: f64) -> C64 {
    if p == 0.0 {
        return poch1(z, q.powi(6));
    }
    poch(z, &[p, q.powi(6)])
}

/// One factor (a x; bases)^{power} of a product in x.
#[derive(Debug, Clone, PartialEq)]
pub struct PochFactor {
    pub a: C64,
    pub bases: Vec<C64>,
    pub power: i32,
}

/// Taylor series in x of log prod (a_i x; bases_i)^{power_i}
/// = -sum_m x^m/m sum_i power_i a_i^m / prod_t (1 - t^m).
pub fn log_series_poch(factors: &[PochFactor], order: usize) -> Result<PowerSeries> {
    let mut s = PowerSeries::zero(order);
    for f in factors {
        if f.a.norm() >= 1.0 {
            return Err(Error::Divergent(f.a.norm()));
        }
        check_bases(&f.bases)?;
        for m in 1..=order {
            let mut den = C64::new(1.0, 0.0);
            for t in &f.bases {
                den *= 1.0 - t.powu(m as u32);
            }
            s.coeffs[m] -= f.a.powu(m as u32) / den * (f.power as f64 / m as f64);
        }
    }
    Ok(s)
}

// ---- checks ----

const QP_GRID_Q: [f64; 3] = [0.3, 0.5, 0.7];
const QP_GRID_R: [f64; 3] = [3.1, 4.0, 5.7];

/// Residuals of the five quasi-periodicity laws at one point.
pub fn quasi_periodicity_residuals(u: C64, ctx: &Ctx) -> [f64; 5] {
    use std::f64::consts::PI;
    let br = Brackets::new(ctx);
    let r = ctx.r;
    let t = ctx.tau;
    let i = C64::new(0.0, 1.0);
    let m = (-i * PI * t - 2.0 * PI * i * u / r).exp();
    let rel = |a: C64, b: C64| (a - b).norm() / a.norm().max(b.norm());
    [
        rel(br.b(u + r), -br.b(u)),
        rel(br.b(u + r * t), -m * br.b(u)),
        rel(br.bp(u + r), br.bp(u)),
        rel(br.bp(u + r * t), m * br.bp(u)),
        rel(br.b(u + r * t / 2.0), i * (-i * PI * (u / r + t / 4.0)).exp() * br.bp(u)),
    ]
}

/// Sampling rectangle |Re u| <= 2r, |Im u| <= min(1, |Im r tau|/4).
pub fn sample_rect(ctx: &Ctx) -> (f64, f64) {
    (2.0 * ctx.r, (ctx.r * ctx.tau.im).abs().min(4.0) / 4.0)
}

pub const PAPER_PLUS_TAU: &str = "\"$[u]_+=q^{\\frac{u^2}{r}-u}{\\Theta_p(-q^{2u})}$\" shifted by r tau";
pub const PAPER_PARITY: &str = "parity: \"$[-u]=-[u], [-u]_+=[u]_+$\"";
pub const PAPER_THETA: &str = "\"$\\Theta_p(z)=(z,p)_\\infty (pz^{-1};p)_\\infty (p;p)_\\infty$\": invariance under z -> p/z and Theta_p(pz) = -z^{-1} Theta_p(z)";
pub const PAPER_TRUNC: &str = "\"$(z;t_1,\\cdots,t_k)_\\infty$\" truncation";

pub fn check_bracket_quasi_periodicity(ctx: &Ctx, rp: &RunParams) -> CheckReport {
    let name = "qseries.bracket_quasi_periodicity";
    let mut rng = rp.sampler(name);
    let mut worst = Worst::default();
    let mut per_law = [0.0f64; 5];
    let mut count = 0;
    for &q in &QP_GRID_Q {
        for &r in &QP_GRID_R {
            let cx = match Ctx::build(q, r, ctx.c.min(r / 2.0), ctx.tol, ctx.series_order) {
                Ok(c) => c,
                Err(e) => return CheckReport::errored(name, PAPER_QP, Params::ctx(ctx), e),
            };
            let (re, im) = sample_rect(&cx);
            for _ in 0..rp.n_samples {
                let u = rng.complex(re, im);
                let res = quasi_periodicity_residuals(u, &cx);
                for (k, v) in res.iter().enumerate() {
                    per_law[k] = per_law[k].max(*v);
                }
                worst.push(res.iter().cloned().fold(0.0, f64::max), || json!({"q": q, "r": r, "u": [u.re, u.im]}));
                count += 1;
            }
        }
    }
    let mut params = Params::new();
    params.set("q_grid", json!(QP_GRID_Q));
    params.set("r_grid", json!(QP_GRID_R));
    CheckReport::from_worst(
        name,
        PAPER_QP,
        params,
        count,
        worst,
        rp.tol(1e-10),
        json!({"per_law": per_law, "laws": ["[u+r]=-[u]", "[u+r tau]", "[u+r]_+=[u]_+", "[u+r tau]_+", "[u+r tau/2]"]}),
    )
}

/// [u + r tau]_+ = -e^{-pi i tau - 2 pi i u/r}[u]_+. Since q^{2 r tau} = 1 the
/// shift only touches the Gaussian prefactor, which [u] and [u]_+ share.
pub fn plus_tau_derived_residual(u: C64, ctx: &Ctx) -> f64 {
    use std::f64::consts::PI;
    let br = Brackets::new(ctx);
    let i = C64::new(0.0, 1.0);
    let m = -(-i * PI * ctx.tau - 2.0 * PI * i * u / ctx.r).exp();
    let a = br.bp(u + ctx.r * ctx.tau);
    let b = m * br.bp(u);
    (a - b).norm() / a.norm().max(b.norm())
}

pub fn check_plus_tau_derived(ctx: &Ctx, rp: &RunParams) -> CheckReport {
    let name = "qseries.bracket_plus_tau_derived";
    let mut rng = rp.sampler(name);
    let mut worst = Worst::default();
    let (re, im) = sample_rect(ctx);
    for _ in 0..rp.n_samples {
        let u = rng.complex(re, im);
        worst.push(plus_tau_derived_residual(u, ctx), || json!({"u": [u.re, u.im]}));
    }
    CheckReport::from_worst(
        name,
        PAPER_PLUS_TAU,
        Params::ctx(ctx),
        rp.n_samples,
        worst,
        rp.tol(1e-10),
        json!({"law": "[u+r tau]_+ = -e^{-pi i tau - 2 pi i u/r}[u]_+"}),
    )
}

pub const PAPER_QP: &str = "quasi-periodicity of [u], [u]_+: \"$[u+r]=-[u]$\", \"$[u+\\frac{r\\tau}{2}]=ie^{-\\pi i(u/r+\\tau/4)}[u]_+$\"";

pub fn check_antisymmetry(ctx: &Ctx, rp: &RunParams) -> CheckReport {
    let name = "qseries.bracket_parity";
    let mut rng = rp.sampler(name);
    let br = Brackets::new(ctx);
    let mut worst = Worst::default();
    for _ in 0..rp.n_samples {
        let u = rng.complex(ctx.r, 0.5);
        let a = (br.b(-u) + br.b(u)).norm() / br.b(u).norm();
        let b = (br.bp(-u) - br.bp(u)).norm() / br.bp(u).norm();
        worst.push(a.max(b), || json!({"u": [u.re, u.im]}));
    }
    CheckReport::from_worst(
        name,
        PAPER_PARITY,
        Params::ctx(ctx),
        rp.n_samples,
        worst,
        rp.tol(1e-10),
        json!({}),
    )
}

pub fn check_theta_inversion(ctx: &Ctx, rp: &RunParams) -> CheckReport {
    let name = "qseries.theta_inversion";
    let mut rng = rp.sampler(name);
    let mut worst = Worst::default();
    for _ in 0..rp.n_samples {
        let u = rng.complex(ctx.r, 0.5);
        let z = ctx.z_of(u);
        let a = theta_raw(z, ctx.p);
        let b = theta_raw(ctx.p / z, ctx.p);
        let c = theta_raw(ctx.p * z, ctx.p);
        let e1 = (a - b).norm() / a.norm();
        let e2 = (c + a / z).norm() / c.norm();
        worst.push(e1.max(e2), || json!({"u": [u.re, u.im]}));
    }
    CheckReport::from_worst(
        name,
        PAPER_THETA,
        Params::ctx(ctx),
        rp.n_samples,
        worst,
        rp.tol(1e-10),
        json!({}),
    )
}

/// Doubling the truncation floor must not move any bracket by more than tol/10.
pub fn check_cutoff_doubling(ctx: &Ctx, rp: &RunParams) -> CheckReport {
    let name = "qseries.cutoff_doubling";
    let mut rng = rp.sampler(name);
    let mut worst = Worst::default();
    let n = ctx.product_cutoff;
    let q6 = ctx.q.powi(6);
    for _ in 0..rp.n_samples {
        let u = rng.complex(1.0, 0.3);
        let z = ctx.z_of(u);
        let bases = [C64::new(ctx.p, 0.0), C64::new(q6, 0.0)];
        let a = qpoch_multi(z, &bases, ctx).unwrap_or_default();
        let mut c2 = ctx.clone();
        c2.product_cutoff = (2 * n).min(MAX_CUTOFF);
        let b = qpoch_multi(z, &bases, &c2).unwrap_or_default();
        worst.push((a - b).norm() / a.norm(), || json!({"u": [u.re, u.im]}));
    }
    CheckReport::from_worst(
        name,
        PAPER_TRUNC,
        Params::ctx(ctx),
        rp.n_samples,
        worst,
        rp.tol(1e-11),
        json!({"cutoff": n, "tail_estimate": ctx.tail_estimate()}),
    )
}
