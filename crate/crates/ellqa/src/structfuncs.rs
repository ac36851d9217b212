//! Scalar structure functions rho+, rho, mu, chi and the constants kappa, kappa', g.

use crate::context::Ctx;
use crate::error::{Error, Result};
use crate::qseries::{curly_with, poch1, theta_p};
use crate::report::{sample_worst, CheckReport, Params, RunParams, Worst};
use crate::C64;
use serde_json::json;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum StructFnId {
    RhoPlus,
    RhoPlusStar,
    Rho,
    Kappa,
    KappaPrime,
    Mu,
    MuStar,
    Chi,
    GConst,
}

impl StructFnId {
    pub const ALL: [StructFnId; 9] = [
        StructFnId::RhoPlus,
        StructFnId::RhoPlusStar,
        StructFnId::Rho,
        StructFnId::Kappa,
        StructFnId::KappaPrime,
        StructFnId::Mu,
        StructFnId::MuStar,
        StructFnId::Chi,
        StructFnId::GConst,
    ];

    pub fn name(self) -> &'static str {
        match self {
            StructFnId::RhoPlus => "rho_plus",
            StructFnId::RhoPlusStar => "rho_plus_star",
            StructFnId::Rho => "rho",
            StructFnId::Kappa => "kappa",
            StructFnId::KappaPrime => "kappa_prime",
            StructFnId::Mu => "mu",
            StructFnId::MuStar => "mu_star",
            StructFnId::Chi => "chi",
            StructFnId::GConst => "g_const",
        }
    }

    pub fn parse(s: &str) -> Option<StructFnId> {
        StructFnId::ALL.iter().copied().find(|id| id.name() == s)
    }
}

/// A denominator factor smaller than this is reported as a pole.
pub const POLE_EPS: f64 = 1e-14;

/// Running quotient that refuses to divide by a (numerical) zero.
pub(crate) struct Ratio {
    val: C64,
}

impl Ratio {
    pub fn new(v: C64) -> Self {
        Ratio { val: v }
    }
    pub fn mul(&mut self, v: C64) -> &mut Self {
        self.val *= v;
        self
    }
    pub fn div(&mut self, v: C64, what: &str) -> Result<&mut Self> {
        if v.norm() < POLE_EPS {
            return Err(Error::Pole(what.to_string()));
        }
        self.val /= v;
        Ok(self)
    }
    pub fn get(&self) -> Result<C64> {
        if self.val.is_finite() {
            Ok(self.val)
        } else {
            Err(Error::NonFinite("structure function".into()))
        }
    }
}

fn q6(ctx: &Ctx) -> f64 {
    ctx.q.powi(6)
}

/// rho+(u); the starred variant has r -> r*.
pub fn rho_plus(u: C64, ctx: &Ctx, star: bool) -> Result<C64> {
    let (r, p) = ctx.pair(star);
    rho_plus_raw(u, ctx, r, p)
}

pub(crate) fn rho_plus_raw(u: C64, ctx: &Ctx, r: f64, p: f64) -> Result<C64> {
    let q = ctx.q;
    let z = ctx.z_of(u);
    let cb = |x: C64| curly_with(x, p, q);
    let mut acc = Ratio::new(-q * ctx.qpow(2.0 * u / r));
    acc.mul(cb(p * q * q * z))
        .mul(cb(p * q.powi(3) * z).powu(2))
        .mul(cb(p * q.powi(4) * z))
        .mul(cb(1.0 / z))
        .mul(cb(q / z))
        .mul(cb(q.powi(5) / z))
        .mul(cb(q.powi(6) / z));
    acc.div(cb(p * z), "{pz}")?
        .div(cb(p * q * z), "{pqz}")?
        .div(cb(p * q.powi(5) * z), "{pq^5z}")?
        .div(cb(p * q.powi(6) * z), "{pq^6z}")?
        .div(cb(q * q / z), "{q^2/z}")?
        .div(cb(q.powi(3) / z).powu(2), "{q^3/z}")?
        .div(cb(q.powi(4) / z), "{q^4/z}")?;
    acc.get()
}

/// rho(z) = rho+*(z) / rho+(z).
pub fn rho(u: C64, ctx: &Ctx) -> Result<C64> {
    let a = rho_plus(u, ctx, true)?;
    let b = rho_plus(u, ctx, false)?;
    let mut acc = Ratio::new(a);
    acc.div(b, "rho+")?;
    acc.get()
}

pub fn mu(u: C64, ctx: &Ctx, star: bool) -> Result<C64> {
    let (r, p) = ctx.pair(star);
    let q = ctx.q;
    let z = ctx.z_of(u);
    let cb = |x: C64| curly_with(x, p, q);
    let mut acc = Ratio::new(ctx.qpow(2.0 * u * (1.0 / r - 1.0)));
    acc.mul(cb(p * q.powi(4) * z))
        .mul(cb(p * q.powi(3) * z))
        .mul(cb(q.powi(3) * z))
        .mul(cb(q * q * z))
        .mul(cb(p * q / z))
        .mul(cb(p / z))
        .mul(cb(q.powi(6) / z))
        .mul(cb(q.powi(5) / z));
    acc.div(cb(p * q.powi(4) / z), "{pq^4/z}")?
        .div(cb(p * q.powi(3) / z), "{pq^3/z}")?
        .div(cb(q.powi(3) / z), "{q^3/z}")?
        .div(cb(q * q / z), "{q^2/z}")?
        .div(cb(p * q * z), "{pqz}")?
        .div(cb(p * z), "{pz}")?
        .div(cb(q.powi(6) * z), "{q^6z}")?
        .div(cb(q.powi(5) * z), "{q^5z}")?;
    acc.get()
}

pub fn chi(u: C64, ctx: &Ctx) -> Result<C64> {
    let q = ctx.q;
    let z = ctx.z_of(u);
    let t = |x: C64| theta_p(x, q6(ctx));
    let mut acc = Ratio::new(-1.0 / z);
    acc.mul(t(q * z)?).mul(t(q * q * z)?);
    acc.div(t(q / z)?, "Theta(q/z)")?.div(t(q * q / z)?, "Theta(q^2/z)")?;
    acc.get()
}

fn curly_const(ctx: &Ctx, num: &[(bool, i32, u32)], den: &[(bool, i32, u32)]) -> Result<C64> {
    // each entry: (starred, power of q, multiplicity); argument is p q^k (or p* q^k)
    let q = ctx.q;
    let one = |star: bool, k: i32| {
        let p = if star { ctx.p_star } else { ctx.p };
        curly_with(C64::new(p * q.powi(k), 0.0), p, q)
    };
    // Net multiplicity per distinct (base, k); at c = 0 starred and plain
    // factors coincide and cancel before any rounding.
    let mut net: std::collections::BTreeMap<(u64, i32), (bool, i64)> = Default::default();
    for (list, sign) in [(num, 1i64), (den, -1i64)] {
        for &(s, k, m) in list {
            let p = if s { ctx.p_star } else { ctx.p };
            net.entry((p.to_bits(), k)).or_insert((s, 0)).1 += sign * m as i64;
        }
    }
    let mut acc = Ratio::new(C64::new(1.0, 0.0));
    for (&(_, k), &(s, m)) in &net {
        if m > 0 {
            acc.mul(one(s, k).powu(m as u32));
        } else if m < 0 {
            acc.div(one(s, k).powu((-m) as u32), "constant")?;
        }
    }
    acc.get()
}

pub fn kappa(ctx: &Ctx) -> Result<C64> {
    curly_const(
        ctx,
        &[(false, 8, 1), (false, 5, 1), (false, 3, 1), (false, 4, 2), (false, 0, 1), (true, 7, 1), (true, 1, 1), (true, 2, 2), (true, 6, 2)],
        &[(false, 7, 1), (false, 1, 1), (false, 2, 2), (false, 6, 2), (true, 0, 1), (true, 8, 1), (true, 5, 1), (true, 3, 1), (true, 4, 2)],
    )
}

pub fn kappa_prime(ctx: &Ctx) -> Result<C64> {
    curly_const(
        ctx,
        &[(false, 10, 1), (false, 7, 1), (false, 5, 1), (false, 6, 2), (false, 2, 1), (true, 9, 1), (true, 3, 1), (true, 5, 2), (true, 8, 2)],
        &[(false, 9, 1), (false, 3, 1), (false, 5, 2), (false, 8, 2), (true, 2, 1), (true, 10, 1), (true, 7, 1), (true, 5, 1), (true, 6, 2)],
    )
}

pub fn g_const(ctx: &Ctx) -> Result<C64> {
    let q = ctx.q;
    let t = q6(ctx);
    let p = ctx.p;
    let pf = |x: f64| poch1(C64::new(x, 0.0), t);
    let block = |star: bool| {
        curly_const(ctx, &[(star, 2, 1), (star, 3, 2), (star, 4, 1)], &[(star, 0, 1), (star, 1, 1), (star, 5, 1), (star, 6, 1)])
    };
    let a = block(false)?;
    let b = block(true)?;
    let mut acc = Ratio::new(-pf(p * q.powi(6)) * pf(p * q.powi(5)) * a);
    acc.div(pf(p * q.powi(3)) * pf(p * q * q), "(pq^3;q^6)(pq^2;q^6)")?.div(b, "starred block")?;
    acc.get()
}

/// rho_VV(z) of the trigonometric R-matrix.
pub fn rho_vv_z(z: C64, q: f64) -> Result<C64> {
    let t = q.powi(6);
    let pf = |x: C64| poch1(x, t);
    let mut acc = Ratio::new(C64::new(1.0 / q, 0.0));
    acc.mul(pf(1.0 / z)).mul(pf(q / z)).mul(pf(q.powi(5) / z)).mul(pf(q.powi(6) / z));
    acc.div(pf(q * q / z), "(q^2/z;q^6)")?
        .div(pf(q.powi(3) / z).powu(2), "(q^3/z;q^6)")?
        .div(pf(q.powi(4) / z), "(q^4/z;q^6)")?;
    acc.get()
}

pub fn rho_vv(u: C64, ctx: &Ctx) -> Result<C64> {
    rho_vv_z(ctx.z_of(u), ctx.q)
}

/// Uniform entry point; the constants ignore `u`.
pub fn struct_fn(id: StructFnId, u: C64, ctx: &Ctx) -> Result<C64> {
    match id {
        StructFnId::RhoPlus => rho_plus(u, ctx, false),
        StructFnId::RhoPlusStar => rho_plus(u, ctx, true),
        StructFnId::Rho => rho(u, ctx),
        StructFnId::Kappa => kappa(ctx),
        StructFnId::KappaPrime => kappa_prime(ctx),
        StructFnId::Mu => mu(u, ctx, false),
        StructFnId::MuStar => mu(u, ctx, true),
        StructFnId::Chi => chi(u, ctx),
        StructFnId::GConst => g_const(ctx),
    }
}

/// kappa, kappa' and g, evaluated once per context.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Constants {
    pub kappa: C64,
    pub kappa_prime: C64,
    pub g: C64,
}

impl Constants {
    pub fn new(ctx: &Ctx) -> Result<Constants> {
        Ok(Constants { kappa: kappa(ctx)?, kappa_prime: kappa_prime(ctx)?, g: g_const(ctx)? })
    }
}

// ---- checks ----

pub const PAPER_RHO_PLUS_MU_CHI: &str = "\"$\\rho^+(u)$\" (def:rhop) against \"$R(u,P+h)={\\mu(u)}$\" and def:chi";
pub const PAPER_TRIG: &str = "Appendix B \"$\\rho_{VV}(z)$\" vs def:rhop at p=0";
pub const PAPER_SWAP: &str = "def:EA1 under swap: rho(z1/z2) rho(z2/z1) = 1";

pub const PAPER_RHO_MU_CHI: &str =
    "Mikidecomp: \"$\\frac{\\rho^+(u)}{\\rho^{+*}(u)}=\\frac{\\mu(u)\\chi(\\frac{1}{2}-u)}{\\mu^*(u)\\chi(\\frac{1}{2}+u)}$\"";

fn rel(a: C64, b: C64) -> f64 {
    (a - b).norm() / a.norm().max(b.norm())
}

/// Draw samples with bounded resampling on pole hits.
pub(crate) fn sample_eval<F>(n: usize, draw: impl FnMut() -> C64, mut f: F) -> (Worst, usize)
where
    F: FnMut(C64) -> Result<f64>,
{
    sample_worst(n, draw, |u| f(*u), |u| json!({"u": [u.re, u.im]}))
}

/// Residual of the claimed rho+/rho+* vs mu/chi identity at u.
pub fn rho_mu_chi_residual(u: C64, ctx: &Ctx, mu_scale: f64) -> Result<f64> {
    let lhs = rho_plus(u, ctx, false)? / rho_plus(u, ctx, true)?;
    let half = C64::new(0.5, 0.0);
    let rhs = mu(u, ctx, false)? * mu_scale * chi(half - u, ctx)? / (mu(u, ctx, true)? * chi(half + u, ctx)?);
    Ok(rel(lhs, rhs))
}

pub fn check_rho_mu_chi(ctx: &Ctx, rp: &RunParams) -> CheckReport {
    let name = "structfuncs.rho_mu_chi";
    let mut rng = rp.sampler(name);
    let (worst, skipped) =
        sample_eval(rp.n_samples, || rng.complex(1.5, 0.4), |u| rho_mu_chi_residual(u, ctx, 1.0));
    CheckReport::from_worst(
        name,
        PAPER_RHO_MU_CHI,
        Params::ctx(ctx),
        rp.n_samples,
        worst,
        rp.tol(1e-10),
        json!({"pole_resamples": skipped}),
    )
}

/// rho+(u) = mu(u) / chi(1/2 + u): the relation the products do satisfy.
pub fn check_rho_plus_mu_chi(ctx: &Ctx, rp: &RunParams) -> CheckReport {
    let name = "structfuncs.rho_plus_mu_over_chi";
    let mut rng = rp.sampler(name);
    let half = C64::new(0.5, 0.0);
    let (worst, skipped) = sample_eval(
        rp.n_samples,
        || rng.complex(1.5, 0.4),
        |u| {
            let a = rho_plus(u, ctx, false)?;
            let b = mu(u, ctx, false)? / chi(half + u, ctx)?;
            Ok(rel(a, b))
        },
    );
    CheckReport::from_worst(
        name,
        PAPER_RHO_PLUS_MU_CHI,
        Params::ctx(ctx),
        rp.n_samples,
        worst,
        rp.tol(1e-10),
        json!({"relation": "rho+(u) = mu(u)/chi(1/2+u)", "pole_resamples": skipped}),
    )
}

/// rho+ at p = 0 divided by rho_VV; the ratio should be -q^2 z^{1/r}.
pub fn trig_limit_ratio(u: C64, ctx: &Ctx, exponent: f64) -> Result<f64> {
    let a = rho_plus_raw(u, ctx, ctx.r, 0.0)?;
    let b = rho_vv(u, ctx)?;
    let predicted = -ctx.q * ctx.q * ctx.qpow(2.0 * u * exponent / ctx.r);
    Ok(rel(a / b, predicted))
}

pub fn check_rho_trig_limit(ctx: &Ctx, rp: &RunParams) -> CheckReport {
    let name = "structfuncs.rho_trig_limit";
    let mut rng = rp.sampler(name);
    let (worst, skipped) = sample_eval(
        rp.n_samples,
        || {
            // keep away from z = 1
            loop {
                let u = rng.complex(1.5, 0.4);
                if u.norm() > 0.05 {
                    return u;
                }
            }
        },
        |u| trig_limit_ratio(u, ctx, 1.0),
    );
    CheckReport::from_worst(
        name,
        PAPER_TRIG,
        Params::ctx(ctx),
        rp.n_samples,
        worst,
        rp.tol(1e-10),
        json!({"proportionality": "-q^2 z^{1/r}", "pole_resamples": skipped}),
    )
}

pub fn check_rho_swap(ctx: &Ctx, rp: &RunParams) -> CheckReport {
    let name = "structfuncs.rho_swap";
    let mut rng = rp.sampler(name);
    let (worst, skipped) = sample_eval(
        rp.n_samples,
        || rng.complex(1.5, 0.4),
        |u| {
            let v = rho(u, ctx)? * rho(-u, ctx)?;
            Ok((v - 1.0).norm())
        },
    );
    CheckReport::from_worst(
        name,
        PAPER_SWAP,
        Params::ctx(ctx),
        rp.n_samples,
        worst,
        rp.tol(1e-10),
        json!({"pole_resamples": skipped}),
    )
}
