//! Theta-function identities behind the half-current relations and the
//! residue argument of the weak-equality proof, plus a circle quadrature.

use crate::context::Ctx;
use crate::error::{Error, Result};
use crate::qseries::{poch1, Brackets};
use crate::report::{sample_worst, CheckReport, Params, RunParams, Worst};
use crate::C64;
use serde_json::json;
use std::f64::consts::PI;

/// Circle |z - center| = radius sampled at `n_points` equispaced nodes.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ContourSpec {
    pub center: C64,
    pub radius: f64,
    pub n_points: usize,
}

impl ContourSpec {
    pub const MIN_POINTS: usize = 64;

    pub fn new(center: C64, radius: f64, n_points: usize) -> Result<Self> {
        if !(radius > 0.0) {
            return Err(Error::Param { name: "radius".into(), msg: format!("need radius > 0, got {radius}") });
        }
        Ok(ContourSpec { center, radius, n_points: n_points.max(Self::MIN_POINTS) })
    }
}

fn circle_mean(spec: &ContourSpec, mut g: impl FnMut(C64, C64) -> C64) -> Result<C64> {
    let mut acc = C64::new(0.0, 0.0);
    for k in 0..spec.n_points {
        let e = C64::from_polar(1.0, 2.0 * PI * k as f64 / spec.n_points as f64);
        let v = g(spec.center + spec.radius * e, spec.radius * e);
        if !v.re.is_finite() || !v.im.is_finite() {
            return Err(Error::NonFinite("contour sample".into()));
        }
        acc += v;
    }
    Ok(acc / spec.n_points as f64)
}

/// (1/2 pi i) \oint f(z) dz / z by the trapezoidal rule.
pub fn contour_integral(f: impl Fn(C64) -> C64, spec: &ContourSpec) -> Result<C64> {
    circle_mean(spec, |z, dz| f(z) * dz / z)
}

/// Same, together with the change under doubling of the node count.
pub fn contour_integral_checked(f: impl Fn(C64) -> C64, spec: &ContourSpec) -> Result<(C64, f64)> {
    let a = contour_integral(&f, spec)?;
    let b = contour_integral(&f, &ContourSpec { n_points: 2 * spec.n_points, ..*spec })?;
    Ok((b, (a - b).norm()))
}

/// Residue in the u-plane: (1/2 pi i) \oint f(u) du on a small circle around a.
/// The radius is shrunk to keep every point of `avoid` outside twice the radius.
pub fn residue_u(f: impl Fn(C64) -> C64, a: C64, avoid: &[C64]) -> Result<C64> {
    let mut rho = 1e-3f64;
    for b in avoid {
        let d = (b - a).norm();
        if d > 0.0 && d < 2.0 * rho {
            rho = d / 4.0;
        }
    }
    let spec = ContourSpec::new(a, rho, ContourSpec::MIN_POINTS)?;
    circle_mean(&spec, |u, du| f(u) * du)
}

/// `residue_u` for several functions sharing one circle.
pub fn residues_u<const N: usize>(f: impl Fn(C64) -> [C64; N], a: C64, avoid: &[C64]) -> Result<[C64; N]> {
    let mut rho = 1e-3f64;
    for b in avoid {
        let d = (b - a).norm();
        if d > 0.0 && d < 2.0 * rho {
            rho = d / 4.0;
        }
    }
    let n = ContourSpec::MIN_POINTS;
    let mut acc = [C64::new(0.0, 0.0); N];
    for k in 0..n {
        let e = C64::from_polar(rho, 2.0 * PI * k as f64 / n as f64);
        for (slot, v) in acc.iter_mut().zip(f(a + e)) {
            if !v.re.is_finite() || !v.im.is_finite() {
                return Err(Error::NonFinite("contour sample".into()));
            }
            *slot += v * e;
        }
    }
    Ok(acc.map(|v| v / n as f64))
}

/// d[u]/du at u = 0 (plain or starred): -2 ln q (p;p)^3.
pub fn bracket_slope_at_zero(ctx: &Ctx, star: bool) -> f64 {
    let p = if star { ctx.p_star } else { ctx.p };
    let pp = poch1(C64::new(p, 0.0), p).re;
    -2.0 * ctx.lq * pp.powi(3)
}

/// Contour normalization \oint dz/(2 pi i z) f = N Res_u f, fixed by
/// \oint dz/(2 pi i z) 1/[-u] = 1, i.e. N = -[0]'.
pub fn contour_normalization(ctx: &Ctx) -> f64 {
    -bracket_slope_at_zero(ctx, false)
}

// ---- pole guard ----

/// Distance from x to the zero lattice of [.]* (plus = false) or [.]*_+.
fn lattice_distance(x: C64, ctx: &Ctx, plus: bool) -> f64 {
    let per_re = ctx.r_star;
    let per_im = (ctx.tau_star * ctx.r_star).im.abs();
    let off = if plus { per_im / 2.0 } else { 0.0 };
    let y = x.im - off;
    let dy = y - (y / per_im).round() * per_im;
    let dx = x.re - (x.re / per_re).round() * per_re;
    (dx * dx + dy * dy).sqrt()
}

pub const POLE_GAP: f64 = 0.05;

/// Err(Pole) if any starred denominator argument sits within POLE_GAP of a zero.
fn clear(ctx: &Ctx, plain: &[C64], plus: &[C64]) -> Result<()> {
    let bad = plain.iter().any(|x| lattice_distance(*x, ctx, false) < POLE_GAP)
        || plus.iter().any(|x| lattice_distance(*x, ctx, true) < POLE_GAP);
    if bad {
        Err(Error::Pole("sample near a bracket zero".into()))
    } else {
        Ok(())
    }
}

/// As `clear`, evaluated at a pole: brackets that vanish exactly there are the
/// pole itself and are skipped.
fn clear_at_pole(ctx: &Ctx, plain: &[C64], plus: &[C64]) -> Result<()> {
    let keep = |xs: &[C64], pl: bool| -> Vec<C64> {
        xs.iter().copied().filter(|x| lattice_distance(*x, ctx, pl) > 1e-9).collect()
    };
    clear(ctx, &keep(plain, false), &keep(plus, true))
}

fn cancel_ratio(total: C64, terms: &[C64]) -> f64 {
    let big = terms.iter().map(|t| t.norm()).fold(0.0, f64::max);
    total.norm() / big
}

fn re(x: f64) -> C64 {
    C64::new(x, 0.0)
}

// ---- the rel:HC6 identity ----

/// L - R1 - R2 over max(|L|, |R1|, |R2|). `flip` negates R2 (negative control).
pub fn hc6_residual(ctx: &Ctx, u1: C64, u2: C64, up: C64, p: C64, flip: bool) -> Result<f64> {
    let b = Brackets::new(ctx);
    let (s, sp) = (|x| b.bs(x), |x| b.bsp(x));
    let c = ctx.c;
    clear(
        ctx,
        &[u1 - up + c / 2.0, u2 - up + c / 2.0, u1 - u2],
        &[p + 0.5, p - 0.5],
    )?;
    let l = -s(u1 - up + c / 2.0 + 1.0) * sp(u2 - up - p + (c - 1.0) / 2.0)
        / (s(u1 - up + c / 2.0) * s(u2 - up + c / 2.0) * sp(p + 0.5));
    let r1 = -sp(u2 - up - p + (c + 1.0) / 2.0) * s(u1 - u2 + 1.0)
        / (s(u2 - up + c / 2.0) * s(u1 - u2) * sp(p - 0.5));
    let mut r2 = sp(u1 - up - p + (c + 1.0) / 2.0) * sp(u1 - u2 + p + 0.5) * s(re(1.0))
        / (s(u1 - up + c / 2.0) * s(u1 - u2) * sp(p - 0.5) * sp(p + 0.5));
    if flip {
        r2 = -r2;
    }
    Ok(cancel_ratio(l - r1 - r2, &[l, r1, r2]))
}

// ---- Riemann-type identity ----

/// With `plain_rhs`, the right side uses unstarred brackets (negative control).
pub fn riemann_residual(ctx: &Ctx, u: C64, v: C64, x: C64, y: C64, plain_rhs: bool) -> Result<f64> {
    let b = Brackets::new(ctx);
    let (s, sp) = (|t| b.bs(t), |t| b.bsp(t));
    let lhs = s(u + x) * s(u - x) * sp(v + y) * sp(v - y) - s(u + y) * s(u - y) * sp(v + x) * sp(v - x);
    let rhs = if plain_rhs {
        -b.b(x - y) * b.b(x + y) * b.bp(u + v) * b.bp(u - v)
    } else {
        -s(x - y) * s(x + y) * sp(u + v) * sp(u - v)
    };
    let scale = [s(u + x) * s(u - x) * sp(v + y) * sp(v - y), s(u + y) * s(u - y) * sp(v + x) * sp(v - x), rhs];
    Ok(cancel_ratio(lhs - rhs, &scale))
}

// ---- F, h and G ----

/// Which transcription of F's second term: [1]*^3 (matching the residue it
/// produces) or a single [1]* as printed in the definition.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FReading {
    Cubed,
    AsPrinted,
}

#[derive(Debug, Clone, Copy)]
pub struct FArgs {
    pub u1: C64,
    pub u2: C64,
    pub upp: C64,
    pub p: C64,
}

pub struct AppC<'a> {
    b: Brackets<'a>,
    c: f64,
    pub reading: FReading,
    /// Drop the fourth term (negative control).
    pub drop_fourth: bool,
}

impl<'a> AppC<'a> {
    pub fn new(ctx: &'a Ctx, reading: FReading) -> Self {
        AppC { b: Brackets::new(ctx), c: ctx.c, reading, drop_fourth: false }
    }

    fn s(&self, x: C64) -> C64 {
        self.b.bs(x)
    }
    fn sp(&self, x: C64) -> C64 {
        self.b.bsp(x)
    }

    /// h(v) = -[v+1]*[v-1/2]* / ([v-1]*[v+1/2]*)
    pub fn h(&self, v: C64) -> C64 {
        -self.s(v + 1.0) * self.s(v - 0.5) / (self.s(v - 1.0) * self.s(v + 0.5))
    }

    /// The four terms of F(u1, u2, u', u'', L).
    pub fn f_terms(&self, u1: C64, u2: C64, up: C64, upp: C64, p: C64) -> [C64; 4] {
        let c = self.c;
        let (s, sp) = (|x| self.s(x), |x| self.sp(x));
        let u = u1 - u2;
        let one = s(re(1.0));
        let t2_pow = match self.reading {
            FReading::Cubed => 3,
            FReading::AsPrinted => 1,
        };
        let t1 = s(u2 - up - 2.0 * p + 2.0 + c / 2.0) * sp(up - upp - p) * s(u + 1.0) * s(u + 1.5) * one.powi(2)
            / (s(u2 - up + c / 2.0) * s(up - upp - 0.5) * s(u) * s(2.0 * p - 2.0) * sp(p - 0.5) * s(u + 0.5));
        let t2 = sp(u2 - up - p + (c + 1.0) / 2.0)
            * s(u1 - up + 1.0 + c / 2.0)
            * sp(u1 - upp - p + (c + 1.0) / 2.0)
            * sp(u + p + 1.0)
            * one.powi(t2_pow)
            / (s(u2 - up + c / 2.0)
                * s(u1 - up + c / 2.0)
                * s(u1 - upp + c / 2.0)
                * sp(p - 0.5).powi(2)
                * sp(p + 0.5)
                * s(u + 0.5));
        let bracket3 = s(u + 2.0 * p - 1.0) * one * s(u + 1.5) / (s(u) * s(2.0 * p - 1.0) * s(2.0 * p - 2.0))
            + sp(p) * s(u + 2.0 * p + 0.5) * one / (s(2.0 * p) * s(2.0 * p - 1.0) * sp(p - 1.0));
        let t3 = -s(u1 - up - 2.0 * p + 2.0 + c / 2.0) * sp(up - upp - p) * one.powi(2)
            / (s(u1 - up + c / 2.0) * s(up - upp - 0.5) * sp(p - 0.5) * s(u + 0.5))
            * bracket3;
        let t4 = if self.drop_fourth {
            C64::new(0.0, 0.0)
        } else {
            -s(u2 - up - 2.0 * p + c / 2.0)
                * sp(up - upp - p - 1.0)
                * s(u1 - up + 1.0 + c / 2.0)
                * s(u1 - upp + 1.0 + c / 2.0)
                * one.powi(2)
                / (s(u2 - up + c / 2.0)
                    * s(up - upp - 0.5)
                    * s(u1 - up + c / 2.0)
                    * s(u1 - upp + c / 2.0)
                    * sp(p + 0.5)
                    * s(2.0 * p))
        };
        [t1, t2, t3, t4]
    }

    /// The eight terms of F(u') = F(.., u', u'') + h(u''-u') F(.., u'', u').
    pub fn symmetrized_terms(&self, a: &FArgs, up: C64) -> [C64; 8] {
        let x = self.f_terms(a.u1, a.u2, up, a.upp, a.p);
        let hh = self.h(a.upp - up);
        let y = self.f_terms(a.u1, a.u2, a.upp, up, a.p).map(|t| hh * t);
        [x[0], x[1], x[2], x[3], y[0], y[1], y[2], y[3]]
    }

    /// Terms of G(u') = F(u') [u'-u''-P+3/2]* / [u'-u'']*.
    pub fn g_terms(&self, a: &FArgs, up: C64) -> [C64; 8] {
        let k = self.s(up - a.upp - a.p + 1.5) / self.s(up - a.upp);
        self.symmetrized_terms(a, up).map(|t| t * k)
    }

    /// Denominator arguments of F(u') and G(u') for the pole guard.
    fn dens(&self, a: &FArgs, up: C64) -> (Vec<C64>, Vec<C64>) {
        let c = self.c;
        let u = a.u1 - a.u2;
        let mut plain = vec![u, u + 0.5, 2.0 * a.p - 2.0, 2.0 * a.p - 1.0, 2.0 * a.p, up - a.upp];
        for (x, y) in [(up, a.upp), (a.upp, up)] {
            plain.extend([a.u2 - x + c / 2.0, x - y - 0.5, a.u1 - x + c / 2.0, a.u1 - y + c / 2.0]);
        }
        let v = a.upp - up;
        plain.extend([v - 1.0, v + 0.5]);
        let plus = vec![a.p - 0.5, a.p + 0.5, a.p - 1.0];
        (plain, plus)
    }

    /// Pole candidates of G in u'.
    pub fn g_poles(&self, a: &FArgs) -> [C64; 4] {
        let c = self.c;
        [a.u1 + c / 2.0, a.u2 + c / 2.0, a.upp + 0.5, a.upp - 1.0]
    }

    /// Terms of the displayed residue of G at u' = u2 + c/2.
    pub fn displayed_residue(&self, a: &FArgs) -> [C64; 3] {
        let c = self.c;
        let (s, sp) = (|x| self.s(x), |x| self.sp(x));
        let (u1, u2, upp, p) = (a.u1, a.u2, a.upp, a.p);
        let u = u1 - u2;
        let one = s(re(1.0));
        let t1 = -s(u + 1.0) * sp(u2 - upp - p + c / 2.0) * s(u + 1.5) * one.powi(2)
            / (s(u) * s(u2 - upp - 0.5 + c / 2.0) * sp(p - 0.5) * s(u + 0.5));
        let t2 = s(u + 1.0) * sp(u1 - upp - p + (c + 1.0) / 2.0) * sp(u + p + 1.0) * one.powi(3)
            / (s(u) * s(u1 - upp + c / 2.0) * sp(p + 0.5) * sp(p - 0.5) * s(u + 0.5));
        let t3 = s(u + 1.0) * s(u1 - upp + 1.0 + c / 2.0) * sp(u2 - upp - p - 1.0 + c / 2.0) * one.powi(2)
            / (s(u) * s(u1 - upp + c / 2.0) * s(u2 - upp - 0.5 + c / 2.0) * sp(p + 0.5));
        [t1, t2, t3]
    }
}

fn draw5(rng: &mut crate::report::Sampler) -> [C64; 5] {
    [0; 5].map(|_| rng.complex(1.5, 0.3))
}

fn args_of(x: &[C64; 5]) -> (FArgs, C64) {
    (FArgs { u1: x[0], u2: x[1], upp: x[3], p: x[4] }, x[2])
}

fn at5(x: &[C64; 5]) -> serde_json::Value {
    let names = ["u1", "u2", "u_prime", "u_dprime", "P"];
    let mut m = serde_json::Map::new();
    for (n, v) in names.iter().zip(x) {
        m.insert((*n).into(), json!([v.re, v.im]));
    }
    serde_json::Value::Object(m)
}

/// F(u') summed, cancellation-normalized.
pub fn weak_zero_residual(app: &AppC, ctx: &Ctx, x: &[C64; 5]) -> Result<f64> {
    let (a, up) = args_of(x);
    let (plain, plus) = app.dens(&a, up);
    clear(ctx, &plain, &plus)?;
    let t = app.symmetrized_terms(&a, up);
    Ok(cancel_ratio(t.iter().sum(), &t))
}

/// Residues of G at its four pole candidates, each normalized by the largest
/// single-term residue there.
pub fn g_residue_residuals(app: &AppC, ctx: &Ctx, x: &[C64; 5]) -> Result<[f64; 4]> {
    let (a, _) = args_of(x);
    let poles = app.g_poles(&a);
    let others: Vec<C64> = poles.iter().copied().chain([a.upp]).collect();
    let mut out = [0.0; 4];
    for (k, &pole) in poles.iter().enumerate() {
        let (plain, plus) = app.dens(&a, pole);
        clear_at_pole(ctx, &plain, &plus)?;
        let avoid: Vec<C64> = others.iter().copied().filter(|o| (o - pole).norm() > 1e-12).collect();
        let per_term = residues_u(|u| app.g_terms(&a, u), pole, &avoid)?;
        let tot: C64 = per_term.iter().sum();
        let big = per_term.iter().map(|t| t.norm()).fold(0.0, f64::max);
        if big == 0.0 || !big.is_finite() {
            return Err(Error::Pole(format!("no single-term residue at candidate {k}")));
        }
        out[k] = tot.norm() / big;
    }
    Ok(out)
}

/// Control: Res_{u'=u''} 1/[u'-u'']* = 1/[0]*'.
pub fn control_residue(ctx: &Ctx, upp: C64) -> Result<f64> {
    let b = Brackets::new(ctx);
    let got = residue_u(|u| 1.0 / b.bs(u - upp), upp, &[])?;
    let want = 1.0 / bracket_slope_at_zero(ctx, true);
    Ok((got - want).norm() / want.abs())
}

/// Normalized residues at u' = u2 + c/2 against the displayed residue terms.
/// `literal`: residues of G's terms with the normalization \oint 1/[-u] = 1.
/// Otherwise: residues of F's terms (no G ratio) with \oint 1/[-u]* = 1.
pub fn displayed_residue_terms_residual(app: &AppC, ctx: &Ctx, x: &[C64; 5], literal: bool) -> Result<f64> {
    let (a, _) = args_of(x);
    let pole = a.u2 + ctx.c / 2.0;
    let (plain, plus) = app.dens(&a, pole);
    clear_at_pole(ctx, &plain, &plus)?;
    let norm = if literal { contour_normalization(ctx) } else { -bracket_slope_at_zero(ctx, true) };
    let avoid: Vec<C64> = app.g_poles(&a).into_iter().chain([a.upp]).filter(|o| (o - pole).norm() > 1e-12).collect();
    // the G ratio is regular and nonzero at u2 + c/2
    let res = residues_u(
        |u| {
            let k = if literal { app.s(u - a.upp - a.p + 1.5) / app.s(u - a.upp) } else { C64::new(1.0, 0.0) };
            app.f_terms(a.u1, a.u2, u, a.upp, a.p).map(|t| t * k * norm)
        },
        pole,
        &avoid,
    )?;
    let disp = app.displayed_residue(&a);
    // terms 1, 2, 4 of F carry the pole; term 3 has none there
    let got = [res[0], res[1], res[3]];
    let mut w = 0.0f64;
    for i in 0..3 {
        w = w.max((got[i] - disp[i]).norm() / got[i].norm().max(disp[i].norm()));
    }
    Ok(w.max(res[2].norm() / got.iter().map(|g| g.norm()).fold(0.0, f64::max)))
}

/// Quasi-periodicity in u' of the first half A(u') = sum of F's terms.
/// `printed`: A(u'+r*) = A(u'), A(u'+tau* r*) = -e^{-2 pi i (P-3/2)/r} A(u').
/// Otherwise A(u'+r*) = -A(u'), A(u'+tau* r*) = e^{-2 pi i (P-3/2)/r*} A(u').
pub fn quasi_periodicity_residual(app: &AppC, ctx: &Ctx, x: &[C64; 5], printed: bool) -> Result<f64> {
    let (a, up) = args_of(x);
    let (plain, plus) = app.dens(&a, up);
    clear(ctx, &plain, &plus)?;
    let big_a = |v: C64| -> C64 { app.f_terms(a.u1, a.u2, v, a.upp, a.p).iter().sum() };
    let base = big_a(up);
    let i2pi = C64::new(0.0, -2.0 * PI);
    let (m_r, m_tau) = if printed {
        (re(1.0), -(i2pi * (a.p - 1.5) / ctx.r).exp())
    } else {
        (re(-1.0), (i2pi * (a.p - 1.5) / ctx.r_star).exp())
    };
    let shift_tau = ctx.tau_star * ctx.r_star;
    let e1 = big_a(up + ctx.r_star) - m_r * base;
    let e2 = big_a(up + shift_tau) - m_tau * base;
    Ok((e1.norm().max(e2.norm())) / base.norm())
}

// ---- checks ----

pub const PAPER_HC6: &str = "thm:HC proof of rel:HC6: \"$[u_1-u'+c/2+1]^*[u_2-u'-P+(c-1)/2]_+^*\\cdots$\" three-term theta identity";
pub const PAPER_RIEMANN: &str =
    "App. C \"$[u+x]^*[u-x]^*[v+y]_+^*[v-y]_+^*-\\cdots=-[x-y]^*[x+y]^*[u+v]_+^*[u-v]_+^*$\"";
pub const PAPER_WEAK: &str = "App. C \"$F(u_1,u_2,u',u'',L)\\sim 0$\" via \"$F(u')=F(u_1,u_2,u',u'',L)+h(u''-u')F(u_1,u_2,u'',u',L)$\"";
pub const PAPER_G: &str = "App. C \"$G(u')=F(u')\\frac{[u'-u''-P+3/2]^*}{[u'-u'']^*}$\", poles \"$u'=u_1+c/2,\\ u_2+c/2, u''+1/2, u''-1$\"";
pub const PAPER_RES: &str = "App. C \"${\\rm Res}_{u'=u_2+c/2}G(u')\\frac{dz'}{2\\pi i z'}$\" (three displayed terms)";
pub const PAPER_NORM: &str = "contour normalization \"$\\oint_{C_0}\\frac{dz}{2\\pi i z}\\frac{1}{[-u]}=1$\"";
pub const PAPER_QP: &str = "App. C \"$F(u'+\\tau^* r^*)=-e^{-\\frac{2\\pi i}{r}(P-3/2)}F(u')$\", \"$F(u'+r^*)=F(u')$\"";

fn run5(
    name: &str,
    paper_ref: &str,
    ctx: &Ctx,
    rp: &RunParams,
    tol: f64,
    extra: serde_json::Value,
    f: impl Fn(&[C64; 5]) -> Result<f64>,
) -> CheckReport {
    let mut rng = rp.sampler(name);
    let (worst, skipped) = sample_worst(rp.n_samples, || draw5(&mut rng), f, at5);
    let mut det = json!({"pole_resamples": skipped});
    if let (serde_json::Value::Object(d), serde_json::Value::Object(e)) = (&mut det, extra) {
        d.extend(e);
    }
    CheckReport::from_worst(name, paper_ref, Params::ctx(ctx), rp.n_samples, worst, rp.tol(tol), det)
}

pub fn check_hc6_identity(ctx: &Ctx, rp: &RunParams) -> CheckReport {
    run5("identities.hc6", PAPER_HC6, ctx, rp, 1e-10, json!({}), |x| hc6_residual(ctx, x[0], x[1], x[2], x[4], false))
}

pub fn check_riemann_identity(ctx: &Ctx, rp: &RunParams) -> CheckReport {
    run5("identities.riemann", PAPER_RIEMANN, ctx, rp, 1e-10, json!({}), |x| {
        riemann_residual(ctx, x[0], x[1], x[2], x[3], false)
    })
}

pub fn check_appc_weak_zero(ctx: &Ctx, rp: &RunParams) -> CheckReport {
    let app = AppC::new(ctx, FReading::Cubed);
    run5("identities.weak_zero", PAPER_WEAK, ctx, rp, 1e-9, json!({"second_term": "[1]*^3"}), |x| {
        weak_zero_residual(&app, ctx, x)
    })
}

/// F with the second term's [1]* to the first power, as printed.
pub fn check_appc_weak_zero_as_printed(ctx: &Ctx, rp: &RunParams) -> CheckReport {
    let app = AppC::new(ctx, FReading::AsPrinted);
    run5("identities.weak_zero_as_printed", PAPER_WEAK, ctx, rp, 1e-9, json!({"second_term": "[1]*"}), |x| {
        weak_zero_residual(&app, ctx, x)
    })
}

pub fn check_g_residues(ctx: &Ctx, rp: &RunParams) -> CheckReport {
    let name = "identities.g_residues";
    let app = AppC::new(ctx, FReading::Cubed);
    let n = rp.n_samples.div_ceil(4).max(8);
    let mut rng = rp.sampler(name);
    let labels = ["u1+c/2", "u2+c/2", "u''+1/2", "u''-1"];
    let mut worst = Worst::default();
    let mut skipped = 0;
    let mut ctrl = Worst::default();
    for (k, label) in labels.iter().enumerate() {
        let (w, s) = sample_worst(
            n,
            || draw5(&mut rng),
            |x| g_residue_residuals(&app, ctx, x).map(|r| r[k]),
            |x| json!({"pole": label, "at": at5(x)}),
        );
        worst.merge(w);
        skipped += s;
    }
    let (w, _) = sample_worst(4, || rng.complex(1.5, 0.3), |u| control_residue(ctx, *u), |u| json!([u.re, u.im]));
    ctrl.merge(w);
    worst.push(ctrl.max, || json!({"pole": "control 1/[u'-u'']*"}));
    CheckReport::from_worst(
        name,
        PAPER_G,
        Params::ctx(ctx),
        n * labels.len(),
        worst,
        rp.tol(1e-9),
        json!({"pole_resamples": skipped, "control_residual": ctrl.max, "poles": labels}),
    )
}

pub fn check_displayed_residue_sum(ctx: &Ctx, rp: &RunParams) -> CheckReport {
    let app = AppC::new(ctx, FReading::Cubed);
    run5("identities.displayed_residue_sum", PAPER_RES, ctx, rp, 1e-9, json!({}), |x| {
        let (a, _) = args_of(x);
        let c = ctx.c;
        clear(
            ctx,
            &[a.u1 - a.u2, a.u1 - a.u2 + 0.5, a.u2 - a.upp - 0.5 + c / 2.0, a.u1 - a.upp + c / 2.0],
            &[a.p - 0.5, a.p + 0.5],
        )?;
        let t = app.displayed_residue(&a);
        Ok(cancel_ratio(t.iter().sum(), &t))
    })
}

pub fn check_displayed_residue_terms(ctx: &Ctx, rp: &RunParams) -> CheckReport {
    let app = AppC::new(ctx, FReading::Cubed);
    run5(
        "identities.displayed_residue_terms",
        PAPER_NORM,
        ctx,
        rp,
        1e-9,
        json!({"normalization": -bracket_slope_at_zero(ctx, false), "function": "G"}),
        |x| displayed_residue_terms_residual(&app, ctx, x, true),
    )
}

pub fn check_displayed_residue_terms_starred(ctx: &Ctx, rp: &RunParams) -> CheckReport {
    let app = AppC::new(ctx, FReading::Cubed);
    run5(
        "identities.displayed_residue_terms_starred",
        PAPER_RES,
        ctx,
        rp,
        1e-9,
        json!({"normalization": -bracket_slope_at_zero(ctx, true), "function": "F"}),
        |x| displayed_residue_terms_residual(&app, ctx, x, false),
    )
}

pub fn check_quasi_periodicity(ctx: &Ctx, rp: &RunParams) -> CheckReport {
    let app = AppC::new(ctx, FReading::Cubed);
    run5("identities.quasi_periodicity", PAPER_QP, ctx, rp, 1e-9, json!({"form": "as printed"}), |x| {
        quasi_periodicity_residual(&app, ctx, x, true)
    })
}

pub fn check_quasi_periodicity_star(ctx: &Ctx, rp: &RunParams) -> CheckReport {
    let app = AppC::new(ctx, FReading::Cubed);
    run5(
        "identities.quasi_periodicity_star",
        PAPER_QP,
        ctx,
        rp,
        1e-9,
        json!({"form": "A(u'+r*) = -A(u'), multiplier e^{-2 pi i (P-3/2)/r*}"}),
        |x| quasi_periodicity_residual(&app, ctx, x, false),
    )
}

/// Trapezoid sanity: z^k, Cauchy kernel, doubling stability.
pub fn check_contour_calibration(ctx: &Ctx, rp: &RunParams) -> CheckReport {
    let name = "identities.contour_calibration";
    let run = || -> Result<Worst> {
        let mut w = Worst::default();
        let spec = ContourSpec::new(re(0.0), 1.3, 64)?;
        for k in -3i32..=3 {
            let (v, d) = contour_integral_checked(|z| z.powi(k), &spec)?;
            let want = if k == 0 { 1.0 } else { 0.0 };
            w.push((v - want).norm().max(d), || json!({"case": "z^k", "k": k}));
        }
        let a = C64::new(0.4, -0.3);
        let (v, d) = contour_integral_checked(|z| z / (z - a), &spec)?;
        w.push((v - 1.0).norm().max(d), || json!({"case": "cauchy"}));
        // \oint dz/(2 pi i z) 1/[-u] around z = 1 equals -[0]' Res_u
        let b = Brackets::new(ctx);
        let zspec = ContourSpec::new(re(1.0), 0.05, 128)?;
        let (v, d) = contour_integral_checked(|z| 1.0 / b.b(-(z.ln() / (2.0 * ctx.lq))), &zspec)?;
        let want = 2.0 * ctx.lq * residue_u(|u| 1.0 / b.b(-u), re(0.0), &[])?;
        w.push(((v - want).norm() / want.norm()).max(d), || json!({"case": "z-plane vs u-plane"}));
        let normalized = contour_normalization(ctx) * residue_u(|u| 1.0 / b.b(-u), re(0.0), &[])?;
        w.push((normalized - 1.0).norm(), || json!({"case": "normalization"}));
        Ok(w)
    };
    match run() {
        Ok(w) => CheckReport::from_worst(name, PAPER_NORM, Params::ctx(ctx), 11, w, rp.tol(1e-10), json!({})),
        Err(e) => CheckReport::errored(name, PAPER_NORM, Params::ctx(ctx), e),
    }
}
