//! Exchange relations as data: the two currents, the claimed scalar and its anchor.

use super::current::{Algebra, Current};
use crate::context::Ctx;
use crate::error::{Error, Result};
use crate::qseries::{poch1, theta_p, Brackets, PochFactor};
use crate::structfuncs::{chi, mu, rho};
use crate::C64;

/// Which ratio a product factor is written in.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Var {
    /// z1/z2 = 1/x
    Z1Z2,
    /// z2/z1 = x
    Z2Z1,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Base {
    P,
    PStar,
}

/// (pre q^{qexp} v; base)_inf^{power}, pre = base or 1.
#[derive(Debug, Clone, PartialEq)]
pub struct Factor {
    pub var: Var,
    pub base: Base,
    pub with_base: bool,
    pub qexp: f64,
    pub power: i32,
}

impl Factor {
    fn base_val(&self, ctx: &Ctx) -> f64 {
        match self.base {
            Base::P => ctx.p,
            Base::PStar => ctx.p_star,
        }
    }

    pub fn coefficient(&self, ctx: &Ctx) -> f64 {
        let b = self.base_val(ctx);
        ctx.q.powf(self.qexp) * if self.with_base { b } else { 1.0 }
    }

    pub fn eval(&self, ctx: &Ctx, z1: C64, z2: C64) -> C64 {
        let v = match self.var {
            Var::Z1Z2 => z1 / z2,
            Var::Z2Z1 => z2 / z1,
        };
        poch1(v * self.coefficient(ctx), self.base_val(ctx)).powi(self.power)
    }

    pub fn poch_factor(&self, ctx: &Ctx) -> PochFactor {
        PochFactor {
            a: C64::new(self.coefficient(ctx), 0.0),
            bases: vec![C64::new(self.base_val(ctx), 0.0)],
            power: self.power,
        }
    }
}

pub type ClosedForm = Box<dyn Fn(&Ctx, C64, C64) -> Result<C64> + Send + Sync>;

pub enum Claim {
    /// One-sided q-Pochhammer products in z1/z2 and z2/z1.
    Product(Vec<Factor>),
    /// Theta/bracket closed form in (u1, u2).
    Closed(ClosedForm),
}

impl Claim {
    pub fn eval(&self, ctx: &Ctx, u1: C64, u2: C64) -> Result<C64> {
        match self {
            Claim::Product(fs) => {
                let (z1, z2) = (ctx.z_of(u1), ctx.z_of(u2));
                Ok(fs.iter().map(|f| f.eval(ctx, z1, z2)).product())
            }
            Claim::Closed(f) => f(ctx, u1, u2),
        }
    }
}

pub struct Relation {
    pub id: &'static str,
    pub paper_ref: &'static str,
    pub alg: Algebra,
    pub left: Current,
    pub right: Current,
    pub claim: Claim,
}

impl Relation {
    pub fn computed(&self, u1: C64, u2: C64) -> Result<C64> {
        self.alg.exchange(&self.left, &self.right, u1, u2)
    }

    pub fn claimed(&self, u1: C64, u2: C64) -> Result<C64> {
        self.claim.eval(&self.alg.ctx, u1, u2)
    }

    pub fn is_product(&self) -> bool {
        matches!(self.claim, Claim::Product(_))
    }
}

fn f(var: Var, base: Base, with_base: bool, qexp: f64, power: i32) -> Factor {
    Factor { var, base, with_base, qexp, power }
}

/// numerator/denominator lists with a shared (var, base, with_base)
fn frac(var: Var, base: Base, with_base: bool, num: &[f64], den: &[f64]) -> Vec<Factor> {
    num.iter()
        .map(|&e| f(var, base, with_base, e, 1))
        .chain(den.iter().map(|&e| f(var, base, with_base, e, -1)))
        .collect()
}

fn cat(parts: Vec<Vec<Factor>>) -> Claim {
    Claim::Product(parts.into_iter().flatten().collect())
}

fn closed(f: impl Fn(&Ctx, C64, C64) -> Result<C64> + Send + Sync + 'static) -> Claim {
    Claim::Closed(Box::new(f))
}

fn th(z: C64, p: f64) -> Result<C64> {
    theta_p(z, p)
}

fn qz(ctx: &Ctx, e: f64, u1: C64, u2: C64) -> C64 {
    ctx.qpow(C64::new(e, 0.0) + 2.0 * (u1 - u2))
}

/// The catalog at `ctx`. Free-field entries (level-one currents, vertex
/// operators) are built at c = 1 whatever `ctx.c` is.
pub fn catalog(ctx: &Ctx) -> Result<Vec<Relation>> {
    use Base::{PStar, P};
    use Var::{Z1Z2, Z2Z1};
    let al = Algebra::new(ctx);
    let al1 = Algebra::new(&ctx.at_level(1.0)?);
    let (c, r, rs) = (ctx.c, ctx.r, ctx.r_star);
    let mut out = Vec::new();
    let mut push = |id, paper_ref, alg: &Algebra, left: Current, right: Current, claim| {
        out.push(Relation { id, paper_ref, alg: alg.clone(), left, right, claim })
    };

    // one-sided products
    push(
        "u_plus.u_minus",
        "Prop (u^\\pm): \"$u^+(z_1,p)u^-(z_2,p)$\"; The following commutation relations hold.",
        &al,
        al.u_plus(),
        al.u_minus(),
        cat(vec![
            frac(Z1Z2, P, true, &[-c - 2.0, -c + 1.0], &[-c + 2.0, -c - 1.0]),
            frac(Z1Z2, PStar, true, &[c + 2.0, c - 1.0], &[c - 2.0, c + 1.0]),
        ]),
    );
    push(
        "u_plus.x_plus",
        "Prop (u^\\pm): \"$u^+(z_1,p)x^+(z_2)$\"",
        &al,
        al.u_plus(),
        al.x_plus(),
        cat(vec![frac(Z1Z2, PStar, true, &[2.0, -1.0], &[-2.0, 1.0])]),
    );
    push(
        "u_plus.x_minus",
        "Prop (u^\\pm): \"$u^+(z_1,p)x^-(z_2)$\"",
        &al,
        al.u_plus(),
        al.x_minus(),
        cat(vec![frac(Z1Z2, PStar, true, &[c - 2.0, c + 1.0], &[c + 2.0, c - 1.0])]),
    );
    push(
        "u_minus.x_plus",
        "Prop (u^\\pm): \"$u^-(z_1,p)x^+(z_2)$\"",
        &al,
        al.u_minus(),
        al.x_plus(),
        cat(vec![frac(Z2Z1, P, true, &[-c - 2.0, -c + 1.0], &[-c + 2.0, -c - 1.0])]),
    );
    push(
        "u_minus.x_minus",
        "Prop (u^\\pm): \"$u^-(z_1,p)x^-(z_2)$\"",
        &al,
        al.u_minus(),
        al.x_minus(),
        cat(vec![frac(Z2Z1, P, true, &[2.0, -1.0], &[-2.0, 1.0])]),
    );
    push(
        "psi.u_plus",
        "Prop (u^\\pm): \"$\\psi(z_1,p)u^+(z_2,p)$\"",
        &al,
        al.psi(),
        al.u_plus(),
        cat(vec![
            frac(Z2Z1, P, false, &[rs + 2.0, rs - 1.0], &[rs - 2.0, rs + 1.0]),
            frac(Z2Z1, PStar, false, &[rs - 2.0, rs + 1.0], &[rs + 2.0, rs - 1.0]),
        ]),
    );
    push(
        "psi.u_minus",
        "Prop (u^\\pm): \"$\\psi(z_1,p)u^-(z_2,p)$\"",
        &al,
        al.psi(),
        al.u_minus(),
        cat(vec![
            frac(Z1Z2, P, false, &[r - 2.0, r + 1.0], &[r + 2.0, r - 1.0]),
            frac(Z1Z2, PStar, false, &[r + 2.0, r - 1.0], &[r - 2.0, r + 1.0]),
        ]),
    );
    push(
        "psi.x_plus",
        "Prop (u^\\pm): \"$\\psi(z_1,p)x^+(z_2)$\"",
        &al,
        al.psi(),
        al.x_plus(),
        cat(vec![
            frac(Z2Z1, P, false, &[rs - 2.0, rs + 1.0], &[rs + 2.0, rs - 1.0]),
            frac(Z1Z2, PStar, false, &[rs + 2.0, rs - 1.0], &[rs - 2.0, rs + 1.0]),
        ]),
    );
    push(
        "psi.x_minus",
        "Prop (u^\\pm): \"$\\psi(z_1,p)x^-(z_2)$\"",
        &al,
        al.psi(),
        al.x_minus(),
        cat(vec![
            frac(Z2Z1, P, false, &[r + 2.0, r - 1.0], &[r - 2.0, r + 1.0]),
            frac(Z1Z2, PStar, false, &[r - 2.0, r + 1.0], &[r + 2.0, r - 1.0]),
        ]),
    );
    push(
        "k.u_plus",
        "Prop (k): \"$k(z_1,p)u^+(z_2,p)$\"; We define the current $k(z)$",
        &al,
        al.k(),
        al.u_plus(),
        cat(vec![
            frac(Z2Z1, P, false, &[rs + 1.0], &[rs - 1.0]),
            frac(Z2Z1, PStar, false, &[rs - 1.0], &[rs + 1.0]),
        ]),
    );
    push(
        "k.u_minus",
        "Prop (k): \"$k(z_1,p)u^-(z_2,p)$\"",
        &al,
        al.k(),
        al.u_minus(),
        cat(vec![
            frac(Z1Z2, P, false, &[r - 1.0], &[r + 1.0]),
            frac(Z1Z2, PStar, false, &[r + 1.0], &[r - 1.0]),
        ]),
    );
    push(
        "k.x_plus",
        "Prop (k): \"$k(z_1,p)x^+(z_2)$\"",
        &al,
        al.k(),
        al.x_plus(),
        cat(vec![
            frac(Z1Z2, PStar, false, &[rs + 1.0], &[rs - 1.0]),
            frac(Z2Z1, P, false, &[rs - 1.0], &[rs + 1.0]),
        ]),
    );
    push(
        "k.x_minus",
        "Prop (k): \"$k(z_1,p)x^-(z_2)$\"",
        &al,
        al.k(),
        al.x_minus(),
        cat(vec![
            frac(Z1Z2, PStar, false, &[r - 1.0], &[r + 1.0]),
            frac(Z2Z1, P, false, &[r + 1.0], &[r - 1.0]),
        ]),
    );

    // theta ratios: dressed currents and k
    push(
        "psi.psi",
        "Prop (dressed): \"$\\psi(z_1,p)\\psi(z_2,p)$\"; define ``dressed'' currents",
        &al,
        al.psi(),
        al.psi(),
        closed(|ctx, u1, u2| {
            let t = |e: f64, p: f64| th(qz(ctx, e, u1, u2), p);
            let (p, ps) = (ctx.p, ctx.p_star);
            Ok(t(-2.0, p)? * t(1.0, p)? / (t(2.0, p)? * t(-1.0, p)?) * t(2.0, ps)? * t(-1.0, ps)?
                / (t(-2.0, ps)? * t(1.0, ps)?))
        }),
    );
    push(
        "psi.e",
        "Prop (dressed): \"$\\psi(z_1,p)e(z_2,p)$\"",
        &al,
        al.psi(),
        al.e(),
        closed(|ctx, u1, u2| {
            let (rs, ps) = (ctx.r_star, ctx.p_star);
            let t = |e: f64| th(qz(ctx, rs + e, u1, u2), ps);
            Ok(t(2.0)? * t(-1.0)? / (t(-2.0)? * t(1.0)?))
        }),
    );
    push(
        "psi.f",
        "Prop (dressed): \"$\\psi(z_1,p)f(z_2,p)$\"",
        &al,
        al.psi(),
        al.f(),
        closed(|ctx, u1, u2| {
            let (r, p) = (ctx.r, ctx.p);
            let t = |e: f64| th(qz(ctx, r + e, u1, u2), p);
            Ok(t(-2.0)? * t(1.0)? / (t(2.0)? * t(-1.0)?))
        }),
    );
    push(
        "e.e",
        "Prop (dressed): \"$e(z_1,p)e(z_2,p)$\"",
        &al,
        al.e(),
        al.e(),
        closed(|ctx, u1, u2| {
            let ps = ctx.p_star;
            let t = |e: f64, a: C64, b: C64| th(qz(ctx, e, a, b), ps);
            Ok(-t(-2.0, u2, u1)? * t(-1.0, u1, u2)? / (t(-2.0, u1, u2)? * t(-1.0, u2, u1)?))
        }),
    );
    push(
        "f.f",
        "Prop (dressed): \"$f(z_1,p)f(z_2,p)$\"",
        &al,
        al.f(),
        al.f(),
        closed(|ctx, u1, u2| {
            let p = ctx.p;
            let t = |e: f64, a: C64, b: C64| th(qz(ctx, e, a, b), p);
            Ok(-t(2.0, u2, u1)? * t(1.0, u1, u2)? / (t(2.0, u1, u2)? * t(1.0, u2, u1)?))
        }),
    );
    push(
        "k.k",
        "Prop (k,e,f): \"$k(z_1,p)k(z_2,p)=z^{-1/r^*+1/r}\\rho(z_1/z_2)$\"",
        &al,
        al.k(),
        al.k(),
        closed(|ctx, u1, u2| {
            let u = u1 - u2;
            Ok(ctx.qpow(2.0 * u * (1.0 / ctx.r - 1.0 / ctx.r_star)) * rho(u, ctx)?)
        }),
    );
    push(
        "k.e",
        "Prop (k,e,f): \"$\\frac{\\Theta_{p^*}(q^{r^*+1}z_1/z_2)}{\\Theta_{p^*}(q^{r^*-1}z_1/z_2)}$\"",
        &al,
        al.k(),
        al.e(),
        closed(|ctx, u1, u2| {
            let (rs, ps) = (ctx.r_star, ctx.p_star);
            Ok(th(qz(ctx, rs + 1.0, u1, u2), ps)? / th(qz(ctx, rs - 1.0, u1, u2), ps)?)
        }),
    );
    push(
        "k.f",
        "Prop (k,e,f): \"$\\frac{\\Theta_{p}(q^{r-1}z_1/z_2)}{\\Theta_{p}(q^{r+1}z_1/z_2)}$\"",
        &al,
        al.k(),
        al.f(),
        closed(|ctx, u1, u2| {
            let (r, p) = (ctx.r, ctx.p);
            Ok(th(qz(ctx, r - 1.0, u1, u2), p)? / th(qz(ctx, r + 1.0, u1, u2), p)?)
        }),
    );

    // total currents, both realizations of E and F
    let ea = |al: &Algebra, tag: &'static str| -> Vec<(&'static str, Current, Current, Claim)> {
        let (e, fc) = if tag == "ff" {
            (al.e_level1(), al.f_level1())
        } else {
            (al.big_e(), al.big_f())
        };
        let k = al.big_k();
        vec![
            ("def:EA1", k.clone(), k.clone(), closed(|ctx, u1, u2| rho(u1 - u2, ctx))),
            (
                "def:EA2",
                k.clone(),
                e.clone(),
                closed(|ctx, u1, u2| {
                    let b = Brackets::new(ctx);
                    let (u, rs) = (u1 - u2, ctx.r_star);
                    Ok(-b.bs(u + (rs + 1.0) / 2.0) / b.bs(u + (rs - 1.0) / 2.0))
                }),
            ),
            (
                "def:EA3",
                k,
                fc.clone(),
                closed(|ctx, u1, u2| {
                    let b = Brackets::new(ctx);
                    let (u, r) = (u1 - u2, ctx.r);
                    Ok(-b.b(u + (r - 1.0) / 2.0) / b.b(u + (r + 1.0) / 2.0))
                }),
            ),
            (
                "def:EA4",
                e.clone(),
                e,
                closed(|ctx, u1, u2| {
                    let b = Brackets::new(ctx);
                    let u = u1 - u2;
                    Ok(-b.bs(u + 1.0) * b.bs(u - 0.5) / (b.bs(u - 1.0) * b.bs(u + 0.5)))
                }),
            ),
            (
                "def:EA5",
                fc.clone(),
                fc,
                closed(|ctx, u1, u2| {
                    let b = Brackets::new(ctx);
                    let u = u1 - u2;
                    Ok(-b.b(u - 1.0) * b.b(u + 0.5) / (b.b(u + 1.0) * b.b(u - 0.5)))
                }),
            ),
        ]
    };
    const EA_REF: [&str; 5] = [
        "def:EA1 \"$K(z_1)K(z_2)=\\rho(z_1/z_2)K(z_2)K(z_1)$\"",
        "def:EA2 \"$-\\frac{[u_1-u_2+\\frac{r^*+1}{2}]^*}{[u_1-u_2+\\frac{r^*-1}{2}]^*}$\"",
        "def:EA3 \"$-\\frac{[u_1-u_2+\\frac{r-1}{2}]}{[u_1-u_2+\\frac{r+1}{2}]}$\"",
        "def:EA4 \"$E(z_1)E(z_2)=-\\frac{[u_1-u_2+1]^*[u_1-u_2-\\frac{1}{2}]^*}{...}$\"",
        "def:EA5 \"$F(z_1)F(z_2)=-\\frac{[u_1-u_2-1][u_1-u_2+\\frac{1}{2}]}{...}$\"",
    ];
    const EA_IDS_FF: [&str; 5] =
        ["def:EA1@level1", "def:EA2@level1", "def:EA3@level1", "def:EA4@level1", "def:EA5@level1"];
    for (i, (id, l, rr, cl)) in ea(&al, "").into_iter().enumerate() {
        push(id, EA_REF[i], &al, l, rr, cl);
    }
    for (i, (_, l, rr, cl)) in ea(&al1, "ff").into_iter().enumerate() {
        push(EA_IDS_FF[i], EA_REF[i], &al1, l, rr, cl);
    }

    // auxiliary K currents
    let (kp, k0, km) = (al.k_plus(), al.k_zero(), al.k_minus());
    let (e, fc) = (al.big_e(), al.big_f());
    push(
        "rel:EA1",
        "rel:EA1 \"$K_+(z_1)E(z_2)=-\\frac{[u_1-u_2+\\frac{c-1}{2}]^*}{[u_1-u_2+\\frac{c-3}{2}]^*}$\"",
        &al,
        kp.clone(),
        e.clone(),
        closed(|ctx, u1, u2| {
            let b = Brackets::new(ctx);
            let (u, c) = (u1 - u2, ctx.c);
            Ok(-b.bs(u + (c - 1.0) / 2.0) / b.bs(u + (c - 3.0) / 2.0))
        }),
    );
    push(
        "rel:EA2",
        "rel:EA2 \"$K_0(z_1)E(z_2)=\\frac{[u_1-u_2+\\frac{c}{2}]^*[u_1-u_2+\\frac{c-1}{2}]^*}{...}$\"",
        &al,
        k0.clone(),
        e.clone(),
        closed(|ctx, u1, u2| {
            let b = Brackets::new(ctx);
            let (u, c) = (u1 - u2, ctx.c);
            Ok(b.bs(u + c / 2.0) * b.bs(u + (c - 1.0) / 2.0)
                / (b.bs(u + c / 2.0 - 1.0) * b.bs(u + (c + 1.0) / 2.0)))
        }),
    );
    push(
        "rel:EA3",
        "rel:EA3 \"$K_-(z_1)E(z_2)=-\\frac{[u_1-u_2+\\frac{c}{2}]^*}{[u_1-u_2+\\frac{c}{2}+1]^*}$\"",
        &al,
        km.clone(),
        e,
        closed(|ctx, u1, u2| {
            let b = Brackets::new(ctx);
            let (u, c) = (u1 - u2, ctx.c);
            Ok(-b.bs(u + c / 2.0) / b.bs(u + c / 2.0 + 1.0))
        }),
    );
    push(
        "rel:EA4",
        "rel:EA4 \"$K_+(z_1)F(z_2)=-\\frac{[u_1-u_2-\\frac{3}{2}]}{[u_1-u_2-\\frac{1}{2}]}$\"",
        &al,
        kp.clone(),
        fc.clone(),
        closed(|ctx, u1, u2| {
            let b = Brackets::new(ctx);
            let u = u1 - u2;
            Ok(-b.b(u - 1.5) / b.b(u - 0.5))
        }),
    );
    push(
        "rel:EA5",
        "rel:EA5 \"$K_0(z_1)F(z_2)=\\frac{[u_1-u_2-1][u_1-u_2+\\frac{1}{2}]}{[u_1-u_2][u_1-u_2-\\frac{1}{2}]}$\"",
        &al,
        k0.clone(),
        fc.clone(),
        closed(|ctx, u1, u2| {
            let b = Brackets::new(ctx);
            let u = u1 - u2;
            Ok(b.b(u - 1.0) * b.b(u + 0.5) / (b.b(u) * b.b(u - 0.5)))
        }),
    );
    push(
        "rel:EA6",
        "rel:EA6 \"$K_-(z_1)F(z_2)=-\\frac{[u_1-u_2+1]}{[u_1-u_2]}$\"",
        &al,
        km.clone(),
        fc,
        closed(|ctx, u1, u2| {
            let b = Brackets::new(ctx);
            let u = u1 - u2;
            Ok(-b.b(u + 1.0) / b.b(u))
        }),
    );

    // half-current K relations
    push(
        "rel:HC1+",
        "rel:HC1 \"$K_+(u_1)K_+(u_2)=\\rho(u_1-u_2)K_+(u_2)K_+(u_1)$\"; The half currents satisfy the following relations.",
        &al,
        kp.clone(),
        kp.clone(),
        closed(|ctx, u1, u2| rho(u1 - u2, ctx)),
    );
    push(
        "rel:HC1-",
        "rel:HC1 \"$K_-(u_1)K_-(u_2)=\\rho(u_1-u_2)K_-(u_2)K_-(u_1)$\"",
        &al,
        km.clone(),
        km.clone(),
        closed(|ctx, u1, u2| rho(u1 - u2, ctx)),
    );
    push(
        "rel:HC2",
        "rel:HC2 \"$\\frac{\\rho(u)\\rho(u)}{\\rho(u+\\frac{1}{2})\\rho(u-\\frac{1}{2})}$\"",
        &al,
        k0.clone(),
        k0.clone(),
        closed(|ctx, u1, u2| {
            let u = u1 - u2;
            let r0 = rho(u, ctx)?;
            Ok(r0 * r0 / (rho(u + 0.5, ctx)? * rho(u - 0.5, ctx)?))
        }),
    );
    push(
        "rel:HC3",
        "rel:HC3 \"$K_-(u_1)K_+(u_2)$\" with \"$\\frac{[u+1][u+\\frac{3}{2}][u]^*[u+\\frac{1}{2}]^*}{...}$\"",
        &al,
        km.clone(),
        kp.clone(),
        closed(|ctx, u1, u2| {
            let b = Brackets::new(ctx);
            let u = u1 - u2;
            Ok(rho(u, ctx)? * b.b(u + 1.0) * b.b(u + 1.5) * b.bs(u) * b.bs(u + 0.5)
                / (b.b(u) * b.b(u + 0.5) * b.bs(u + 1.0) * b.bs(u + 1.5)))
        }),
    );
    push(
        "rel:HC4",
        "rel:HC4 \"$K_-(u_1)K_0(u_2)$\" with \"$\\frac{[u]^*[u+1]}{[u+1]^*[u]}$\"",
        &al,
        km,
        k0.clone(),
        closed(|ctx, u1, u2| {
            let b = Brackets::new(ctx);
            let u = u1 - u2;
            Ok(rho(u, ctx)? * b.bs(u) * b.b(u + 1.0) / (b.bs(u + 1.0) * b.b(u)))
        }),
    );
    push(
        "rel:HC5",
        "rel:HC5 \"$K_0(u_1)K_+(u_2)$\" with \"$\\frac{[u]^*[u+1]}{[u+1]^*[u]}$\"",
        &al,
        k0,
        kp,
        closed(|ctx, u1, u2| {
            let b = Brackets::new(ctx);
            let u = u1 - u2;
            Ok(rho(u, ctx)? * b.bs(u) * b.b(u + 1.0) / (b.bs(u + 1.0) * b.b(u)))
        }),
    );

    // level one: vertex operators
    let (phi, psis, e1, f1) =
        (al1.phi_minus(), al1.psi_star_minus(), al1.e_level1(), al1.f_level1());
    push(
        "rel:Type-I8",
        "rel:Type-I8 \"$-\\frac{[u_1-u_2+1/2]}{[u_1-u_2-1/2]}$\"",
        &al1,
        phi.clone(),
        f1.clone(),
        closed(|ctx, u1, u2| {
            let b = Brackets::new(ctx);
            let u = u1 - u2;
            Ok(-b.b(u + 0.5) / b.b(u - 0.5))
        }),
    );
    push(
        "rel:Type-II3",
        "rel:Type-II3 \"$\\Psi_-^*(u_1)E(u_2)$\" with \"$-\\frac{[u_1-u_2-1/2]^*}{[u_1-u_2+1/2]^*}$\"",
        &al1,
        psis.clone(),
        e1.clone(),
        closed(|ctx, u1, u2| {
            let b = Brackets::new(ctx);
            let u = u1 - u2;
            Ok(-b.bs(u - 0.5) / b.bs(u + 0.5))
        }),
    );
    push(
        "Type-I5",
        "level-one \"$\\Phi_-(u_1)E(u_2)=E(u_2)\\Phi_-(u_1)$\"",
        &al1,
        phi.clone(),
        e1,
        closed(|_, _, _| Ok(C64::new(1.0, 0.0))),
    );
    push(
        "Type-II2",
        "level-one \"$\\Psi_-^*(u_1)F(u_2)=F(u_2)\\Psi_-^*(u_1)$\"",
        &al1,
        psis.clone(),
        f1,
        closed(|_, _, _| Ok(C64::new(1.0, 0.0))),
    );
    push(
        "Phi_Psi_chi",
        "def:chi; The highest components \"$\\Phi_-(u_1)\\Psi_-^*(u_2)=\\chi(u_1-u_2)\\Psi_-^*(u_2)\\Phi_-(u_1)$\"",
        &al1,
        phi.clone(),
        psis.clone(),
        closed(|ctx, u1, u2| chi(u1 - u2, ctx)),
    );
    // Com:Type-I with j1 = j2 = -, where the R-bar entry is 1:
    // Phi(u2)Phi(u1) = mu(u1-u2) Phi(u1)Phi(u2).
    push(
        "Vertexcom:Phi_Phi",
        "thm:Vertexcom \"$R(u,P+h)={\\mu(u)}$\" on Com:Type-I, highest components",
        &al1,
        phi,
        al1.phi_minus(),
        closed(|ctx, u1, u2| mu(u2 - u1, ctx, false)),
    );
    // Com:Type-II: Psi*(u1)Psi*(u2) = Psi*(u2)Psi*(u1) mu*(u1-u2).
    push(
        "Vertexcom:Psi_Psi",
        "thm:Vertexcom \"${R}^*(u,P)={\\mu^*(u)}$\" on Com:Type-II, highest components",
        &al1,
        psis,
        al1.psi_star_minus(),
        closed(|ctx, u1, u2| mu(u1 - u2, ctx, true)),
    );
    Ok(out)
}

pub fn lookup<'a>(cat: &'a [Relation], id: &str) -> Result<&'a Relation> {
    cat.iter().find(|r| r.id == id).ok_or_else(|| Error::Unsupported(format!("unknown relation {id}")))
}
