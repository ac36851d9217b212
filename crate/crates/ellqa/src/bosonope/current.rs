//! Currents as products of boson exponentials, x^± factors and zero-mode words,
//! and the pairwise exchange/contraction calculus between them.

use super::lambert::Lambert;
use super::zeromode::{ZeroModeWord, ZeroSym, ZeroVec};
use crate::context::Ctx;
use crate::error::{param, Error, Result};
use crate::series::PowerSeries;
use crate::C64;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BosonFamily {
    A,
    Alpha,
    Beta,
}

/// [n]_q for real n.
pub fn qint(n: f64, q: f64) -> f64 {
    (q.powf(n) - q.powf(-n)) / (q - 1.0 / q)
}

/// Coefficient A(m) in [X_m, X_{-m}] = A(m).
pub fn mode_commutator(family: BosonFamily, m: i64, ctx: &Ctx) -> Result<f64> {
    if m == 0 {
        return Err(param("m", "zero mode has no oscillator commutator"));
    }
    let q = ctx.q;
    let mf = m as f64;
    let d21 = (qint(2.0 * mf, q) - qint(mf, q)) / mf;
    let cm = qint(ctx.c * mf, q);
    Ok(match family {
        BosonFamily::A => d21 * q.powf(-ctx.c * mf.abs()) * cm,
        BosonFamily::Alpha => d21 * cm * qint(ctx.r * mf, q) / qint(ctx.r_star * mf, q),
        BosonFamily::Beta => d21 * cm * qint(ctx.r_star * mf, q) / qint(ctx.r * mf, q),
    })
}

/// One factor of a current. `Exp` is :exp(sum_m neg(m) a_{-m} z^m + pos(m) a_m z^{-m}):
/// in the a-family; `X` stands for x^±(z) or its inverse.
#[derive(Debug, Clone, PartialEq)]
pub enum Piece {
    Exp { pos: Lambert, neg: Lambert },
    X { plus: bool, inv: bool },
}

#[derive(Debug, Clone, PartialEq)]
pub struct Current {
    pub name: String,
    pub pieces: Vec<(Piece, f64)>,
    pub zero: ZeroModeWord,
}

impl Current {
    pub fn new(name: &str, pieces: Vec<Piece>, zero: Vec<ZeroSym>) -> Self {
        Current {
            name: name.into(),
            pieces: pieces.into_iter().map(|p| (p, 0.0)).collect(),
            zero: ZeroModeWord::new(zero),
        }
    }

    pub fn exp(name: &str, pos: Lambert, neg: Lambert) -> Self {
        Current::new(name, vec![Piece::Exp { pos, neg }], vec![])
    }

    pub fn named(mut self, name: &str) -> Self {
        self.name = name.into();
        self
    }

    /// C(z) -> C(q^{2d} z), i.e. u -> u + d.
    pub fn shifted(&self, d: f64) -> Self {
        Current {
            name: self.name.clone(),
            pieces: self.pieces.iter().map(|(p, s)| (p.clone(), s + d)).collect(),
            zero: self.zero.shifted(d),
        }
    }

    /// Inverse up to the self-contraction constant of the oscillator part.
    pub fn inv(&self) -> Self {
        Current {
            name: format!("{}^-1", self.name),
            pieces: self
                .pieces
                .iter()
                .map(|(p, s)| {
                    let q = match p {
                        Piece::Exp { pos, neg } => Piece::Exp { pos: -pos, neg: -neg },
                        Piece::X { plus, inv } => Piece::X { plus: *plus, inv: !inv },
                    };
                    (q, *s)
                })
                .collect(),
            zero: self.zero.inv(),
        }
    }

    /// Juxtaposition self * o.
    pub fn then(&self, o: &Current) -> Self {
        let mut pieces = self.pieces.clone();
        pieces.extend(o.pieces.iter().cloned());
        Current { name: format!("{}.{}", self.name, o.name), pieces, zero: self.zero.concat(&o.zero) }
    }

    pub fn with_zero(mut self, syms: Vec<ZeroSym>) -> Self {
        self.zero = self.zero.concat(&ZeroModeWord::new(syms));
        self
    }

    pub fn is_pure_exp(&self) -> bool {
        self.pieces.iter().all(|(p, _)| matches!(p, Piece::Exp { .. }))
    }
}

/// Outcome of pairing one piece of L with one piece of R.
#[derive(Debug, Clone, PartialEq)]
pub enum Pairing {
    /// exp(sum x_side(m) x^m) * exp(sum inv_side(m) x^{-m}), x = q^{2(u2 - u1 + d)};
    /// `x_side` alone is the contraction <L R>.
    Series { x_side: Lambert, inv_side: Lambert, d: f64 },
    /// x^± against x^±: only the exchange ratio is tracked.
    Rational { plus: bool, d: f64 },
}

/// Boson content at fixed (q, r, c).
#[derive(Debug, Clone)]
pub struct Algebra {
    pub ctx: Ctx,
    /// (1/m)([2m]-[m]) q^{-cm} [cm], without the 1/m
    a: Lambert,
    gp: Lambert,
    gm: Lambert,
}

impl Algebra {
    pub fn new(ctx: &Ctx) -> Self {
        let q = ctx.q;
        let d21 = Lambert::d21(q);
        let a = if ctx.c == 0.0 {
            Lambert::zero()
        } else {
            &(&d21 * &Lambert::mono(-ctx.c)) * &Lambert::qint(ctx.c, q)
        };
        Algebra { ctx: ctx.clone(), a, gp: &d21 * &Lambert::mono(-ctx.c), gm: -&d21 }
    }

    fn g(&self, plus: bool, inv: bool) -> Lambert {
        let g = if plus { &self.gp } else { &self.gm };
        if inv {
            -g
        } else {
            g.clone()
        }
    }

    pub fn pairings(&self, l: &Current, r: &Current) -> Result<Vec<Pairing>> {
        let mut out = Vec::new();
        for (pl, sl) in &l.pieces {
            for (pr, sr) in &r.pieces {
                let d = sr - sl;
                let p = match (pl, pr) {
                    (Piece::Exp { pos: lp, neg: ln }, Piece::Exp { pos: rp, neg: rn }) => {
                        Pairing::Series {
                            x_side: &(lp * rn) * &self.a,
                            inv_side: -&(&(ln * rp) * &self.a),
                            d,
                        }
                    }
                    (Piece::Exp { pos, neg }, Piece::X { plus, inv }) => {
                        let g = self.g(*plus, *inv);
                        Pairing::Series { x_side: pos * &g, inv_side: neg * &g, d }
                    }
                    (Piece::X { plus, inv }, Piece::Exp { pos, neg }) => {
                        let g = self.g(*plus, *inv);
                        Pairing::Series { x_side: -&(neg * &g), inv_side: -&(pos * &g), d }
                    }
                    (Piece::X { plus: a, inv: false }, Piece::X { plus: b, inv: false })
                        if a == b =>
                    {
                        Pairing::Rational { plus: *a, d }
                    }
                    _ => {
                        return Err(Error::Unsupported(format!(
                            "pairing of x-type pieces in {} and {}",
                            l.name, r.name
                        )))
                    }
                };
                out.push(p);
            }
        }
        Ok(out)
    }

    fn x_of(&self, u1: C64, u2: C64, d: f64) -> C64 {
        self.ctx.qpow(2.0 * (u2 - u1 + d))
    }

    /// phi with L(u1) R(u2) = phi R(u2) L(u1), zero modes included.
    pub fn exchange(&self, l: &Current, r: &Current, u1: C64, u2: C64) -> Result<C64> {
        let q = self.ctx.q;
        let mut v = C64::new(1.0, 0.0);
        for p in self.pairings(l, r)? {
            match p {
                Pairing::Series { x_side, inv_side, d } => {
                    let x = self.x_of(u1, u2, d);
                    v *= x_side.expval(x, q)? * inv_side.expval(x.inv(), q)?;
                }
                Pairing::Rational { plus, d } => {
                    let x = self.x_of(u1, u2, d);
                    let (a, b) = if plus { (q * q, 1.0 / q) } else { (1.0 / (q * q), q) };
                    v *= -(a - x) * (b - x) / ((1.0 - a * x) * (1.0 - b * x));
                }
            }
        }
        Ok(v * l.zero.exchange_log(&r.zero, u1, u2, self.ctx.lq).exp())
    }

    /// Oscillator contraction <L(u1) R(u2)>: the scalar from moving L's
    /// annihilation part past R's creation part. Pure exponentials only.
    pub fn contraction(&self, l: &Current, r: &Current, u1: C64, u2: C64) -> Result<C64> {
        let mut v = C64::new(1.0, 0.0);
        for p in self.pairings(l, r)? {
            match p {
                Pairing::Series { x_side, d, .. } => {
                    v *= x_side.expval(self.x_of(u1, u2, d), self.ctx.q)?;
                }
                Pairing::Rational { .. } => {
                    return Err(Error::Unsupported("contraction of two x-type pieces".into()))
                }
            }
        }
        Ok(v)
    }

    /// log <L R> and log of the reversed contraction as series in x = z2/z1 and
    /// 1/x respectively, order N.
    pub fn contraction_series(
        &self,
        l: &Current,
        r: &Current,
        order: usize,
    ) -> Result<(PowerSeries, PowerSeries)> {
        let q = self.ctx.q;
        let mut sx = PowerSeries::zero(order);
        let mut sinv = PowerSeries::zero(order);
        for p in self.pairings(l, r)? {
            match p {
                Pairing::Series { x_side, inv_side, d } => {
                    sx = &sx + &x_side.series(q, d, order);
                    sinv = &sinv + &inv_side.series(q, -d, order);
                }
                Pairing::Rational { .. } => {
                    return Err(Error::Unsupported("series of two x-type pieces".into()))
                }
            }
        }
        Ok((sx, sinv))
    }

    /// Oscillator content of :L(z1) R(z2): at z1 = q^{2 delta} z2, as
    /// (pos, neg) coefficients referred to z2. Pure exponentials only.
    pub fn merged_modes(&self, l: &Current, r: &Current, delta: f64) -> Result<(Lambert, Lambert)> {
        let mut pos = Lambert::zero();
        let mut neg = Lambert::zero();
        for (cur, extra) in [(l, delta), (r, 0.0)] {
            for (p, s) in &cur.pieces {
                let Piece::Exp { pos: cp, neg: cn } = p else {
                    return Err(Error::Unsupported("merging x-type pieces".into()));
                };
                let sh = s + extra;
                pos = &pos + &(cp * &Lambert::mono(-2.0 * sh));
                neg = &neg + &(cn * &Lambert::mono(2.0 * sh));
            }
        }
        Ok((pos, neg))
    }

    // ---- the currents ----

    fn qi(&self, n: f64) -> Lambert {
        Lambert::qint(n, self.ctx.q)
    }
    fn iqi(&self, n: f64) -> Lambert {
        Lambert::inv_qint(n, self.ctx.q)
    }
    fn mono_c(&self) -> Lambert {
        Lambert::mono(self.ctx.c)
    }

    pub fn u_plus(&self) -> Current {
        let neg = &Lambert::mono(self.ctx.r) * &self.iqi(self.ctx.r_star);
        Current::exp("u_plus", Lambert::zero(), neg)
    }

    pub fn u_minus(&self) -> Current {
        let pos = -&(&Lambert::mono(self.ctx.r) * &self.iqi(self.ctx.r));
        Current::exp("u_minus", pos, Lambert::zero())
    }

    pub fn x_plus(&self) -> Current {
        Current::new(
            "x_plus",
            vec![Piece::X { plus: true, inv: false }],
            vec![ZeroSym::exp(ZeroVec::alpha(1.0))],
        )
    }

    pub fn x_minus(&self) -> Current {
        Current::new(
            "x_minus",
            vec![Piece::X { plus: false, inv: false }],
            vec![ZeroSym::exp(ZeroVec::alpha(-1.0))],
        )
    }

    pub fn psi(&self) -> Current {
        let pos = -&self.iqi(self.ctx.r);
        let neg = &self.mono_c() * &self.iqi(self.ctx.r_star);
        Current::exp("psi", pos, neg)
    }

    /// coefficient -[m]/([rm]([2m]-[m])) on alpha_m
    pub fn k(&self) -> Current {
        let q = self.ctx.q;
        let base = &(&self.qi(1.0) * &Lambert::inv_d21(q)) * &self.iqi(self.ctx.r);
        let neg_base = &(&self.qi(1.0) * &Lambert::inv_d21(q)) * &self.iqi(self.ctx.r_star);
        Current::exp("k", -&base, &self.mono_c() * &neg_base)
    }

    pub fn e(&self) -> Current {
        self.u_plus().then(&self.x_plus()).named("e")
    }

    pub fn f(&self) -> Current {
        self.x_minus().then(&self.u_minus()).named("f")
    }

    /// E = e e^{abar} e^{-Q} z^{-P/r*}
    pub fn big_e(&self) -> Current {
        self.e()
            .with_zero(vec![
                ZeroSym::exp(ZeroVec::abar(1.0).plus(ZeroVec::q(-1.0))),
                ZeroSym::pow(ZeroVec::p(-1.0 / self.ctx.r_star)),
            ])
            .named("E")
    }

    /// F = f e^{-abar} z^{P/r + h/2r}
    pub fn big_f(&self) -> Current {
        let r = self.ctx.r;
        self.f()
            .with_zero(vec![
                ZeroSym::exp(ZeroVec::abar(-1.0)),
                ZeroSym::pow(ZeroVec::p(1.0 / r).plus(ZeroVec::h(1.0 / (2.0 * r)))),
            ])
            .named("F")
    }

    /// K = k e^{-Q} z^{(1/r - 1/r*)P + h/2r}
    pub fn big_k(&self) -> Current {
        let (r, rs) = (self.ctx.r, self.ctx.r_star);
        self.k()
            .with_zero(vec![
                ZeroSym::exp(ZeroVec::q(-1.0)),
                ZeroSym::pow(ZeroVec::p(1.0 / r - 1.0 / rs).plus(ZeroVec::h(1.0 / (2.0 * r)))),
            ])
            .named("K")
    }

    /// K_+(z) = K(q^{r-2} z)
    pub fn k_plus(&self) -> Current {
        self.big_k().shifted((self.ctx.r - 2.0) / 2.0).named("K_plus")
    }

    /// K_0(z) = K(q^r z)^{-1} K(q^{r-1} z)
    pub fn k_zero(&self) -> Current {
        let k = self.big_k();
        k.shifted(self.ctx.r / 2.0).inv().then(&k.shifted((self.ctx.r - 1.0) / 2.0)).named("K_0")
    }

    /// K_-(z) = K(q^{r+1} z)^{-1}
    pub fn k_minus(&self) -> Current {
        self.big_k().shifted((self.ctx.r + 1.0) / 2.0).inv().named("K_minus")
    }

    /// Level-1 E with x^+ resolved into a-oscillators and e^{alpha-hat} z^{h/2}.
    pub fn e_level1(&self) -> Current {
        let (r, rs) = (self.ctx.r, self.ctx.r_star);
        let neg = &(&(&self.mono_c() * &self.qi(r)) * &self.iqi(1.0)) * &self.iqi(rs);
        Current::exp("E_level1", -&self.iqi(1.0), neg).with_zero(vec![
            ZeroSym::exp(ZeroVec::alpha(1.0).plus(ZeroVec::abar(1.0))),
            ZeroSym::pow(ZeroVec::h(0.5)),
            ZeroSym::exp(ZeroVec::q(-1.0)),
            ZeroSym::pow(ZeroVec::p(-1.0 / rs)),
        ])
    }

    pub fn f_level1(&self) -> Current {
        let (r, rs) = (self.ctx.r, self.ctx.r_star);
        let pos = &(&self.qi(rs) * &self.iqi(1.0)) * &self.iqi(r);
        let neg = -&(&self.mono_c() * &self.iqi(1.0));
        Current::exp("F_level1", pos, neg).with_zero(vec![
            ZeroSym::exp(ZeroVec::alpha(-1.0).plus(ZeroVec::abar(-1.0))),
            ZeroSym::pow(ZeroVec::h(-0.5)),
            ZeroSym::pow(ZeroVec::p(1.0 / r).plus(ZeroVec::h(1.0 / (2.0 * r)))),
        ])
    }

    /// Highest component of the type-I vertex operator.
    pub fn phi_minus(&self) -> Current {
        let (r, rs) = (self.ctx.r, self.ctx.r_star);
        let q = self.ctx.q;
        let pos = -&(&(&self.qi(rs) * &self.iqi(r)) * &Lambert::inv_d21(q));
        let neg = &self.mono_c() * &Lambert::inv_d21(q);
        Current::exp("Phi_minus", pos, neg).with_zero(vec![
            ZeroSym::exp(ZeroVec::alpha(1.0).plus(ZeroVec::abar(1.0))),
            ZeroSym::pow(ZeroVec::h(0.5 - 1.0 / (2.0 * r)).plus(ZeroVec::p(-1.0 / r))),
        ])
    }

    /// Highest component of the type-II vertex operator.
    pub fn psi_star_minus(&self) -> Current {
        let (r, rs) = (self.ctx.r, self.ctx.r_star);
        let q = self.ctx.q;
        let neg = -&(&(&(&self.qi(r) * &self.iqi(rs)) * &self.mono_c()) * &Lambert::inv_d21(q));
        Current::exp("Psi_star_minus", Lambert::inv_d21(q), neg).with_zero(vec![
            ZeroSym::exp(ZeroVec::alpha(-1.0).plus(ZeroVec::abar(-1.0))),
            ZeroSym::pow(ZeroVec::h(-0.5)),
            ZeroSym::exp(ZeroVec::q(1.0)),
            ZeroSym::pow(ZeroVec::p(1.0 / rs)),
        ])
    }
}
