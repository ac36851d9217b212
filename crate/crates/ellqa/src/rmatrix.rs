//! The 9x9 dynamical R-matrix, its trigonometric limit, and their checks.
//!
//! Basis order: ++, +0, +-, 0+, 00, 0-, -+, -0, --; index = 3a + b with
//! a, b in {0: +, 1: 0, 2: -}.

use crate::context::Ctx;
use crate::error::{Error, Result};
use crate::qseries::{bracket, BracketKind};
use crate::report::{CheckReport, Params, RunParams, Worst};
use crate::structfuncs::{rho_plus, rho_vv_z, POLE_EPS};
use crate::C64;
use serde_json::json;
use std::f64::consts::PI;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum WeightVector {
    Plus,
    Zero,
    Minus,
}

impl WeightVector {
    pub const ALL: [WeightVector; 3] = [WeightVector::Plus, WeightVector::Zero, WeightVector::Minus];

    pub fn wt(self) -> i32 {
        match self {
            WeightVector::Plus => 1,
            WeightVector::Zero => 0,
            WeightVector::Minus => -1,
        }
    }

    pub fn index(self) -> usize {
        match self {
            WeightVector::Plus => 0,
            WeightVector::Zero => 1,
            WeightVector::Minus => 2,
        }
    }

    pub fn from_index(i: usize) -> WeightVector {
        WeightVector::ALL[i]
    }
}

pub fn wt_of(i: usize) -> i32 {
    WeightVector::from_index(i).wt()
}

pub type Mat9 = [[C64; 9]; 9];

#[derive(Debug, Clone, PartialEq)]
pub struct RMatrixSample {
    pub u: C64,
    pub s: C64,
    pub entries: Mat9,
    pub starred: bool,
}

impl RMatrixSample {
    /// Records "i j re im", row-major, 0-based indices.
    pub fn dump(&self) -> String {
        dump_matrix(&self.entries)
    }
}

pub fn dump_matrix(m: &Mat9) -> String {
    let mut out = String::new();
    for (i, row) in m.iter().enumerate() {
        for (j, v) in row.iter().enumerate() {
            out.push_str(&format!("{} {} {:.17e} {:.17e}\n", i, j, v.re, v.im));
        }
    }
    out
}

/// Weight conservation: (a,b) -> (c,d) allowed iff wt a + wt b = wt c + wt d.
pub fn allowed(row: usize, col: usize) -> bool {
    wt_of(row / 3) + wt_of(row % 3) == wt_of(col / 3) + wt_of(col % 3)
}

// ---- table of entries ----

/// [a_u u + a_s s + b] (or [.]_+) raised to `pow`.
#[derive(Debug, Clone, Copy)]
pub struct Br {
    pub plus: bool,
    pub a_u: i8,
    pub a_s: i8,
    pub b: f64,
    pub pow: i8,
}

const fn pl(a_u: i8, a_s: i8, b: f64, pow: i8) -> Br {
    Br { plus: false, a_u, a_s, b, pow }
}
const fn pp(a_u: i8, a_s: i8, b: f64, pow: i8) -> Br {
    Br { plus: true, a_u, a_s, b, pow }
}

/// s-only composite factors.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SFac {
    Gp,
    Gm,
    H,
}

#[derive(Debug, Clone, Copy)]
pub struct Term {
    pub sign: f64,
    pub sfac: &'static [SFac],
    pub brs: &'static [Br],
}

#[derive(Debug, Clone, Copy)]
pub struct Entry {
    pub row: usize,
    pub col: usize,
    pub terms: &'static [Term],
}

const ONE: Br = pl(0, 0, 1.0, 1);
const U_OVER_U1: [Br; 2] = [pl(1, 0, 0.0, 1), pl(1, 0, 1.0, -1)];

pub static ENTRIES: [Entry; 19] = [
    Entry { row: 0, col: 0, terms: &[Term { sign: 1.0, sfac: &[], brs: &[] }] },
    Entry { row: 8, col: 8, terms: &[Term { sign: 1.0, sfac: &[], brs: &[] }] },
    Entry {
        row: 1,
        col: 1,
        terms: &[Term {
            sign: -1.0,
            sfac: &[],
            brs: &[pp(0, 1, 1.5, 1), pp(0, 1, -0.5, 1), pp(0, 1, 0.5, -2), U_OVER_U1[0], U_OVER_U1[1]],
        }],
    },
    Entry {
        row: 1,
        col: 3,
        terms: &[Term { sign: 1.0, sfac: &[], brs: &[pp(1, 1, 0.5, 1), ONE, pp(0, 1, 0.5, -1), pl(1, 0, 1.0, -1)] }],
    },
    Entry {
        row: 3,
        col: 1,
        terms: &[Term { sign: 1.0, sfac: &[], brs: &[pp(1, -1, -0.5, 1), ONE, pp(0, -1, -0.5, -1), pl(1, 0, 1.0, -1)] }],
    },
    Entry { row: 3, col: 3, terms: &[Term { sign: -1.0, sfac: &[], brs: &U_OVER_U1 }] },
    Entry { row: 7, col: 7, terms: &[Term { sign: -1.0, sfac: &[], brs: &U_OVER_U1 }] },
    Entry {
        row: 5,
        col: 5,
        terms: &[Term {
            sign: -1.0,
            sfac: &[],
            brs: &[pp(0, 1, 0.5, 1), pp(0, 1, -1.5, 1), pp(0, 1, -0.5, -2), U_OVER_U1[0], U_OVER_U1[1]],
        }],
    },
    Entry {
        row: 5,
        col: 7,
        terms: &[Term { sign: 1.0, sfac: &[], brs: &[pp(1, 1, -0.5, 1), ONE, pp(0, 1, -0.5, -1), pl(1, 0, 1.0, -1)] }],
    },
    Entry {
        row: 7,
        col: 5,
        terms: &[Term { sign: 1.0, sfac: &[], brs: &[pp(1, -1, 0.5, 1), ONE, pp(0, -1, 0.5, -1), pl(1, 0, 1.0, -1)] }],
    },
    Entry {
        row: 2,
        col: 2,
        terms: &[Term {
            sign: 1.0,
            sfac: &[SFac::Gp, SFac::Gm],
            brs: &[pl(1, 0, 0.5, 1), pl(1, 0, 0.0, 1), pl(1, 0, 1.5, -1), pl(1, 0, 1.0, -1)],
        }],
    },
    Entry {
        row: 2,
        col: 4,
        terms: &[Term {
            sign: -1.0,
            sfac: &[SFac::Gm],
            brs: &[
                pp(0, 1, 0.5, 1),
                pp(-1, -1, -1.0, 1),
                ONE,
                pl(1, 0, 0.0, 1),
                pp(0, -1, 0.5, -2),
                pl(1, 0, 1.0, -1),
                pl(1, 0, 1.5, -1),
            ],
        }],
    },
    Entry {
        row: 2,
        col: 6,
        terms: &[
            Term { sign: 1.0, sfac: &[], brs: &[pl(-1, -2, 1.0, 1), ONE, pl(0, -2, 1.0, -1), pl(1, 0, 1.0, -1)] },
            Term {
                sign: -1.0,
                sfac: &[SFac::Gm],
                brs: &[pl(-1, -2, -0.5, 1), pl(1, 0, 0.0, 1), ONE, pl(0, -2, 1.0, -1), pl(1, 0, 1.5, -1), pl(1, 0, 1.0, -1)],
            },
        ],
    },
    Entry {
        row: 4,
        col: 6,
        terms: &[Term {
            sign: -1.0,
            sfac: &[],
            brs: &[pp(-1, -1, -1.0, 1), ONE, pl(1, 0, 0.0, 1), pp(0, 1, 0.5, -1), pl(1, 0, 1.0, -1), pl(1, 0, 1.5, -1)],
        }],
    },
    Entry {
        row: 6,
        col: 6,
        terms: &[Term {
            sign: 1.0,
            sfac: &[],
            brs: &[pl(1, 0, 0.5, 1), pl(1, 0, 0.0, 1), pl(1, 0, 1.5, -1), pl(1, 0, 1.0, -1)],
        }],
    },
    Entry {
        row: 6,
        col: 4,
        terms: &[Term {
            sign: -1.0,
            sfac: &[],
            brs: &[pp(-1, 1, -1.0, 1), ONE, pl(1, 0, 0.0, 1), pp(0, -1, 0.5, -1), pl(1, 0, 1.0, -1), pl(1, 0, 1.5, -1)],
        }],
    },
    Entry {
        row: 6,
        col: 2,
        terms: &[
            Term { sign: 1.0, sfac: &[], brs: &[pl(-1, 2, 1.0, 1), ONE, pl(0, 2, 1.0, -1), pl(1, 0, 1.0, -1)] },
            Term {
                sign: -1.0,
                sfac: &[SFac::Gp],
                brs: &[pl(-1, 2, -0.5, 1), pl(1, 0, 0.0, 1), ONE, pl(0, 2, 1.0, -1), pl(1, 0, 1.5, -1), pl(1, 0, 1.0, -1)],
            },
        ],
    },
    Entry {
        row: 4,
        col: 2,
        terms: &[Term {
            sign: -1.0,
            sfac: &[SFac::Gp],
            brs: &[
                pp(0, -1, 0.5, 1),
                pp(-1, 1, -1.0, 1),
                ONE,
                pl(1, 0, 0.0, 1),
                pp(0, 1, 0.5, -2),
                pl(1, 0, 1.0, -1),
                pl(1, 0, 1.5, -1),
            ],
        }],
    },
    Entry {
        row: 4,
        col: 4,
        terms: &[
            Term {
                sign: 1.0,
                sfac: &[],
                brs: &[pl(1, 0, 3.0, 1), ONE, pl(-1, 0, 1.5, 1), pl(0, 0, 3.0, -1), pl(1, 0, 1.0, -1), pl(1, 0, 1.5, -1)],
            },
            Term { sign: 1.0, sfac: &[SFac::H], brs: &[ONE, pl(1, 0, 0.0, 1), pl(0, 0, 3.0, -1), pl(1, 0, 1.0, -1)] },
        ],
    },
];

fn kind(plus: bool, starred: bool) -> BracketKind {
    BracketKind::new(starred, plus)
}

fn br_arg(b: &Br, u: C64, s: C64) -> C64 {
    u * b.a_u as f64 + s * b.a_s as f64 + b.b
}

/// Evaluates brackets and the G/H factors with pole detection.
struct Eval<'a> {
    ctx: &'a Ctx,
    starred: bool,
}

impl Eval<'_> {
    fn br(&self, plus: bool, x: C64) -> C64 {
        bracket(x, kind(plus, self.starred), self.ctx)
    }

    fn nz(&self, v: C64, what: impl FnOnce() -> String) -> Result<C64> {
        if v.norm() < POLE_EPS {
            Err(Error::Pole(what()))
        } else {
            Ok(v)
        }
    }

    fn quot(&self, num: &[(bool, C64)], den: &[(bool, C64)]) -> Result<C64> {
        let mut v = C64::new(1.0, 0.0);
        for (p, x) in num {
            v *= self.br(*p, *x);
        }
        for (p, x) in den {
            let d = self.br(*p, *x);
            v /= self.nz(d, || format!("bracket{} at {}", if *p { "_+" } else { "" }, x))?;
        }
        Ok(v)
    }

    fn gp(&self, s: C64) -> Result<C64> {
        Ok(-self.quot(&[(false, 2.0 * s + 2.0), (true, s)], &[(false, 2.0 * s), (true, s + 1.0)])?)
    }

    fn gm(&self, s: C64) -> Result<C64> {
        Ok(-self.quot(&[(false, 2.0 * s - 2.0), (true, s)], &[(false, 2.0 * s), (true, s - 1.0)])?)
    }

    fn h(&self, s: C64) -> Result<C64> {
        let a = self.gp(s)? * self.quot(&[(true, s - 2.5)], &[(true, s + 0.5)])?;
        let b = self.gm(s)? * self.quot(&[(true, s + 2.5)], &[(true, s - 0.5)])?;
        Ok(a + b)
    }

    fn sfac(&self, f: SFac, s: C64) -> Result<C64> {
        match f {
            SFac::Gp => self.gp(s),
            SFac::Gm => self.gm(s),
            SFac::H => self.h(s),
        }
    }

    fn term(&self, t: &Term, u: C64, s: C64) -> Result<C64> {
        let mut v = C64::new(t.sign, 0.0);
        for f in t.sfac {
            v *= self.sfac(*f, s)?;
        }
        for b in t.brs {
            let x = br_arg(b, u, s);
            let y = self.br(b.plus, x);
            if b.pow < 0 {
                let y = self.nz(y, || format!("bracket{} at {}", if b.plus { "_+" } else { "" }, x))?;
                v /= y.powi(-b.pow as i32);
            } else {
                v *= y.powi(b.pow as i32);
            }
        }
        Ok(v)
    }
}

/// Value of every term of an entry (the entry is their sum).
pub fn entry_terms(e: &Entry, u: C64, s: C64, ctx: &Ctx, starred: bool) -> Result<Vec<C64>> {
    let ev = Eval { ctx, starred };
    e.terms.iter().map(|t| ev.term(t, u, s)).collect()
}

pub fn rbar(u: C64, s: C64, ctx: &Ctx, starred: bool) -> Result<RMatrixSample> {
    let mut m = [[C64::new(0.0, 0.0); 9]; 9];
    let ev = Eval { ctx, starred };
    for e in ENTRIES.iter() {
        let mut v = C64::new(0.0, 0.0);
        for t in e.terms {
            v += ev.term(t, u, s)?;
        }
        m[e.row][e.col] = v;
    }
    Ok(RMatrixSample { u, s, entries: m, starred })
}

/// R+(u,s) = rho+(u) Rbar(u,s).
pub fn r_plus(u: C64, s: C64, ctx: &Ctx, starred: bool) -> Result<RMatrixSample> {
    let mut r = rbar(u, s, ctx, starred)?;
    let f = rho_plus(u, ctx, starred)?;
    for row in r.entries.iter_mut() {
        for v in row.iter_mut() {
            *v *= f;
        }
    }
    Ok(r)
}

pub fn permutation() -> Mat9 {
    let mut m = [[C64::new(0.0, 0.0); 9]; 9];
    for a in 0..3 {
        for b in 0..3 {
            m[3 * a + b][3 * b + a] = C64::new(1.0, 0.0);
        }
    }
    m
}

// ---- trigonometric R_VV ----

pub struct TrigEntries {
    pub b: C64,
    pub c: C64,
    pub d: C64,
    pub e: C64,
    pub f: C64,
    pub j: C64,
    pub n: C64,
}

pub fn trig_entries(z: C64, q: f64) -> Result<TrigEntries> {
    let d2 = 1.0 - q * q * z;
    let d3 = 1.0 - q.powi(3) * z;
    if d2.norm() < POLE_EPS || d3.norm() < POLE_EPS {
        return Err(Error::Pole(format!("R_VV at z = {z}")));
    }
    let i = C64::new(0.0, 1.0);
    let q2 = 1.0 - q * q;
    Ok(TrigEntries {
        b: -q * (1.0 - z) / d2,
        c: C64::new(q2, 0.0) / d2,
        d: (1.0 - z) * q * q * (1.0 - q * z) / (d2 * d3),
        e: i * q2 * q.sqrt() * (1.0 - z) / (d2 * d3),
        f: q2 * (1.0 + q - q.powi(3) * z - q * z) / (d2 * d3),
        j: -q * (1.0 - z) / d2 + q2 * (1.0 - q.powi(3)) * z / (d2 * d3),
        n: q2 * (1.0 + q * q - q.powi(3) * z - q * q * z) / (d2 * d3),
    })
}

pub fn trig_rbar_vv(z: C64, q: f64) -> Result<Mat9> {
    let t = trig_entries(z, q)?;
    let mut m = [[C64::new(0.0, 0.0); 9]; 9];
    let one = C64::new(1.0, 0.0);
    m[0][0] = one;
    m[1][1] = t.b;
    m[1][3] = t.c;
    m[2][2] = t.d;
    m[2][4] = t.e;
    m[2][6] = t.f;
    m[3][1] = z * t.c;
    m[3][3] = t.b;
    m[4][2] = -q * q * z * t.e;
    m[4][4] = t.j;
    m[4][6] = t.e;
    m[5][5] = t.b;
    m[5][7] = t.c;
    m[6][2] = z * t.n;
    m[6][4] = -q * q * z * t.e;
    m[6][6] = t.d;
    m[7][5] = z * t.c;
    m[7][7] = t.b;
    m[8][8] = one;
    Ok(m)
}

/// rho_VV(z) Rbar_VV(z).
pub fn trig_r_vv(z: C64, q: f64) -> Result<Mat9> {
    let mut m = trig_rbar_vv(z, q)?;
    let f = rho_vv_z(z, q)?;
    for row in m.iter_mut() {
        for v in row.iter_mut() {
            *v *= f;
        }
    }
    Ok(m)
}

// ---- 27x27 embedding for the DYBE ----

const D3: usize = 27;

#[derive(Clone)]
pub struct Mat27(pub Vec<C64>);

impl Mat27 {
    fn zero() -> Self {
        Mat27(vec![C64::new(0.0, 0.0); D3 * D3])
    }

    pub fn mul(&self, o: &Mat27) -> Mat27 {
        let mut out = Mat27::zero();
        for i in 0..D3 {
            for k in 0..D3 {
                let a = self.0[i * D3 + k];
                if a == C64::new(0.0, 0.0) {
                    continue;
                }
                for j in 0..D3 {
                    out.0[i * D3 + j] += a * o.0[k * D3 + j];
                }
            }
        }
        out
    }

    /// max |A - B| / max |A|
    pub fn rel_diff(&self, o: &Mat27) -> f64 {
        let scale = self.0.iter().map(|v| v.norm()).fold(0.0, f64::max);
        let d = self.0.iter().zip(&o.0).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max);
        d / scale
    }
}

/// R acting on slots (i, j) of C3 x C3 x C3. If `shift_slot` is set, the
/// dynamical parameter is s + sigma * wt(index in that slot).
pub fn embed<F>(r_at: &mut F, i: usize, j: usize, shift_slot: Option<usize>, sigma: f64, s: C64) -> Result<Mat27>
where
    F: FnMut(C64) -> Result<Mat9>,
{
    let k = 3 - i - j;
    let mut cache: Vec<(i32, Mat9)> = Vec::new();
    let mut m = Mat27::zero();
    for t in 0..D3 {
        let a = [t / 9, (t / 3) % 3, t % 3];
        let w = shift_slot.map(|sl| wt_of(a[sl])).unwrap_or(0);
        let rm = match cache.iter().find(|(ww, _)| *ww == w) {
            Some((_, rm)) => *rm,
            None => {
                let rm = r_at(s + sigma * w as f64)?;
                cache.push((w, rm));
                rm
            }
        };
        for t2 in 0..D3 {
            let b = [t2 / 9, (t2 / 3) % 3, t2 % 3];
            if a[k] != b[k] {
                continue;
            }
            m.0[t * D3 + t2] = rm[a[i] * 3 + a[j]][b[i] * 3 + b[j]];
        }
    }
    Ok(m)
}

/// Residual of R12(s+sigma wt3) R13(s) R23(s+sigma wt1) = R23(s) R13(s+sigma wt2) R12(s).
pub fn dybe_residual(
    us: [C64; 3],
    s: C64,
    sigma: f64,
    ctx: &Ctx,
    with_scalar: bool,
) -> Result<f64> {
    let mk = |u: C64| {
        move |ss: C64| -> Result<Mat9> {
            if with_scalar {
                r_plus(u, ss, ctx, false).map(|r| r.entries)
            } else {
                rbar(u, ss, ctx, false).map(|r| r.entries)
            }
        }
    };
    let (u12, u13, u23) = (us[0] - us[1], us[0] - us[2], us[1] - us[2]);
    let lhs = embed(&mut mk(u12), 0, 1, Some(2), sigma, s)?
        .mul(&embed(&mut mk(u13), 0, 2, None, sigma, s)?)
        .mul(&embed(&mut mk(u23), 1, 2, Some(0), sigma, s)?);
    let rhs = embed(&mut mk(u23), 1, 2, None, sigma, s)?
        .mul(&embed(&mut mk(u13), 0, 2, Some(1), sigma, s)?)
        .mul(&embed(&mut mk(u12), 0, 1, None, sigma, s)?);
    Ok(lhs.rel_diff(&rhs))
}

pub const SIGMA_CANDIDATES: [f64; 6] = [0.5, -0.5, 1.0, -1.0, 2.0, -2.0];

pub const PAPER_RBAR0: &str = "rmat: \"$\\bar{R}(u,s)=\\left(\\begin{array}$\" at u=0 is the permutation; zero pattern";
pub const PAPER_BLOCKS: &str = "App. B 2x2 blocks of \"$\\bar{R}(u,s)$\" up to gauge e^{+-pi i u/r}";
pub const PAPER_RQP: &str = "entries of rmat under u->u+r, s->s+r, u->u+r tau via \"$[u+r]=-[u]$\" and the tau-laws";
pub const PAPER_STAR0: &str = "\"$R^{+*}(u,P)$\" with r* = r at c=0";

pub const PAPER_DYBE: &str =
    "DYBE: \"${\\cal R}^{(12)}(\\lambda+ h^{(3)} )$\" satisfies the dynamical Yang-Baxter equation; R+ = rho+ Rbar (def:R)";

#[derive(Debug, Clone)]
pub struct DybeSweep {
    pub per_sigma: Vec<(f64, f64)>,
    pub selected: f64,
    pub with_scalar: f64,
    pub n_passing: usize,
}

pub fn dybe_sweep(ctx: &Ctx, rp: &RunParams, tol: f64) -> Result<(DybeSweep, Worst)> {
    let mut rng = rp.sampler("rmatrix.dybe");
    let samples: Vec<([C64; 3], C64)> = (0..rp.n_samples)
        .map(|_| {
            let us = [rng.complex(1.0, 0.3), rng.complex(1.0, 0.3), rng.complex(1.0, 0.3)];
            let s = rng.off_half_lattice(1.0, 0.2, 0.05);
            (us, s)
        })
        .collect();
    let mut per_sigma = Vec::new();
    let mut worsts = Vec::new();
    for &sigma in SIGMA_CANDIDATES.iter() {
        let mut w = Worst::default();
        for (us, s) in &samples {
            let v = dybe_residual(*us, *s, sigma, ctx, false).unwrap_or(f64::INFINITY);
            w.push(v, || json!({"u": us.iter().map(|u| [u.re, u.im]).collect::<Vec<_>>(), "s": [s.re, s.im]}));
        }
        per_sigma.push((sigma, w.max));
        worsts.push(w);
    }
    let (best, _) = per_sigma
        .iter()
        .enumerate()
        .fold((0, f64::INFINITY), |(bi, bv), (i, (_, v))| if *v < bv { (i, *v) } else { (bi, bv) });
    let selected = per_sigma[best].0;
    let n_passing = per_sigma.iter().filter(|(_, v)| *v < tol).count();
    let mut w_scalar = Worst::default();
    for (us, s) in &samples {
        let v = dybe_residual(*us, *s, selected, ctx, true)?;
        w_scalar.push(v, || json!({"with_scalar": true}));
    }
    let worst = worsts.swap_remove(best);
    Ok((DybeSweep { per_sigma, selected, with_scalar: w_scalar.max, n_passing }, worst))
}

pub fn check_dybe(ctx: &Ctx, rp: &RunParams) -> CheckReport {
    let name = "rmatrix.dybe";
    let tol = rp.tol(1e-9);
    match dybe_sweep(ctx, rp, tol) {
        Ok((sw, mut worst)) => {
            worst.max = worst.max.max(sw.with_scalar);
            if sw.n_passing != 1 {
                worst.max = f64::INFINITY;
            }
            CheckReport::from_worst(
                name,
                PAPER_DYBE,
                Params::ctx(ctx).with("sigma", json!(sw.selected)),
                rp.n_samples,
                worst,
                tol,
                json!({
                    "sweep": sw.per_sigma.iter().map(|(s, v)| json!({"sigma": s, "max_residual": v})).collect::<Vec<_>>(),
                    "selected_sigma": sw.selected,
                    "n_passing": sw.n_passing,
                    "rbar_only_residual": sw.per_sigma.iter().find(|(s, _)| *s == sw.selected).map(|x| x.1),
                    "with_rho_plus_residual": sw.with_scalar,
                }),
            )
        }
        Err(e) => CheckReport::errored(name, PAPER_DYBE, Params::ctx(ctx), e),
    }
}

pub fn check_rbar_at_zero(ctx: &Ctx, rp: &RunParams) -> CheckReport {
    let name = "rmatrix.rbar_at_zero";
    let mut rng = rp.sampler(name);
    let perm = permutation();
    let mut worst = Worst::default();
    let mut pattern_ok = true;
    let n = 20;
    for _ in 0..n {
        let s = rng.off_half_lattice(1.0, 0.2, 0.05);
        match rbar(C64::new(0.0, 0.0), s, ctx, false) {
            Ok(m) => {
                let mut d = 0.0f64;
                for i in 0..9 {
                    for j in 0..9 {
                        d = d.max((m.entries[i][j] - perm[i][j]).norm());
                    }
                }
                worst.push(d, || json!({"s": [s.re, s.im]}));
            }
            Err(_) => worst.push(f64::INFINITY, || json!({"s": [s.re, s.im]})),
        }
        let u = rng.complex(1.0, 0.3);
        if let Ok(m) = rbar(u, s, ctx, false) {
            for i in 0..9 {
                for j in 0..9 {
                    if !allowed(i, j) && m.entries[i][j] != C64::new(0.0, 0.0) {
                        pattern_ok = false;
                    }
                }
            }
        }
    }
    if !pattern_ok {
        worst.push(f64::INFINITY, || json!("structural zero violated"));
    }
    CheckReport::from_worst(
        name,
        PAPER_RBAR0,
        Params::ctx(ctx),
        n,
        worst,
        rp.tol(1e-12),
        json!({"zero_pattern_exact": pattern_ok, "nonzero_entries": ENTRIES.len()}),
    )
}

/// The solved Appendix-B block for the (+0,0+) or (0-,-0) sector.
pub fn appb_block(u: C64, s: C64, ctx: &Ctx, upper: bool) -> Result<[[C64; 2]; 2]> {
    let ev = Eval { ctx, starred: false };
    let sh = if upper { 0.5 } else { -0.5 };
    let one = ev.br(false, C64::new(1.0, 0.0));
    let diag = -ev.quot(&[(false, u)], &[(false, u + 1.0)])?;
    let a = if upper {
        -ev.quot(&[(true, s + 1.5), (true, s - 0.5), (false, u)], &[(true, s + 0.5), (true, s + 0.5), (false, u + 1.0)])?
    } else {
        -ev.quot(&[(true, s - 1.5), (true, s + 0.5), (false, u)], &[(true, s - 0.5), (true, s - 0.5), (false, u + 1.0)])?
    };
    let g = C64::new(0.0, PI / ctx.r) * u;
    let b12 = g.exp() * one * ev.quot(&[(true, s + sh - u)], &[(true, s + sh), (false, u + 1.0)])?;
    let b21 = (-g).exp() * one * ev.quot(&[(true, s + sh + u)], &[(true, s + sh), (false, u + 1.0)])?;
    Ok([[a, b12], [b21, diag]])
}

/// Main-text counterpart D M^T D^{-1}, D = diag(e^{pi i u/2r}, e^{-pi i u/2r}).
pub fn main_block_gauged(u: C64, s: C64, ctx: &Ctx, upper: bool, gauge: bool) -> Result<[[C64; 2]; 2]> {
    let m = rbar(u, s, ctx, false)?.entries;
    let (i, j) = if upper { (1, 3) } else { (5, 7) };
    let mt = [[m[i][i], m[j][i]], [m[i][j], m[j][j]]];
    let d = if gauge { (C64::new(0.0, PI / (2.0 * ctx.r)) * u).exp() } else { C64::new(1.0, 0.0) };
    Ok([[mt[0][0], mt[0][1] * d * d], [mt[1][0] / (d * d), mt[1][1]]])
}

pub fn block_residual(u: C64, s: C64, ctx: &Ctx, gauge: bool) -> Result<f64> {
    let mut worst = 0.0f64;
    for upper in [true, false] {
        let a = appb_block(u, s, ctx, upper)?;
        let b = main_block_gauged(u, s, ctx, upper, gauge)?;
        for i in 0..2 {
            for j in 0..2 {
                let d = (a[i][j] - b[i][j]).norm() / a[i][j].norm().max(b[i][j].norm());
                worst = worst.max(d);
            }
        }
    }
    Ok(worst)
}

pub fn check_2x2_blocks(ctx: &Ctx, rp: &RunParams) -> CheckReport {
    let name = "rmatrix.appb_blocks";
    let mut rng = rp.sampler(name);
    let mut worst = Worst::default();
    let mut control = f64::INFINITY;
    for _ in 0..rp.n_samples {
        let u = rng.complex(1.0, 0.3);
        let s = rng.off_half_lattice(1.0, 0.2, 0.05);
        let v = block_residual(u, s, ctx, true).unwrap_or(f64::INFINITY);
        worst.push(v, || json!({"u": [u.re, u.im], "s": [s.re, s.im]}));
        if let Ok(c) = block_residual(u, s, ctx, false) {
            control = control.min(c);
        }
    }
    CheckReport::from_worst(
        name,
        PAPER_BLOCKS,
        Params::ctx(ctx),
        rp.n_samples,
        worst,
        rp.tol(1e-10),
        json!({"relation": "block = D M^T D^-1, D = diag(e^{pi i u/2r}, e^{-pi i u/2r})", "min_residual_without_gauge": control}),
    )
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Shift {
    URr,
    SRr,
    URTau,
}

/// Multiplier picked up by one term under a shift, from the bracket laws.
pub fn term_multiplier(t: &Term, u: C64, s: C64, shift: Shift, ctx: &Ctx) -> C64 {
    let i = C64::new(0.0, 1.0);
    let r = ctx.r;
    let tau = ctx.tau;
    let mut m = C64::new(1.0, 0.0);
    for b in t.brs {
        let x = br_arg(b, u, s);
        let f = match shift {
            Shift::URr | Shift::SRr => {
                let k = if shift == Shift::URr { b.a_u } else { b.a_s } as i32;
                if b.plus || k % 2 == 0 {
                    C64::new(1.0, 0.0)
                } else {
                    C64::new(-1.0, 0.0)
                }
            }
            Shift::URTau => match b.a_u {
                0 => C64::new(1.0, 0.0),
                a => {
                    let sgn = a as f64;
                    // z = q^{2u} is r tau-periodic, so [.] and [.]_+ share the multiplier
                    -(-i * PI * tau - sgn * 2.0 * PI * i * x / r).exp()
                }
            },
        };
        m *= f.powi(b.pow as i32);
    }
    m
}

pub fn check_r_quasi_periodicity(ctx: &Ctx, rp: &RunParams) -> CheckReport {
    let name = "rmatrix.quasi_periodicity";
    let mut rng = rp.sampler(name);
    let mut worst = Worst::default();
    let mut inconsistent = 0usize;
    for _ in 0..rp.n_samples {
        let u = rng.complex(0.8, 0.2);
        let s = rng.off_half_lattice(1.0, 0.2, 0.05);
        for shift in [Shift::URr, Shift::SRr, Shift::URTau] {
            let (u2, s2) = match shift {
                Shift::URr => (u + ctx.r, s),
                Shift::SRr => (u, s + ctx.r),
                Shift::URTau => (u + ctx.r * ctx.tau, s),
            };
            for e in ENTRIES.iter() {
                let ms: Vec<C64> = e.terms.iter().map(|t| term_multiplier(t, u, s, shift, ctx)).collect();
                if ms.iter().any(|m| (m - ms[0]).norm() > 1e-9 * ms[0].norm()) {
                    inconsistent += 1;
                }
                let a = entry_terms(e, u, s, ctx, false).map(|v| v.iter().sum::<C64>());
                let b = entry_terms(e, u2, s2, ctx, false).map(|v| v.iter().sum::<C64>());
                let v = match (a, b) {
                    (Ok(a), Ok(b)) => (b - ms[0] * a).norm() / b.norm().max((ms[0] * a).norm()),
                    _ => f64::INFINITY,
                };
                worst.push(v, || json!({"entry": [e.row, e.col], "shift": format!("{:?}", shift), "u": [u.re, u.im], "s": [s.re, s.im]}));
            }
        }
    }
    if inconsistent > 0 {
        worst.push(f64::INFINITY, || json!("term multipliers disagree within an entry"));
    }
    CheckReport::from_worst(
        name,
        PAPER_RQP,
        Params::ctx(ctx),
        rp.n_samples,
        worst,
        rp.tol(1e-10),
        json!({"inconsistent_terms": inconsistent}),
    )
}

pub fn check_starred_level0(ctx: &Ctx, rp: &RunParams) -> CheckReport {
    let name = "rmatrix.starred_at_level0";
    let mut rng = rp.sampler(name);
    let c0 = match ctx.at_level(0.0) {
        Ok(c) => c,
        Err(e) => return CheckReport::errored(name, "", Params::ctx(ctx), e),
    };
    let mut worst = Worst::default();
    for _ in 0..rp.n_samples.min(20) {
        let u = rng.complex(1.0, 0.3);
        let s = rng.off_half_lattice(1.0, 0.2, 0.05);
        let v = match (r_plus(u, s, &c0, false), r_plus(u, s, &c0, true)) {
            (Ok(a), Ok(b)) => {
                if a.entries == b.entries {
                    0.0
                } else {
                    f64::INFINITY
                }
            }
            _ => f64::INFINITY,
        };
        worst.push(v, || json!({"u": [u.re, u.im], "s": [s.re, s.im]}));
    }
    CheckReport::from_worst(
        name,
        PAPER_STAR0,
        Params::ctx(&c0),
        rp.n_samples.min(20),
        worst,
        rp.tol(1e-15),
        json!({}),
    )
}
