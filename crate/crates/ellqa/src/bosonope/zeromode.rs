//! Zero-mode words: ordered products of e^{v.X} and z^{v.X}, X = (P, Q, abar, alpha, h).
//!
//! Commutators: [P,Q] = 1, [Q,abar] = pi i, [h,alpha] = 2, all others zero.
//! alpha-hat = alpha + abar, so [Q,alpha-hat] = pi i and [h,alpha-hat] = 2 follow.

use crate::C64;
use std::f64::consts::PI;

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct ZeroVec(pub [f64; 5]);

impl ZeroVec {
    pub const ZERO: ZeroVec = ZeroVec([0.0; 5]);

    pub fn p(x: f64) -> Self {
        ZeroVec([x, 0.0, 0.0, 0.0, 0.0])
    }
    pub fn q(x: f64) -> Self {
        ZeroVec([0.0, x, 0.0, 0.0, 0.0])
    }
    pub fn abar(x: f64) -> Self {
        ZeroVec([0.0, 0.0, x, 0.0, 0.0])
    }
    pub fn alpha(x: f64) -> Self {
        ZeroVec([0.0, 0.0, 0.0, x, 0.0])
    }
    pub fn h(x: f64) -> Self {
        ZeroVec([0.0, 0.0, 0.0, 0.0, x])
    }

    pub fn plus(self, o: ZeroVec) -> Self {
        let mut v = self.0;
        for (a, b) in v.iter_mut().zip(o.0) {
            *a += b;
        }
        ZeroVec(v)
    }

    pub fn neg(self) -> Self {
        ZeroVec(self.0.map(|x| -x))
    }

    /// [a.X, b.X]
    pub fn comm(&self, b: &ZeroVec) -> C64 {
        let a = &self.0;
        let b = &b.0;
        C64::new(a[0] * b[1] - a[1] * b[0] + 2.0 * (a[4] * b[3] - a[3] * b[4]), 0.0)
            + C64::new(0.0, PI) * (a[1] * b[2] - a[2] * b[1])
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ZeroKind {
    /// e^{v.X}
    Exp,
    /// z^{v.X}, z = q^{2(u + shift)}
    Pow,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ZeroSym {
    pub kind: ZeroKind,
    pub v: ZeroVec,
    pub shift: f64,
}

impl ZeroSym {
    pub fn exp(v: ZeroVec) -> Self {
        ZeroSym { kind: ZeroKind::Exp, v, shift: 0.0 }
    }
    pub fn pow(v: ZeroVec) -> Self {
        ZeroSym { kind: ZeroKind::Pow, v, shift: 0.0 }
    }
}

/// log of the scalar s in A B = s B A for single symbols A at u1 and B at u2.
fn sym_exchange(a: &ZeroSym, b: &ZeroSym, u1: C64, u2: C64, lq: f64) -> C64 {
    let c = a.v.comm(&b.v);
    match (a.kind, b.kind) {
        (ZeroKind::Exp, ZeroKind::Exp) => c,
        (ZeroKind::Exp, ZeroKind::Pow) => 2.0 * lq * (u2 + b.shift) * c,
        (ZeroKind::Pow, ZeroKind::Exp) => 2.0 * lq * (u1 + a.shift) * c,
        (ZeroKind::Pow, ZeroKind::Pow) => C64::new(0.0, 0.0),
    }
}

/// Word with an accumulated log-scalar in front.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct ZeroModeWord {
    pub syms: Vec<ZeroSym>,
    pub log_scalar: C64,
}

impl ZeroModeWord {
    pub fn new(syms: Vec<ZeroSym>) -> Self {
        ZeroModeWord { syms, log_scalar: C64::new(0.0, 0.0) }
    }

    pub fn shifted(&self, d: f64) -> Self {
        ZeroModeWord {
            syms: self.syms.iter().map(|s| ZeroSym { shift: s.shift + d, ..*s }).collect(),
            log_scalar: self.log_scalar,
        }
    }

    /// Inverse word: reversed order, negated vectors.
    pub fn inv(&self) -> Self {
        ZeroModeWord {
            syms: self.syms.iter().rev().map(|s| ZeroSym { v: s.v.neg(), ..*s }).collect(),
            log_scalar: -self.log_scalar,
        }
    }

    pub fn concat(&self, o: &ZeroModeWord) -> Self {
        let mut syms = self.syms.clone();
        syms.extend_from_slice(&o.syms);
        ZeroModeWord { syms, log_scalar: self.log_scalar + o.log_scalar }
    }

    /// log s in W1(u1) W2(u2) = s W2(u2) W1(u1).
    pub fn exchange_log(&self, o: &ZeroModeWord, u1: C64, u2: C64, lq: f64) -> C64 {
        let mut acc = C64::new(0.0, 0.0);
        for a in &self.syms {
            for b in &o.syms {
                acc += sym_exchange(a, b, u1, u2, lq);
            }
        }
        acc
    }

    /// Move every exponential left of every power (stable within each kind),
    /// folding the reordering scalars into `log_scalar`. Evaluated at u.
    pub fn normalize(&self, u: C64, lq: f64) -> Self {
        let mut syms = self.syms.clone();
        let mut log = self.log_scalar;
        // insertion sort: each Exp bubbles left past the Pows before it
        for i in 1..syms.len() {
            let mut j = i;
            while j > 0 && syms[j].kind == ZeroKind::Exp && syms[j - 1].kind == ZeroKind::Pow {
                log += sym_exchange(&syms[j - 1], &syms[j], u, u, lq);
                syms.swap(j - 1, j);
                j -= 1;
            }
        }
        ZeroModeWord { syms, log_scalar: log }
    }

    pub fn is_normal(&self) -> bool {
        let first_pow = self.syms.iter().position(|s| s.kind == ZeroKind::Pow);
        match first_pow {
            None => true,
            Some(i) => self.syms[i..].iter().all(|s| s.kind == ZeroKind::Pow),
        }
    }
}
