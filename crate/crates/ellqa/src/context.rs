use crate::error::{param, Result};
use crate::C64;
use std::f64::consts::PI;

/// Global parameters. `p = q^{2r}`, `p* = q^{2r*}`, `r* = r - c`,
/// `tau = -pi i / (r ln q)` so that `p = exp(-2 pi i / tau)`.
#[derive(Debug, Clone, PartialEq)]
pub struct Ctx {
    pub q: f64,
    pub r: f64,
    pub c: f64,
    pub r_star: f64,
    pub p: f64,
    pub p_star: f64,
    pub tau: C64,
    pub tau_star: C64,
    pub product_cutoff: usize,
    pub series_order: usize,
    pub tol: f64,
    pub lq: f64,
}

pub const MAX_CUTOFF: usize = 512;

impl Ctx {
    pub fn new(q: f64, r: f64, c: f64) -> Result<Ctx> {
        Ctx::build(q, r, c, 1e-10, 30)
    }

    pub fn build(q: f64, r: f64, c: f64, tol: f64, series_order: usize) -> Result<Ctx> {
        if !(q > 0.0 && q < 1.0) {
            return Err(param("q", format!("need 0 < q < 1, got {q}")));
        }
        if !(c >= 0.0) || !c.is_finite() {
            return Err(param("c", format!("need c >= 0, got {c}")));
        }
        if !(r > c) || !r.is_finite() {
            return Err(param("r", format!("need r > c, got r={r}, c={c}")));
        }
        if !(tol > 0.0) {
            return Err(param("tol", format!("need tol > 0, got {tol}")));
        }
        if series_order == 0 {
            return Err(param("order", "series order must be positive"));
        }
        let lq = q.ln();
        let r_star = r - c;
        let p = q.powf(2.0 * r);
        let p_star = q.powf(2.0 * r_star);
        let tau = C64::new(0.0, -PI / (r * lq));
        let tau_star = C64::new(0.0, -PI / (r_star * lq));
        Ok(Ctx {
            q,
            r,
            c,
            r_star,
            p,
            p_star,
            tau,
            tau_star,
            product_cutoff: cutoff_for(p.max(p_star), q, tol),
            series_order,
            tol,
            lq,
        })
    }

    /// Same (q, r) at a different level.
    pub fn at_level(&self, c: f64) -> Result<Ctx> {
        Ctx::build(self.q, self.r, c, self.tol, self.series_order)
    }

    /// q^x for complex x.
    pub fn qpow(&self, x: C64) -> C64 {
        (x * self.lq).exp()
    }

    pub fn qpow_re(&self, x: f64) -> f64 {
        (x * self.lq).exp()
    }

    /// z = q^{2u}
    pub fn z_of(&self, u: C64) -> C64 {
        self.qpow(2.0 * u)
    }

    /// (r, p) or (r*, p*)
    pub fn pair(&self, star: bool) -> (f64, f64) {
        if star {
            (self.r_star, self.p_star)
        } else {
            (self.r, self.p)
        }
    }

    /// Geometric tail estimate of a product truncated at `product_cutoff` factors.
    pub fn tail_estimate(&self) -> f64 {
        let t = self.p.max(self.q.powi(6));
        t.powi(self.product_cutoff as i32) / (1.0 - t)
    }
}

/// Smallest N with max(p, q^6)^N < tol * 1e-2, capped.
pub fn cutoff_for(p: f64, q: f64, tol: f64) -> usize {
    let t = p.max(q.powi(6));
    if t <= 0.0 {
        return 1;
    }
    let target = tol * 1e-2;
    let n = (target.ln() / t.ln()).floor() as i64 + 1;
    n.clamp(1, MAX_CUTOFF as i64) as usize
}
