//! Mode coefficients of the form
//!
//!   c(m) = (1/m) sum_i s_i q^{e_i m} / prod_{d in D_i} (1 - q^{d m}),
//!
//! closed under sums and products (the 1/m is applied once, at the end).
//! Every coefficient the currents need (q-integers, their inverses, q^{cm})
//! is of this shape, and exp(sum_m c(m) x^m) resums into q-Pochhammer
//! products, so contractions are evaluable off the unit disc.

use crate::error::{Error, Result};
use crate::qseries::poch;
use crate::series::PowerSeries;
use crate::C64;
use std::collections::BTreeMap;
use std::ops::{Add, Mul, Neg, Sub};

const DROP: f64 = 1e-12;
const DIVIDE_STEPS: usize = 200;

fn key(x: f64) -> i64 {
    (x * 1e6).round() as i64
}

#[derive(Debug, Clone, PartialEq)]
pub struct Term {
    pub s: f64,
    pub e: f64,
    /// Sorted exponents d of the denominator factors (1 - q^{dm}).
    pub dens: Vec<f64>,
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct Lambert {
    pub terms: Vec<Term>,
}

impl Lambert {
    pub fn zero() -> Self {
        Lambert::default()
    }

    pub fn one() -> Self {
        Lambert::mono(0.0)
    }

    /// q^{em}
    pub fn mono(e: f64) -> Self {
        Lambert { terms: vec![Term { s: 1.0, e, dens: vec![] }] }
    }

    /// [nm]_q
    pub fn qint(n: f64, q: f64) -> Self {
        let k = 1.0 / (q - 1.0 / q);
        Lambert {
            terms: vec![Term { s: k, e: n, dens: vec![] }, Term { s: -k, e: -n, dens: vec![] }],
        }
    }

    /// 1/[nm]_q = -(q - 1/q) q^{nm} / (1 - q^{2nm}), n > 0.
    pub fn inv_qint(n: f64, q: f64) -> Self {
        assert!(n > 0.0, "inv_qint needs n > 0");
        Lambert { terms: vec![Term { s: -(q - 1.0 / q), e: n, dens: vec![2.0 * n] }] }
    }

    /// [2m]_q - [m]_q
    pub fn d21(q: f64) -> Self {
        &Lambert::qint(2.0, q) - &Lambert::qint(1.0, q)
    }

    /// 1/([2m]_q - [m]_q) = (q - 1/q) (q^{5m} - q^{2m}) / ((1 - q^m)(1 - q^{6m}))
    pub fn inv_d21(q: f64) -> Self {
        let k = q - 1.0 / q;
        Lambert {
            terms: vec![
                Term { s: -k, e: 2.0, dens: vec![1.0, 6.0] },
                Term { s: k, e: 5.0, dens: vec![1.0, 6.0] },
            ],
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn scale(&self, f: f64) -> Self {
        Lambert {
            terms: self.terms.iter().map(|t| Term { s: t.s * f, ..t.clone() }).collect(),
        }
    }

    /// Bring every term over the common denominator, merge equal exponents,
    /// then cancel denominator factors that divide the numerator exactly.
    pub fn simplify(self) -> Self {
        if self.terms.is_empty() {
            return self;
        }
        let mut den: BTreeMap<i64, (f64, usize)> = BTreeMap::new();
        for t in &self.terms {
            for (k, (d, n)) in multiset(&t.dens) {
                let slot = den.entry(k).or_insert((d, 0));
                slot.1 = slot.1.max(n);
            }
        }
        let mut acc: BTreeMap<i64, (f64, f64)> = BTreeMap::new();
        for t in &self.terms {
            let own = multiset(&t.dens);
            let mut poly = vec![(t.s, t.e)];
            for (k, &(d, n)) in &den {
                let have = own.get(k).map_or(0, |x| x.1);
                for _ in have..n {
                    let shifted: Vec<_> = poly.iter().map(|&(s, e)| (-s, e + d)).collect();
                    poly.extend(shifted);
                }
            }
            for (s, e) in poly {
                acc.entry(key(e)).or_insert((0.0, e)).0 += s;
            }
        }
        let mut num: Vec<(f64, f64)> =
            acc.into_values().filter(|(s, _)| s.abs() > DROP).collect();
        let mut dens: Vec<f64> =
            den.values().flat_map(|&(d, n)| std::iter::repeat(d).take(n)).collect();
        let mut changed = true;
        while changed && !num.is_empty() {
            changed = false;
            for i in 0..dens.len() {
                if let Some(quo) = divide(&num, dens[i]) {
                    num = quo;
                    dens.remove(i);
                    changed = true;
                    break;
                }
            }
        }
        Lambert {
            terms: num.into_iter().map(|(s, e)| Term { s, e, dens: dens.clone() }).collect(),
        }
    }

    /// c(m) for m >= 1.
    pub fn coef(&self, m: usize, q: f64) -> f64 {
        let mf = m as f64;
        let sum: f64 = self
            .terms
            .iter()
            .map(|t| {
                let den: f64 = t.dens.iter().map(|d| 1.0 - q.powf(d * mf)).product();
                t.s * q.powf(t.e * mf) / den
            })
            .sum();
        sum / mf
    }

    /// sum_{m=1..order} c(m) q^{2 shift m} x^m
    pub fn series(&self, q: f64, shift: f64, order: usize) -> PowerSeries {
        let mut s = PowerSeries::zero(order);
        for m in 1..=order {
            s.coeffs[m] = C64::new(self.coef(m, q) * q.powf(2.0 * shift * m as f64), 0.0);
        }
        s
    }

    /// exp(sum_m c(m) x^m) = prod_i (q^{e_i} x; q^{d}...)_inf^{-s_i}.
    /// Needs every s_i to be an integer.
    pub fn expval(&self, x: C64, q: f64) -> Result<C64> {
        let mut v = C64::new(1.0, 0.0);
        for t in &self.terms {
            let si = t.s.round();
            if (t.s - si).abs() > 1e-8 {
                return Err(Error::Unsupported(format!(
                    "non-integer multiplicity {} in product form",
                    t.s
                )));
            }
            let bases: Vec<f64> = t.dens.iter().map(|d| q.powf(*d)).collect();
            let f = poch(x * q.powf(t.e), &bases);
            v *= f.powi(-(si as i32));
        }
        Ok(v)
    }
}

fn multiset(ds: &[f64]) -> BTreeMap<i64, (f64, usize)> {
    let mut m: BTreeMap<i64, (f64, usize)> = BTreeMap::new();
    for &d in ds {
        m.entry(key(d)).or_insert((d, 0)).1 += 1;
    }
    m
}

/// Exact division of sum s X^e by (1 - X^d), if the quotient is finite.
fn divide(num: &[(f64, f64)], d: f64) -> Option<Vec<(f64, f64)>> {
    let top = num.iter().map(|x| x.1).fold(f64::NEG_INFINITY, f64::max);
    let mut rem: Vec<(f64, f64)> = num.to_vec();
    let mut quo = Vec::new();
    for _ in 0..DIVIDE_STEPS {
        if rem.is_empty() {
            return Some(quo);
        }
        rem.sort_by(|a, b| a.1.total_cmp(&b.1));
        let (s, e) = rem.remove(0);
        quo.push((s, e));
        match rem.iter_mut().find(|x| (x.1 - e - d).abs() < 1e-9) {
            Some(x) => x.0 += s,
            None => rem.push((s, e + d)),
        }
        rem.retain(|x| x.0.abs() > 1e-13);
        if rem.iter().all(|x| x.1 > top + 1e-9) && !rem.is_empty() {
            return None;
        }
    }
    None
}

impl Add for &Lambert {
    type Output = Lambert;
    fn add(self, o: &Lambert) -> Lambert {
        let mut terms = self.terms.clone();
        terms.extend(o.terms.iter().cloned());
        Lambert { terms }.simplify()
    }
}

impl Neg for &Lambert {
    type Output = Lambert;
    fn neg(self) -> Lambert {
        self.scale(-1.0)
    }
}

impl Sub for &Lambert {
    type Output = Lambert;
    fn sub(self, o: &Lambert) -> Lambert {
        self + &(-o)
    }
}

impl Mul for &Lambert {
    type Output = Lambert;
    fn mul(self, o: &Lambert) -> Lambert {
        let mut terms = Vec::with_capacity(self.terms.len() * o.terms.len());
        for a in &self.terms {
            for b in &o.terms {
                let mut dens = a.dens.clone();
                dens.extend_from_slice(&b.dens);
                dens.sort_by(f64::total_cmp);
                terms.push(Term { s: a.s * b.s, e: a.e + b.e, dens });
            }
        }
        Lambert { terms }.simplify()
    }
}
