use crate::context::Ctx;
use crate::error::Error;
use crate::C64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use serde_json::{json, Map, Value};
use sha2::{Digest, Sha256};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckReport {
    pub name: String,
    pub paper_ref: String,
    pub params: Value,
    pub n_samples: usize,
    #[serde(with = "lenient_f64")]
    pub max_residual: f64,
    pub tolerance: f64,
    pub pass: bool,
    pub details: Value,
}

// JSON has no inf/nan; errored checks carry them as strings.
mod lenient_f64 {
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &f64, s: S) -> Result<S::Ok, S::Error> {
        if v.is_finite() {
            s.serialize_f64(*v)
        } else {
            s.serialize_str(&v.to_string())
        }
    }

    #[derive(Deserialize)]
    #[serde(untagged)]
    enum NumOrStr {
        N(f64),
        S(String),
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<f64, D::Error> {
        match NumOrStr::deserialize(d)? {
            NumOrStr::N(x) => Ok(x),
            NumOrStr::S(s) => s.parse().map_err(serde::de::Error::custom),
        }
    }
}

impl CheckReport {
    pub fn from_worst(
        name: &str,
        paper_ref: &str,
        params: Params,
        n_samples: usize,
        worst: Worst,
        tolerance: f64,
        mut details: Value,
    ) -> CheckReport {
        let max_residual = worst.max;
        if let (Some(at), Value::Object(m)) = (worst.at, &mut details) {
            m.insert("worst_at".into(), at);
        }
        CheckReport {
            name: name.into(),
            paper_ref: paper_ref.into(),
            params: params.into_value(),
            n_samples,
            max_residual,
            tolerance,
            pass: max_residual < tolerance,
            details,
        }
    }

    pub fn errored(name: &str, paper_ref: &str, params: Params, err: Error) -> CheckReport {
        CheckReport {
            name: name.into(),
            paper_ref: paper_ref.into(),
            params: params.into_value(),
            n_samples: 0,
            max_residual: f64::INFINITY,
            tolerance: 0.0,
            pass: false,
            details: json!({"error": err.to_string()}),
        }
    }

    pub fn text_line(&self) -> String {
        format!(
            "{} {} {:.3e} {:.1e} {}",
            if self.pass { "PASS" } else { "FAIL" },
            self.name,
            self.max_residual,
            self.tolerance,
            self.paper_ref
        )
    }
}

#[derive(Debug, Clone, Default)]
pub struct Params(Map<String, Value>);

impl Params {
    pub fn new() -> Self {
        Params(Map::new())
    }

    pub fn ctx(ctx: &Ctx) -> Self {
        let mut p = Params::new();
        p.set("q", json!(ctx.q));
        p.set("r", json!(ctx.r));
        p.set("c", json!(ctx.c));
        p
    }

    pub fn set(&mut self, k: &str, v: Value) -> &mut Self {
        self.0.insert(k.into(), v);
        self
    }

    pub fn with(mut self, k: &str, v: Value) -> Self {
        self.0.insert(k.into(), v);
        self
    }

    pub fn into_value(self) -> Value {
        Value::Object(self.0)
    }
}

/// Largest residual seen and where. NaN counts as infinitely bad.
#[derive(Debug, Clone, Default)]
pub struct Worst {
    pub max: f64,
    pub at: Option<Value>,
}

impl Worst {
    pub fn push(&mut self, v: f64, at: impl FnOnce() -> Value) {
        let v = if v.is_nan() { f64::INFINITY } else { v };
        if v > self.max || (self.at.is_none() && v >= self.max) {
            self.max = v;
            self.at = Some(at());
        }
    }

    pub fn merge(&mut self, other: Worst) {
        if let Some(at) = other.at {
            self.push(other.max, || at);
        }
    }
}

/// Knobs shared by every check.
#[derive(Debug, Clone, PartialEq)]
pub struct RunParams {
    pub seed: u64,
    pub n_samples: usize,
    pub tol: Option<f64>,
    pub order: usize,
}

impl Default for RunParams {
    fn default() -> Self {
        RunParams { seed: 0, n_samples: 100, tol: None, order: 30 }
    }
}

impl RunParams {
    pub fn tol(&self, pinned: f64) -> f64 {
        self.tol.unwrap_or(pinned)
    }

    /// Stream for one check: seeded from sha256(seed || name), so selecting
    /// a subset of checks never shifts another check's samples.
    pub fn sampler(&self, name: &str) -> Sampler {
        let mut h = Sha256::new();
        h.update(self.seed.to_le_bytes());
        h.update(name.as_bytes());
        let digest = h.finalize();
        let mut seed = [0u8; 32];
        seed.copy_from_slice(&digest[..32]);
        Sampler(ChaCha8Rng::from_seed(seed))
    }
}

/// Evaluate `f` on `n` draws, resampling (bounded) when it signals a pole.
/// Returns the worst residual and the number of resamples.
pub fn sample_worst<T, F>(
    n: usize,
    mut draw: impl FnMut() -> T,
    mut f: F,
    at: impl Fn(&T) -> Value,
) -> (Worst, usize)
where
    F: FnMut(&T) -> Result<f64, Error>,
{
    let mut worst = Worst::default();
    let mut skipped = 0;
    for _ in 0..n {
        let mut done = false;
        for _ in 0..MAX_RETRIES {
            let x = draw();
            match f(&x) {
                Ok(v) => {
                    worst.push(v, || at(&x));
                    done = true;
                    break;
                }
                Err(Error::Pole(_)) => skipped += 1,
                Err(e) => {
                    worst.push(f64::INFINITY, || json!({"at": at(&x), "error": e.to_string()}));
                    done = true;
                    break;
                }
            }
        }
        if !done {
            worst.push(f64::INFINITY, || json!("pole retries exhausted"));
        }
    }
    (worst, skipped)
}

pub const MAX_RETRIES: usize = 20;

pub struct Sampler(ChaCha8Rng);

impl Sampler {
    pub fn uniform(&mut self, lo: f64, hi: f64) -> f64 {
        self.0.gen_range(lo..hi)
    }

    /// Uniform in |Re| <= re, |Im| <= im.
    pub fn complex(&mut self, re: f64, im: f64) -> C64 {
        let a = if re > 0.0 { self.uniform(-re, re) } else { 0.0 };
        let b = if im > 0.0 { self.uniform(-im, im) } else { 0.0 };
        C64::new(a, b)
    }

    /// Real part kept at least `gap` away from the lattice (1/2)Z.
    pub fn off_half_lattice(&mut self, re: f64, im: f64, gap: f64) -> C64 {
        loop {
            let z = self.complex(re, im);
            let d = (2.0 * z.re).round() / 2.0;
            if (z.re - d).abs() >= gap {
                return z;
            }
        }
    }
}
