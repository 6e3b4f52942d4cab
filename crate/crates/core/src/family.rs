//! Keyed compression-function families `H: {0,1}^n x {0,1}^m -> {0,1}^d`.

use std::fmt;
use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::Arc;

use crate::bits::BitString;
use crate::error::{Error, Result};
use crate::seed::Seed;

/// Largest width accepted by the enumerable toy families.
pub const MAX_TOY_BITS: usize = 16;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, serde::Serialize)]
pub struct FamilyParams {
    pub n: usize,
    pub m: usize,
    pub d: usize,
}

impl FamilyParams {
    /// Compressing parameters: block size `b = m - d` must be positive.
    pub fn new(n: usize, m: usize, d: usize) -> Result<Self> {
        let p = Self::expanding(n, m, d)?;
        if m <= d {
            return Err(Error::InvalidParams(format!(
                "block size b = m - d must be > 0 (m = {m}, d = {d})"
            )));
        }
        Ok(p)
    }

    /// Parameters for keyed functions that need not compress (`d >= m` is
    /// allowed). Only game fixtures use these; iterated constructions call
    /// [`FamilyParams::new`].
    pub fn expanding(n: usize, m: usize, d: usize) -> Result<Self> {
        if n == 0 || m == 0 || d == 0 {
            return Err(Error::InvalidParams(format!(
                "n, m, d must be positive (n = {n}, m = {m}, d = {d})"
            )));
        }
        Ok(Self { n, m, d })
    }

    /// Block size `m - d`; zero for non-compressing parameters.
    pub fn b(&self) -> usize {
        self.m.saturating_sub(self.d)
    }

    /// Extra constraint for ROX: `b > 0` and `d >= 2b`.
    pub fn check_rox(&self) -> Result<()> {
        if self.m <= self.d {
            return Err(Error::InvalidParams(format!(
                "block size b = m - d must be > 0 (m = {}, d = {})",
                self.m, self.d
            )));
        }
        if self.d < 2 * self.b() {
            return Err(Error::InvalidParams(format!(
                "ROX needs d >= 2b (d = {}, b = {})",
                self.d,
                self.b()
            )));
        }
        Ok(())
    }
}

impl fmt::Display for FamilyParams {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "n={},m={},d={}", self.n, self.m, self.d)
    }
}

type EvalFn = dyn Fn(&BitString, &BitString) -> BitString + Send + Sync;
type ReseedFn = dyn Fn(&Seed) -> FunctionFamily + Send + Sync;

/// A deterministic keyed function with declared widths. Cheap to clone and
/// safe to share across threads.
#[derive(Clone)]
pub struct FunctionFamily {
    params: FamilyParams,
    label: String,
    eval: Arc<EvalFn>,
    reseed: Option<Arc<ReseedFn>>,
}

impl fmt::Debug for FunctionFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FunctionFamily")
            .field("label", &self.label)
            .field("params", &self.params)
            .finish()
    }
}

impl FunctionFamily {
    /// Wraps a raw evaluation function. `eval` receives inputs of the
    /// declared widths and must return exactly `params.d` bits.
    pub fn from_fn<F>(label: impl Into<String>, params: FamilyParams, eval: F) -> Self
    where
        F: Fn(&BitString, &BitString) -> BitString + Send + Sync + 'static,
    {
        Self {
            params,
            label: label.into(),
            eval: Arc::new(eval),
            reseed: None,
        }
    }

    /// Attaches a per-trial re-instantiation hook. Families backed by
    /// simulated oracles use it so each game trial sees fresh oracles.
    pub fn with_reseed<F>(mut self, reseed: F) -> Self
    where
        F: Fn(&Seed) -> FunctionFamily + Send + Sync + 'static,
    {
        self.reseed = Some(Arc::new(reseed));
        self
    }

    pub fn params(&self) -> FamilyParams {
        self.params
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = label.into();
        self
    }

    pub fn eval(&self, key: &BitString, msg: &BitString) -> Result<BitString> {
        self.check_key(key)?;
        self.check_msg(msg)?;
        let out = (self.eval)(key, msg);
        debug_assert_eq!(out.len(), self.params.d, "{} returned a bad width", self.label);
        Ok(out)
    }

    pub fn check_key(&self, key: &BitString) -> Result<()> {
        if key.len() != self.params.n {
            return Err(Error::WidthMismatch {
                what: "key",
                expected: self.params.n,
                actual: key.len(),
            });
        }
        Ok(())
    }

    pub fn check_msg(&self, msg: &BitString) -> Result<()> {
        if msg.len() != self.params.m {
            return Err(Error::WidthMismatch {
                what: "message",
                expected: self.params.m,
                actual: msg.len(),
            });
        }
        Ok(())
    }

    pub fn check_digest(&self, digest: &BitString) -> Result<()> {
        if digest.len() != self.params.d {
            return Err(Error::WidthMismatch {
                what: "digest",
                expected: self.params.d,
                actual: digest.len(),
            });
        }
        Ok(())
    }

    /// The instance to use for one game trial.
    pub fn for_trial(&self, seed: &Seed) -> FunctionFamily {
        match &self.reseed {
            Some(f) => f(seed),
            None => self.clone(),
        }
    }

    /// Wraps the family with a call counter.
    pub fn counted(&self) -> (FunctionFamily, CallCounter) {
        let counter = CallCounter::default();
        let inner = self.clone();
        let c = counter.clone();
        let fam = FunctionFamily::from_fn(self.label.clone(), self.params, move |k, x| {
            c.0.fetch_add(1, Ordering::Relaxed);
            (inner.eval)(k, x)
        });
        (fam, counter)
    }
}

#[derive(Debug, Clone, Default)]
pub struct CallCounter(Arc<AtomicU64>);

impl CallCounter {
    pub fn get(&self) -> u64 {
        self.0.load(Ordering::Relaxed)
    }

    pub fn reset(&self) {
        self.0.store(0, Ordering::Relaxed);
    }
}

/// Pseudorandom family: `H_k(x)` is the first `d` bits of
/// `seed.expand("family", k || x, d)`.
pub fn tabulated_family(seed: &Seed, params: FamilyParams) -> Result<FunctionFamily> {
    for (name, v) in [("n", params.n), ("m", params.m), ("d", params.d)] {
        if v > MAX_TOY_BITS {
            return Err(Error::InvalidParams(format!(
                "tabulated family needs {name} <= {MAX_TOY_BITS}, got {v}"
            )));
        }
    }
    let seed = seed.clone();
    let d = params.d;
    Ok(FunctionFamily::from_fn(
        format!("tab[{params}]"),
        params,
        move |k, x| seed.expand("family", &k.concat(x), d),
    ))
}

/// `H_k(x) = c` everywhere.
pub fn constant_family(params: FamilyParams, c: BitString) -> Result<FunctionFamily> {
    if c.len() != params.d {
        return Err(Error::WidthMismatch {
            what: "constant",
            expected: params.d,
            actual: c.len(),
        });
    }
    let label = if c.is_zero() {
        "const0".to_owned()
    } else {
        format!("const[{c}]")
    };
    Ok(FunctionFamily::from_fn(label, params, move |_, _| c.clone()))
}

/// Injective in `x` for every key: `H_k(x) = (x || 0^{d-m}) xor mask(k)`.
/// Requires `d >= m`, so the parameters are non-compressing.
pub fn injective_family(seed: &Seed, params: FamilyParams) -> Result<FunctionFamily> {
    if params.d < params.m {
        return Err(Error::InvalidParams(format!(
            "injective family needs d >= m (m = {}, d = {})",
            params.m, params.d
        )));
    }
    let seed = seed.clone();
    let pad = params.d - params.m;
    Ok(FunctionFamily::from_fn(
        format!("inj[{params}]"),
        params,
        move |k, x| {
            let mask = seed.expand("injective", k, x.len() + pad);
            x.concat(&BitString::zeros(pad)).xor(&mask).expect("widths")
        },
    ))
}
