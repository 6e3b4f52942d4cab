//! String-keyed families and adversaries, so experiments can be specified
//! from a command line. Family specs nest as `modifier:base`, e.g.
//! `pinned:tab4`, `zerokey:tab4`, `rox:const0`.

use std::fmt;
use std::str::FromStr;

use crate::bits::BitString;
use crate::error::{Error, Result};
use crate::family::{constant_family, tabulated_family, FamilyParams, FunctionFamily};
use crate::games::{Adversary, BruteForce, Canonical, RandomGuess};
use crate::reductions::{CollFromESec, FlipLastESec};
use crate::rox::{rox_family, RoxInstance, RoxLayout};
use crate::seed::Seed;
use crate::separations::{pinned_zero_family, zero_key_family, PinnedAttack, ZeroKeyAttack};

pub const BASE_FAMILIES: [&str; 3] = ["const0", "tab", "tab4"];
pub const MODIFIERS: [&str; 3] = ["pinned", "zerokey", "rox"];
pub const ADVERSARIES: [&str; 7] = [
    "any",
    "bf",
    "guess",
    "zero-key",
    "pin-attack",
    "flip-last",
    "t:flip-last",
];

/// ROX toy parameters `n, b, d, L`; the compression input is `m = b + d`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
pub struct ToyParams {
    pub n: usize,
    pub b: usize,
    pub d: usize,
    pub max_blocks: usize,
}

impl Default for ToyParams {
    fn default() -> Self {
        Self {
            n: 4,
            b: 4,
            d: 8,
            max_blocks: 16,
        }
    }
}

impl ToyParams {
    pub fn m(&self) -> usize {
        self.b + self.d
    }

    pub fn family_params(&self) -> Result<FamilyParams> {
        FamilyParams::new(self.n, self.m(), self.d)
    }

    /// Validates every ROX constraint.
    pub fn layout(&self) -> Result<RoxLayout> {
        RoxLayout::new(self.family_params()?, self.max_blocks)
    }

    /// Message width of `rox:` families.
    pub fn rox_msg_bits(&self) -> usize {
        4 * self.b
    }
}

impl fmt::Display for ToyParams {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{},{},{},{}", self.n, self.b, self.d, self.max_blocks)
    }
}

impl FromStr for ToyParams {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let parts: Vec<usize> = s
            .split(',')
            .map(|v| v.trim().parse::<usize>())
            .collect::<std::result::Result<_, _>>()
            .map_err(|e| Error::Parse(format!("params {s:?}: {e}")))?;
        let [n, b, d, max_blocks] = parts[..] else {
            return Err(Error::Parse(format!("params {s:?}: expected n,b,d,L")));
        };
        let p = Self { n, b, d, max_blocks };
        p.layout()?;
        Ok(p)
    }
}

/// Everything an experiment derives from `(params, master seed)`.
#[derive(Debug, Clone)]
pub struct Setup {
    pub params: ToyParams,
    pub seed: u64,
}

impl Setup {
    pub fn new(params: ToyParams, seed: u64) -> Self {
        Self { params, seed }
    }

    pub fn master(&self) -> Seed {
        Seed::from_u64(self.seed)
    }

    pub fn family_seed(&self) -> Seed {
        self.master().child("family", 0)
    }

    pub fn oracle_seed(&self) -> Seed {
        self.master().child("oracles", 0)
    }

    pub fn experiment_seed(&self) -> Seed {
        self.master().child("experiment", 0)
    }

    /// ROX over `family` with the setup's oracles.
    pub fn instance(&self, family: FunctionFamily) -> Result<RoxInstance> {
        RoxInstance::new(family, self.params.max_blocks, &self.oracle_seed())
    }

    pub fn family(&self, spec: &str) -> Result<FunctionFamily> {
        self.family_at(spec, self.params.family_params()?)
    }

    fn family_at(&self, spec: &str, p: FamilyParams) -> Result<FunctionFamily> {
        if let Some((modifier, rest)) = spec.split_once(':') {
            return match modifier {
                "pinned" => {
                    if p.d < 2 {
                        return Err(Error::InvalidParams("pinned family needs d >= 2".into()));
                    }
                    let base = self.family_at(rest, FamilyParams::expanding(p.n, p.m, p.d - 1)?)?;
                    pinned_zero_family(&base)
                }
                "zerokey" => Ok(zero_key_family(&self.family_at(rest, p)?)),
                "rox" => {
                    let base = self.family_at(rest, p)?;
                    rox_family(
                        &base,
                        self.params.max_blocks,
                        self.params.rox_msg_bits(),
                        &self.oracle_seed(),
                    )
                }
                _ => Err(unknown("family modifier", modifier, &MODIFIERS)),
            };
        }
        match spec {
            "const0" => constant_family(p, BitString::zeros(p.d)),
            "tab" | "tab4" => tabulated_family(&self.family_seed(), p),
            _ => Err(unknown("family", spec, &BASE_FAMILIES)),
        }
    }
}

fn unknown(kind: &'static str, name: &str, known: &[&str]) -> Error {
    Error::UnknownSpec {
        kind,
        name: name.to_owned(),
        known: known.join(", "),
    }
}

pub fn adversary(spec: &str) -> Result<Box<dyn Adversary>> {
    Ok(match spec {
        "any" => Box::new(Canonical),
        "bf" => Box::new(BruteForce),
        "guess" => Box::new(RandomGuess),
        "zero-key" => Box::new(ZeroKeyAttack),
        "pin-attack" => Box::new(PinnedAttack),
        "flip-last" => Box::new(FlipLastESec),
        "t:flip-last" => Box::new(CollFromESec::new(FlipLastESec)),
        _ => return Err(unknown("adversary", spec, &ADVERSARIES)),
    })
}
