//! Challengers for the seven hash-function security games.
//!
//! | game | adversary first stage | challenger samples | second stage sees |
//! |------|-----------------------|--------------------|-------------------|
//! | Coll | -                     | k                  | k                 |
//! | Pre  | -                     | k, x', y = H_k(x') | k, y              |
//! | Sec  | -                     | k, x'              | k, x'             |
//! | aPre | k                     | x', y = H_k(x')    | y                 |
//! | aSec | k                     | x'                 | x'                |
//! | ePre | y                     | k                  | k, y              |
//! | eSec | x'                    | k                  | k, x'             |
//!
//! Keys are uniform over `{0,1}^n` and targets over `{0,1}^m`, drawn in that
//! order from the challenger stream of the trial seed. The adversary has its
//! own stream shared by both of its stages, and carries anything else it
//! needs between stages in its opaque state. In ePre and eSec the second
//! stage also finds its own first-stage output in the challenge.

mod adversaries;
mod brute;
mod estimate;

use std::any::Any;
use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use rand_chacha::ChaCha20Rng;

use crate::bits::BitString;
use crate::error::{Error, Result};
use crate::family::FunctionFamily;
use crate::seed::{random_bits, Seed};

pub use adversaries::{Bernoulli, BruteForce, Canonical, RandomGuess};
pub use brute::{bf_preimage, bf_second_preimage, birthday_collision, MAX_ENUM_BITS};
pub use estimate::{estimate_advantage, run_trials, wilson_interval, AdvantageEstimate, ExperimentReport};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, serde::Serialize)]
pub enum Property {
    Coll,
    Pre,
    Sec,
    APre,
    ASec,
    EPre,
    ESec,
}

impl Property {
    pub const ALL: [Property; 7] = [
        Property::Coll,
        Property::Pre,
        Property::Sec,
        Property::APre,
        Property::ASec,
        Property::EPre,
        Property::ESec,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Property::Coll => "Coll",
            Property::Pre => "Pre",
            Property::Sec => "Sec",
            Property::APre => "aPre",
            Property::ASec => "aSec",
            Property::EPre => "ePre",
            Property::ESec => "eSec",
        }
    }

    /// Whether the adversary runs a first stage before the challenge.
    pub fn two_stage(self) -> bool {
        matches!(self, Property::APre | Property::ASec | Property::EPre | Property::ESec)
    }

    /// Whether the winning answer is a preimage of a digest.
    pub fn is_preimage(self) -> bool {
        matches!(self, Property::Pre | Property::APre | Property::EPre)
    }
}

impl fmt::Display for Property {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Property {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Property::ALL
            .into_iter()
            .find(|p| p.name().eq_ignore_ascii_case(s))
            .ok_or_else(|| Error::UnknownSpec {
                kind: "property",
                name: s.to_owned(),
                known: Property::ALL.map(Property::name).join(", "),
            })
    }
}

/// What the challenger sends to the second stage. Fields not used by a game
/// are `None`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Challenge {
    pub prop: Property,
    pub key: Option<BitString>,
    pub digest: Option<BitString>,
    pub message: Option<BitString>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Answer {
    Message(BitString),
    Pair(BitString, BitString),
    Abstain,
}

/// Adversary state carried from the first to the second stage. The
/// challenger never inspects it.
pub type State = Box<dyn Any + Send>;

pub fn no_state() -> State {
    Box::new(())
}

/// Per-trial side channel for diagnostics: free-form notes and named
/// counters. Game outcomes never depend on it.
#[derive(Debug, Clone, Default, PartialEq, Eq, serde::Serialize)]
pub struct TrialLog {
    pub notes: Vec<String>,
    pub counters: BTreeMap<String, u64>,
}

impl TrialLog {
    pub fn note(&mut self, msg: impl Into<String>) {
        self.notes.push(msg.into());
    }

    pub fn add(&mut self, name: &str, v: u64) {
        *self.counters.entry(name.to_owned()).or_default() += v;
    }

    pub fn flag(&mut self, name: &str, set: bool) {
        self.add(name, u64::from(set));
    }

    pub fn get(&self, name: &str) -> u64 {
        self.counters.get(name).copied().unwrap_or(0)
    }
}

/// Everything an adversary stage can see besides the challenge.
pub struct Ctx<'a> {
    pub prop: Property,
    pub family: &'a FunctionFamily,
    pub rng: &'a mut ChaCha20Rng,
    pub log: &'a mut TrialLog,
}

/// A classical two-stage adversary `(A, B)`.
pub trait Adversary: Send + Sync {
    fn name(&self) -> String;

    /// First stage of the a- and e-variants: outputs the chosen key (aPre,
    /// aSec), digest (ePre) or message (eSec) with a private state.
    fn stage_a(&self, ctx: &mut Ctx<'_>) -> (BitString, State) {
        let _ = ctx;
        (BitString::new(), no_state())
    }

    fn stage_b(&self, ctx: &mut Ctx<'_>, challenge: &Challenge, state: State) -> Answer;
}

impl<A: Adversary + ?Sized> Adversary for Box<A> {
    fn name(&self) -> String {
        (**self).name()
    }

    fn stage_a(&self, ctx: &mut Ctx<'_>) -> (BitString, State) {
        (**self).stage_a(ctx)
    }

    fn stage_b(&self, ctx: &mut Ctx<'_>, challenge: &Challenge, state: State) -> Answer {
        (**self).stage_b(ctx, challenge, state)
    }
}

/// The key in force and the exchange with the second stage.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Played {
    pub key: BitString,
    pub challenge: Challenge,
    pub answer: Answer,
}

#[derive(Debug, Clone, PartialEq, Eq, serde::Serialize)]
pub struct GameOutcome {
    pub win: bool,
    pub log: TrialLog,
    /// `None` when the trial ended before the second stage answered.
    #[serde(skip)]
    pub played: Option<Played>,
}

/// The trial's challenger and adversary streams.
pub fn trial_streams(seed: &Seed) -> (ChaCha20Rng, ChaCha20Rng) {
    (seed.child("challenger", 0).rng(), seed.child("adversary", 0).rng())
}

fn loss(mut log: TrialLog, note: String) -> GameOutcome {
    log.note(note);
    GameOutcome {
        win: false,
        log,
        played: None,
    }
}

/// Runs one game. Malformed answers lose with a note; they never abort.
pub fn run_game(prop: Property, family: &FunctionFamily, adv: &dyn Adversary, seed: &Seed) -> GameOutcome {
    let family = family.for_trial(&seed.child("family", 0));
    let (mut chal, mut adv_rng) = trial_streams(seed);
    let mut log = TrialLog::default();
    let p = family.params();

    let (choice, state) = if prop.two_stage() {
        let mut ctx = Ctx {
            prop,
            family: &family,
            rng: &mut adv_rng,
            log: &mut log,
        };
        adv.stage_a(&mut ctx)
    } else {
        (BitString::new(), no_state())
    };

    let mut challenge = Challenge {
        prop,
        key: None,
        digest: None,
        message: None,
    };
    let key;
    // (target message, target digest) the answer is checked against
    let mut target_msg = None;
    let mut target_digest = None;
    match prop {
        Property::Coll | Property::Pre | Property::Sec => {
            key = random_bits(&mut chal, p.n);
            challenge.key = Some(key.clone());
            if prop != Property::Coll {
                let x = random_bits(&mut chal, p.m);
                if prop == Property::Pre {
                    let y = family.eval(&key, &x).expect("sampled widths");
                    challenge.digest = Some(y.clone());
                    target_digest = Some(y);
                } else {
                    challenge.message = Some(x.clone());
                    target_msg = Some(x);
                }
            }
        }
        Property::APre | Property::ASec => {
            if let Err(e) = family.check_key(&choice) {
                return loss(log, format!("malformed first stage: {e}"));
            }
            key = choice;
            let x = random_bits(&mut chal, p.m);
            if prop == Property::APre {
                let y = family.eval(&key, &x).expect("sampled widths");
                challenge.digest = Some(y.clone());
                target_digest = Some(y);
            } else {
                challenge.message = Some(x.clone());
                target_msg = Some(x);
            }
        }
        Property::EPre | Property::ESec => {
            let checked = if prop == Property::EPre {
                family.check_digest(&choice)
            } else {
                family.check_msg(&choice)
            };
            if let Err(e) = checked {
                return loss(log, format!("malformed first stage: {e}"));
            }
            if prop == Property::EPre {
                challenge.digest = Some(choice.clone());
                target_digest = Some(choice);
            } else {
                challenge.message = Some(choice.clone());
                target_msg = Some(choice);
            }
            key = random_bits(&mut chal, p.n);
            challenge.key = Some(key.clone());
        }
    }

    let answer = {
        let mut ctx = Ctx {
            prop,
            family: &family,
            rng: &mut adv_rng,
            log: &mut log,
        };
        adv.stage_b(&mut ctx, &challenge, state)
    };

    let played = Played {
        key: key.clone(),
        challenge,
        answer: answer.clone(),
    };
    let lose = |mut log: TrialLog, note: String| {
        log.note(note);
        GameOutcome {
            win: false,
            log,
            played: Some(played.clone()),
        }
    };
    let (x, x_prime) = match (prop, answer) {
        (Property::Coll, Answer::Pair(a, b)) => (a, b),
        (Property::Coll, other) => return lose(log, format!("Coll expects a pair, got {other:?}")),
        (_, Answer::Message(x)) => (x, target_msg.clone().unwrap_or_default()),
        (_, other) => return lose(log, format!("{prop} expects one message, got {other:?}")),
    };
    for m in [&x, &x_prime].into_iter().take(if prop.is_preimage() { 1 } else { 2 }) {
        if let Err(e) = family.check_msg(m) {
            return lose(log, format!("malformed answer: {e}"));
        }
    }
    let hx = family.eval(&key, &x).expect("checked widths");
    let win = match target_digest {
        Some(y) => hx == y,
        None => x != x_prime && hx == family.eval(&key, &x_prime).expect("checked widths"),
    };
    GameOutcome {
        win,
        log,
        played: Some(played),
    }
}
