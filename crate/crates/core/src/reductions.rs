//! Adversary transformers: collision finding from an eSec adversary, and the
//! wrappers that turn an attack on ROX into an attack on its compression
//! family.

use std::collections::BTreeMap;

use rand::Rng;
use rand_chacha::ChaCha20Rng;

use crate::bits::BitString;
use crate::error::Result;
use crate::family::FunctionFamily;
use crate::games::{no_state, Adversary, Answer, Challenge, Ctx, Property, State};
use crate::rox::RoxInstance;
use crate::seed::{random_bits, Seed};
use crate::toolkit::{embed_message, extract_collision, extract_preimage};

/// `T(A)`: samples `x`, receives `k`, runs the eSec second stage of `A` on
/// `(k, x)` and outputs `(x, x')`.
#[derive(Debug, Clone)]
pub struct CollFromESec<A> {
    pub inner: A,
}

impl<A: Adversary> CollFromESec<A> {
    pub fn new(inner: A) -> Self {
        Self { inner }
    }
}

impl<A: Adversary> Adversary for CollFromESec<A> {
    fn name(&self) -> String {
        format!("T({})", self.inner.name())
    }

    fn stage_b(&self, ctx: &mut Ctx<'_>, challenge: &Challenge, _state: State) -> Answer {
        let x = random_bits(ctx.rng, ctx.family.params().m);
        let inner_challenge = Challenge {
            prop: Property::ESec,
            key: challenge.key.clone(),
            digest: None,
            message: Some(x.clone()),
        };
        let mut inner_ctx = Ctx {
            prop: Property::ESec,
            family: ctx.family,
            rng: &mut *ctx.rng,
            log: &mut *ctx.log,
        };
        match self.inner.stage_b(&mut inner_ctx, &inner_challenge, no_state()) {
            Answer::Message(x2) => Answer::Pair(x, x2),
            other => {
                ctx.log.note(format!("inner answered {other:?}"));
                Answer::Abstain
            }
        }
    }
}

/// eSec adversary that samples its target uniformly and answers it with the
/// last bit flipped. Always wins against a constant family.
#[derive(Debug, Clone, Copy, Default)]
pub struct FlipLastESec;

impl Adversary for FlipLastESec {
    fn name(&self) -> String {
        "flip-last".into()
    }

    fn stage_a(&self, ctx: &mut Ctx<'_>) -> (BitString, State) {
        (random_bits(ctx.rng, ctx.family.params().m), no_state())
    }

    fn stage_b(&self, _ctx: &mut Ctx<'_>, challenge: &Challenge, _state: State) -> Answer {
        match &challenge.message {
            Some(x) => Answer::Message(x.flip(x.len() - 1).expect("non-empty")),
            None => Answer::Abstain,
        }
    }
}

/// What a ROX adversary is asked to invert or match.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum RoxTarget {
    Digest(BitString),
    Message(BitString),
}

/// An adversary against ROX itself. It reaches the oracles only through the
/// instance it is handed.
pub trait RoxAdversary: Send + Sync {
    fn name(&self) -> String;

    fn choose_key(&self, inst: &mut RoxInstance, rng: &mut ChaCha20Rng) -> (BitString, State);

    fn respond(
        &self,
        inst: &mut RoxInstance,
        key: &BitString,
        target: &RoxTarget,
        state: State,
        rng: &mut ChaCha20Rng,
    ) -> Option<BitString>;
}

fn fresh_oracle_seed(rng: &mut ChaCha20Rng) -> Seed {
    Seed::from_bytes(rng.gen())
}

struct Carried {
    inst: RoxInstance,
    key: BitString,
    inner: State,
}

/// Builds the reduction-owned instance, runs the inner key choice and packs
/// everything for the second stage.
fn rox_stage_a<R: RoxAdversary + ?Sized>(inner: &R, max_blocks: usize, ctx: &mut Ctx<'_>) -> (BitString, State) {
    let seed = fresh_oracle_seed(ctx.rng);
    let mut inst = match RoxInstance::new(ctx.family.clone(), max_blocks, &seed) {
        Ok(i) => i,
        Err(e) => {
            ctx.log.note(format!("cannot build ROX instance: {e}"));
            return (BitString::new(), no_state());
        }
    };
    let (key, inner_state) = inner.choose_key(&mut inst, ctx.rng);
    let carried = Carried {
        inst,
        key: key.clone(),
        inner: inner_state,
    };
    (key, Box::new(carried))
}

/// Recovers the carried instance, or builds one for the one-stage games where
/// the challenger supplies the key.
fn rox_unpack(max_blocks: usize, ctx: &mut Ctx<'_>, challenge: &Challenge, state: State) -> Option<Carried> {
    if let Ok(c) = state.downcast::<Carried>() {
        return Some(*c);
    }
    let key = challenge.key.clone()?;
    let seed = fresh_oracle_seed(ctx.rng);
    match RoxInstance::new(ctx.family.clone(), max_blocks, &seed) {
        Ok(inst) => Some(Carried {
            inst,
            key,
            inner: no_state(),
        }),
        Err(e) => {
            ctx.log.note(format!("cannot build ROX instance: {e}"));
            None
        }
    }
}

/// Preimage reduction: the challenge digest is handed to the ROX adversary as
/// its target, and the last compression input of its answer is returned.
/// Plays aPre, or Pre with the challenger's key.
///
/// Counters per trial: `inner_win`, `extra_queries` (oracle queries made by
/// the extraction) and `q_xhat` (the oracle cost of the inner answer).
pub struct RoxAPreReduction<R> {
    pub inner: R,
    pub max_blocks: usize,
}

impl<R: RoxAdversary> RoxAPreReduction<R> {
    pub fn new(inner: R, max_blocks: usize) -> Self {
        Self { inner, max_blocks }
    }
}

impl<R: RoxAdversary> Adversary for RoxAPreReduction<R> {
    fn name(&self) -> String {
        format!("rox-apre({})", self.inner.name())
    }

    fn stage_a(&self, ctx: &mut Ctx<'_>) -> (BitString, State) {
        rox_stage_a(&self.inner, self.max_blocks, ctx)
    }

    fn stage_b(&self, ctx: &mut Ctx<'_>, challenge: &Challenge, state: State) -> Answer {
        let Some(y) = challenge.digest.clone() else {
            return Answer::Abstain;
        };
        let Some(Carried { mut inst, key, inner }) = rox_unpack(self.max_blocks, ctx, challenge, state) else {
            return Answer::Abstain;
        };
        let target = RoxTarget::Digest(y.clone());
        let Some(xhat) = self.inner.respond(&mut inst, &key, &target, inner, ctx.rng) else {
            return Answer::Abstain;
        };
        if let Err(e) = inst.layout().check_len(xhat.len()) {
            ctx.log.note(format!("inner answer malformed: {e}"));
            return Answer::Abstain;
        }
        let before = inst.oracle_queries();
        let x = match extract_preimage(&mut inst, &key, &xhat) {
            Ok(x) => x,
            Err(e) => {
                ctx.log.note(format!("extract-preimage: {e}"));
                return Answer::Abstain;
            }
        };
        ctx.log.add("extra_queries", inst.oracle_queries() - before);
        ctx.log.add("q_xhat", inst.layout().oracle_cost(xhat.len()) as u64);
        let inner_win = inst.eval(&key, &xhat).map(|d| d == y).unwrap_or(false);
        ctx.log.flag("inner_win", inner_win);
        Answer::Message(x)
    }
}

/// Second-preimage reduction: embeds the challenge at a uniformly chosen
/// round `i <= i_max`, runs the ROX adversary on the embedding and keeps the
/// extracted collision only if it sits at round `i`. Plays aSec, or Sec with
/// the challenger's key.
///
/// Counters per trial: `i`, `i_star`, `inner_win`, `fail` (`i_star != i`).
pub struct RoxASecReduction<R> {
    pub inner: R,
    pub max_blocks: usize,
    pub i_max: usize,
}

pub const DEFAULT_I_MAX: usize = 8;

impl<R: RoxAdversary> RoxASecReduction<R> {
    pub fn new(inner: R, max_blocks: usize) -> Self {
        Self {
            inner,
            max_blocks,
            i_max: DEFAULT_I_MAX,
        }
    }

    pub fn with_i_max(mut self, i_max: usize) -> Self {
        self.i_max = i_max;
        self
    }
}

impl<R: RoxAdversary> Adversary for RoxASecReduction<R> {
    fn name(&self) -> String {
        format!("rox-asec({}, i_max={})", self.inner.name(), self.i_max)
    }

    fn stage_a(&self, ctx: &mut Ctx<'_>) -> (BitString, State) {
        rox_stage_a(&self.inner, self.max_blocks, ctx)
    }

    fn stage_b(&self, ctx: &mut Ctx<'_>, challenge: &Challenge, state: State) -> Answer {
        let Some(x) = challenge.message.clone() else {
            return Answer::Abstain;
        };
        let Some(Carried { mut inst, key, inner }) = rox_unpack(self.max_blocks, ctx, challenge, state) else {
            return Answer::Abstain;
        };
        let i = ctx.rng.gen_range(1..=self.i_max.max(1));
        ctx.log.add("i", i as u64);
        let embed_seed = fresh_oracle_seed(ctx.rng);
        let embedded = match embed_message(&mut inst, &key, &x, i, &embed_seed, None) {
            Ok(e) => e,
            Err(e) => {
                ctx.log.note(format!("embed-message: {e}"));
                return Answer::Abstain;
            }
        };
        let xhat = embedded.xhat;
        let target = RoxTarget::Message(xhat.clone());
        let Some(xhat2) = self.inner.respond(&mut inst, &key, &target, inner, ctx.rng) else {
            return Answer::Abstain;
        };
        if let Err(e) = inst.layout().check_len(xhat2.len()) {
            ctx.log.note(format!("inner answer malformed: {e}"));
            return Answer::Abstain;
        }
        let inner_win = xhat != xhat2
            && match (inst.eval(&key, &xhat), inst.eval(&key, &xhat2)) {
                (Ok(a), Ok(b)) => a == b,
                _ => false,
            };
        ctx.log.flag("inner_win", inner_win);
        let witness = match extract_collision(&mut inst, &key, &xhat, &xhat2) {
            Ok(w) => w,
            Err(e) => {
                ctx.log.note(format!("extract-collision: {e}"));
                return Answer::Abstain;
            }
        };
        ctx.log.add("i_star", witness.i_star as u64);
        if witness.i_star != i {
            ctx.log.flag("fail", true);
            ctx.log.note(format!("FAIL: i* = {} != i = {i}", witness.i_star));
            return Answer::Abstain;
        }
        Answer::Message(witness.x2)
    }
}

/// Picks key `0^n` and searches random messages of `msg_bits` bits for a
/// ROX preimage of the target digest, within `budget` evaluations.
#[derive(Debug, Clone, Copy)]
pub struct BruteForceRoxPreimage {
    pub msg_bits: usize,
    pub budget: usize,
}

impl RoxAdversary for BruteForceRoxPreimage {
    fn name(&self) -> String {
        format!("rox-bf({} bits, {} tries)", self.msg_bits, self.budget)
    }

    fn choose_key(&self, inst: &mut RoxInstance, _rng: &mut ChaCha20Rng) -> (BitString, State) {
        (BitString::zeros(inst.params().n), no_state())
    }

    fn respond(
        &self,
        inst: &mut RoxInstance,
        key: &BitString,
        target: &RoxTarget,
        _state: State,
        rng: &mut ChaCha20Rng,
    ) -> Option<BitString> {
        let RoxTarget::Digest(y) = target else {
            return None;
        };
        (0..self.budget)
            .map(|_| random_bits(rng, self.msg_bits))
            .find(|x| inst.eval(key, x).map(|d| &d == y).unwrap_or(false))
    }
}

/// Picks key `0^n` and answers a target message by flipping the first bit of
/// its block `j`; abstains when the message has no such block. Against a
/// constant compression family this is always a ROX second preimage that
/// differs from the target in round `j` only.
#[derive(Debug, Clone, Copy)]
pub struct BlockFlip {
    pub j: usize,
}

impl RoxAdversary for BlockFlip {
    fn name(&self) -> String {
        format!("block-flip({})", self.j)
    }

    fn choose_key(&self, inst: &mut RoxInstance, _rng: &mut ChaCha20Rng) -> (BitString, State) {
        (BitString::zeros(inst.params().n), no_state())
    }

    fn respond(
        &self,
        inst: &mut RoxInstance,
        _key: &BitString,
        target: &RoxTarget,
        _state: State,
        _rng: &mut ChaCha20Rng,
    ) -> Option<BitString> {
        let RoxTarget::Message(x) = target else {
            return None;
        };
        let pos = inst.layout().b * (self.j - 1);
        (self.j >= 1 && x.len() > pos).then(|| x.flip(pos).expect("in range"))
    }
}

/// Total variation distance between the digest of a uniform `m`-bit message
/// under `family` and the ROX digest of a uniform `msg_bits`-bit message,
/// both at a uniform key, estimated from `samples` draws each.
pub fn digest_distance(
    family: &FunctionFamily,
    max_blocks: usize,
    msg_bits: usize,
    samples: usize,
    seed: &Seed,
) -> Result<f64> {
    let p = family.params();
    let mut inst = RoxInstance::new(family.clone(), max_blocks, &seed.child("oracles", 0))?;
    inst.layout().check_len(msg_bits)?;
    let mut rng = seed.child("samples", 0).rng();
    let mut direct: BTreeMap<BitString, i64> = BTreeMap::new();
    let mut rox: BTreeMap<BitString, i64> = BTreeMap::new();
    for _ in 0..samples {
        let k = random_bits(&mut rng, p.n);
        let x = random_bits(&mut rng, p.m);
        *direct.entry(family.eval(&k, &x)?).or_default() += 1;
        let k = random_bits(&mut rng, p.n);
        let x = random_bits(&mut rng, msg_bits);
        *rox.entry(inst.eval(&k, &x)?).or_default() += 1;
    }
    let mut diff: BTreeMap<&BitString, i64> = BTreeMap::new();
    for (y, c) in &direct {
        *diff.entry(y).or_default() += c;
    }
    for (y, c) in &rox {
        *diff.entry(y).or_default() -= c;
    }
    let l1: i64 = diff.values().map(|v| v.abs()).sum();
    Ok(l1 as f64 / (2 * samples.max(1)) as f64)
}
