//! General-purpose adversaries for calibrating the harness.

use rand::Rng;

use super::{bf_preimage, bf_second_preimage, no_state, Adversary, Answer, Challenge, Ctx, Property, State};
use crate::bits::BitString;
use crate::seed::random_bits;

fn flip_last(x: &BitString) -> BitString {
    x.flip(x.len() - 1).expect("non-empty message")
}

fn stored(state: State) -> Option<BitString> {
    state.downcast::<BitString>().ok().map(|b| *b)
}

/// Fixed answers: key `0^n`, target `0^d` or `0^m`, preimage guess `0^m`,
/// second preimage `x' xor 1`.
#[derive(Debug, Clone, Copy, Default)]
pub struct Canonical;

impl Adversary for Canonical {
    fn name(&self) -> String {
        "any".into()
    }

    fn stage_a(&self, ctx: &mut Ctx<'_>) -> (BitString, State) {
        let p = ctx.family.params();
        match ctx.prop {
            Property::EPre => (BitString::zeros(p.d), no_state()),
            Property::ESec => {
                let x = BitString::zeros(p.m);
                (x.clone(), Box::new(x))
            }
            _ => (BitString::zeros(p.n), no_state()),
        }
    }

    fn stage_b(&self, ctx: &mut Ctx<'_>, challenge: &Challenge, state: State) -> Answer {
        let m = ctx.family.params().m;
        match ctx.prop {
            Property::Coll => Answer::Pair(BitString::zeros(m), flip_last(&BitString::zeros(m))),
            Property::Pre | Property::APre | Property::EPre => Answer::Message(BitString::zeros(m)),
            Property::Sec | Property::ASec => match &challenge.message {
                Some(x) => Answer::Message(flip_last(x)),
                None => Answer::Abstain,
            },
            Property::ESec => match challenge.message.clone().or_else(|| stored(state)) {
                Some(x) => Answer::Message(flip_last(&x)),
                None => Answer::Abstain,
            },
        }
    }
}

/// Exhaustive search over the message space; optimal at toy sizes. Picks
/// key `0^n`, digest `0^d` and target `0^m` in first stages.
#[derive(Debug, Clone, Copy, Default)]
pub struct BruteForce;

impl Adversary for BruteForce {
    fn name(&self) -> String {
        "bf".into()
    }

    fn stage_a(&self, ctx: &mut Ctx<'_>) -> (BitString, State) {
        let p = ctx.family.params();
        match ctx.prop {
            Property::EPre => {
                let y = BitString::zeros(p.d);
                (y.clone(), Box::new(y))
            }
            Property::ESec => {
                let x = BitString::zeros(p.m);
                (x.clone(), Box::new(x))
            }
            _ => {
                let k = BitString::zeros(p.n);
                (k.clone(), Box::new(k))
            }
        }
    }

    fn stage_b(&self, ctx: &mut Ctx<'_>, challenge: &Challenge, state: State) -> Answer {
        let fam = ctx.family;
        let stashed = stored(state);
        let key = match challenge.key.clone().or_else(|| stashed.clone()) {
            Some(k) => k,
            None => return Answer::Abstain,
        };
        let found = match ctx.prop {
            Property::Coll => {
                let zero = BitString::zeros(fam.params().m);
                return match bf_second_preimage(fam, &key, &zero).ok().flatten() {
                    Some(x) => Answer::Pair(zero, x),
                    None => Answer::Abstain,
                };
            }
            Property::Pre | Property::APre => challenge
                .digest
                .as_ref()
                .and_then(|y| bf_preimage(fam, &key, y).ok().flatten()),
            Property::EPre => challenge
                .digest
                .clone()
                .or(stashed)
                .and_then(|y| bf_preimage(fam, &key, &y).ok().flatten()),
            Property::Sec | Property::ASec => challenge
                .message
                .as_ref()
                .and_then(|x| bf_second_preimage(fam, &key, x).ok().flatten()),
            Property::ESec => challenge
                .message
                .clone()
                .or(stashed)
                .and_then(|x| bf_second_preimage(fam, &key, &x).ok().flatten()),
        };
        match found {
            Some(x) => Answer::Message(x),
            None => {
                ctx.log.note("search exhausted");
                Answer::Abstain
            }
        }
    }
}

/// Uniformly random answers; uniformly random first-stage choices.
#[derive(Debug, Clone, Copy, Default)]
pub struct RandomGuess;

impl Adversary for RandomGuess {
    fn name(&self) -> String {
        "guess".into()
    }

    fn stage_a(&self, ctx: &mut Ctx<'_>) -> (BitString, State) {
        let p = ctx.family.params();
        let width = match ctx.prop {
            Property::EPre => p.d,
            Property::ESec => p.m,
            _ => p.n,
        };
        (random_bits(ctx.rng, width), no_state())
    }

    fn stage_b(&self, ctx: &mut Ctx<'_>, _challenge: &Challenge, _state: State) -> Answer {
        let m = ctx.family.params().m;
        match ctx.prop {
            Property::Coll => Answer::Pair(random_bits(ctx.rng, m), random_bits(ctx.rng, m)),
            _ => Answer::Message(random_bits(ctx.rng, m)),
        }
    }
}

/// Collision adversary that answers `(0^m, 0^{m-1}1)` with probability `p`
/// and the losing `(0^m, 0^m)` otherwise. Against a constant family it wins
/// exactly with probability `p`.
#[derive(Debug, Clone, Copy)]
pub struct Bernoulli {
    pub p: f64,
}

impl Adversary for Bernoulli {
    fn name(&self) -> String {
        format!("bernoulli({})", self.p)
    }

    fn stage_b(&self, ctx: &mut Ctx<'_>, _challenge: &Challenge, _state: State) -> Answer {
        let zero = BitString::zeros(ctx.family.params().m);
        if ctx.rng.gen_bool(self.p) {
            Answer::Pair(zero.clone(), flip_last(&zero))
        } else {
            Answer::Pair(zero.clone(), zero)
        }
    }
}
