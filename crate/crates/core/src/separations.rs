//! Families that keep one property while losing another, and the trivial
//! attacks that break them. Only the classical halves are covered.

use crate::bits::BitString;
use crate::error::Result;
use crate::family::{FamilyParams, FunctionFamily};
use crate::games::{no_state, Adversary, Answer, Challenge, Ctx, Property, State};

/// `H_k = F_k` except `H_{0^n}(x) = 0^d`.
pub fn zero_key_family(base: &FunctionFamily) -> FunctionFamily {
    let p = base.params();
    let inner = base.clone();
    let zero = BitString::zeros(p.d);
    let fam = FunctionFamily::from_fn(format!("zerokey:{}", base.label()), p, move |k, x| {
        if k.is_zero() {
            zero.clone()
        } else {
            inner.eval(k, x).expect("checked widths")
        }
    });
    let base = base.clone();
    fam.with_reseed(move |s| zero_key_family(&base.for_trial(s)))
}

/// `H_k(0^m) = 0^d` and `H_k(x) = 1 || F_k(x)` otherwise, where `F` has
/// digest width `d - 1`.
pub fn pinned_zero_family(base: &FunctionFamily) -> Result<FunctionFamily> {
    let p = base.params();
    let params = FamilyParams::expanding(p.n, p.m, p.d + 1)?;
    let inner = base.clone();
    let zero = BitString::zeros(params.d);
    let fam = FunctionFamily::from_fn(format!("pinned:{}", base.label()), params, move |k, x| {
        if x.is_zero() {
            zero.clone()
        } else {
            let mut y = BitString::ones(1);
            y.extend(&inner.eval(k, x).expect("checked widths"));
            y
        }
    });
    let base = base.clone();
    Ok(fam.with_reseed(move |s| pinned_zero_family(&base.for_trial(s)).expect("validated")))
}

/// Picks `k = 0^n`; answers `0^m` in aPre and `x' xor 1` (last bit) in aSec.
#[derive(Debug, Clone, Copy, Default)]
pub struct ZeroKeyAttack;

pub fn attack_apre_zero_key() -> ZeroKeyAttack {
    ZeroKeyAttack
}

pub fn attack_asec_zero_key() -> ZeroKeyAttack {
    ZeroKeyAttack
}

impl Adversary for ZeroKeyAttack {
    fn name(&self) -> String {
        "zero-key".into()
    }

    fn stage_a(&self, ctx: &mut Ctx<'_>) -> (BitString, State) {
        (BitString::zeros(ctx.family.params().n), no_state())
    }

    fn stage_b(&self, ctx: &mut Ctx<'_>, challenge: &Challenge, _state: State) -> Answer {
        match (ctx.prop, &challenge.message) {
            (Property::ASec | Property::Sec, Some(x)) => Answer::Message(x.flip(x.len() - 1).expect("non-empty")),
            _ => Answer::Message(BitString::zeros(ctx.family.params().m)),
        }
    }
}

/// Commits to `y = 0^d` before seeing the key, then answers `0^m`.
#[derive(Debug, Clone, Copy, Default)]
pub struct PinnedAttack;

pub fn attack_epre_pinned() -> PinnedAttack {
    PinnedAttack
}

impl Adversary for PinnedAttack {
    fn name(&self) -> String {
        "pin-attack".into()
    }

    fn stage_a(&self, ctx: &mut Ctx<'_>) -> (BitString, State) {
        (BitString::zeros(ctx.family.params().d), no_state())
    }

    fn stage_b(&self, ctx: &mut Ctx<'_>, _challenge: &Challenge, _state: State) -> Answer {
        Answer::Message(BitString::zeros(ctx.family.params().m))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::family::tabulated_family;
    use crate::games::{estimate_advantage, run_game, wilson_interval};
    use crate::seed::{random_bits, Seed};

    fn small(d: usize) -> FunctionFamily {
        tabulated_family(&Seed::from_u64(8), FamilyParams::new(4, 6, d).unwrap()).unwrap()
    }

    fn all(width: usize) -> impl Iterator<Item = BitString> {
        (0..1u64 << width).map(move |v| BitString::from_uint(v, width).unwrap())
    }

    fn is_constant(f: &FunctionFamily, k: &BitString) -> bool {
        let first = f.eval(k, &BitString::zeros(f.params().m)).unwrap();
        all(f.params().m).all(|x| f.eval(k, &x).unwrap() == first)
    }

    #[test]
    fn zero_key_definition() {
        let f = small(4);
        let h = zero_key_family(&f);
        assert_eq!(h.params(), f.params());
        for x in all(6) {
            assert!(h.eval(&BitString::zeros(4), &x).unwrap().is_zero());
            let k = BitString::from_uint(9, 4).unwrap();
            assert_eq!(h.eval(&k, &x).unwrap(), f.eval(&k, &x).unwrap());
        }
    }

    #[test]
    fn zero_key_has_exactly_one_constant_key() {
        let h = zero_key_family(&small(4));
        let constant: Vec<_> = all(4).filter(|k| is_constant(&h, k)).collect();
        assert_eq!(constant, vec![BitString::zeros(4)]);
    }

    #[test]
    fn zero_key_collisions_transfer() {
        let f = small(4);
        let h = zero_key_family(&f);
        let mut rng = Seed::from_u64(1).rng();
        let mut found = 0;
        for _ in 0..1000 {
            let k = random_bits(&mut rng, 4);
            if k.is_zero() {
                continue;
            }
            let (x, x2) = (random_bits(&mut rng, 6), random_bits(&mut rng, 6));
            if x != x2 && h.eval(&k, &x).unwrap() == h.eval(&k, &x2).unwrap() {
                assert_eq!(f.eval(&k, &x).unwrap(), f.eval(&k, &x2).unwrap());
                found += 1;
            }
        }
        assert!(found > 0);
    }

    #[test]
    fn pinned_definition_and_unique_preimage() {
        let f = small(3);
        let h = pinned_zero_family(&f).unwrap();
        assert_eq!(h.params(), FamilyParams::new(4, 6, 4).unwrap());
        for k in all(4) {
            let pre: Vec<_> = all(6).filter(|x| h.eval(&k, x).unwrap().is_zero()).collect();
            assert_eq!(pre, vec![BitString::zeros(6)]);
            for x in all(6).skip(1) {
                let y = h.eval(&k, &x).unwrap();
                assert_eq!(y.bit(0), Some(true));
                assert_eq!(y.slice(1..4).unwrap(), f.eval(&k, &x).unwrap());
            }
        }
    }

    #[test]
    fn attacks_win_always() {
        let h = zero_key_family(&small(4));
        for prop in [Property::APre, Property::ASec] {
            let e = estimate_advantage(prop, &h, &ZeroKeyAttack, 500, &Seed::from_u64(2)).unwrap();
            assert_eq!(e.wins, 500, "{prop}");
        }
        let pinned = pinned_zero_family(&small(3)).unwrap();
        let e = estimate_advantage(Property::EPre, &pinned, &attack_epre_pinned(), 500, &Seed::from_u64(2)).unwrap();
        assert_eq!(e.wins, 500);
        for s in 0..50 {
            let out = run_game(Property::EPre, &pinned, &PinnedAttack, &Seed::from_u64(s));
            assert!(out.win);
        }
    }

    fn covers_999(wins: u64, trials: u64, truth: f64) -> bool {
        let (lo, hi) = wilson_interval(wins, trials, 3.29);
        lo <= truth && truth <= hi
    }

    #[test]
    fn apre_attack_on_base_matches_enumeration() {
        let f = small(4);
        let k = BitString::zeros(4);
        let y0 = f.eval(&k, &BitString::zeros(6)).unwrap();
        let truth = all(6).filter(|x| f.eval(&k, x).unwrap() == y0).count() as f64 / 64.0;
        let e = estimate_advantage(Property::APre, &f, &ZeroKeyAttack, 2000, &Seed::from_u64(3)).unwrap();
        assert!(covers_999(e.wins, e.trials, truth), "{truth} vs {e:?}");
    }

    #[test]
    fn epre_attack_on_base_matches_enumeration() {
        let f = small(4);
        let truth = all(4)
            .filter(|k| f.eval(k, &BitString::zeros(6)).unwrap().is_zero())
            .count() as f64
            / 16.0;
        let e = estimate_advantage(Property::EPre, &f, &PinnedAttack, 2000, &Seed::from_u64(3)).unwrap();
        assert!(covers_999(e.wins, e.trials, truth), "{truth} vs {e:?}");
    }
}
