//! Procedures that move between ROX and its compression function:
//! collision extraction, message embedding with oracle programming, and
//! preimage extraction.

use rand::Rng;

use crate::bits::BitString;
use crate::error::{Error, Result};
use crate::family::MAX_TOY_BITS;
use crate::rox::{nu, run_rounds, RoxInstance};
use crate::seed::{random_bits, Seed};

/// Attempts at drawing a fresh random message before giving up on an
/// embedding whose mask point is reused by an earlier round.
const EMBED_ATTEMPTS: usize = 64;

#[derive(Debug, Clone, PartialEq, Eq, serde::Serialize)]
pub struct CollisionWitness {
    pub x: BitString,
    pub x2: BitString,
    /// 1-based round of the first message where the inputs collide.
    pub i_star: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
pub enum OracleId {
    Ro1,
    Ro2,
}

#[derive(Debug, Clone, PartialEq, Eq, serde::Serialize)]
pub struct ProgrammedPoint {
    pub oracle: OracleId,
    pub input: BitString,
    pub value: BitString,
}

#[derive(Debug, Clone, PartialEq, Eq, serde::Serialize)]
pub struct EmbedResult {
    pub xhat: BitString,
    pub index: usize,
    pub lambda: usize,
    pub programmed_points: Vec<ProgrammedPoint>,
    /// Random messages drawn before a consistent mask was found.
    pub attempts: usize,
}

impl EmbedResult {
    /// Programmed points in oracle-transcript form.
    pub fn transcript(&self) -> String {
        self.programmed_points
            .iter()
            .map(|p| format!("P {} -> {}\n", p.input, p.value))
            .collect()
    }
}

/// Scans both traces backward from their last rounds and returns the first
/// pair of differing compression inputs. The pair is re-checked under `H_k`
/// before it is returned.
pub fn extract_collision(
    inst: &mut RoxInstance,
    key: &BitString,
    xhat: &BitString,
    xhat2: &BitString,
) -> Result<CollisionWitness> {
    if xhat == xhat2 {
        return Err(Error::IdenticalMessages);
    }
    let t1 = inst.trace(key, xhat)?;
    let t2 = inst.trace(key, xhat2)?;
    let (last1, last2) = (t1.last().expect("ell >= 1"), t2.last().expect("ell >= 1"));
    if last1.chain_out != last2.chain_out {
        return Err(Error::NotACollision);
    }
    for (r1, r2) in t1.iter().rev().zip(t2.iter().rev()) {
        if r1.comp_input != r2.comp_input {
            if r1.chain_out != r2.chain_out {
                // inputs matched one round later only by a mask coincidence
                return Err(Error::NoCollidingRound);
            }
            return Ok(CollisionWitness {
                x: r1.comp_input.clone(),
                x2: r2.comp_input.clone(),
                i_star: r1.index,
            });
        }
    }
    Err(Error::NoCollidingRound)
}

/// Builds a message whose `index`-th compression input is `x`, programming
/// the single RO1 point `(x̄, k, nu(index))`.
///
/// `x = h || g` with `|h| = b`, `|g| = d`. A random message of length
/// `lambda >= b*index` gets `h` spliced in as block `index`; its first `n`
/// bits become `x̄` (for `index = 1` they are taken from `x`). The mask at
/// `nu(index)` is set to `g xor chain_{index-1}`. When an earlier round reuses
/// that mask, `chain_{index-1}` itself depends on it, so the mask is chosen as
/// a fixed point by enumeration and the random message is redrawn if none
/// exists. Since `lambda >= b*index`, block `index` never touches RO2 padding.
///
/// `lambda` defaults to a uniform draw from the feasible part of
/// `{b*index, ..., b*(index+2)}`.
pub fn embed_message(
    inst: &mut RoxInstance,
    key: &BitString,
    x: &BitString,
    index: usize,
    seed: &Seed,
    lambda: Option<usize>,
) -> Result<EmbedResult> {
    let layout = *inst.layout();
    let p = inst.params();
    inst.family().check_key(key)?;
    inst.family().check_msg(x)?;
    let (b, n) = (layout.b, layout.n);
    if index == 0 || index > layout.max_blocks {
        return Err(Error::EmbedInfeasible(format!(
            "index {index} outside 1..={}",
            layout.max_blocks
        )));
    }
    let feasible = |l: usize| l >= b * index && layout.check_len(l).is_ok();
    let window: Vec<usize> = match lambda {
        Some(l) if feasible(l) => vec![l],
        Some(l) => {
            return Err(Error::EmbedInfeasible(format!(
                "lambda = {l} invalid for index {index} (need >= {} and at most {})",
                (b * index).max(n),
                layout.max_len()
            )))
        }
        None => (b * index..=b * (index + 2)).filter(|&l| feasible(l)).collect(),
    };
    if window.is_empty() {
        return Err(Error::EmbedInfeasible(format!(
            "no message length in {}..={} fits L = {}",
            b * index,
            b * (index + 2),
            layout.max_blocks
        )));
    }

    let reused = (1..index).any(|j| nu(j as u64) == nu(index as u64));
    if reused && p.d > MAX_TOY_BITS {
        return Err(Error::DomainTooLarge {
            bits: p.d,
            max: MAX_TOY_BITS,
        });
    }

    let h = x.prefix(b)?;
    let g = x.slice(b..p.m)?;
    let mut rng = seed.rng();

    for attempt in 1..=EMBED_ATTEMPTS {
        let lambda = window[rng.gen_range(0..window.len())];
        let mut bits = random_bits(&mut rng, lambda).bits().to_vec();
        bits[b * (index - 1)..b * index].copy_from_slice(h.bits());
        if index == 1 {
            let end = n.min(p.m);
            bits[b.min(end)..end].copy_from_slice(&x.bits()[b.min(end)..end]);
        }
        let xhat = BitString::from_bits(bits);

        let padded = layout.pad_with(&xhat, |pt| inst.ro2.peek(pt))?;
        debug_assert_eq!(padded.blocks[index - 1], h);
        let xbar = padded.xbar.clone();
        let target = layout.ro1_point(&xbar, key, index)?;
        let before = &padded.blocks[..index - 1];

        // masks at points other than the target are fixed; so is the chain
        // up to the first round that reads the target
        let fixed: Vec<Option<BitString>> = (1..index)
            .map(|j| {
                let point = layout.ro1_point(&xbar, key, j)?;
                if point == target {
                    Ok(None)
                } else {
                    inst.ro1.peek(&point).map(Some)
                }
            })
            .collect::<Result<_>>()?;
        let first = fixed.iter().position(Option::is_none).unwrap_or(before.len());
        let prefix = run_rounds(inst.family(), inst.iv(), key, &before[..first], |j| {
            Ok(fixed[j - 1].clone().expect("fixed before the first target round"))
        })?
        .last()
        .map_or_else(|| inst.iv().clone(), |r| r.chain_out.clone());

        let family = inst.family();
        let chain_for = |mask_value: &BitString| -> Result<BitString> {
            let mut chain = prefix.clone();
            for (j, block) in before.iter().enumerate().skip(first) {
                let mask = fixed[j].as_ref().unwrap_or(mask_value);
                chain = family.eval(key, &block.concat(&chain.xor(mask)?))?;
            }
            Ok(chain)
        };

        let mask = if reused {
            let mut found = None;
            for v in 0..1u64 << p.d {
                let m = BitString::from_uint(v, p.d)?;
                if chain_for(&m)?.xor(&m)? == g {
                    found = Some(m);
                    break;
                }
            }
            match found {
                Some(m) => m,
                None => continue,
            }
        } else {
            // the target point is not used before round `index`
            g.xor(&chain_for(&BitString::zeros(p.d))?)?
        };

        inst.ro1.program_fresh(&target, &mask)?;
        return Ok(EmbedResult {
            xhat,
            index,
            lambda,
            programmed_points: vec![ProgrammedPoint {
                oracle: OracleId::Ro1,
                input: target,
                value: mask,
            }],
            attempts: attempt,
        });
    }
    Err(Error::EmbedInfeasible(format!(
        "no consistent mask after {EMBED_ATTEMPTS} random messages"
    )))
}

/// Evaluates ROX on `xhat` up to, but not including, the last compression
/// call and returns that call's input. `ell - 1` compression calls and
/// `ell + q2` oracle queries.
pub fn extract_preimage(inst: &mut RoxInstance, key: &BitString, xhat: &BitString) -> Result<BitString> {
    inst.family().check_key(key)?;
    let padded = inst.pad(xhat)?;
    let ell = padded.ell;
    let chain = inst.chain(key, &padded.xbar, &padded.blocks[..ell - 1])?;
    let point = inst.layout().ro1_point(&padded.xbar, key, ell)?;
    let mask = inst.ro1.query(&point)?;
    Ok(padded.blocks[ell - 1].concat(&chain.xor(&mask)?))
}
