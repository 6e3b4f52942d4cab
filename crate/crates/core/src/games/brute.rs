use std::collections::{BTreeMap, BTreeSet};

use crate::bits::BitString;
use crate::error::{Error, Result};
use crate::family::FunctionFamily;
use crate::seed::{random_bits, Seed};

/// Largest message width the exhaustive searches accept.
pub const MAX_ENUM_BITS: usize = 16;

fn domain(family: &FunctionFamily) -> Result<impl Iterator<Item = BitString>> {
    let m = family.params().m;
    if m > MAX_ENUM_BITS {
        return Err(Error::DomainTooLarge {
            bits: m,
            max: MAX_ENUM_BITS,
        });
    }
    Ok((0..1u64 << m).map(move |v| BitString::from_uint(v, m).expect("fits")))
}

/// First `x` in lexicographic order with `H_k(x) = y`.
pub fn bf_preimage(family: &FunctionFamily, key: &BitString, y: &BitString) -> Result<Option<BitString>> {
    family.check_key(key)?;
    family.check_digest(y)?;
    for x in domain(family)? {
        if &family.eval(key, &x)? == y {
            return Ok(Some(x));
        }
    }
    Ok(None)
}

/// First `x != x'` in lexicographic order with `H_k(x) = H_k(x')`.
pub fn bf_second_preimage(family: &FunctionFamily, key: &BitString, target: &BitString) -> Result<Option<BitString>> {
    let y = family.eval(key, target)?;
    for x in domain(family)? {
        if &x != target && family.eval(key, &x)? == y {
            return Ok(Some(x));
        }
    }
    Ok(None)
}

/// Hashes up to `budget` distinct random messages and returns the first
/// pair with equal digests.
pub fn birthday_collision(
    family: &FunctionFamily,
    key: &BitString,
    budget: usize,
    seed: &Seed,
) -> Result<Option<(BitString, BitString)>> {
    if budget < 2 {
        return Err(Error::InvalidArgument(format!("budget must be >= 2, got {budget}")));
    }
    family.check_key(key)?;
    let m = family.params().m;
    let budget = if m < 63 { budget.min(1usize << m) } else { budget };
    let mut rng = seed.rng();
    let mut seen_msgs = BTreeSet::new();
    let mut by_digest: BTreeMap<BitString, BitString> = BTreeMap::new();
    while seen_msgs.len() < budget {
        let x = random_bits(&mut rng, m);
        if !seen_msgs.insert(x.clone()) {
            continue;
        }
        let y = family.eval(key, &x)?;
        if let Some(prev) = by_digest.get(&y) {
            return Ok(Some((prev.clone(), x)));
        }
        by_digest.insert(y, x);
    }
    Ok(None)
}
